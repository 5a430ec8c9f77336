// Sparse packet-repetition degree distributions.
//
// A distribution assigns probability to the number of replicas a user
// transmits per frame. It is stored sparsely (nonzero terms only), is
// immutable after construction, and can be shared freely across threads.

#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "rng.hpp"

namespace irsa {

class DegreeDistribution {
public:
    /// One (degree, probability) term of the generating polynomial.
    struct Term {
        std::uint32_t degree;
        double prob;
        friend bool operator==(const Term&, const Term&) = default;
    };

    /// Validating constructor for user distributions.
    ///
    /// Degrees must be >= 1 and probabilities nonnegative; the probabilities
    /// must sum to 1 within 1e-9, in which case they are renormalized
    /// exactly. Larger deviations are rejected so configuration typos
    /// surface early instead of being silently scaled away.
    static DegreeDistribution from_probs(const std::map<std::uint32_t, double>& probs);

    /// Load-weighted mixture: coefficient-wise average with weights
    /// loads[i] / total load. Classes with zero load drop out of the mix.
    static DegreeDistribution mix(std::span<const double> loads,
                                  std::span<const DegreeDistribution> dists);

    /// Mean number of replicas (first derivative of the polynomial at 1).
    double mean_degree() const { return mean_; }

    std::uint32_t max_degree() const { return terms_.back().degree; }
    std::uint32_t min_degree() const { return terms_.front().degree; }

    /// Probability of exactly `degree` replicas (0 if absent).
    double prob(std::uint32_t degree) const;

    /// Nonzero terms sorted by degree.
    const std::vector<Term>& terms() const { return terms_; }

    /// Polynomial evaluation at x.
    double evaluate(double x) const;

    /// Draws a degree; deterministic given the stream state.
    std::uint32_t sample(Rng& rng) const;

    /// Distribution seen from a random replica: the coefficient for
    /// degree l-1 is l * prob(l) / mean_degree(). A degree-1 term maps to
    /// constant (degree-0) mass, so results may legally carry degree 0.
    DegreeDistribution edge_perspective() const;

    /// "0.5 x^2 + 0.28 x^3 + 0.22 x^8"-style rendering for diagnostics.
    std::string to_string() const;

    friend bool operator==(const DegreeDistribution&, const DegreeDistribution&);

private:
    // Trusted path: terms already validated; renormalizes by the exact sum.
    explicit DegreeDistribution(std::vector<Term> terms);

    std::vector<Term> terms_; // sorted by degree, all probs > 0
    std::vector<double> cdf_; // running sums aligned with terms_
    double mean_ = 0.0;
};

} // namespace irsa
