#include "degree_dist.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "error.hpp"

namespace irsa {

namespace {

constexpr double kNormalizationTolerance = 1e-9;

} // namespace

DegreeDistribution::DegreeDistribution(std::vector<Term> terms)
    : terms_(std::move(terms))
{
    std::sort(terms_.begin(), terms_.end(),
              [](const Term& a, const Term& b) { return a.degree < b.degree; });

    double sum = 0.0;
    for (const Term& t : terms_)
        sum += t.prob;

    cdf_.reserve(terms_.size());
    double running = 0.0;
    for (Term& t : terms_) {
        t.prob /= sum;
        running += t.prob;
        mean_ += static_cast<double>(t.degree) * t.prob;
        cdf_.push_back(running);
    }
    cdf_.back() = 1.0; // guard against rounding in the last partial sum
}

DegreeDistribution DegreeDistribution::from_probs(const std::map<std::uint32_t, double>& probs)
{
    std::vector<Term> terms;
    terms.reserve(probs.size());
    double sum = 0.0;
    for (const auto& [degree, prob] : probs) {
        if (degree == 0)
            raise(ErrorCode::zero_degree, "degree 0 is not a valid repetition count");
        if (prob < 0.0)
            raise(ErrorCode::negative_probability,
                  "negative probability " + std::to_string(prob) + " for degree " +
                      std::to_string(degree));
        sum += prob;
        if (prob > 0.0)
            terms.push_back({degree, prob});
    }
    if (std::abs(sum - 1.0) > kNormalizationTolerance)
        raise(ErrorCode::not_normalized,
              "degree probabilities sum to " + std::to_string(sum) +
                  ", expected 1 within 1e-9");
    if (terms.empty())
        raise(ErrorCode::not_normalized, "distribution has no positive-probability degree");
    return DegreeDistribution(std::move(terms));
}

DegreeDistribution DegreeDistribution::mix(std::span<const double> loads,
                                           std::span<const DegreeDistribution> dists)
{
    if (loads.size() != dists.size())
        raise(ErrorCode::length_mismatch,
              "mix needs one load per distribution, got " + std::to_string(loads.size()) +
                  " loads and " + std::to_string(dists.size()) + " distributions");

    double total = 0.0;
    for (double g : loads) {
        if (g < 0.0)
            raise(ErrorCode::invalid_argument, "negative load in mixture");
        total += g;
    }
    if (total <= 0.0)
        raise(ErrorCode::zero_total_load, "total load of the mixture is zero");

    std::map<std::uint32_t, double> combined;
    for (std::size_t i = 0; i < loads.size(); ++i) {
        if (loads[i] == 0.0)
            continue;
        const double weight = loads[i] / total;
        for (const Term& t : dists[i].terms())
            combined[t.degree] += weight * t.prob;
    }

    std::vector<Term> terms;
    terms.reserve(combined.size());
    for (const auto& [degree, prob] : combined)
        terms.push_back({degree, prob});
    return DegreeDistribution(std::move(terms));
}

double DegreeDistribution::prob(std::uint32_t degree) const
{
    for (const Term& t : terms_)
        if (t.degree == degree)
            return t.prob;
    return 0.0;
}

double DegreeDistribution::evaluate(double x) const
{
    double value = 0.0;
    for (const Term& t : terms_)
        value += t.prob * std::pow(x, static_cast<double>(t.degree));
    return value;
}

std::uint32_t DegreeDistribution::sample(Rng& rng) const
{
    const double u = rng.next_double();
    for (std::size_t i = 0; i < cdf_.size(); ++i)
        if (u < cdf_[i])
            return terms_[i].degree;
    return terms_.back().degree;
}

DegreeDistribution DegreeDistribution::edge_perspective() const
{
    std::vector<Term> terms;
    terms.reserve(terms_.size());
    for (const Term& t : terms_)
        terms.push_back({t.degree - 1, static_cast<double>(t.degree) * t.prob / mean_});
    return DegreeDistribution(std::move(terms));
}

std::string DegreeDistribution::to_string() const
{
    std::string out;
    char buf[64];
    for (const Term& t : terms_) {
        if (!out.empty())
            out += " + ";
        std::snprintf(buf, sizeof(buf), "%.6g", t.prob);
        out += buf;
        if (t.degree == 1) {
            out += " x";
        } else if (t.degree > 1) {
            std::snprintf(buf, sizeof(buf), " x^%u", t.degree);
            out += buf;
        }
    }
    return out;
}

bool operator==(const DegreeDistribution& a, const DegreeDistribution& b)
{
    return a.terms_ == b.terms_;
}

} // namespace irsa
