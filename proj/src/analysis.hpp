// Asymptotic and geometric analysis: density-evolution load threshold,
// dual single-class network construction, achievable-throughput region, and
// activation planning for a target throughput tuple.

#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "degree_dist.hpp"
#include "sim_engine.hpp"

namespace irsa {

struct DeResult {
    double residual = 1.0;    // final edge-erasure probability
    std::uint32_t iterations = 0;
    bool converged = false;
};

/// Density-evolution recursion x <- lambda(1 - exp(-g * mean_degree * x))
/// from x = 1, where lambda is the edge-perspective distribution. Stops when
/// successive iterates differ by less than `tol` or after `max_iters`.
DeResult de_iterate(const DegreeDistribution& dist, double load, std::uint32_t max_iters,
                    double tol);

/// Iteration trace (iteration, x) for diagnostics.
std::vector<std::pair<std::uint32_t, double>> de_trace(const DegreeDistribution& dist,
                                                       double load,
                                                       std::uint32_t max_iters, double tol);

/// Largest load that still drives the residual below 1e-6, found by
/// bisection over [0, 1] to within `tol`. Returns 0 when even a vanishing
/// load leaves residual mass (e.g. the single-replica distribution, whose
/// edge-perspective polynomial is constant 1).
double de_threshold(const DegreeDistribution& dist, double tol = 1e-4);

/// Single-class network equivalent in slot-degree statistics to a
/// multi-class network under a given load split.
struct DualNetwork {
    std::uint64_t population = 0;
    DegreeDistribution distribution;
    double load = 0.0; // total load of the original network
};

DualNetwork make_dual(const NetworkSpec& spec, const LoadVector& load);

/// Achievable-throughput region: per-class caps min(t_star, N_i/M) and the
/// sum cap min(t_star, sum N_i/M). With t_star = 1 the caps reduce to the
/// finite-network outer bound.
struct CapacityRegion {
    double t_star = 1.0;
    std::vector<double> class_caps;
    double sum_cap = 0.0;
    bool outer_bound_mode = false; // t_star == 1

    /// Membership test, closed region (boundary included).
    bool contains(std::span<const double> t) const;
};

CapacityRegion capacity_region(const NetworkSpec& spec, double t_star);

/// Ordered vertex list of the two-class region polygon, counterclockwise
/// from the origin. `resolution` > 0 additionally densifies the boundary to
/// roughly that many points for plotting; 0 returns corners only.
std::vector<std::array<double, 2>> boundary_2d(const CapacityRegion& region,
                                               std::uint32_t resolution = 0);

/// Activation counts realizing a target throughput tuple: round(M * t_i)
/// users of class i, all transmitting with the optimal distribution. Valid
/// when the tuple lies in the region and its sum stays below the
/// density-evolution threshold, so expected loss vanishes asymptotically.
struct ActivationPlan {
    std::vector<std::uint32_t> active_counts;
    DegreeDistribution distribution;
    LoadVector realized; // active_counts / frame_size
};

ActivationPlan achievability_plan(std::span<const double> targets,
                                  const CapacityRegion& region, const NetworkSpec& spec,
                                  double g_star, const DegreeDistribution& optimal_dist);

} // namespace irsa
