#include "analysis.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "error.hpp"

namespace irsa {

namespace {

constexpr double kResolvedResidual = 1e-6; // "fully resolved" criterion
constexpr std::uint32_t kThresholdMaxIters = 100000;
constexpr double kThresholdIterTol = 1e-13;
constexpr double kContainsSlack = 1e-12;

} // namespace

DeResult de_iterate(const DegreeDistribution& dist, double load, std::uint32_t max_iters,
                    double tol)
{
    if (load < 0.0)
        raise(ErrorCode::invalid_argument, "load must be nonnegative");
    if (!(tol > 0.0))
        raise(ErrorCode::invalid_argument, "tolerance must be positive");

    const DegreeDistribution lambda = dist.edge_perspective();
    const double mean = dist.mean_degree();

    DeResult result;
    double x = 1.0;
    for (std::uint32_t t = 0; t < max_iters; ++t) {
        const double next = lambda.evaluate(1.0 - std::exp(-load * mean * x));
        result.iterations = t + 1;
        const bool settled = std::abs(next - x) < tol;
        x = next;
        if (settled || x < kResolvedResidual * 1e-3) {
            result.converged = true;
            break;
        }
    }
    result.residual = x;
    return result;
}

std::vector<std::pair<std::uint32_t, double>> de_trace(const DegreeDistribution& dist,
                                                       double load,
                                                       std::uint32_t max_iters, double tol)
{
    const DegreeDistribution lambda = dist.edge_perspective();
    const double mean = dist.mean_degree();
    std::vector<std::pair<std::uint32_t, double>> trace;
    double x = 1.0;
    trace.emplace_back(0, x);
    for (std::uint32_t t = 0; t < max_iters; ++t) {
        const double next = lambda.evaluate(1.0 - std::exp(-load * mean * x));
        trace.emplace_back(t + 1, next);
        const bool settled = std::abs(next - x) < tol;
        x = next;
        if (settled || x < kResolvedResidual * 1e-3)
            break;
    }
    return trace;
}

double de_threshold(const DegreeDistribution& dist, double tol)
{
    if (!(tol > 0.0))
        raise(ErrorCode::invalid_argument, "tolerance must be positive");

    const auto resolves = [&](double g) {
        return de_iterate(dist, g, kThresholdMaxIters, kThresholdIterTol).residual <
               kResolvedResidual;
    };

    if (!resolves(0.0))
        return 0.0;
    if (resolves(1.0))
        return 1.0; // throughput cannot exceed one packet per slot anyway
    double lo = 0.0;
    double hi = 1.0;
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        (resolves(mid) ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

DualNetwork make_dual(const NetworkSpec& spec, const LoadVector& load)
{
    if (load.per_class.size() != spec.num_classes())
        raise(ErrorCode::length_mismatch,
              "load vector has " + std::to_string(load.per_class.size()) +
                  " entries for " + std::to_string(spec.num_classes()) + " classes");
    if (load.total() <= 0.0)
        raise(ErrorCode::zero_total_load, "dual network needs positive total load");

    std::vector<DegreeDistribution> dists;
    dists.reserve(spec.classes.size());
    for (const ClassSpec& c : spec.classes)
        dists.push_back(c.distribution);

    return DualNetwork{spec.total_population(),
                       DegreeDistribution::mix(load.per_class, dists), load.total()};
}

bool CapacityRegion::contains(std::span<const double> t) const
{
    if (t.size() != class_caps.size())
        raise(ErrorCode::length_mismatch,
              "tuple has " + std::to_string(t.size()) + " entries for " +
                  std::to_string(class_caps.size()) + " classes");
    double sum = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (t[i] < 0.0 || t[i] > class_caps[i] + kContainsSlack)
            return false;
        sum += t[i];
    }
    return sum <= sum_cap + kContainsSlack;
}

CapacityRegion capacity_region(const NetworkSpec& spec, double t_star)
{
    if (!(t_star > 0.0) || t_star > 1.0)
        raise(ErrorCode::invalid_argument, "t_star must lie in (0, 1]");
    if (spec.frame_size == 0)
        raise(ErrorCode::empty_frame, "frame must contain at least one slot");

    CapacityRegion region;
    region.t_star = t_star;
    region.outer_bound_mode = t_star == 1.0;
    const double slots = static_cast<double>(spec.frame_size);
    double population_sum = 0.0;
    for (const ClassSpec& c : spec.classes) {
        const double ratio = static_cast<double>(c.population) / slots;
        region.class_caps.push_back(std::min(t_star, ratio));
        population_sum += ratio;
    }
    region.sum_cap = std::min(t_star, population_sum);
    return region;
}

std::vector<std::array<double, 2>> boundary_2d(const CapacityRegion& region,
                                               std::uint32_t resolution)
{
    if (region.class_caps.size() != 2)
        raise(ErrorCode::not_two_dimensional,
              "boundary polygon is defined for two classes, got " +
                  std::to_string(region.class_caps.size()));

    const double c1 = region.class_caps[0];
    const double c2 = region.class_caps[1];
    const double s = region.sum_cap;

    std::vector<std::array<double, 2>> vertices;
    vertices.push_back({0.0, 0.0});
    const double x_max = std::min(c1, s);
    const double y_max = std::min(c2, s);
    if (x_max > 0.0)
        vertices.push_back({x_max, 0.0});
    if (c1 + c2 <= s) {
        if (c1 > 0.0 && c2 > 0.0)
            vertices.push_back({c1, c2}); // sum cap inactive: rectangle corner
    } else {
        if (s - c1 > 0.0 && s - c1 < c2)
            vertices.push_back({c1, s - c1});
        if (s - c2 > 0.0 && s - c2 < c1)
            vertices.push_back({s - c2, c2});
    }
    if (y_max > 0.0)
        vertices.push_back({0.0, y_max});

    if (resolution <= vertices.size())
        return vertices;

    // Densify edges proportionally to their length for plotting.
    double perimeter = 0.0;
    for (std::size_t i = 0; i + 1 < vertices.size(); ++i)
        perimeter += std::hypot(vertices[i + 1][0] - vertices[i][0],
                                vertices[i + 1][1] - vertices[i][1]);
    if (perimeter == 0.0)
        return vertices;

    std::vector<std::array<double, 2>> dense;
    dense.push_back(vertices.front());
    for (std::size_t i = 0; i + 1 < vertices.size(); ++i) {
        const auto& a = vertices[i];
        const auto& b = vertices[i + 1];
        const double length = std::hypot(b[0] - a[0], b[1] - a[1]);
        const auto pieces = std::max<std::uint32_t>(
            1, static_cast<std::uint32_t>(std::lround(resolution * length / perimeter)));
        for (std::uint32_t j = 1; j <= pieces; ++j) {
            const double f = static_cast<double>(j) / pieces;
            dense.push_back({a[0] + f * (b[0] - a[0]), a[1] + f * (b[1] - a[1])});
        }
    }
    return dense;
}

ActivationPlan achievability_plan(std::span<const double> targets,
                                  const CapacityRegion& region, const NetworkSpec& spec,
                                  double g_star, const DegreeDistribution& optimal_dist)
{
    if (targets.size() != spec.num_classes())
        raise(ErrorCode::length_mismatch,
              "target tuple has " + std::to_string(targets.size()) + " entries for " +
                  std::to_string(spec.num_classes()) + " classes");
    if (!region.contains(targets))
        raise(ErrorCode::outside_region, "target tuple lies outside the region");
    double sum = 0.0;
    for (double t : targets)
        sum += t;
    if (sum > g_star + kContainsSlack)
        raise(ErrorCode::exceeds_threshold,
              "total target " + std::to_string(sum) + " exceeds the load threshold " +
                  std::to_string(g_star));

    ActivationPlan plan{{}, optimal_dist, {}};
    const double slots = static_cast<double>(spec.frame_size);
    for (std::size_t i = 0; i < targets.size(); ++i) {
        const auto count = static_cast<std::uint32_t>(std::floor(targets[i] * slots + 0.5));
        if (count > spec.classes[i].population)
            raise(ErrorCode::load_exceeds_population,
                  "plan needs " + std::to_string(count) + " users of class " +
                      std::to_string(i) + " but only " +
                      std::to_string(spec.classes[i].population) + " exist");
        plan.active_counts.push_back(count);
        plan.realized.per_class.push_back(static_cast<double>(count) / slots);
    }
    return plan;
}

} // namespace irsa
