// C ABI of the shared library: thin handle wrappers over the C++ core.

#include "irsa/irsa.h"

#include <cstring>
#include <map>
#include <string>
#include <vector>

#include "analysis.hpp"
#include "degree_dist.hpp"
#include "error.hpp"
#include "experiment.hpp"
#include "rng.hpp"
#include "version.hpp"

struct irsa_dist {
    irsa::DegreeDistribution dist;
};

struct irsa_experiment {
    irsa::ExperimentConfig config;
};

struct irsa_result {
    irsa::ExperimentOutput output;
};

namespace {

thread_local std::string g_last_error;

irsa_status status_of(irsa::ErrorCode code)
{
    using irsa::ErrorCode;
    switch (code) {
        case ErrorCode::ok: return IRSA_OK;
        case ErrorCode::not_normalized: return IRSA_ERR_NOT_NORMALIZED;
        case ErrorCode::negative_probability: return IRSA_ERR_NEGATIVE_PROBABILITY;
        case ErrorCode::zero_degree: return IRSA_ERR_ZERO_DEGREE;
        case ErrorCode::zero_total_load: return IRSA_ERR_ZERO_TOTAL_LOAD;
        case ErrorCode::length_mismatch: return IRSA_ERR_LENGTH_MISMATCH;
        case ErrorCode::degree_exceeds_frame: return IRSA_ERR_DEGREE_EXCEEDS_FRAME;
        case ErrorCode::empty_frame: return IRSA_ERR_EMPTY_FRAME;
        case ErrorCode::count_exceeds_population: return IRSA_ERR_COUNT_EXCEEDS_POPULATION;
        case ErrorCode::decoded_not_activated: return IRSA_ERR_DECODED_NOT_ACTIVATED;
        case ErrorCode::load_exceeds_population: return IRSA_ERR_LOAD_EXCEEDS_POPULATION;
        case ErrorCode::inconsistent_load: return IRSA_ERR_INCONSISTENT_LOAD;
        case ErrorCode::not_two_dimensional: return IRSA_ERR_NOT_TWO_DIMENSIONAL;
        case ErrorCode::outside_region: return IRSA_ERR_OUTSIDE_REGION;
        case ErrorCode::exceeds_threshold: return IRSA_ERR_EXCEEDS_THRESHOLD;
        case ErrorCode::parse_error: return IRSA_ERR_PARSE;
        case ErrorCode::validation_error: return IRSA_ERR_VALIDATION;
        case ErrorCode::io_error: return IRSA_ERR_IO;
        case ErrorCode::invalid_argument: return IRSA_ERR_INVALID_ARGUMENT;
    }
    return IRSA_ERR_INTERNAL;
}

irsa_status fail_invalid(const char* message)
{
    g_last_error = message;
    return IRSA_ERR_INVALID_ARGUMENT;
}

template <typename Fn>
irsa_status guarded(Fn&& fn)
{
    try {
        fn();
        g_last_error.clear();
        return IRSA_OK;
    } catch (const irsa::Error& e) {
        g_last_error = e.what();
        return status_of(e.code());
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return IRSA_ERR_INTERNAL;
    } catch (...) {
        g_last_error = "unknown error";
        return IRSA_ERR_INTERNAL;
    }
}

} // namespace

extern "C" {

const char* irsa_version(void)
{
    return irsa::kVersion;
}

const char* irsa_status_name(irsa_status status)
{
    switch (status) {
        case IRSA_OK: return "ok";
        case IRSA_ERR_NOT_NORMALIZED: return "not_normalized";
        case IRSA_ERR_NEGATIVE_PROBABILITY: return "negative_probability";
        case IRSA_ERR_ZERO_DEGREE: return "zero_degree";
        case IRSA_ERR_ZERO_TOTAL_LOAD: return "zero_total_load";
        case IRSA_ERR_LENGTH_MISMATCH: return "length_mismatch";
        case IRSA_ERR_DEGREE_EXCEEDS_FRAME: return "degree_exceeds_frame";
        case IRSA_ERR_EMPTY_FRAME: return "empty_frame";
        case IRSA_ERR_COUNT_EXCEEDS_POPULATION: return "count_exceeds_population";
        case IRSA_ERR_DECODED_NOT_ACTIVATED: return "decoded_not_activated";
        case IRSA_ERR_LOAD_EXCEEDS_POPULATION: return "load_exceeds_population";
        case IRSA_ERR_INCONSISTENT_LOAD: return "inconsistent_load";
        case IRSA_ERR_NOT_TWO_DIMENSIONAL: return "not_two_dimensional";
        case IRSA_ERR_OUTSIDE_REGION: return "outside_region";
        case IRSA_ERR_EXCEEDS_THRESHOLD: return "exceeds_threshold";
        case IRSA_ERR_PARSE: return "parse_error";
        case IRSA_ERR_VALIDATION: return "validation_error";
        case IRSA_ERR_IO: return "io_error";
        case IRSA_ERR_INVALID_ARGUMENT: return "invalid_argument";
        case IRSA_ERR_INTERNAL: return "internal_error";
    }
    return "unknown";
}

const char* irsa_last_error(void)
{
    return g_last_error.c_str();
}

irsa_status irsa_dist_create(const uint32_t* degrees, const double* probs, size_t count,
                             irsa_dist** out)
{
    if (out == nullptr)
        return fail_invalid("out must not be null");
    *out = nullptr;
    if (count == 0 || degrees == nullptr || probs == nullptr)
        return fail_invalid("degrees/probs must be non-null and nonempty");
    return guarded([&] {
        std::map<uint32_t, double> map;
        for (size_t i = 0; i < count; ++i)
            map[degrees[i]] += probs[i];
        *out = new irsa_dist{irsa::DegreeDistribution::from_probs(map)};
    });
}

void irsa_dist_destroy(irsa_dist* dist)
{
    delete dist;
}

double irsa_dist_mean_degree(const irsa_dist* dist)
{
    return dist == nullptr ? 0.0 : dist->dist.mean_degree();
}

uint32_t irsa_dist_max_degree(const irsa_dist* dist)
{
    return dist == nullptr ? 0 : dist->dist.max_degree();
}

irsa_status irsa_dist_sample(const irsa_dist* dist, uint64_t seed, uint64_t stream,
                             size_t count, uint32_t* out_degrees)
{
    if (dist == nullptr || (count > 0 && out_degrees == nullptr))
        return fail_invalid("dist and out_degrees must not be null");
    return guarded([&] {
        irsa::Rng rng = irsa::Rng::substream(seed, stream);
        for (size_t i = 0; i < count; ++i)
            out_degrees[i] = dist->dist.sample(rng);
    });
}

irsa_status irsa_dist_mix(const double* loads, const irsa_dist* const* dists, size_t count,
                          irsa_dist** out)
{
    if (out == nullptr)
        return fail_invalid("out must not be null");
    *out = nullptr;
    if (count == 0 || loads == nullptr || dists == nullptr)
        return fail_invalid("loads/dists must be non-null and nonempty");
    for (size_t i = 0; i < count; ++i)
        if (dists[i] == nullptr)
            return fail_invalid("dists contains a null handle");
    return guarded([&] {
        std::vector<irsa::DegreeDistribution> copies;
        copies.reserve(count);
        for (size_t i = 0; i < count; ++i)
            copies.push_back(dists[i]->dist);
        *out = new irsa_dist{irsa::DegreeDistribution::mix(
            std::span<const double>(loads, count), copies)};
    });
}

irsa_status irsa_de_iterate(const irsa_dist* dist, double load, uint32_t max_iters,
                            double tol, double* out_residual)
{
    if (dist == nullptr || out_residual == nullptr)
        return fail_invalid("dist and out_residual must not be null");
    return guarded([&] {
        *out_residual = irsa::de_iterate(dist->dist, load, max_iters, tol).residual;
    });
}

irsa_status irsa_de_threshold(const irsa_dist* dist, double tol, double* out_g_star)
{
    if (dist == nullptr || out_g_star == nullptr)
        return fail_invalid("dist and out_g_star must not be null");
    return guarded([&] {
        *out_g_star = irsa::de_threshold(dist->dist, tol > 0.0 ? tol : 1e-4);
    });
}

irsa_status irsa_capacity_region(double t_star, uint32_t frame_size,
                                 const uint32_t* populations, size_t num_classes,
                                 double* out_class_caps, double* out_sum_cap)
{
    if (populations == nullptr || out_class_caps == nullptr || out_sum_cap == nullptr)
        return fail_invalid("populations and outputs must not be null");
    if (num_classes == 0)
        return fail_invalid("need at least one class");
    return guarded([&] {
        irsa::NetworkSpec spec;
        spec.frame_size = frame_size;
        const irsa::DegreeDistribution placeholder =
            irsa::DegreeDistribution::from_probs({{1, 1.0}});
        for (size_t i = 0; i < num_classes; ++i)
            spec.classes.push_back({populations[i], placeholder});
        const irsa::CapacityRegion region = irsa::capacity_region(spec, t_star);
        for (size_t i = 0; i < num_classes; ++i)
            out_class_caps[i] = region.class_caps[i];
        *out_sum_cap = region.sum_cap;
    });
}

irsa_status irsa_region_contains(const double* class_caps, size_t num_classes,
                                 double sum_cap, const double* tuple, int* out_inside)
{
    if (class_caps == nullptr || tuple == nullptr || out_inside == nullptr)
        return fail_invalid("caps, tuple and out_inside must not be null");
    return guarded([&] {
        irsa::CapacityRegion region;
        region.class_caps.assign(class_caps, class_caps + num_classes);
        region.sum_cap = sum_cap;
        *out_inside = region.contains(std::span<const double>(tuple, num_classes)) ? 1 : 0;
    });
}

irsa_status irsa_region_boundary_2d(const double* class_caps, double sum_cap,
                                    uint32_t resolution, double* out_xy, size_t capacity,
                                    size_t* out_count)
{
    if (class_caps == nullptr || out_count == nullptr)
        return fail_invalid("class_caps and out_count must not be null");
    return guarded([&] {
        irsa::CapacityRegion region;
        region.class_caps.assign(class_caps, class_caps + 2);
        region.sum_cap = sum_cap;
        const auto vertices = irsa::boundary_2d(region, resolution);
        *out_count = vertices.size();
        if (out_xy == nullptr || capacity == 0)
            return; // size query
        if (capacity < vertices.size())
            irsa::raise(irsa::ErrorCode::length_mismatch,
                        "vertex buffer holds " + std::to_string(capacity) + " of " +
                            std::to_string(vertices.size()) + " vertices");
        for (size_t i = 0; i < vertices.size(); ++i) {
            out_xy[2 * i] = vertices[i][0];
            out_xy[2 * i + 1] = vertices[i][1];
        }
    });
}

irsa_status irsa_experiment_parse(const char* json_text, irsa_experiment** out)
{
    if (out == nullptr)
        return fail_invalid("out must not be null");
    *out = nullptr;
    if (json_text == nullptr)
        return fail_invalid("json_text must not be null");
    return guarded([&] { *out = new irsa_experiment{irsa::parse_config(json_text)}; });
}

void irsa_experiment_destroy(irsa_experiment* experiment)
{
    delete experiment;
}

const char* irsa_experiment_kind(const irsa_experiment* experiment)
{
    return experiment == nullptr ? "" : irsa::experiment_kind_name(experiment->config.kind);
}

int irsa_experiment_has_seed(const irsa_experiment* experiment)
{
    return experiment != nullptr && experiment->config.seed.has_value() ? 1 : 0;
}

irsa_status irsa_experiment_set_seed(irsa_experiment* experiment, uint64_t seed)
{
    if (experiment == nullptr)
        return fail_invalid("experiment must not be null");
    experiment->config.seed = seed;
    return IRSA_OK;
}

irsa_status irsa_experiment_set_workers(irsa_experiment* experiment, uint32_t workers)
{
    if (experiment == nullptr)
        return fail_invalid("experiment must not be null");
    experiment->config.workers = workers;
    return IRSA_OK;
}

irsa_status irsa_experiment_run(const irsa_experiment* experiment, irsa_result** out)
{
    if (out == nullptr)
        return fail_invalid("out must not be null");
    *out = nullptr;
    if (experiment == nullptr)
        return fail_invalid("experiment must not be null");
    return guarded(
        [&] { *out = new irsa_result{irsa::run_experiment(experiment->config)}; });
}

void irsa_result_destroy(irsa_result* result)
{
    delete result;
}

const char* irsa_result_csv(const irsa_result* result)
{
    return result == nullptr ? "" : result->output.csv.c_str();
}

size_t irsa_result_extra_count(const irsa_result* result)
{
    return result == nullptr ? 0 : result->output.extras.size();
}

const char* irsa_result_extra_name(const irsa_result* result, size_t index)
{
    if (result == nullptr || index >= result->output.extras.size())
        return "";
    return result->output.extras[index].first.c_str();
}

const char* irsa_result_extra_csv(const irsa_result* result, size_t index)
{
    if (result == nullptr || index >= result->output.extras.size())
        return "";
    return result->output.extras[index].second.c_str();
}

} // extern "C"
