// Experiment configuration (JSON) and CSV artifact generation.
//
// One experiment kind per run: a throughput-vs-load sweep, a two-class
// region polygon, a delay measurement, a multi-class-vs-dual comparison, or
// a density-evolution threshold solve. Outputs are plot-ready CSV with a
// metadata header line carrying seed, version and a config hash, and are
// byte-identical for identical configuration and seed.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "analysis.hpp"
#include "sim_engine.hpp"

namespace irsa {

enum class ExperimentKind {
    sweep,
    region,
    delay,
    dual_check,
    threshold,
};

const char* experiment_kind_name(ExperimentKind kind);

struct SweepParams {
    std::vector<double> direction; // defaults to an equal split
    std::vector<double> grid;      // defaults to 0.05 .. 1.0 step 0.05
};

struct RegionParams {
    double t_star = 1.0; // 1.0 selects the finite-network outer bound
    std::uint32_t resolution = 0;
};

struct DelayParams {
    std::vector<double> load;
    ChannelModel channel = ChannelModel::sic;
};

struct DualCheckParams {
    std::vector<double> load;
};

struct ThresholdParams {
    DegreeDistribution distribution;
    double tol = 1e-4;
    std::optional<double> trace_load; // emit an iteration trace at this load
};

struct ExperimentConfig {
    ExperimentKind kind = ExperimentKind::sweep;
    std::optional<NetworkSpec> network;
    Policy policy = Policy::random_selection;
    std::uint64_t frames = 10000;
    std::optional<std::uint64_t> seed; // required before running
    std::uint32_t workers = 0;         // 0 = available parallelism

    std::optional<SweepParams> sweep;
    std::optional<RegionParams> region;
    std::optional<DelayParams> delay;
    std::optional<DualCheckParams> dual_check;
    std::optional<ThresholdParams> threshold;
};

/// Parses and validates a JSON configuration document. Failures report the
/// offending field path.
ExperimentConfig parse_config(const std::string& json_text);

/// Canonical form with defaults materialized; basis of the config hash.
std::string canonical_config(const ExperimentConfig& config);

/// FNV-1a 64 over the canonical configuration (seed and workers excluded).
std::uint64_t config_hash(const ExperimentConfig& config);

struct ExperimentOutput {
    std::string csv;
    /// (suffix, csv) pairs for secondary artifacts, e.g. a threshold
    /// iteration trace.
    std::vector<std::pair<std::string, std::string>> extras;
};

/// Runs the experiment to completion in memory. Deterministic for a fixed
/// seed; requires the seed to be set.
ExperimentOutput run_experiment(const ExperimentConfig& config);

} // namespace irsa
