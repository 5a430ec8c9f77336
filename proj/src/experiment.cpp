#include "experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>

#include <json.hpp>

#include "error.hpp"
#include "sic.hpp"
#include "version.hpp"

namespace irsa {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what)
{
    raise(ErrorCode::validation_error, path + ": " + what);
}

const json& member(const json& obj, const std::string& path, const char* key)
{
    auto it = obj.find(key);
    if (it == obj.end())
        fail(path + "." + key, "required field is missing");
    return *it;
}

double as_number(const json& value, const std::string& path)
{
    if (!value.is_number())
        fail(path, "expected a number");
    return value.get<double>();
}

std::uint64_t as_uint(const json& value, const std::string& path)
{
    if (!value.is_number_unsigned())
        fail(path, "expected a nonnegative integer");
    return value.get<std::uint64_t>();
}

std::string as_string(const json& value, const std::string& path)
{
    if (!value.is_string())
        fail(path, "expected a string");
    return value.get<std::string>();
}

std::vector<double> as_double_vector(const json& value, const std::string& path)
{
    if (!value.is_array() || value.empty())
        fail(path, "expected a nonempty array of numbers");
    std::vector<double> out;
    out.reserve(value.size());
    for (std::size_t i = 0; i < value.size(); ++i)
        out.push_back(as_number(value[i], path + "[" + std::to_string(i) + "]"));
    return out;
}

DegreeDistribution parse_distribution(const json& value, const std::string& path)
{
    if (!value.is_object() || value.empty())
        fail(path, "expected an object mapping degree to probability");
    std::map<std::uint32_t, double> probs;
    for (const auto& [key, prob] : value.items()) {
        std::uint32_t degree = 0;
        try {
            std::size_t consumed = 0;
            const unsigned long parsed = std::stoul(key, &consumed);
            if (consumed != key.size() || parsed > 0xffffffffUL)
                throw std::invalid_argument(key);
            degree = static_cast<std::uint32_t>(parsed);
        } catch (const std::exception&) {
            fail(path, "degree key '" + key + "' is not a nonnegative integer");
        }
        probs[degree] = as_number(prob, path + "['" + key + "']");
    }
    try {
        return DegreeDistribution::from_probs(probs);
    } catch (const Error& e) {
        fail(path, e.what());
    }
    // unreachable: fail() throws
}

NetworkSpec parse_network(const json& value, const std::string& path)
{
    if (!value.is_object())
        fail(path, "expected an object");
    NetworkSpec spec;
    const auto frame_size = as_uint(member(value, path, "frame_size"), path + ".frame_size");
    if (frame_size == 0 || frame_size > 0xffffffffUL)
        fail(path + ".frame_size", "must be a positive 32-bit integer");
    spec.frame_size = static_cast<std::uint32_t>(frame_size);

    const json& classes = member(value, path, "classes");
    if (!classes.is_array() || classes.empty())
        fail(path + ".classes", "expected a nonempty array");
    for (std::size_t i = 0; i < classes.size(); ++i) {
        const std::string class_path = path + ".classes[" + std::to_string(i) + "]";
        const json& cls = classes[i];
        if (!cls.is_object())
            fail(class_path, "expected an object");
        const auto population =
            as_uint(member(cls, class_path, "population"), class_path + ".population");
        if (population == 0 || population > 0xffffffffUL)
            fail(class_path + ".population", "must be a positive 32-bit integer");
        DegreeDistribution dist = parse_distribution(
            member(cls, class_path, "distribution"), class_path + ".distribution");
        spec.classes.push_back({static_cast<std::uint32_t>(population), std::move(dist)});
    }
    return spec;
}

std::vector<double> default_grid()
{
    std::vector<double> grid;
    for (int i = 1; i <= 20; ++i)
        grid.push_back(0.05 * i);
    return grid;
}

std::vector<double> parse_grid(const json& value, const std::string& path)
{
    if (!value.is_object())
        fail(path, "expected an object");
    if (value.contains("values"))
        return as_double_vector(value["values"], path + ".values");
    const double start = as_number(member(value, path, "start"), path + ".start");
    const double stop = as_number(member(value, path, "stop"), path + ".stop");
    const double step = as_number(member(value, path, "step"), path + ".step");
    if (!(step > 0.0))
        fail(path + ".step", "must be positive");
    if (stop < start)
        fail(path + ".stop", "must not be below start");
    // index-based so rounding cannot drop the last point
    std::vector<double> grid;
    const double slack = 1e-9 * std::max(1.0, std::abs(stop));
    for (std::size_t p = 0;; ++p) {
        const double g = start + static_cast<double>(p) * step;
        if (g > stop + slack)
            break;
        grid.push_back(g);
    }
    return grid;
}

void check_load_length(const std::vector<double>& load, const NetworkSpec& spec,
                       const std::string& path)
{
    if (load.size() != spec.num_classes())
        fail(path, "expected one entry per class (" + std::to_string(spec.num_classes()) +
                       "), got " + std::to_string(load.size()));
    for (std::size_t i = 0; i < load.size(); ++i)
        if (load[i] < 0.0)
            fail(path + "[" + std::to_string(i) + "]", "loads must be nonnegative");
}

std::string fmt_g(double value)
{
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.6g", value);
    return buf;
}

json distribution_to_json(const DegreeDistribution& dist)
{
    json out = json::object();
    for (const auto& term : dist.terms())
        out[std::to_string(term.degree)] = term.prob;
    return out;
}

json network_to_json(const NetworkSpec& spec)
{
    json classes = json::array();
    for (const ClassSpec& c : spec.classes)
        classes.push_back(json{{"population", c.population},
                               {"distribution", distribution_to_json(c.distribution)}});
    return json{{"frame_size", spec.frame_size}, {"classes", classes}};
}

std::uint64_t fnv1a64(const std::string& text)
{
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    for (unsigned char byte : text) {
        hash ^= byte;
        hash *= 0x100000001b3ULL;
    }
    return hash;
}

std::string metadata_line(const ExperimentConfig& config)
{
    char buf[160];
    std::snprintf(buf, sizeof(buf), "# irsa-sim %s experiment=%s seed=%llu config_hash=%016llx frames=%llu",
                  kVersion, experiment_kind_name(config.kind),
                  static_cast<unsigned long long>(config.seed.value()),
                  static_cast<unsigned long long>(config_hash(config)),
                  static_cast<unsigned long long>(config.frames));
    return buf;
}

const NetworkSpec& require_network(const ExperimentConfig& config)
{
    if (!config.network)
        raise(ErrorCode::validation_error, "network: required for this experiment");
    return *config.network;
}

ExperimentOutput run_sweep(const ExperimentConfig& config)
{
    const NetworkSpec& spec = require_network(config);
    const SweepParams& params = *config.sweep;
    SimOptions options{config.policy, ChannelModel::sic};
    const auto points = sweep_load(spec, params.direction, params.grid, options,
                                   config.frames, *config.seed, config.workers);

    std::string csv = metadata_line(config) + "\n";
    csv += "g_t,t_total";
    for (std::size_t i = 0; i < spec.num_classes(); ++i)
        csv += ",t_" + std::to_string(i + 1);
    csv += ",ci95\n";
    for (const SweepPoint& point : points) {
        csv += fmt_g(point.g_total) + "," + fmt_g(point.report.total_throughput);
        for (const ClassReport& cls : point.report.classes)
            csv += "," + fmt_g(cls.throughput);
        csv += "," + fmt_g(point.report.total_ci95) + "\n";
    }
    return {csv, {}};
}

ExperimentOutput run_region(const ExperimentConfig& config)
{
    const NetworkSpec& spec = require_network(config);
    const RegionParams& params = *config.region;
    const CapacityRegion region = capacity_region(spec, params.t_star);
    const auto vertices = boundary_2d(region, params.resolution);

    std::string csv = metadata_line(config) + "\n";
    csv += "t_1,t_2\n";
    for (const auto& vertex : vertices)
        csv += fmt_g(vertex[0]) + "," + fmt_g(vertex[1]) + "\n";
    return {csv, {}};
}

ExperimentOutput run_delay(const ExperimentConfig& config)
{
    const NetworkSpec& spec = require_network(config);
    const DelayParams& params = *config.delay;
    SimOptions options{config.policy, params.channel};
    const SimReport report = run_simulation(spec, LoadVector{params.load}, options,
                                            config.frames, *config.seed);

    const double slots = static_cast<double>(spec.frame_size);
    std::string csv = metadata_line(config) + "\n";
    csv += "class,d_a_frames,d_a_slots,d_w_frames,samples\n";
    std::uint64_t total_samples = 0;
    for (std::size_t i = 0; i < report.classes.size(); ++i) {
        const ClassReport& cls = report.classes[i];
        csv += std::to_string(i + 1) + "," + fmt_g(cls.delay_avg_frames) + "," +
               fmt_g(cls.delay_avg_frames * slots) + "," +
               std::to_string(cls.delay_max_frames) + "," +
               std::to_string(cls.delay_samples) + "\n";
        total_samples += cls.delay_samples;
    }
    csv += "network," + fmt_g(report.network_delay_avg_frames) + "," +
           fmt_g(report.network_delay_avg_frames * slots) + "," +
           std::to_string(report.network_delay_max_frames) + "," +
           std::to_string(total_samples) + "\n";
    return {csv, {}};
}

ExperimentOutput run_dual_check(const ExperimentConfig& config)
{
    const NetworkSpec& spec = require_network(config);
    const DualCheckParams& params = *config.dual_check;
    SimOptions options{config.policy, ChannelModel::sic};

    const LoadVector multi_load{params.load};
    const SimReport multi =
        run_simulation(spec, multi_load, options, config.frames, split_seed(*config.seed, 0));

    const DualNetwork dual = make_dual(spec, multi_load);
    if (dual.population > 0xffffffffUL)
        raise(ErrorCode::invalid_argument, "dual population exceeds 32 bits");
    NetworkSpec dual_spec{spec.frame_size,
                          {{static_cast<std::uint32_t>(dual.population), dual.distribution}}};
    const SimReport dual_report =
        run_simulation(dual_spec, LoadVector{{dual.load}}, options, config.frames,
                       split_seed(*config.seed, 1));

    const double tv = total_variation(
        SlotDegreeHistogram{multi.slot_histogram, multi.frames * spec.frame_size},
        SlotDegreeHistogram{dual_report.slot_histogram, dual_report.frames * spec.frame_size});

    std::string csv = metadata_line(config) + "\n";
    csv += "network,g_t,t_total,ci95,slot_tv\n";
    csv += "multi," + fmt_g(multi.offered_total) + "," + fmt_g(multi.total_throughput) + "," +
           fmt_g(multi.total_ci95) + "," + fmt_g(tv) + "\n";
    csv += "dual," + fmt_g(dual_report.offered_total) + "," +
           fmt_g(dual_report.total_throughput) + "," + fmt_g(dual_report.total_ci95) + "," +
           fmt_g(tv) + "\n";
    return {csv, {}};
}

ExperimentOutput run_threshold(const ExperimentConfig& config)
{
    const ThresholdParams& params = *config.threshold;
    const double g_star = de_threshold(params.distribution, params.tol);

    ExperimentOutput output;
    output.csv = metadata_line(config) + "\n";
    output.csv += "g_star,tol\n";
    output.csv += fmt_g(g_star) + "," + fmt_g(params.tol) + "\n";

    if (params.trace_load) {
        const auto trace = de_trace(params.distribution, *params.trace_load, 10000, 1e-13);
        std::string trace_csv = metadata_line(config) + "\n";
        trace_csv += "iteration,x\n";
        for (const auto& [iteration, x] : trace)
            trace_csv += std::to_string(iteration) + "," + fmt_g(x) + "\n";
        output.extras.emplace_back("trace", std::move(trace_csv));
    }
    return output;
}

} // namespace

const char* experiment_kind_name(ExperimentKind kind)
{
    switch (kind) {
        case ExperimentKind::sweep: return "sweep";
        case ExperimentKind::region: return "region";
        case ExperimentKind::delay: return "delay";
        case ExperimentKind::dual_check: return "dual_check";
        case ExperimentKind::threshold: return "threshold";
    }
    return "unknown";
}

ExperimentConfig parse_config(const std::string& json_text)
{
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        raise(ErrorCode::parse_error, e.what());
    }
    if (!doc.is_object())
        raise(ErrorCode::parse_error, "configuration root must be a JSON object");

    ExperimentConfig config;
    if (!doc.contains("experiment"))
        fail("experiment", "required field is missing");
    const std::string kind = as_string(doc["experiment"], "experiment");
    if (kind == "sweep")
        config.kind = ExperimentKind::sweep;
    else if (kind == "region")
        config.kind = ExperimentKind::region;
    else if (kind == "delay")
        config.kind = ExperimentKind::delay;
    else if (kind == "dual_check")
        config.kind = ExperimentKind::dual_check;
    else if (kind == "threshold")
        config.kind = ExperimentKind::threshold;
    else
        fail("experiment",
             "unknown kind '" + kind + "' (sweep|region|delay|dual_check|threshold)");

    if (doc.contains("seed"))
        config.seed = as_uint(doc["seed"], "seed");
    if (doc.contains("frames")) {
        config.frames = as_uint(doc["frames"], "frames");
        if (config.frames == 0)
            fail("frames", "must be at least 1");
    }
    if (doc.contains("workers"))
        config.workers = static_cast<std::uint32_t>(as_uint(doc["workers"], "workers"));
    if (doc.contains("policy")) {
        const std::string policy = as_string(doc["policy"], "policy");
        if (policy == "random")
            config.policy = Policy::random_selection;
        else if (policy == "round_robin")
            config.policy = Policy::round_robin;
        else
            fail("policy", "expected 'random' or 'round_robin'");
    }
    if (doc.contains("network"))
        config.network = parse_network(doc["network"], "network");

    switch (config.kind) {
        case ExperimentKind::sweep: {
            const NetworkSpec& spec = require_network(config);
            SweepParams params;
            if (doc.contains("sweep") && doc["sweep"].contains("direction")) {
                params.direction = as_double_vector(doc["sweep"]["direction"], "sweep.direction");
                if (params.direction.size() != spec.num_classes())
                    fail("sweep.direction", "expected one entry per class");
                double sum = 0.0;
                for (double d : params.direction) {
                    if (d < 0.0)
                        fail("sweep.direction", "entries must be nonnegative");
                    sum += d;
                }
                if (std::abs(sum - 1.0) > 1e-9)
                    fail("sweep.direction", "entries must sum to 1");
            } else {
                params.direction.assign(spec.num_classes(),
                                        1.0 / static_cast<double>(spec.num_classes()));
            }
            params.grid = doc.contains("sweep") && doc["sweep"].contains("grid")
                              ? parse_grid(doc["sweep"]["grid"], "sweep.grid")
                              : default_grid();
            config.sweep = std::move(params);
            break;
        }
        case ExperimentKind::region: {
            require_network(config);
            RegionParams params;
            if (doc.contains("region")) {
                const json& region = doc["region"];
                if (region.contains("t_star")) {
                    params.t_star = as_number(region["t_star"], "region.t_star");
                    if (!(params.t_star > 0.0) || params.t_star > 1.0)
                        fail("region.t_star", "must lie in (0, 1]");
                }
                if (region.contains("resolution"))
                    params.resolution = static_cast<std::uint32_t>(
                        as_uint(region["resolution"], "region.resolution"));
            }
            config.region = params;
            break;
        }
        case ExperimentKind::delay: {
            const NetworkSpec& spec = require_network(config);
            if (!doc.contains("delay"))
                fail("delay", "required section is missing");
            DelayParams params;
            params.load = as_double_vector(member(doc["delay"], "delay", "load"), "delay.load");
            check_load_length(params.load, spec, "delay.load");
            if (doc["delay"].contains("channel")) {
                const std::string channel = as_string(doc["delay"]["channel"], "delay.channel");
                if (channel == "sic")
                    params.channel = ChannelModel::sic;
                else if (channel == "ideal")
                    params.channel = ChannelModel::ideal;
                else
                    fail("delay.channel", "expected 'sic' or 'ideal'");
            }
            config.delay = std::move(params);
            break;
        }
        case ExperimentKind::dual_check: {
            const NetworkSpec& spec = require_network(config);
            if (!doc.contains("dual_check"))
                fail("dual_check", "required section is missing");
            DualCheckParams params;
            params.load = as_double_vector(member(doc["dual_check"], "dual_check", "load"),
                                           "dual_check.load");
            check_load_length(params.load, spec, "dual_check.load");
            config.dual_check = std::move(params);
            break;
        }
        case ExperimentKind::threshold: {
            ThresholdParams params{DegreeDistribution::from_probs({{1, 1.0}}), 1e-4, {}};
            if (doc.contains("threshold") && doc["threshold"].contains("distribution")) {
                params.distribution = parse_distribution(doc["threshold"]["distribution"],
                                                         "threshold.distribution");
            } else if (config.network && !config.network->classes.empty()) {
                params.distribution = config.network->classes.front().distribution;
            } else {
                fail("threshold.distribution", "required field is missing");
            }
            if (doc.contains("threshold")) {
                const json& threshold = doc["threshold"];
                if (threshold.contains("tol")) {
                    params.tol = as_number(threshold["tol"], "threshold.tol");
                    if (!(params.tol > 0.0))
                        fail("threshold.tol", "must be positive");
                }
                if (threshold.contains("trace_load")) {
                    params.trace_load = as_number(threshold["trace_load"], "threshold.trace_load");
                    if (*params.trace_load < 0.0)
                        fail("threshold.trace_load", "must be nonnegative");
                }
            }
            config.threshold = std::move(params);
            break;
        }
    }
    return config;
}

std::string canonical_config(const ExperimentConfig& config)
{
    json doc;
    doc["experiment"] = experiment_kind_name(config.kind);
    doc["frames"] = config.frames;
    doc["policy"] = config.policy == Policy::random_selection ? "random" : "round_robin";
    if (config.network)
        doc["network"] = network_to_json(*config.network);
    if (config.sweep)
        doc["sweep"] = json{{"direction", config.sweep->direction},
                            {"grid", json{{"values", config.sweep->grid}}}};
    if (config.region)
        doc["region"] =
            json{{"t_star", config.region->t_star}, {"resolution", config.region->resolution}};
    if (config.delay)
        doc["delay"] = json{{"load", config.delay->load},
                            {"channel", config.delay->channel == ChannelModel::sic
                                            ? "sic"
                                            : "ideal"}};
    if (config.dual_check)
        doc["dual_check"] = json{{"load", config.dual_check->load}};
    if (config.threshold) {
        json section{{"distribution", distribution_to_json(config.threshold->distribution)},
                     {"tol", config.threshold->tol}};
        if (config.threshold->trace_load)
            section["trace_load"] = *config.threshold->trace_load;
        doc["threshold"] = section;
    }
    return doc.dump();
}

std::uint64_t config_hash(const ExperimentConfig& config)
{
    return fnv1a64(canonical_config(config));
}

ExperimentOutput run_experiment(const ExperimentConfig& config)
{
    if (!config.seed)
        raise(ErrorCode::validation_error,
              "seed: required (set it in the configuration or pass --seed)");
    switch (config.kind) {
        case ExperimentKind::sweep: return run_sweep(config);
        case ExperimentKind::region: return run_region(config);
        case ExperimentKind::delay: return run_delay(config);
        case ExperimentKind::dual_check: return run_dual_check(config);
        case ExperimentKind::threshold: return run_threshold(config);
    }
    raise(ErrorCode::invalid_argument, "unknown experiment kind");
}

} // namespace irsa
