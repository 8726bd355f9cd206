#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "pramr/backend.hpp"
#include "pramr/config.hpp"
#include "pramr/dual_loop.hpp"
#include "pramr/engine.hpp"
#include "pramr/episode.hpp"
#include "pramr/metrics.hpp"
#include "pramr/stress.hpp"

namespace fs = std::filesystem;
using namespace pramr;

namespace {

struct CommonOptions {
    std::string config_path;
    std::string out_dir = ".";
    std::string format = "json";
    std::uint64_t seed = 42;
};

RoutingConfig load_config(const CommonOptions& common) {
    if (common.config_path.empty()) return RoutingConfig{};
    return read_config(common.config_path);
}

std::unique_ptr<RouterBackend> make_backend(const std::string& option) {
    if (option == "rule") return std::make_unique<RuleBasedBackend>();
    if (option.rfind("scripted:", 0) == 0) {
        return std::make_unique<ScriptedBackend>(ScriptedBackend::from_file(option.substr(9)));
    }
    if (option.rfind("remote:", 0) == 0) {
        return std::make_unique<RemoteBackend>(option.substr(7), 2.0);
    }
    throw CLI::ValidationError("--backend", "expected rule, scripted:PATH, or remote:URL");
}

void write_state_series_csv(const std::string& path, const std::vector<DiagnosticFrame>& trace,
                            const std::vector<PerModality<bool>>& series) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << "t";
    for (auto m : kAllModalities) out << ",s_" << name_of(m);
    out << "\n";
    char buf[64];
    for (std::size_t i = 0; i < trace.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.9g", trace[i].timestamp);
        out << buf;
        for (auto m : kAllModalities) out << ',' << (at(series[i], m) ? 1 : 0);
        out << "\n";
    }
}

void emit_episode_artifacts(const fs::path& out, const EpisodeLog& log,
                            const RoutingConfig& config, const std::string& format) {
    write_episode((out / "episode.jsonl").string(), log);
    write_weights_csv((out / "weights.csv").string(), log);
    write_states_csv((out / "states.csv").string(), log);
    write_memory_events_csv((out / "memory_events.csv").string(), log.memory_events);
    MetricsReport report =
        compute_report(log, config.thresholds, config.hysteresis_margin, config.recall_ttl);
    write_report((out / "report.json").string(), report);
    if (format == "csv") write_report_csv((out / "report.csv").string(), report);
    if (!log.knowledge.empty()) {
        MemoryStore store;
        for (const auto& e : log.knowledge) store.add_knowledge(e, e.created_at, 1 << 20);
        store.save_knowledge((out / "knowledge.jsonl").string());
    }
    std::cout << "re=" << report.re << " rc=" << report.rc << " rsi=" << report.rsi
              << " mrr=" << report.mrr_cumulative
              << " reduction=" << report.switches.reduction_percent << "%\n";
}

int run_stress(const CommonOptions& common, bool canonical, const std::string& kind,
               const std::string& modality, double duration, double amplitude, int period) {
    RoutingConfig config = load_config(common);
    fs::path out(common.out_dir);
    fs::create_directories(out);

    std::vector<DiagnosticFrame> trace;
    if (canonical) {
        trace = canonical_table3_trace();
    } else {
        PerturbationSpec spec;
        if (kind == "gradual") {
            spec.kind = PerturbationKind::GradualDegradation;
        } else if (kind == "abrupt") {
            spec.kind = PerturbationKind::AbruptFailure;
        } else if (kind == "noise") {
            spec.kind = PerturbationKind::HighFrequencyNoise;
        } else {
            throw CLI::ValidationError("--kind", "expected gradual, abrupt, or noise");
        }
        auto target = modality_from_name(modality);
        if (!target) throw CLI::ValidationError("--modality", "expected camera, lidar, or radar");
        spec.targets = ModalitySet{};
        spec.targets.insert(*target);
        spec.duration = duration;
        spec.dt = config.fast_period;
        spec.amplitude = amplitude;
        spec.period_ticks = period;
        spec.seed = common.seed;
        trace = generate_trace(spec);
    }
    write_trace((out / "trace.jsonl").string(), trace);

    // Threshold-only vs hysteresis comparison over the rule-based reliabilities.
    EpisodeLog pseudo;
    RuleBasedBackend rule;
    MemorySnapshot empty;
    std::vector<PerModality<bool>> thr_series, hyst_series;
    HysteresisBand band = make_band(config.thresholds, config.hysteresis_margin);
    for (std::size_t i = 0; i < trace.size(); ++i) {
        EpisodeRecord record;
        record.tick = static_cast<int>(i);
        record.t = trace[i].timestamp;
        record.frame = trace[i];
        record.decision = rule.score(trace[i], empty);
        PerModality<bool> thr = threshold_step(record.decision.reliability, config.thresholds);
        PerModality<bool> hyst =
            i == 0 ? thr : hysteresis_step(hyst_series.back(), record.decision.reliability, band);
        thr_series.push_back(thr);
        hyst_series.push_back(hyst);
        pseudo.records.push_back(std::move(record));
    }
    write_state_series_csv((out / "states_threshold.csv").string(), trace, thr_series);
    write_state_series_csv((out / "states_hysteresis.csv").string(), trace, hyst_series);

    SwitchCounts counts = switch_comparison(pseudo, config.thresholds, config.hysteresis_margin);
    nlohmann::json thr_json, hyst_json;
    for (auto m : kAllModalities) {
        thr_json[std::string(name_of(m))] = at(counts.threshold, m);
        hyst_json[std::string(name_of(m))] = at(counts.hysteresis, m);
    }
    nlohmann::json report = {
        {"switches",
         {{"threshold", thr_json},
          {"hysteresis", hyst_json},
          {"threshold_total", counts.threshold_total},
          {"hysteresis_total", counts.hysteresis_total},
          {"reduction_percent", counts.reduction_percent}}},
        {"frames", trace.size()},
    };
    std::ofstream rep(out / "report.json");
    rep << report.dump(2) << "\n";
    std::cout << "switches threshold=" << counts.threshold_total
              << " hysteresis=" << counts.hysteresis_total
              << " reduction=" << counts.reduction_percent << "%\n";
    return 0;
}

int run_replay(const CommonOptions& common, const std::string& trace_path,
               const std::string& backend_option, bool no_memory) {
    RoutingConfig config = load_config(common);
    fs::path out(common.out_dir);
    fs::create_directories(out);
    auto trace = read_trace(trace_path);
    if (auto bad = validate_trace(trace)) throw std::runtime_error("invalid trace: " + *bad);
    auto backend = make_backend(backend_option);
    EpisodeOptions options;
    options.use_memory = !no_memory;
    EpisodeLog log = single_loop_episode(trace, *backend, config, options);
    emit_episode_artifacts(out, log, config, common.format);
    return 0;
}

int run_run(const CommonOptions& common, const std::string& trace_path,
            const std::string& backend_option, double fast_hz, double slow_hz, bool single_loop,
            bool no_memory) {
    RoutingConfig config = load_config(common);
    if (fast_hz > 0.0) config.fast_period = 1.0 / fast_hz;
    if (slow_hz > 0.0) config.slow_period = 1.0 / slow_hz;
    if (auto bad = validate_config(config)) {
        throw CLI::ValidationError("--fast-hz/--slow-hz", "invalid schedule: " + *bad);
    }
    fs::path out(common.out_dir);
    fs::create_directories(out);
    auto trace = read_trace(trace_path);
    if (auto bad = validate_trace(trace)) throw std::runtime_error("invalid trace: " + *bad);
    auto backend = make_backend(backend_option);
    EpisodeOptions options;
    options.use_memory = !no_memory;
    EpisodeLog log;
    if (single_loop) {
        log = single_loop_episode(trace, *backend, config, options);
    } else {
        LoopSchedule schedule;
        schedule.fast_period = config.fast_period;
        schedule.slow_period = config.slow_period;
        log = run_episode(trace, *backend, config, schedule, options);
    }
    emit_episode_artifacts(out, log, config, common.format);
    return 0;
}

int run_report(const CommonOptions& common, const std::string& episode_path) {
    RoutingConfig config = load_config(common);
    fs::path out(common.out_dir);
    fs::create_directories(out);
    EpisodeLog log = read_episode(episode_path);
    MetricsReport report =
        compute_report(log, config.thresholds, config.hysteresis_margin, config.recall_ttl);
    write_report((out / "report.json").string(), report);
    if (common.format == "csv") write_report_csv((out / "report.csv").string(), report);
    std::cout << "re=" << report.re << " rc=" << report.rc << " rsi=" << report.rsi
              << " mrr=" << report.mrr_cumulative << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"PRAM-R modality-routing scenario and stress-test CLI"};
    app.require_subcommand(1);

    CommonOptions common;
    app.add_option("--config", common.config_path, "Routing config JSON file")
        ->each([](const std::string&) {});
    app.add_option("--seed", common.seed, "Seed for all generated randomness");
    app.add_option("--out", common.out_dir, "Output directory");
    app.add_option("--format", common.format, "Report format")
        ->check(CLI::IsMember({"json", "csv"}));

    auto* stress = app.add_subcommand("stress", "Generate a perturbation trace and compare "
                                                "threshold-only vs hysteresis switching");
    bool canonical = false;
    std::string kind = "noise", modality = "lidar";
    double duration = 60.0, amplitude = 0.15;
    int period = 3;
    stress->add_flag("--canonical", canonical,
                     "Use the frozen stress trace (ignores other stress parameters)");
    stress->add_option("--kind", kind, "gradual | abrupt | noise");
    stress->add_option("--modality", modality, "Target modality");
    stress->add_option("--duration", duration, "Trace duration, seconds");
    stress->add_option("--amplitude", amplitude, "Noise amplitude");
    stress->add_option("--period", period, "Noise period in ticks");

    auto* replay = app.add_subcommand("replay", "Route a stored trace synchronously");
    std::string replay_trace;
    std::string replay_backend = "rule";
    bool replay_no_memory = false;
    replay->add_option("trace", replay_trace, "Trace file (jsonl)")->required();
    replay->add_option("--backend", replay_backend, "rule | scripted:PATH | remote:URL");
    replay->add_flag("--no-memory", replay_no_memory, "Disable the memory hierarchy");

    auto* run = app.add_subcommand("run", "Full dual-loop episode over a trace");
    std::string run_trace;
    std::string run_backend = "rule";
    double fast_hz = 0.0, slow_hz = 0.0;
    bool single_loop = false, run_no_memory = false;
    run->add_option("trace", run_trace, "Trace file (jsonl)")->required();
    run->add_option("--backend", run_backend, "rule | scripted:PATH | remote:URL");
    run->add_option("--fast-hz", fast_hz, "Reactive loop frequency");
    run->add_option("--slow-hz", slow_hz, "Deliberative loop frequency");
    run->add_flag("--single-loop", single_loop, "Synchronous routing at every tick");
    run->add_flag("--no-memory", run_no_memory, "Disable the memory hierarchy");

    auto* report = app.add_subcommand("report", "Recompute metrics from a stored episode log");
    std::string episode_path;
    report->add_option("episode", episode_path, "Episode file (jsonl)")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (stress->parsed()) {
            return run_stress(common, canonical, kind, modality, duration, amplitude, period);
        }
        if (replay->parsed()) {
            return run_replay(common, replay_trace, replay_backend, replay_no_memory);
        }
        if (run->parsed()) {
            return run_run(common, run_trace, run_backend, fast_hz, slow_hz, single_loop,
                           run_no_memory);
        }
        if (report->parsed()) {
            return run_report(common, episode_path);
        }
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 1;
}
