#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "samstream/harness.hpp"
#include "samstream/io.hpp"

using namespace samstream;

namespace {

struct ScenarioFlags {
    std::string kind = "none";
    int sensors = 29;
    std::int64_t duration = 23000;
    std::uint64_t seed = 1;
    double noise = 0.01;
    double drift = 0.15;
    int sensor = 0;
    std::int64_t onset = 0;
    std::int64_t end = 0;
    double magnitude = 0.0;

    ScenarioSpec to_spec() const {
        ScenarioSpec spec;
        const auto k = anomaly_kind_from(kind);
        if (!k) throw CLI::ValidationError("--kind", "unknown anomaly kind '" + kind + "'");
        spec.kind = *k;
        spec.n_sensors = sensors;
        spec.duration = duration;
        spec.seed = seed;
        spec.noise_sd = noise;
        spec.drift_sd = drift;
        spec.sensor = sensor;
        spec.onset = onset;
        spec.end = end;
        spec.magnitude = magnitude;
        return spec;
    }
};

void add_scenario_flags(CLI::App* cmd, ScenarioFlags& flags) {
    cmd->add_option("--kind", flags.kind,
                    "anomaly kind: none|leak|overflow|gaussian_noise|constant_offset|stuck_zero|shift");
    cmd->add_option("--sensors", flags.sensors, "number of sensors");
    cmd->add_option("--duration", flags.duration, "steps to generate");
    cmd->add_option("--seed", flags.seed, "generator seed");
    cmd->add_option("--noise", flags.noise, "observation noise sd");
    cmd->add_option("--drift", flags.drift, "stationary sd of the slow demand drift");
    cmd->add_option("--sensor", flags.sensor, "anomalous sensor id");
    cmd->add_option("--onset", flags.onset, "anomaly onset step");
    cmd->add_option("--end", flags.end, "anomaly end step (exclusive)");
    cmd->add_option("--magnitude", flags.magnitude, "anomaly magnitude");
}

struct DetectorFlags {
    std::string method = "sam";
    SamConfig sam;
    std::size_t knn_window = 1000;
    std::size_t knn_k = 5;
    double lr = 0.01;
    bool no_standardize = false;
    std::string thr_mode = "adaptive";
    double thr_c = 4.0;
    double thr_floor = 0.05;
    std::size_t thr_window = 1000;
    double thr_value = 0.5;
    std::size_t warmup = 0;

    DetectorConfig to_config() const {
        DetectorConfig cfg;
        const auto m = method_from(method);
        if (!m) throw CLI::ValidationError("--method", "unknown method '" + method + "'");
        cfg.method = *m;
        cfg.sam = sam;
        cfg.knn_window = knn_window;
        cfg.knn_k = knn_k;
        cfg.linear_rate = lr;
        cfg.linear_standardize = !no_standardize;
        if (thr_mode == "adaptive") {
            cfg.threshold.mode = ThresholdConfig::Mode::adaptive;
        } else if (thr_mode == "fixed") {
            cfg.threshold.mode = ThresholdConfig::Mode::fixed;
        } else {
            throw CLI::ValidationError("--thr-mode", "expected adaptive or fixed");
        }
        cfg.threshold.c = thr_c;
        cfg.threshold.floor = thr_floor;
        cfg.threshold.window = thr_window;
        cfg.threshold.fixed_value = thr_value;
        cfg.warmup = warmup;
        return cfg;
    }
};

void add_detector_flags(CLI::App* cmd, DetectorFlags& flags) {
    cmd->add_option("--method", flags.method, "regressor: sam|knn|linear");
    cmd->add_option("--k", flags.sam.k, "neighbors for the SAM regressor");
    cmd->add_option("--min-stm", flags.sam.min_stm, "minimum STM window");
    cmd->add_option("--max-ltm", flags.sam.max_ltm, "LTM capacity");
    cmd->add_option("--max-stm", flags.sam.max_stm, "STM capacity");
    cmd->add_option("--adapt-stride", flags.sam.adapt_stride,
                    "evaluate candidate windows every n-th sample");
    cmd->add_flag("--weighted", flags.sam.distance_weighted, "distance-weighted kNN mean");
    cmd->add_flag("--normalize", flags.sam.normalize, "running z-score on SAM features");
    cmd->add_option("--knn-window", flags.knn_window, "sliding window of the kNN baseline");
    cmd->add_option("--knn-k", flags.knn_k, "neighbors of the kNN baseline");
    cmd->add_option("--lr", flags.lr, "learning rate of the linear baseline");
    cmd->add_flag("--no-standardize", flags.no_standardize,
                  "disable z-scoring in the linear baseline");
    cmd->add_option("--thr-mode", flags.thr_mode, "threshold mode: adaptive|fixed");
    cmd->add_option("--thr-c", flags.thr_c, "adaptive threshold multiplier");
    cmd->add_option("--thr-floor", flags.thr_floor, "adaptive threshold floor");
    cmd->add_option("--thr-window", flags.thr_window, "trailing residual window");
    cmd->add_option("--thr-value", flags.thr_value, "fixed threshold value");
    cmd->add_option("--warmup", flags.warmup, "alarm-free warm-up steps (0 = min-stm)");
}

void print_result(const RunResult& r) {
    std::printf("scenario: %s\n", r.label.c_str());
    std::printf("method: %s\n", to_string(r.method));
    std::printf("steps: %lld\n", static_cast<long long>(r.steps));
    if (r.failed) std::printf("status: failed (%s)\n", r.failure.c_str());
    std::printf("tp=%s fp=%lld fn=%s\n", r.score.tp ? std::to_string(*r.score.tp).c_str() : "-",
                static_cast<long long>(r.score.fp),
                r.score.fn ? std::to_string(*r.score.fn).c_str() : "-");
    std::printf("runtime: %.3f s (%.0f steps/s)\n", r.seconds,
                r.seconds > 0 ? double(r.steps) / r.seconds : 0.0);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"streaming kNN regression with self-adjusting memory and residual anomaly detection"};
    app.require_subcommand(1);
    app.set_config("--config", "", "read options from an INI file (command line overrides)");

    auto* gen = app.add_subcommand("generate", "write a synthetic scenario as CSV + sidecar");
    ScenarioFlags gen_scn;
    std::string gen_out;
    add_scenario_flags(gen, gen_scn);
    gen->add_option("--out", gen_out, "output CSV path")->required();

    auto* run = app.add_subcommand("run", "run one detector over a scenario or CSV");
    ScenarioFlags run_scn;
    DetectorFlags run_det;
    std::string run_input, run_outdir, run_label;
    std::size_t run_w = 4, run_stride = 1, run_batch = 200;
    int run_trace = -1;
    bool run_synth = false;
    run->add_option("--input", run_input, "stream CSV to replay (sidecar picked up when present)");
    run->add_flag("--synth", run_synth, "synthesize the scenario from the flags instead");
    add_scenario_flags(run, run_scn);
    add_detector_flags(run, run_det);
    run->add_option("--window", run_w, "preprocessing window (dimension-wise mean)");
    run->add_option("--stride", run_stride, "preprocessing stride");
    run->add_option("--batch", run_batch, "batch size for stream chunking");
    run->add_option("--outdir", run_outdir, "directory for report, scores, itte and alarm log");
    run->add_option("--label", run_label, "scenario label used in reports");
    run->add_option("--trace", run_trace, "sensor id to trace per step");

    auto* cmp = app.add_subcommand("compare", "run several methods over the same scenario files");
    std::vector<std::string> cmp_inputs;
    std::vector<std::string> cmp_methods{"sam", "knn", "linear"};
    DetectorFlags cmp_det;
    std::string cmp_outdir = ".";
    std::size_t cmp_w = 4, cmp_stride = 1, cmp_batch = 200;
    cmp->add_option("--input", cmp_inputs, "stream CSVs (repeatable)")->required();
    cmp->add_option("--methods", cmp_methods, "methods to compare")->delimiter(',');
    add_detector_flags(cmp, cmp_det);
    cmp->add_option("--window", cmp_w, "preprocessing window");
    cmp->add_option("--stride", cmp_stride, "preprocessing stride");
    cmp->add_option("--batch", cmp_batch, "batch size");
    cmp->add_option("--outdir", cmp_outdir, "directory for comparison.csv / comparison.txt");

    auto* bench = app.add_subcommand("bench", "time one virtual sensor over a scenario");
    ScenarioFlags bench_scn;
    DetectorFlags bench_det;
    int bench_sensor = 0;
    std::size_t bench_w = 4;
    bench->add_option("--virtual-sensor", bench_sensor, "channel to predict");
    add_scenario_flags(bench, bench_scn);
    add_detector_flags(bench, bench_det);
    bench->add_option("--window", bench_w, "preprocessing window");

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed()) {
            const ScenarioSpec spec = gen_scn.to_spec();
            const Scenario scn = generate(spec);
            write_stream_csv(gen_out, scn.observations);
            write_scenario_sidecar(sidecar_path_for(gen_out), spec);
            std::printf("wrote %s (%lld steps, %d sensors) and %s\n", gen_out.c_str(),
                        static_cast<long long>(spec.duration), spec.n_sensors,
                        sidecar_path_for(gen_out).c_str());
        } else if (run->parsed()) {
            RunConfig cfg;
            if (!run_input.empty()) {
                cfg.input_csv = run_input;
            } else if (run_synth) {
                cfg.scenario = run_scn.to_spec();
            } else {
                std::fprintf(stderr, "run: need --input or --synth\n");
                return 1;
            }
            cfg.detector = run_det.to_config();
            cfg.pre_window = run_w;
            cfg.pre_stride = run_stride;
            cfg.batch = run_batch;
            cfg.outdir = run_outdir;
            cfg.label = run_label;
            cfg.trace_sensor = run_trace;
            const RunResult r = run_experiment(cfg);
            print_result(r);
            if (r.failed) return 1;
        } else if (cmp->parsed()) {
            std::vector<std::vector<RunConfig>> grid;
            for (const auto& name : cmp_methods) {
                const auto m = method_from(name);
                if (!m) {
                    std::fprintf(stderr, "compare: unknown method '%s'\n", name.c_str());
                    return 1;
                }
                std::vector<RunConfig> row;
                for (const auto& input : cmp_inputs) {
                    RunConfig cfg;
                    cfg.input_csv = input;
                    cfg.detector = cmp_det.to_config();
                    cfg.detector.method = *m;
                    cfg.pre_window = cmp_w;
                    cfg.pre_stride = cmp_stride;
                    cfg.batch = cmp_batch;
                    row.push_back(std::move(cfg));
                }
                grid.push_back(std::move(row));
            }
            const auto rows = compare_methods(grid);
            namespace fs = std::filesystem;
            fs::create_directories(cmp_outdir);
            write_comparison_csv((fs::path(cmp_outdir) / "comparison.csv").string(), rows);
            write_comparison_text((fs::path(cmp_outdir) / "comparison.txt").string(), rows);
            for (const auto& row : rows) {
                std::printf("%-8s %-28s tp=%s fp=%lld fn=%s\n", to_string(row.method),
                            row.label.c_str(),
                            row.score.tp ? std::to_string(*row.score.tp).c_str() : "-",
                            static_cast<long long>(row.score.fp),
                            row.score.fn ? std::to_string(*row.score.fn).c_str() : "-");
            }
        } else if (bench->parsed()) {
            const ScenarioSpec spec = bench_scn.to_spec();
            const Scenario scn = generate(spec);
            const auto processed = preprocess(scn.observations, bench_w, 1);
            const DetectorConfig det = bench_det.to_config();
            if (bench_sensor < 0 || bench_sensor >= spec.n_sensors) {
                std::fprintf(stderr, "bench: --virtual-sensor out of range\n");
                return 1;
            }

            const auto t0 = std::chrono::steady_clock::now();
            WindowKnn knn(det.knn_window, det.knn_k);
            OnlineLinear linear(static_cast<std::size_t>(spec.n_sensors - 1), det.linear_rate,
                                det.linear_standardize);
            std::vector<Sample> warm;
            std::optional<SamRegressor> sam;
            std::int64_t steps = 0;
            double checksum = 0.0;
            for (std::size_t t = 0; t < processed.size(); ++t) {
                Sample s;
                s.index = static_cast<std::int64_t>(t);
                s.target = processed[t][static_cast<std::size_t>(bench_sensor)];
                for (int j = 0; j < spec.n_sensors; ++j) {
                    if (j != bench_sensor) s.features.push_back(processed[t][std::size_t(j)]);
                }
                switch (det.method) {
                    case Method::sam:
                        if (sam) {
                            checksum += sam->step(s).prediction;
                        } else {
                            warm.push_back(std::move(s));
                            if (warm.size() == det.sam.min_stm) sam.emplace(std::move(warm), det.sam);
                        }
                        break;
                    case Method::knn: checksum += knn.step(s); break;
                    case Method::linear: checksum += linear.step(s); break;
                }
                ++steps;
            }
            const double seconds =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            std::printf("method: %s\n", to_string(det.method));
            std::printf("steps: %lld (%d sensors)\n", static_cast<long long>(steps), spec.n_sensors);
            std::printf("seconds: %.3f\n", seconds);
            std::printf("steps_per_second: %.0f\n", seconds > 0 ? double(steps) / seconds : 0.0);
            std::printf("checksum: %s\n", format_double(checksum).c_str());
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
