#include "samstream/harness.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include "samstream/io.hpp"

namespace samstream {

std::vector<std::vector<double>> preprocess(const std::vector<std::vector<double>>& raw,
                                            std::size_t w, std::size_t stride) {
    if (w < 1) throw std::invalid_argument("preprocess: window must be at least 1");
    if (stride < 1) throw std::invalid_argument("preprocess: stride must be at least 1");
    std::vector<std::vector<double>> out;
    if (raw.size() < w) return out;

    const std::size_t n = raw.front().size();
    for (std::size_t start = 0; start + w <= raw.size(); start += stride) {
        std::vector<double> mean(n, 0.0);
        for (std::size_t r = start; r < start + w; ++r) {
            if (raw[r].size() != n) throw std::invalid_argument("preprocess: ragged stream");
            for (std::size_t i = 0; i < n; ++i) mean[i] += raw[r][i];
        }
        for (double& v : mean) v /= static_cast<double>(w);
        out.push_back(std::move(mean));
    }
    return out;
}

std::optional<std::pair<std::int64_t, std::int64_t>> map_truth_window(
    std::optional<std::pair<std::int64_t, std::int64_t>> raw_window, std::size_t w,
    std::size_t stride, std::size_t output_count) {
    if (!raw_window || output_count == 0) return std::nullopt;
    const auto [a, b] = *raw_window;
    const auto wl = static_cast<std::int64_t>(w);
    const auto st = static_cast<std::int64_t>(stride);
    // Output j averages raw steps [j*stride, j*stride + w - 1]; it is inside
    // the mapped window when that range overlaps [a, b].
    std::int64_t lo = (a - wl + 1 + st - 1) / st;  // ceil((a-w+1)/stride) for a-w+1 >= 0
    if (a - wl + 1 <= 0) lo = 0;
    std::int64_t hi = b / st;
    hi = std::min(hi, static_cast<std::int64_t>(output_count) - 1);
    lo = std::max<std::int64_t>(lo, 0);
    if (lo > hi) return std::nullopt;
    return std::make_pair(lo, hi);
}

void RunConfig::validate() const {
    if (!input_csv && !scenario) {
        throw std::invalid_argument("RunConfig: either an input CSV or a scenario is required");
    }
    if (input_csv && scenario) {
        throw std::invalid_argument("RunConfig: input CSV and scenario are mutually exclusive");
    }
    if (batch < 1) throw std::invalid_argument("RunConfig: batch size must be at least 1");
    if (pre_window < 1 || pre_stride < 1) {
        throw std::invalid_argument("RunConfig: preprocessing window and stride must be >= 1");
    }
    detector.sam.validate();
}

namespace {

struct LoadedInput {
    std::vector<std::vector<double>> raw;
    std::optional<std::pair<std::int64_t, std::int64_t>> truth;  // raw steps, inclusive
    std::string label;
};

LoadedInput load_input(const RunConfig& config) {
    LoadedInput in;
    if (config.scenario) {
        Scenario scn = generate(*config.scenario);
        in.raw = std::move(scn.observations);
        in.truth = scn.truth;
        in.label = std::string(to_string(config.scenario->kind)) + "-seed" +
                   std::to_string(config.scenario->seed);
    } else {
        in.raw = read_stream_csv(*config.input_csv);
        const std::string sidecar = sidecar_path_for(*config.input_csv);
        if (std::filesystem::exists(sidecar)) {
            const ScenarioSpec spec = read_scenario_sidecar(sidecar);
            if (spec.kind != AnomalyKind::none) {
                in.truth = std::make_pair(spec.onset, spec.end - 1);
            }
        }
        in.label = std::filesystem::path(*config.input_csv).stem().string();
    }
    if (!config.label.empty()) in.label = config.label;
    return in;
}

void write_report_files(const RunConfig& config, const RunResult& result) {
    namespace fs = std::filesystem;
    fs::create_directories(config.outdir);
    const fs::path dir(config.outdir);

    write_alarm_log((dir / "alarms.csv").string(), result.alarms);

    {
        std::ofstream out(dir / "scores.csv");
        out << "scenario,method,tp,fp,fn\n";
        out << result.label << ',' << to_string(result.method) << ',';
        if (result.score.tp) out << *result.score.tp;
        out << ',' << result.score.fp << ',';
        if (result.score.fn) out << *result.score.fn;
        out << "\n";
    }
    {
        std::ofstream out(dir / "itte.csv");
        out << "sensor,itte\n";
        for (std::size_t j = 0; j < result.sensor_itte.size(); ++j) {
            out << j << ',' << format_double(result.sensor_itte[j]) << "\n";
        }
    }
    {
        std::ofstream out(dir / "report.txt");
        out << "scenario: " << result.label << "\n";
        out << "method: " << to_string(result.method) << "\n";
        out << "steps: " << result.steps << "\n";
        out << "status: " << (result.failed ? ("failed: " + result.failure) : "ok") << "\n";
        out << "tp: " << (result.score.tp ? std::to_string(*result.score.tp) : "-") << "\n";
        out << "fp: " << result.score.fp << "\n";
        out << "fn: " << (result.score.fn ? std::to_string(*result.score.fn) : "-") << "\n";
        out << "alarm_log: alarms.csv\n";
        out << "sensor itte:\n";
        for (std::size_t j = 0; j < result.sensor_itte.size(); ++j) {
            out << "  s" << j << ": " << format_double(result.sensor_itte[j]) << "\n";
        }
    }
}

void write_trace_file(const std::string& outdir, const std::vector<TraceRow>& trace) {
    std::ofstream out(std::filesystem::path(outdir) / "trace.csv");
    out << "t,prediction,target,residual,memory,stm_size,ltm_size,itte_stm,itte_ltm,itte_cm\n";
    for (const TraceRow& r : trace) {
        out << r.index << ',' << format_double(r.prediction) << ',' << format_double(r.target)
            << ',' << format_double(r.residual) << ',' << (r.has_memory ? to_string(r.memory) : "-")
            << ',' << r.stm_size << ',' << r.ltm_size << ',' << format_double(r.itte_stm) << ','
            << format_double(r.itte_ltm) << ',' << format_double(r.itte_cm) << "\n";
    }
}

}  // namespace

RunResult run_experiment(const RunConfig& config) {
    config.validate();
    const auto started = std::chrono::steady_clock::now();

    LoadedInput input = load_input(config);
    const auto processed = preprocess(input.raw, config.pre_window, config.pre_stride);
    const auto truth =
        map_truth_window(input.truth, config.pre_window, config.pre_stride, processed.size());

    RunResult result;
    result.label = input.label;
    result.method = config.detector.method;

    if (processed.empty()) {
        result.score = score_scenario({}, truth);
        return result;
    }

    const int n = static_cast<int>(processed.front().size());
    DetectorConfig detector = config.detector;
    detector.trace_sensor = config.trace_sensor;
    VirtualSensorBank bank(n, detector);

    std::int64_t t = 0;
    try {
        // Batches are plain I/O chunking: results are identical for any size.
        for (std::size_t base = 0; base < processed.size(); base += config.batch) {
            const std::size_t stop = std::min(processed.size(), base + config.batch);
            for (std::size_t row = base; row < stop; ++row) {
                auto records = bank.step(processed[row], t);
                result.alarms.insert(result.alarms.end(), records.begin(), records.end());
                ++t;
            }
        }
    } catch (const std::runtime_error& e) {
        result.failed = true;
        result.failure = e.what();
    }

    result.steps = t;
    result.score = score_scenario(result.alarms, truth);
    result.sensor_itte.reserve(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) result.sensor_itte.push_back(bank.sensor_itte(j));
    result.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();

    if (!config.outdir.empty()) {
        write_report_files(config, result);
        if (config.trace_sensor >= 0) write_trace_file(config.outdir, bank.trace());
    }
    return result;
}

std::vector<ComparisonRow> compare_methods(const std::vector<std::vector<RunConfig>>& per_method) {
    if (per_method.empty()) throw std::invalid_argument("compare_methods: nothing to run");
    const std::size_t scenarios = per_method.front().size();
    for (const auto& configs : per_method) {
        if (configs.size() != scenarios) {
            throw std::invalid_argument("compare_methods: methods reference different scenario sets");
        }
    }

    std::vector<ComparisonRow> rows;
    std::vector<std::string> labels;
    for (std::size_t m = 0; m < per_method.size(); ++m) {
        for (std::size_t s = 0; s < scenarios; ++s) {
            RunResult r = run_experiment(per_method[m][s]);
            if (m == 0) {
                labels.push_back(r.label);
            } else if (labels[s] != r.label) {
                throw std::invalid_argument("compare_methods: methods reference different scenario sets");
            }
            rows.push_back({r.method, r.label, r.score});
        }
    }
    return rows;
}

void write_comparison_csv(const std::string& path, const std::vector<ComparisonRow>& rows) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << "method,scenario,tp,fp,fn\n";
    for (const auto& row : rows) {
        out << to_string(row.method) << ',' << row.label << ',';
        if (row.score.tp) out << *row.score.tp;
        out << ',' << row.score.fp << ',';
        if (row.score.fn) out << *row.score.fn;
        out << "\n";
    }
}

void write_comparison_text(const std::string& path, const std::vector<ComparisonRow>& rows) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << "method      scenario                     tp   fp       fn\n";
    for (const auto& row : rows) {
        char line[160];
        std::snprintf(line, sizeof line, "%-11s %-28s %-4s %-8lld %-4s\n", to_string(row.method),
                      row.label.c_str(), row.score.tp ? std::to_string(*row.score.tp).c_str() : "-",
                      static_cast<long long>(row.score.fp),
                      row.score.fn ? std::to_string(*row.score.fn).c_str() : "-");
        out << line;
    }
}

}  // namespace samstream
