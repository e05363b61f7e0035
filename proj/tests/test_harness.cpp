#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "samstream/harness.hpp"
#include "samstream/io.hpp"

using namespace samstream;

namespace {

std::vector<std::vector<double>> ramp_stream(std::size_t steps, std::size_t n) {
    std::vector<std::vector<double>> rows(steps);
    for (std::size_t t = 0; t < steps; ++t) {
        rows[t].resize(n);
        for (std::size_t j = 0; j < n; ++j) rows[t][j] = double(t) + 10.0 * double(j);
    }
    return rows;
}

ScenarioSpec stuck_zero_spec() {
    ScenarioSpec spec;
    spec.n_sensors = 5;
    spec.duration = 1000;
    spec.seed = 3;
    spec.kind = AnomalyKind::stuck_zero;
    spec.sensor = 2;
    spec.onset = 600;
    spec.end = 800;
    return spec;
}

RunConfig small_run(const ScenarioSpec& spec) {
    RunConfig cfg;
    cfg.scenario = spec;
    cfg.detector.sam.min_stm = 50;
    cfg.detector.sam.max_ltm = 500;
    return cfg;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

bool same_alarms(const std::vector<AlarmRecord>& a, const std::vector<AlarmRecord>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].index != b[i].index || a[i].sensor != b[i].sensor ||
            a[i].residual != b[i].residual || a[i].threshold != b[i].threshold ||
            a[i].alarm != b[i].alarm) {
            return false;
        }
    }
    return true;
}

}  // namespace

TEST_CASE("preprocess with w=1 is the identity") {
    const auto raw = ramp_stream(20, 3);
    CHECK(preprocess(raw, 1, 1) == raw);
}

TEST_CASE("preprocess averages the window") {
    std::vector<std::vector<double>> raw{{1.0}, {2.0}, {3.0}, {4.0}, {5.0}};
    const auto out = preprocess(raw, 4, 1);
    REQUIRE(out.size() == 2);
    CHECK(out[0][0] == doctest::Approx(2.5));
    CHECK(out[1][0] == doctest::Approx(3.5));
}

TEST_CASE("preprocess keeps constant streams constant") {
    std::vector<std::vector<double>> raw(30, std::vector<double>{7.0, -1.0});
    for (const auto& row : preprocess(raw, 4, 2)) {
        CHECK(row[0] == doctest::Approx(7.0));
        CHECK(row[1] == doctest::Approx(-1.0));
    }
}

TEST_CASE("truth windows map through the averaging") {
    // raw window [10, 20], w=4: outputs 7..20 overlap it
    const auto w = map_truth_window(std::make_pair<std::int64_t, std::int64_t>(10, 20), 4, 1, 100);
    REQUIRE(w.has_value());
    CHECK(w->first == 7);
    CHECK(w->second == 20);
    CHECK_FALSE(map_truth_window(std::nullopt, 4, 1, 100).has_value());
}

TEST_CASE("batching is invisible in the results") {
    const ScenarioSpec spec = stuck_zero_spec();
    RunConfig a = small_run(spec);
    a.batch = 1;
    RunConfig b = small_run(spec);
    b.batch = 200;
    RunConfig c = small_run(spec);
    c.batch = 100000;  // one batch for the whole stream

    const auto ra = run_experiment(a);
    const auto rb = run_experiment(b);
    const auto rc = run_experiment(c);
    CHECK(same_alarms(ra.alarms, rb.alarms));
    CHECK(same_alarms(ra.alarms, rc.alarms));
    CHECK(ra.score.fp == rb.score.fp);
    CHECK(*ra.score.tp == *rc.score.tp);
}

TEST_CASE("detection on the stuck-zero scenario end to end") {
    const auto r = run_experiment(small_run(stuck_zero_spec()));
    REQUIRE(r.score.tp.has_value());
    CHECK(*r.score.tp == 1);
    CHECK(*r.score.fn == 0);
    CHECK_FALSE(r.failed);
    CHECK(r.steps == stuck_zero_spec().duration - 3);  // w=4 sliding mean
}

TEST_CASE("a baseline-only scenario scores false positives only") {
    ScenarioSpec spec;
    spec.n_sensors = 5;
    spec.duration = 500;
    spec.seed = 8;
    const auto r = run_experiment(small_run(spec));
    CHECK_FALSE(r.score.tp.has_value());
    CHECK_FALSE(r.score.fn.has_value());
}

TEST_CASE("identical configs give byte-identical artifacts") {
    namespace fs = std::filesystem;
    const fs::path dir1 = fs::temp_directory_path() / "samstream_det1";
    const fs::path dir2 = fs::temp_directory_path() / "samstream_det2";
    fs::remove_all(dir1);
    fs::remove_all(dir2);

    RunConfig cfg = small_run(stuck_zero_spec());
    cfg.trace_sensor = 2;
    cfg.outdir = dir1.string();
    const auto r1 = run_experiment(cfg);
    cfg.outdir = dir2.string();
    const auto r2 = run_experiment(cfg);

    CHECK(same_alarms(r1.alarms, r2.alarms));
    for (const char* name : {"alarms.csv", "scores.csv", "itte.csv", "report.txt", "trace.csv"}) {
        CHECK(slurp(dir1 / name) == slurp(dir2 / name));
        CHECK_FALSE(slurp(dir1 / name).empty());
    }
    fs::remove_all(dir1);
    fs::remove_all(dir2);
}

TEST_CASE("replayed CSV runs match in-memory scenario runs") {
    namespace fs = std::filesystem;
    const ScenarioSpec spec = stuck_zero_spec();
    const Scenario scn = generate(spec);
    const fs::path csv = fs::temp_directory_path() / "samstream_replay.csv";
    write_stream_csv(csv.string(), scn.observations);
    write_scenario_sidecar(sidecar_path_for(csv.string()), spec);

    RunConfig from_csv;
    from_csv.input_csv = csv.string();
    from_csv.detector = small_run(spec).detector;
    const auto ra = run_experiment(from_csv);
    const auto rb = run_experiment(small_run(spec));
    CHECK(same_alarms(ra.alarms, rb.alarms));
    CHECK(*ra.score.tp == *rb.score.tp);

    fs::remove(csv);
    fs::remove(sidecar_path_for(csv.string()));
}

TEST_CASE("comparison rows are method-major and labels must agree") {
    const ScenarioSpec s1 = stuck_zero_spec();
    ScenarioSpec s2 = stuck_zero_spec();
    s2.seed = 4;

    std::vector<std::vector<RunConfig>> grid;
    for (Method m : {Method::sam, Method::knn}) {
        std::vector<RunConfig> row;
        for (const auto& spec : {s1, s2}) {
            RunConfig cfg = small_run(spec);
            cfg.detector.method = m;
            row.push_back(cfg);
        }
        grid.push_back(row);
    }
    const auto rows = compare_methods(grid);
    REQUIRE(rows.size() == 4);
    CHECK(rows[0].method == Method::sam);
    CHECK(rows[1].method == Method::sam);
    CHECK(rows[2].method == Method::knn);
    CHECK(rows[3].method == Method::knn);
    CHECK(rows[0].label == rows[2].label);

    grid[1].pop_back();
    CHECK_THROWS_AS(compare_methods(grid), std::invalid_argument);
}

TEST_CASE("run configuration is validated") {
    RunConfig cfg;
    CHECK_THROWS_AS(run_experiment(cfg), std::invalid_argument);  // no input at all

    cfg.scenario = stuck_zero_spec();
    cfg.batch = 0;
    CHECK_THROWS_AS(run_experiment(cfg), std::invalid_argument);

    RunConfig missing;
    missing.input_csv = "/nonexistent/stream.csv";
    CHECK_THROWS(run_experiment(missing));
}
