#include "samstream/io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace samstream {

namespace {

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    return fields;
}

double parse_double(const std::string& text, const std::string& path, std::size_t line_no) {
    const char* begin = text.c_str();
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin || *end != '\0') {
        throw std::runtime_error(path + ":" + std::to_string(line_no) + ": not a number: '" +
                                 text + "'");
    }
    return v;
}

std::int64_t parse_int(const std::string& text, const std::string& path, std::size_t line_no) {
    const char* begin = text.c_str();
    char* end = nullptr;
    const long long v = std::strtoll(begin, &end, 10);
    if (end == begin || *end != '\0') {
        throw std::runtime_error(path + ":" + std::to_string(line_no) + ": not an integer: '" +
                                 text + "'");
    }
    return v;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    return out;
}

}  // namespace

std::string format_double(double value) {
    char buf[64];
    // Round-trippable and stable: the shortest of %.15g..%.17g that reads back
    // to the same bits.
    for (int prec = 15; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof buf, "%.*g", prec, value);
        if (std::strtod(buf, nullptr) == value) return buf;
    }
    return buf;
}

void write_stream_csv(const std::string& path,
                      const std::vector<std::vector<double>>& observations) {
    std::ofstream out = open_out(path);
    const std::size_t n = observations.empty() ? 0 : observations.front().size();
    out << "t";
    for (std::size_t i = 1; i <= n; ++i) out << ",s" << i;
    out << "\n";
    for (std::size_t t = 0; t < observations.size(); ++t) {
        out << t;
        for (double v : observations[t]) out << "," << format_double(v);
        out << "\n";
    }
    if (!out) throw std::runtime_error("write failed: " + path);
}

std::vector<std::vector<double>> read_stream_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open: " + path);

    std::vector<std::vector<double>> rows;
    std::string line;
    std::size_t line_no = 0;
    std::size_t arity = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line_no == 1) {  // header
            arity = split_csv(line).size();
            if (arity < 2) {
                throw std::runtime_error(path + ":1: header must name at least one sensor");
            }
            continue;
        }
        if (line.empty()) continue;
        const auto fields = split_csv(line);
        if (fields.size() != arity) {
            throw std::runtime_error(path + ":" + std::to_string(line_no) + ": expected " +
                                     std::to_string(arity) + " fields, got " +
                                     std::to_string(fields.size()));
        }
        parse_int(fields[0], path, line_no);
        std::vector<double> row;
        row.reserve(arity - 1);
        for (std::size_t i = 1; i < fields.size(); ++i) {
            row.push_back(parse_double(fields[i], path, line_no));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

std::string sidecar_path_for(const std::string& csv_path) {
    const auto dot = csv_path.rfind('.');
    const auto slash = csv_path.rfind('/');
    if (dot != std::string::npos && (slash == std::string::npos || dot > slash)) {
        return csv_path.substr(0, dot) + ".scenario";
    }
    return csv_path + ".scenario";
}

void write_scenario_sidecar(const std::string& path, const ScenarioSpec& spec) {
    std::ofstream out = open_out(path);
    out << "anomaly_kind=" << to_string(spec.kind) << "\n";
    out << "n_sensors=" << spec.n_sensors << "\n";
    out << "duration=" << spec.duration << "\n";
    out << "seed=" << spec.seed << "\n";
    out << "noise_sd=" << format_double(spec.noise_sd) << "\n";
    out << "drift_sd=" << format_double(spec.drift_sd) << "\n";
    if (spec.kind != AnomalyKind::none) {
        out << "sensor=" << spec.sensor << "\n";
        out << "onset=" << spec.onset << "\n";
        out << "end=" << spec.end << "\n";
        out << "magnitude=" << format_double(spec.magnitude) << "\n";
    }
    if (!out) throw std::runtime_error("write failed: " + path);
}

ScenarioSpec read_scenario_sidecar(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open: " + path);

    ScenarioSpec spec;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line.front() == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw std::runtime_error(path + ":" + std::to_string(line_no) + ": expected key=value");
        }
        const std::string key = line.substr(0, eq);
        const std::string value = line.substr(eq + 1);
        if (key == "anomaly_kind") {
            const auto kind = anomaly_kind_from(value);
            if (!kind) {
                throw std::runtime_error(path + ":" + std::to_string(line_no) +
                                         ": unknown anomaly kind '" + value + "'");
            }
            spec.kind = *kind;
        } else if (key == "n_sensors") {
            spec.n_sensors = static_cast<int>(parse_int(value, path, line_no));
        } else if (key == "duration") {
            spec.duration = parse_int(value, path, line_no);
        } else if (key == "seed") {
            spec.seed = static_cast<std::uint64_t>(parse_int(value, path, line_no));
        } else if (key == "noise_sd") {
            spec.noise_sd = parse_double(value, path, line_no);
        } else if (key == "drift_sd") {
            spec.drift_sd = parse_double(value, path, line_no);
        } else if (key == "sensor") {
            spec.sensor = static_cast<int>(parse_int(value, path, line_no));
        } else if (key == "onset") {
            spec.onset = parse_int(value, path, line_no);
        } else if (key == "end") {
            spec.end = parse_int(value, path, line_no);
        } else if (key == "magnitude") {
            spec.magnitude = parse_double(value, path, line_no);
        } else {
            throw std::runtime_error(path + ":" + std::to_string(line_no) + ": unknown key '" +
                                     key + "'");
        }
    }
    spec.validate();
    return spec;
}

void write_alarm_log(const std::string& path, std::span<const AlarmRecord> alarms) {
    std::ofstream out = open_out(path);
    out << "t,sensor,residual,threshold,alarm\n";
    for (const AlarmRecord& a : alarms) {
        out << a.index << ',' << a.sensor << ',' << format_double(a.residual) << ','
            << format_double(a.threshold) << ',' << (a.alarm ? 1 : 0) << "\n";
    }
    if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace samstream
