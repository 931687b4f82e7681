#include "winfree/csv.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>

#include "winfree/errors.hpp"

namespace winfree {

namespace {

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string::npos) {
            fields.push_back(line.substr(start));
            return fields;
        }
        fields.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
}

double parse_real(const std::string& field, int line_number) {
    char* end = nullptr;
    const double value = std::strtod(field.c_str(), &end);
    if (end == field.c_str() || *end != '\0') {
        char buf[96];
        std::snprintf(buf, sizeof buf, "csv: malformed number on line %d", line_number);
        throw config_error(buf);
    }
    return value;
}

long long parse_integer(const std::string& field, int line_number) {
    char* end = nullptr;
    const long long value = std::strtoll(field.c_str(), &end, 10);
    if (end == field.c_str() || *end != '\0') {
        char buf[96];
        std::snprintf(buf, sizeof buf, "csv: malformed integer on line %d", line_number);
        throw config_error(buf);
    }
    return value;
}

}  // namespace

std::string format_real(double value) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

void write_trace_csv(std::ostream& out, const Trace& trace, const Model& model) {
    if (trace.size != model.size()) throw shape_error("trace csv: trace and model disagree");
    out << 't';
    for (int i = 0; i < trace.size; ++i) out << ",theta_" << i;
    out << ",A,R,D,Inc\n";
    for (int s = 0; s < trace.samples(); ++s) {
        const auto row = trace.row(s);
        out << format_real(trace.times[static_cast<std::size_t>(s)]);
        for (double theta : row) out << ',' << format_real(theta);
        out << ',' << format_real(phase_mid(row));
        out << ',' << format_real(phase_halfspread(row));
        out << ',' << format_real(phase_diameter(row));
        out << ',' << format_real(model.mean_influence(row));
        out << '\n';
    }
}

Trace read_trace_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw config_error("trace csv: missing header");
    const std::vector<std::string> header = split_fields(line);
    if (header.empty() || header.front() != "t") {
        throw config_error("trace csv: header must start with t");
    }
    int n = 0;
    for (std::size_t i = 1; i < header.size(); ++i) {
        if (header[i].rfind("theta_", 0) == 0) ++n;
    }
    if (n == 0) throw config_error("trace csv: no phase columns");

    Trace trace;
    trace.size = n;
    int line_number = 1;
    while (std::getline(in, line)) {
        ++line_number;
        if (line.empty()) continue;
        const std::vector<std::string> fields = split_fields(line);
        if (fields.size() < static_cast<std::size_t>(n) + 1) {
            char buf[96];
            std::snprintf(buf, sizeof buf, "trace csv: too few fields on line %d", line_number);
            throw config_error(buf);
        }
        trace.times.push_back(parse_real(fields[0], line_number));
        for (int i = 0; i < n; ++i) {
            trace.phases.push_back(parse_real(fields[static_cast<std::size_t>(i) + 1], line_number));
        }
    }
    if (trace.times.empty()) throw config_error("trace csv: no samples");
    return trace;
}

void write_cells_csv(std::ostream& out, std::vector<SweepCell> cells, bool timings) {
    std::sort(cells.begin(), cells.end(), [](const SweepCell& a, const SweepCell& b) {
        if (a.n != b.n) return a.n < b.n;
        if (a.kappa != b.kappa) return a.kappa < b.kappa;
        return a.seed < b.seed;
    });
    out << "n,kappa,seed,label,rho_mean,rho_spread,wall_time_s\n";
    for (const SweepCell& cell : cells) {
        out << cell.n << ',' << format_real(cell.kappa) << ',' << cell.seed << ','
            << to_string(cell.label) << ',' << format_real(cell.rho_mean) << ','
            << format_real(cell.rho_spread) << ','
            << format_real(timings ? cell.wall_time : 0.0) << '\n';
    }
}

std::vector<SweepCell> read_cells_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != "n,kappa,seed,label,rho_mean,rho_spread,wall_time_s") {
        throw config_error("cells csv: unexpected header");
    }
    std::vector<SweepCell> cells;
    int line_number = 1;
    while (std::getline(in, line)) {
        ++line_number;
        if (line.empty()) continue;
        const std::vector<std::string> fields = split_fields(line);
        if (fields.size() != 7) {
            char buf[96];
            std::snprintf(buf, sizeof buf, "cells csv: expected 7 fields on line %d", line_number);
            throw config_error(buf);
        }
        SweepCell cell;
        cell.n = static_cast<int>(parse_integer(fields[0], line_number));
        cell.kappa = parse_real(fields[1], line_number);
        cell.seed = static_cast<std::uint64_t>(parse_integer(fields[2], line_number));
        const std::optional<Label> label = label_from_string(fields[3]);
        if (!label) {
            char buf[96];
            std::snprintf(buf, sizeof buf, "cells csv: unknown label on line %d", line_number);
            throw config_error(buf);
        }
        cell.label = *label;
        cell.rho_mean = parse_real(fields[4], line_number);
        cell.rho_spread = parse_real(fields[5], line_number);
        cell.wall_time = parse_real(fields[6], line_number);
        cells.push_back(cell);
    }
    return cells;
}

void write_curves_csv(std::ostream& out, const CriticalCurves& curves) {
    out << "n,kappa_i,kappa_p,kappa_d\n";
    for (const CurvePoint& point : curves.points) {
        out << point.n << ',';
        if (point.kappa_i) out << format_real(*point.kappa_i);
        out << ',';
        if (point.kappa_p) out << format_real(*point.kappa_p);
        out << ',';
        if (point.kappa_d) out << format_real(*point.kappa_d);
        out << '\n';
    }
}

}  // namespace winfree
