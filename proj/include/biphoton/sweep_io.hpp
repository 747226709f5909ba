/// Sweep CSV serialization.
///
/// Format: header `retardation_nm,phi_rad,counts_vv,counts_vh,intensity_norm,
/// intensity_sigma`, one row per grid point, reals with 15 significant
/// digits, missing intensity written as empty fields.
#pragma once

#include "biphoton/counting_fwd.hpp"

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace biphoton {

inline constexpr std::string_view kSweepCsvHeader =
    "retardation_nm,phi_rad,counts_vv,counts_vh,intensity_norm,intensity_sigma";

struct CsvError : std::runtime_error {
    int line;
    CsvError(int line_number, const std::string& what)
        : std::runtime_error("CSV line " + std::to_string(line_number) + ": " + what),
          line(line_number) {}
};

namespace detail {

inline std::string format_real(double value) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.15g", value);
    return buf;
}

inline std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            fields.push_back(line.substr(start));
            break;
        }
        fields.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
    return fields;
}

inline double parse_real(std::string_view field, int line, const char* name) {
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc() || ptr != field.data() + field.size()) {
        throw CsvError(line, std::string("malformed ") + name);
    }
    return value;
}

inline std::uint64_t parse_count(std::string_view field, int line, const char* name) {
    std::uint64_t value = 0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc() || ptr != field.data() + field.size()) {
        throw CsvError(line, std::string("malformed ") + name);
    }
    return value;
}

}  // namespace detail

inline void write_sweep_csv(std::ostream& out, const SweepResult& sweep) {
    out << kSweepCsvHeader << '\n';
    for (const SweepRow& row : sweep.rows) {
        out << detail::format_real(row.retardation_nm) << ','
            << detail::format_real(row.phi_rad) << ','
            << row.counts_vv << ','
            << row.counts_vh << ',';
        if (row.intensity_norm) {
            out << detail::format_real(*row.intensity_norm);
        }
        out << ',';
        if (row.intensity_sigma) {
            out << detail::format_real(*row.intensity_sigma);
        }
        out << '\n';
    }
}

inline void write_sweep_csv(const std::filesystem::path& path, const SweepResult& sweep) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot open for writing: " + path.string());
    }
    write_sweep_csv(out, sweep);
    out.flush();
    if (!out) {
        throw std::runtime_error("write failed: " + path.string());
    }
}

inline SweepResult read_sweep_csv(std::istream& in) {
    std::string line;
    int line_number = 0;
    if (!std::getline(in, line)) {
        throw CsvError(1, "empty input");
    }
    ++line_number;
    if (!line.empty() && line.back() == '\r') {
        line.pop_back();
    }
    if (line != kSweepCsvHeader) {
        throw CsvError(1, "unexpected header");
    }
    SweepResult result;
    double previous_d = 0.0;
    while (std::getline(in, line)) {
        ++line_number;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty()) {
            continue;
        }
        const auto fields = detail::split_fields(line);
        if (fields.size() != 6) {
            throw CsvError(line_number, "expected 6 fields, got " + std::to_string(fields.size()));
        }
        SweepRow row;
        row.retardation_nm = detail::parse_real(fields[0], line_number, "retardation_nm");
        row.phi_rad = detail::parse_real(fields[1], line_number, "phi_rad");
        row.counts_vv = detail::parse_count(fields[2], line_number, "counts_vv");
        row.counts_vh = detail::parse_count(fields[3], line_number, "counts_vh");
        if (!fields[4].empty()) {
            row.intensity_norm = detail::parse_real(fields[4], line_number, "intensity_norm");
        }
        if (!fields[5].empty()) {
            row.intensity_sigma = detail::parse_real(fields[5], line_number, "intensity_sigma");
        }
        if (!result.rows.empty() && !(row.retardation_nm > previous_d)) {
            throw CsvError(line_number, "retardation_nm not strictly increasing");
        }
        previous_d = row.retardation_nm;
        result.rows.push_back(row);
    }
    return result;
}

inline SweepResult read_sweep_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open for reading: " + path.string());
    }
    return read_sweep_csv(in);
}

}  // namespace biphoton
