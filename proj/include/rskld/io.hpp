#pragma once

#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace rskld {

inline constexpr int kSchemaVersion = 1;

/// Shortest round-trippable-enough fixed format used for every numeric CSV
/// field, so outputs are byte-stable across runs.
inline std::string fmt(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (std::isnan(v)) return "nan";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

/// CSV writer: '#'-prefixed schema line, header row, LF endings.
class CsvWriter {
public:
    CsvWriter(std::ostream& os, const std::string& table, const std::vector<std::string>& columns)
        : os_(os), ncols_(columns.size()) {
        os_ << "# rskld " << table << " schema v" << kSchemaVersion << '\n';
        row(columns);
    }

    void row(const std::vector<std::string>& fields) {
        if (fields.size() != ncols_) throw std::logic_error("CsvWriter: column count mismatch");
        for (std::size_t i = 0; i < fields.size(); ++i) {
            if (i) os_ << ',';
            os_ << fields[i];
        }
        os_ << '\n';
    }

private:
    std::ostream& os_;
    std::size_t ncols_;
};

/// Parses "start:stop:step" (inclusive stop, tolerant to rounding).
inline std::vector<double> parse_grid(const std::string& spec) {
    const auto c1 = spec.find(':');
    const auto c2 = c1 == std::string::npos ? std::string::npos : spec.find(':', c1 + 1);
    if (c2 == std::string::npos) throw std::invalid_argument("grid must look like start:stop:step, got '" + spec + "'");
    double start, stop, step;
    try {
        std::size_t pos = 0;
        start = std::stod(spec.substr(0, c1), &pos);
        if (pos != c1) throw std::invalid_argument("start");
        stop = std::stod(spec.substr(c1 + 1, c2 - c1 - 1), &pos);
        if (pos != c2 - c1 - 1) throw std::invalid_argument("stop");
        step = std::stod(spec.substr(c2 + 1), &pos);
        if (pos != spec.size() - c2 - 1) throw std::invalid_argument("step");
    } catch (const std::exception&) {
        throw std::invalid_argument("grid must look like start:stop:step, got '" + spec + "'");
    }
    if (!(step > 0.0) || !(stop >= start) || !std::isfinite(start) || !std::isfinite(stop))
        throw std::invalid_argument("grid needs step > 0 and stop >= start");
    const double count = std::floor((stop - start) / step + 1e-9);
    if (count > 1e7) throw std::invalid_argument("grid has too many points");
    std::vector<double> out;
    for (long i = 0; i <= static_cast<long>(count); ++i) out.push_back(start + static_cast<double>(i) * step);
    return out;
}

/// Comma-separated list of numbers.
template <class T = double>
std::vector<T> parse_list(const std::string& s) {
    std::vector<T> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        std::size_t pos = 0;
        double v;
        try {
            v = std::stod(item, &pos);
        } catch (const std::exception&) {
            throw std::invalid_argument("not a number: '" + item + "'");
        }
        if (pos != item.size()) throw std::invalid_argument("not a number: '" + item + "'");
        out.push_back(static_cast<T>(v));
    }
    return out;
}

}  // namespace rskld
