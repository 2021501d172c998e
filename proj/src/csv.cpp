#include "cavimag/csv.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <ostream>

namespace cavimag::csv {

namespace {

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        out.push_back(line.substr(start, comma == std::string::npos ? std::string::npos : comma - start));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return out;
}

double to_double(const std::string& s, std::size_t row) {
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
        throw std::runtime_error("csv row " + std::to_string(row) + ": bad number '" + s + "'");
    return v;
}

std::vector<std::vector<double>> read_rows(std::istream& in, const std::string& header, std::size_t width) {
    std::string line;
    if (!std::getline(in, line) || line != header)
        throw std::runtime_error("csv: expected header '" + header + "'");
    std::vector<std::vector<double>> rows;
    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (line.empty()) continue;
        const auto cells = split(line);
        if (cells.size() != width) throw std::runtime_error("csv row " + std::to_string(row) + ": wrong column count");
        std::vector<double> r;
        for (const auto& c : cells) r.push_back(to_double(c, row));
        rows.push_back(std::move(r));
    }
    return rows;
}

}  // namespace

std::string format(double v) {
    if (std::isnan(v)) return "nan";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_timeseries(std::ostream& out, const TimeSeries& series) {
    out << "t,mx,my,mz,gamma,overlap\n";
    for (const Record& r : series) {
        out << format(r.t) << ',' << format(r.m.x) << ',' << format(r.m.y) << ',' << format(r.m.z) << ','
            << format(r.gamma) << ',' << format(r.overlap) << '\n';
    }
}

TimeSeries read_timeseries(std::istream& in) {
    TimeSeries out;
    for (const auto& r : read_rows(in, "t,mx,my,mz,gamma,overlap", 6))
        out.push_back({r[0], {r[1], r[2], r[3]}, r[4], r[5]});
    return out;
}

void write_spectrum(std::ostream& out, const Spectrum& spec) {
    out << "frequency,amplitude\n";
    for (std::size_t j = 0; j < spec.frequencies.size(); ++j)
        out << format(spec.frequencies[j]) << ',' << format(spec.amplitudes[j]) << '\n';
}

Spectrum read_spectrum(std::istream& in) {
    Spectrum s;
    for (const auto& r : read_rows(in, "frequency,amplitude", 2)) {
        s.frequencies.push_back(r[0]);
        s.amplitudes.push_back(r[1]);
    }
    if (s.frequencies.size() > 1) s.resolution = s.frequencies[1] - s.frequencies[0];
    return s;
}

void write_photon(std::ostream& out, const std::vector<double>& times, const std::vector<std::complex<double>>& alpha) {
    out << "t,re,im,abs\n";
    for (std::size_t k = 0; k < times.size() && k < alpha.size(); ++k) {
        out << format(times[k]) << ',' << format(alpha[k].real()) << ',' << format(alpha[k].imag()) << ','
            << format(std::abs(alpha[k])) << '\n';
    }
}

void write_response_map(std::ostream& out, const ResponseMap& map) {
    out << to_string(map.axis);
    for (double f : map.frequencies) out << ',' << format(f);
    out << '\n';
    for (const SweepPoint& p : map.points) {
        out << format(p.value);
        for (std::size_t j = 0; j < map.frequencies.size(); ++j)
            out << ',' << format(p.ok ? p.amplitudes[j] : std::numeric_limits<double>::quiet_NaN());
        out << '\n';
    }
}

MapTable read_response_map(std::istream& in) {
    MapTable t;
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("csv: empty response map");
    auto head = split(line);
    t.parameter = head.front();
    for (std::size_t j = 1; j < head.size(); ++j) t.frequencies.push_back(to_double(head[j], 1));
    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (line.empty()) continue;
        const auto cells = split(line);
        if (cells.size() != head.size())
            throw std::runtime_error("csv row " + std::to_string(row) + ": wrong column count");
        t.values.push_back(to_double(cells[0], row));
        std::vector<double> amps;
        for (std::size_t j = 1; j < cells.size(); ++j) amps.push_back(to_double(cells[j], row));
        t.amplitudes.push_back(std::move(amps));
    }
    return t;
}

void write_sweep_points(std::ostream& out, const ResponseMap& map) {
    out << "parameter,ok,n_peaks,omega_minus,omega_plus\n";
    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (const SweepPoint& p : map.points) {
        double lo = nan, hi = nan;
        if (p.peaks.size() >= 2) {
            std::vector<Peak> top = p.peaks;
            std::partial_sort(top.begin(), top.begin() + 2, top.end(),
                              [](const Peak& a, const Peak& b) { return a.amplitude > b.amplitude; });
            lo = std::min(top[0].frequency, top[1].frequency);
            hi = std::max(top[0].frequency, top[1].frequency);
        } else if (p.peaks.size() == 1) {
            lo = p.peaks[0].frequency;
        }
        out << format(p.value) << ',' << (p.ok ? 1 : 0) << ',' << p.peaks.size() << ',' << format(lo) << ','
            << format(hi) << '\n';
    }
}

}  // namespace cavimag::csv
