#include "cavimag/analysis.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <mutex>

#include "cavimag/error.hpp"

namespace cavimag {

namespace {

// FFTW planning is not thread-safe; execution is.
std::mutex& fftw_planner_mutex() {
    static std::mutex m;
    return m;
}

}  // namespace

Window parse_window(std::string_view name) {
    if (name == "none") return Window::none;
    if (name == "hann") return Window::hann;
    throw ConfigError("unknown window '" + std::string(name) + "' (expected none or hann)");
}

Spectrum fft_spectrum(std::span<const double> times, std::span<const double> values, Window window) {
    const std::size_t n = values.size();
    if (times.size() != n) throw AnalysisError("fft_spectrum: times and values differ in length");
    if (n < 8) throw AnalysisError("fft_spectrum: need at least 8 samples");
    const double dt = (times[n - 1] - times[0]) / static_cast<double>(n - 1);
    if (!(dt > 0.0)) throw AnalysisError("fft_spectrum: times must increase");
    for (std::size_t k = 1; k < n; ++k) {
        if (std::abs((times[k] - times[k - 1]) - dt) > 1e-9 * dt)
            throw AnalysisError("fft_spectrum: non-uniform sampling at sample " + std::to_string(k));
    }

    // shifted mean so a constant series cancels exactly
    double shift = 0.0;
    for (double v : values) shift += v - values[0];
    const double mean = values[0] + shift / static_cast<double>(n);

    const std::size_t nout = n / 2 + 1;
    double* in = fftw_alloc_real(n);
    fftw_complex* out = fftw_alloc_complex(nout);
    fftw_plan plan;
    {
        std::lock_guard lock(fftw_planner_mutex());
        plan = fftw_plan_dft_r2c_1d(static_cast<int>(n), in, out, FFTW_ESTIMATE);
    }
    for (std::size_t k = 0; k < n; ++k) {
        double w = 1.0;
        if (window == Window::hann) w = 0.5 * (1.0 - std::cos(2.0 * constants::pi * static_cast<double>(k) / static_cast<double>(n)));
        in[k] = (values[k] - mean) * w;
    }
    fftw_execute(plan);

    Spectrum spec;
    spec.resolution = 2.0 * constants::pi / (static_cast<double>(n) * dt);
    spec.frequencies.resize(nout);
    spec.amplitudes.resize(nout);
    for (std::size_t j = 0; j < nout; ++j) {
        spec.frequencies[j] = static_cast<double>(j) * spec.resolution;
        spec.amplitudes[j] = std::hypot(out[j][0], out[j][1]);
    }
    {
        std::lock_guard lock(fftw_planner_mutex());
        fftw_destroy_plan(plan);
    }
    fftw_free(in);
    fftw_free(out);
    return spec;
}

std::vector<Peak> find_peaks(const Spectrum& spec, double min_prominence) {
    const auto& a = spec.amplitudes;
    if (a.empty()) throw AnalysisError("find_peaks: empty spectrum");
    std::vector<Peak> peaks;
    if (a.size() < 3) return peaks;
    const double top = *std::max_element(a.begin(), a.end());
    if (!(top > 0.0)) return peaks;
    const double threshold = min_prominence * top;
    const double step = spec.frequencies.size() > 1 ? spec.frequencies[1] - spec.frequencies[0] : spec.resolution;
    constexpr double floor = std::numeric_limits<double>::min();

    for (std::size_t j = 1; j + 1 < a.size(); ++j) {
        if (!(a[j] > a[j - 1] && a[j] >= a[j + 1]) || a[j] < threshold) continue;
        const double lm = std::log(std::max(a[j - 1], floor));
        const double l0 = std::log(a[j]);
        const double lp = std::log(std::max(a[j + 1], floor));
        const double denom = lm - 2.0 * l0 + lp;
        double delta = 0.0;
        if (denom < 0.0) delta = std::clamp(0.5 * (lm - lp) / denom, -0.5, 0.5);
        const double amp = std::exp(l0 - 0.25 * (lm - lp) * delta);
        peaks.push_back({spec.frequencies[j] + delta * step, amp});
    }
    return peaks;
}

SweepAxis parse_sweep_axis(std::string_view name) {
    if (name == "omega_c") return SweepAxis::omega_c;
    if (name == "b_ext_z") return SweepAxis::b_ext_z;
    if (name == "lambda") return SweepAxis::lambda;
    throw ConfigError("sweep parameter must be one of omega_c, b_ext_z, lambda (got '" + std::string(name) + "')");
}

std::string_view to_string(SweepAxis axis) {
    switch (axis) {
        case SweepAxis::omega_c: return "omega_c";
        case SweepAxis::b_ext_z: return "b_ext_z";
        case SweepAxis::lambda: return "lambda";
    }
    return "?";
}

ResponseMap sweep(const EngineFactory& factory, SweepAxis axis, const std::vector<double>& values,
                  const RunConfig& run, const SweepOptions& options) {
    if (options.component < 0 || options.component > 2) throw ConfigError("sweep: component must be 0, 1 or 2");
    ResponseMap map;
    map.axis = axis;
    map.points.resize(values.size());

    auto run_point = [&](std::size_t idx) {
        SweepPoint& pt = map.points[idx];
        pt.value = values[idx];
        try {
            Engine engine = factory(values[idx]);
            engine.set_threads(1);
            const RunResult result = engine.run(run);
            std::vector<double> t, v;
            t.reserve(result.series.size());
            v.reserve(result.series.size());
            for (const Record& r : result.series) {
                t.push_back(r.t);
                v.push_back(options.component == 0 ? r.m.x : options.component == 1 ? r.m.y : r.m.z);
            }
            Spectrum spec = fft_spectrum(t, v, options.window);
            pt.peaks = find_peaks(spec, options.min_prominence);
            pt.amplitudes = std::move(spec.amplitudes);
            pt.ok = true;
            return spec;
        } catch (const std::exception& e) {
            pt.ok = false;
            pt.error = e.what();
            return Spectrum{};
        }
    };

    std::vector<Spectrum> grids(values.size());
    if (options.threads <= 1) {
        for (std::size_t i = 0; i < values.size(); ++i) grids[i] = run_point(i);
    } else {
        // bounded batches of concurrent points; results land in their own slots
        const auto batch = static_cast<std::size_t>(options.threads);
        for (std::size_t start = 0; start < values.size(); start += batch) {
            std::vector<std::future<Spectrum>> jobs;
            for (std::size_t i = start; i < std::min(values.size(), start + batch); ++i)
                jobs.push_back(std::async(std::launch::async, run_point, i));
            for (std::size_t k = 0; k < jobs.size(); ++k) grids[start + k] = jobs[k].get();
        }
    }
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!map.points[i].ok) continue;
        if (map.frequencies.empty()) {
            map.frequencies = grids[i].frequencies;
            map.resolution = grids[i].resolution;
        } else if (grids[i].frequencies.size() != map.frequencies.size()) {
            map.points[i].ok = false;
            map.points[i].error = "frequency grid differs from the other sweep points";
        }
    }
    return map;
}

Splitting extract_splitting(const ResponseMap& map) {
    struct Row {
        double value;
        std::size_t npeaks;
        double gap;
    };
    std::vector<Row> rows;
    for (const SweepPoint& p : map.points) {
        if (!p.ok) continue;
        Row r{p.value, p.peaks.size(), 0.0};
        if (p.peaks.size() >= 2) {
            std::vector<Peak> top = p.peaks;
            std::partial_sort(top.begin(), top.begin() + 2, top.end(),
                              [](const Peak& a, const Peak& b) { return a.amplitude > b.amplitude; });
            r.gap = std::abs(top[0].frequency - top[1].frequency);
        }
        rows.push_back(r);
    }
    std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) { return a.value < b.value; });

    Splitting out;
    std::size_t first = rows.size(), last = 0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].npeaks < 2) continue;
        ++out.rows_used;
        first = std::min(first, i);
        last = i;
        if (out.rows_used == 1 || rows[i].gap < out.two_g) {
            out.two_g = rows[i].gap;
            out.parameter = rows[i].value;
        }
    }
    if (out.rows_used < 3)
        throw AnalysisError("extract_splitting: need at least 3 sweep points with two peaks, found " +
                            std::to_string(out.rows_used));
    bool merged = false;
    for (std::size_t i = first; i <= last; ++i)
        if (rows[i].npeaks < 2) merged = true;
    out.resolved = !merged && out.two_g >= 2.0 * map.resolution;
    return out;
}

double irms_from_circuit(double omega0, double z0, double hbar) {
    if (!(omega0 > 0.0) || !(z0 > 0.0) || !(hbar > 0.0)) throw ConfigError("irms_from_circuit: inputs must be positive");
    return omega0 * std::sqrt(hbar * constants::pi / (4.0 * z0));
}

}  // namespace cavimag
