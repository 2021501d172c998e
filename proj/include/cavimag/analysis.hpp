#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "cavimag/constants.hpp"
#include "cavimag/integrator.hpp"

namespace cavimag {

class AnalysisError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Window { none, hann };

Window parse_window(std::string_view name);

/// One-sided magnitude spectrum on the angular-frequency grid j * resolution,
/// j = 0 .. N/2, with resolution = 2 pi / (N dt).
struct Spectrum {
    std::vector<double> frequencies;  // rad/s
    std::vector<double> amplitudes;
    double resolution = 0.0;          // rad/s
};

/// Mean-subtracted, optionally windowed |DFT| of uniformly sampled data.
Spectrum fft_spectrum(std::span<const double> times, std::span<const double> values, Window window = Window::none);

struct Peak {
    double frequency;  // rad/s
    double amplitude;
};

/// Local maxima above min_prominence * max, refined by a parabola through the
/// log-amplitudes of the three bins around each maximum. Sorted by frequency.
std::vector<Peak> find_peaks(const Spectrum& spec, double min_prominence);

enum class SweepAxis { omega_c, b_ext_z, lambda };

SweepAxis parse_sweep_axis(std::string_view name);
std::string_view to_string(SweepAxis axis);

struct SweepOptions {
    int component = 0;  // 0,1,2 -> m_x, m_y, m_z
    Window window = Window::none;
    double min_prominence = 0.1;
    int threads = 1;  // sweep points run concurrently, one engine each
};

struct SweepPoint {
    double value = 0.0;
    bool ok = false;
    std::string error;
    std::vector<double> amplitudes;
    std::vector<Peak> peaks;
};

/// Parameter x frequency response; rows are in the order of the swept values.
struct ResponseMap {
    SweepAxis axis = SweepAxis::b_ext_z;
    std::vector<double> frequencies;
    double resolution = 0.0;
    std::vector<SweepPoint> points;
};

using EngineFactory = std::function<Engine(double value)>;

/// Runs one simulation per value and stores its spectrum. A failing point is
/// kept with ok = false and the sweep continues.
ResponseMap sweep(const EngineFactory& factory, SweepAxis axis, const std::vector<double>& values,
                  const RunConfig& run, const SweepOptions& options);

struct Splitting {
    double two_g = 0.0;      // rad/s, minimum Omega_+ - Omega_-
    double parameter = 0.0;  // swept value where the minimum occurs
    bool resolved = false;
    std::size_t rows_used = 0;
};

/// Smallest separation between the two dominant peaks over the map. Needs at
/// least three rows with two peaks. The result is flagged unresolved when the
/// branches merge into a single peak between two-peak rows or the gap is below
/// two frequency bins.
Splitting extract_splitting(const ResponseMap& map);

/// Zero-point current of a resonator at its field antinode, omega0 sqrt(hbar pi / (4 Z0)).
double irms_from_circuit(double omega0, double z0, double hbar = constants::hbar);

}  // namespace cavimag
