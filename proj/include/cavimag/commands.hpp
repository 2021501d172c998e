#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "cavimag/dicke.hpp"

namespace cavimag {

struct CommandOptions {
    std::filesystem::path config;
    std::filesystem::path out_dir = ".";
    int threads = 1;
    bool quiet = false;
};

/// Single simulation: time-series CSV plus a key: value summary. 0 on success.
int cmd_run(const CommandOptions& opts, std::ostream& out, std::ostream& err);

/// Parameter sweep from the [sweep] section: response map, per-point status
/// and summary. Failed points are flagged with a warning; exit 0 unless every
/// point failed.
int cmd_sweep(const CommandOptions& opts, std::ostream& out, std::ostream& err);

/// Header, node counts and value range of an OVF 2.0 file; 1 with the byte
/// offset on any parse error.
int cmd_validate_ovf(const std::filesystem::path& path, std::ostream& out, std::ostream& err);

struct DickeBenchOptions {
    double omega_z = 2.0 * constants::pi * 5e9;
    double omega_c = 2.0 * constants::pi * 5e9;
    double lambda_over_lc = 0.5;
    double kappa = 2.0 * constants::pi * 10e6;
    double alpha = 0.01;           // Gilbert damping
    double s_total = 1000.0;
    double duration = 0.0;         // s; 0 means 400 cavity periods
    int steps_per_period = 4000;   // cavity periods
    double compare_periods = 100;  // trajectory comparison window
    double tilt_deg = 1.0;
    std::optional<std::filesystem::path> out_dir;
    bool quiet = false;
};

struct DickeBenchReport {
    dicke::DickeParams params;
    double lambda_c = 0.0;
    dicke::Polaritons polaritons;
    double mx_engine = 0.0;
    double mx_oracle = 0.0;
    double mx_analytic = 0.0;
    double peak_lower = 0.0;  // 0 when fewer than two peaks
    double peak_upper = 0.0;
    std::size_t peak_count = 0;
    double resolution = 0.0;
    double l2_mx = 0.0;
    double l2_photon = 0.0;
    bool check_peaks = false, peaks_ok = true;
    bool check_decay = false, decay_ok = true;
    bool check_l2 = false, l2_ok = true;
    bool check_superradiant = false, superradiant_ok = true;
    bool softened = false;

    bool passed() const { return peaks_ok && decay_ok && l2_ok && superradiant_ok; }
};

DickeBenchReport dicke_bench(const DickeBenchOptions& opts);

int cmd_dicke_bench(const DickeBenchOptions& opts, std::ostream& out, std::ostream& err);

}  // namespace cavimag
