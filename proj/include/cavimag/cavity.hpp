#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "cavimag/constants.hpp"
#include "cavimag/mesh.hpp"
#include "cavimag/vec3.hpp"

namespace cavimag {

/// Single-mode cavity integrated out of the dynamics. The cavity acts on the
/// magnet through B_cav(r_i) = b_rms(r_i) * Gamma(t), where the memory factor
/// Gamma carries the free ring-down of the initial quadratures (x0, p0) and
/// the retarded response to the overlap w(t) = sum_i Ms_i m_i . b_rms(r_i).
struct CavityParams {
    double omega_c = 0.0;   // rad/s
    double kappa = 0.0;     // rad/s
    double x0 = 0.0;        // 2 Re(alpha_0)
    double p0 = 0.0;        // -2 Im(alpha_0)
    FieldMap b_rms;         // T, per cell
    double hbar = constants::hbar;
    double cell_volume = 0.0;  // m^3, taken from the mesh

    void validate() const;
    std::complex<double> alpha0() const { return {0.5 * x0, -0.5 * p0}; }
};

/// kappa * t above which the unscaled sums exp(kappa t) S_n would overflow.
inline constexpr double kKappaTimeOverflow = 700.0;

/// Running sine/cosine-weighted overlap integrals.
///
/// Stored in rescaled form: s = exp(-kappa t_last) * S_n, c likewise, so the
/// exp(+kappa t_k) weights of the plain sums never appear. Each update is
///   s <- exp(-kappa (t_n - t_last)) s + sin(omega_c t_n) w_n dt
/// which reproduces the right-endpoint rectangle sums exactly in exact
/// arithmetic.
struct MemoryAccumulators {
    double s = 0.0;
    double c = 0.0;
    double t_last = 0.0;
    std::size_t n = 0;
    /// Set once kappa * t_n exceeded kKappaTimeOverflow.
    bool overflow_regime = false;

    /// Plain (unscaled) sums S_n and C_n. Overflow for kappa t > ~700.
    double unscaled_s(double kappa) const;
    double unscaled_c(double kappa) const;
};

/// sum over magnetic cells of msat_i (m_i . b_rms_i), in index order. A·T/m.
double weighted_overlap(const CellState& state, const FieldMap& b_rms, const Mesh& mesh);

/// Appends the sample at t_n = t_last + dt. Throws on non-monotonic time.
void update_memory(MemoryAccumulators& acc, double overlap, double t_n, double dt, const CavityParams& params);

/// Gamma(t) for t >= acc.t_last, using the accumulators as frozen at t_last.
double memory_factor(const MemoryAccumulators& acc, double t, const CavityParams& params);

FieldMap cavity_field(const MemoryAccumulators& acc, double t, const CavityParams& params);

/// Makes the present the cavity's t = 0.
void reset_memory(MemoryAccumulators& acc);

struct OverlapSample {
    double t;
    double overlap;
};

/// Cavity amplitude alpha(t_k) rebuilt from a recorded overlap history with
/// the trapezoid rule. The series must start at t = 0 and increase strictly.
std::vector<std::complex<double>> reconstruct_alpha(const std::vector<OverlapSample>& series,
                                                    const CavityParams& params);

inline double photon_number(std::complex<double> alpha) { return std::norm(alpha); }

}  // namespace cavimag
