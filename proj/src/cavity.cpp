#include "cavimag/cavity.hpp"

#include <cmath>
#include <string>

#include "cavimag/error.hpp"

namespace cavimag {

void CavityParams::validate() const {
    if (!(omega_c > 0.0)) throw ConfigError("cavity: omega_c must be > 0");
    if (kappa < 0.0) throw ConfigError("cavity: kappa must be >= 0");
    if (!(hbar > 0.0)) throw ConfigError("cavity: hbar must be > 0");
    if (!(cell_volume > 0.0)) throw ConfigError("cavity: cell volume must be > 0");
}

double MemoryAccumulators::unscaled_s(double kappa) const { return std::exp(kappa * t_last) * s; }
double MemoryAccumulators::unscaled_c(double kappa) const { return std::exp(kappa * t_last) * c; }

double weighted_overlap(const CellState& state, const FieldMap& b_rms, const Mesh& mesh) {
    if (b_rms.size() != mesh.cell_count() || state.size() != mesh.cell_count())
        throw ConfigError("weighted_overlap: b_rms has " + std::to_string(b_rms.size()) + " cells, mesh has " +
                          std::to_string(mesh.cell_count()));
    double sum = 0.0;
    for (std::size_t i = 0; i < state.size(); ++i)
        if (state.magnetic(i)) sum += state.msat[i] * dot(state.m[i], b_rms[i]);
    return sum;
}

void update_memory(MemoryAccumulators& acc, double overlap, double t_n, double dt, const CavityParams& params) {
    if (!(dt > 0.0)) throw SimulationError("update_memory: dt must be > 0");
    const double expected = acc.t_last + dt;
    if (!(t_n > acc.t_last) || std::abs(t_n - expected) > 1e-15 * std::abs(t_n) + 1e-300)
        throw SimulationError("update_memory: non-monotonic time (t_n = " + std::to_string(t_n) +
                              ", expected " + std::to_string(expected) + ")");
    const double decay = std::exp(-params.kappa * (t_n - acc.t_last));
    const double phase = params.omega_c * t_n;
    acc.s = decay * acc.s + std::sin(phase) * overlap * dt;
    acc.c = decay * acc.c + std::cos(phase) * overlap * dt;
    acc.t_last = t_n;
    ++acc.n;
    if (params.kappa * t_n > kKappaTimeOverflow) acc.overflow_regime = true;
}

double memory_factor(const MemoryAccumulators& acc, double t, const CavityParams& params) {
    const double cw = std::cos(params.omega_c * t);
    const double sw = std::sin(params.omega_c * t);
    const double ring = std::exp(-params.kappa * t) * (cw * params.x0 - sw * params.p0);
    const double k = 2.0 * params.cell_volume / params.hbar * std::exp(-params.kappa * (t - acc.t_last));
    return ring - k * (cw * acc.s - sw * acc.c);
}

FieldMap cavity_field(const MemoryAccumulators& acc, double t, const CavityParams& params) {
    const double g = memory_factor(acc, t, params);
    FieldMap out(params.b_rms.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = params.b_rms[i] * g;
    return out;
}

void reset_memory(MemoryAccumulators& acc) { acc = MemoryAccumulators{}; }

std::vector<std::complex<double>> reconstruct_alpha(const std::vector<OverlapSample>& series,
                                                    const CavityParams& params) {
    if (series.empty()) throw SimulationError("reconstruct_alpha: empty overlap series");
    if (series.front().t != 0.0) throw SimulationError("reconstruct_alpha: series must start at t = 0");
    using cd = std::complex<double>;
    const cd rate{params.kappa, params.omega_c};
    const cd alpha0 = params.alpha0();
    const cd drive_scale = cd{0.0, params.cell_volume / params.hbar};

    std::vector<cd> out;
    out.reserve(series.size());
    // integral I(t) = int_0^t exp(rate (tau - t)) w(tau) dtau, advanced segment by segment
    cd integral{0.0, 0.0};
    out.push_back(alpha0);
    for (std::size_t k = 1; k < series.size(); ++k) {
        const double h = series[k].t - series[k - 1].t;
        if (!(h > 0.0)) throw SimulationError("reconstruct_alpha: times must increase strictly");
        const cd prop = std::exp(-rate * h);
        integral = prop * integral + 0.5 * h * (prop * series[k - 1].overlap + series[k].overlap);
        const double t = series[k].t;
        out.push_back(alpha0 * std::exp(-rate * t) + drive_scale * integral);
    }
    return out;
}

}  // namespace cavimag
