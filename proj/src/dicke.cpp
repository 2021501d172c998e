#include "cavimag/dicke.hpp"

#include <array>
#include <cmath>

#include "cavimag/error.hpp"

namespace cavimag::dicke {

void DickeParams::validate() const {
    if (!(omega_z > 0.0) || !(omega_c > 0.0)) throw ConfigError("dicke: omega_z and omega_c must be > 0");
    if (lambda < 0.0) throw ConfigError("dicke: lambda must be >= 0");
    if (!(s_total > 0.0)) throw ConfigError("dicke: s_total must be > 0");
    if (kappa < 0.0) throw ConfigError("dicke: kappa must be >= 0");
}

DickeFields dicke_to_fields(const DickeParams& p, double gamma, double hbar, double cell_volume) {
    DickeFields f;
    f.b_ext = {0.0, 0.0, p.omega_z / gamma};
    f.b_rms = {std::sqrt(2.0 / p.s_total) * p.lambda / gamma, 0.0, 0.0};
    f.cell_volume = cell_volume;
    f.msat = hbar * gamma * p.s_total / cell_volume;
    return f;
}

DickeParams fields_to_dicke(const DickeFields& f, double omega_c, double kappa, double gamma, double hbar) {
    DickeParams p;
    p.omega_z = gamma * f.b_ext.z;
    p.s_total = f.msat * f.cell_volume / (hbar * gamma);
    p.lambda = gamma * f.b_rms.x * std::sqrt(p.s_total / 2.0);
    p.omega_c = omega_c;
    p.kappa = kappa;
    return p;
}

double lambda_critical(const DickeParams& p) { return std::sqrt(p.omega_c * p.omega_z) / 2.0; }

EquilibriumMx equilibrium_mx(const DickeParams& p) {
    const double lc = lambda_critical(p);
    EquilibriumMx out;
    if (p.lambda < lc) {
        out.values = {0.0};
    } else if (p.lambda == lc) {
        out.values = {0.0};
        out.degenerate = true;
    } else {
        const double mu = (lc / p.lambda) * (lc / p.lambda);
        const double v = std::sqrt(1.0 - mu * mu);
        out.values = {v, -v};
    }
    return out;
}

Polaritons polariton_frequencies(const DickeParams& p) {
    const double wz2 = p.omega_z * p.omega_z;
    const double wc2 = p.omega_c * p.omega_c;
    const double lc = lambda_critical(p);
    Polaritons out;
    double sum = 0.0, root = 0.0;
    if (p.lambda <= lc) {
        sum = wz2 + wc2;
        root = std::sqrt((wz2 - wc2) * (wz2 - wc2) + 16.0 * p.lambda * p.lambda * p.omega_z * p.omega_c);
    } else {
        out.superradiant = true;
        const double mu = (lc / p.lambda) * (lc / p.lambda);
        const double wz2_eff = wz2 / (mu * mu);
        sum = wz2_eff + wc2;
        root = std::sqrt((wz2_eff - wc2) * (wz2_eff - wc2) + 4.0 * wz2 * wc2);
    }
    out.upper = std::sqrt(0.5 * (sum + root));
    const double lower2 = 0.5 * (sum - root);
    out.lower = lower2 > 0.0 ? std::sqrt(lower2) : 0.0;
    if (p.lambda == lc) {
        out.softened = true;
        out.lower = 0.0;
    }
    return out;
}

Vec3 tilted_ground_state(double degrees) {
    const double th = degrees * constants::pi / 180.0;
    return {std::sin(th), 0.0, std::cos(th)};
}

namespace {

using State5 = std::array<double, 5>;  // mx, my, mz, Re alpha, Im alpha

State5 explicit_rhs(const State5& y, const DickeParams& p, double gilbert) {
    const Vec3 m{y[0], y[1], y[2]};
    const double quad = 2.0 * y[3];  // alpha + alpha^*
    // field in angular-frequency units, gamma * B'
    const Vec3 w{std::sqrt(2.0 / p.s_total) * p.lambda * quad, 0.0, p.omega_z};
    const Vec3 mxw = cross(m, w);
    const Vec3 dm = (mxw + cross(m, mxw) * gilbert) * (-1.0 / (1.0 + gilbert * gilbert));
    // d alpha/dt = -(kappa + i omega_c) alpha + i sqrt(2S) lambda m_x
    const double drive = std::sqrt(2.0 * p.s_total) * p.lambda * m.x;
    const double re = -p.kappa * y[3] + p.omega_c * y[4];
    const double im = -p.omega_c * y[3] - p.kappa * y[4] + drive;
    return {dm.x, dm.y, dm.z, re, im};
}

State5 axpy(const State5& y, const State5& k, double h) {
    State5 out;
    for (std::size_t i = 0; i < 5; ++i) out[i] = y[i] + h * k[i];
    return out;
}

}  // namespace

std::vector<ExplicitSample> integrate_explicit(const DickeParams& p, double gilbert_alpha, const Vec3& m0,
                                               std::complex<double> alpha0, double dt, double duration,
                                               std::size_t record_every) {
    p.validate();
    if (!(dt > 0.0)) throw ConfigError("integrate_explicit: dt must be > 0");
    if (std::abs(norm(m0) - 1.0) > 1e-9) throw ConfigError("integrate_explicit: initial m must be a unit vector");
    if (record_every < 1) record_every = 1;

    State5 y{m0.x, m0.y, m0.z, alpha0.real(), alpha0.imag()};
    const auto steps = static_cast<std::size_t>(std::floor(duration / dt + 1e-9));
    std::vector<ExplicitSample> out;
    out.reserve(steps / record_every + 1);
    out.push_back({0.0, m0, alpha0});
    for (std::size_t k = 1; k <= steps; ++k) {
        const State5 k1 = explicit_rhs(y, p, gilbert_alpha);
        const State5 k2 = explicit_rhs(axpy(y, k1, 0.5 * dt), p, gilbert_alpha);
        const State5 k3 = explicit_rhs(axpy(y, k2, 0.5 * dt), p, gilbert_alpha);
        const State5 k4 = explicit_rhs(axpy(y, k3, dt), p, gilbert_alpha);
        for (std::size_t i = 0; i < 5; ++i) y[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        if (k % record_every == 0)
            out.push_back({static_cast<double>(k) * dt, {y[0], y[1], y[2]}, {y[3], y[4]}});
    }
    return out;
}

EngineSetup engine_setup(const DickeParams& p, double gilbert_alpha, const Vec3& m0, double x0, double p0,
                         double gamma, double hbar) {
    p.validate();
    const DickeFields f = dicke_to_fields(p, gamma, hbar);
    const double edge = std::cbrt(f.cell_volume);

    EngineSetup s;
    s.mesh = Mesh(1, 1, 1, edge, edge, edge);
    const double msat = hbar * gamma * p.s_total / s.mesh.cell_volume();
    s.state = CellState(s.mesh, msat);
    set_uniform(s.state, m0);
    s.material.msat = msat;
    s.material.alpha = gilbert_alpha;
    s.material.gamma = gamma;
    s.terms.zeeman = true;
    s.b_ext = f.b_ext;

    CavityParams cav;
    cav.omega_c = p.omega_c;
    cav.kappa = p.kappa;
    cav.x0 = x0;
    cav.p0 = p0;
    cav.hbar = hbar;
    cav.b_rms = FieldMap(1, f.b_rms);
    s.cavity = cav;
    return s;
}

}  // namespace cavimag::dicke
