#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "cavimag/constants.hpp"
#include "cavimag/integrator.hpp"
#include "cavimag/vec3.hpp"

namespace cavimag::dicke {

/// Dicke model H = omega_z S_z + hbar omega_c a^+a + lambda sqrt(2/S)(a + a^+) S_x
/// with every coupling written as an angular frequency (rad/s).
struct DickeParams {
    double omega_z = 0.0;
    double omega_c = 0.0;
    double lambda = 0.0;
    double s_total = 1000.0;
    double kappa = 0.0;

    void validate() const;
};

/// Single-cell micromagnetic realization: msat * cell_volume = hbar gamma S.
struct DickeFields {
    Vec3 b_ext;   // (0, 0, omega_z / gamma)
    Vec3 b_rms;   // (sqrt(2/S) lambda / gamma, 0, 0)
    double msat;
    double cell_volume;
};

inline constexpr double kDefaultCellVolume = 1e-27;

DickeFields dicke_to_fields(const DickeParams& p, double gamma = constants::gamma_ll,
                            double hbar = constants::hbar, double cell_volume = kDefaultCellVolume);

/// Inverse of dicke_to_fields; omega_c and kappa are not encoded in the fields.
DickeParams fields_to_dicke(const DickeFields& f, double omega_c, double kappa, double gamma = constants::gamma_ll,
                            double hbar = constants::hbar);

double lambda_critical(const DickeParams& p);

struct EquilibriumMx {
    std::vector<double> values;  // {0} or {+v, -v}
    bool degenerate = false;     // lambda == lambda_c exactly
};

EquilibriumMx equilibrium_mx(const DickeParams& p);

struct Polaritons {
    double upper = 0.0;  // Omega_+
    double lower = 0.0;  // Omega_-
    bool superradiant = false;
    bool softened = false;  // lambda == lambda_c, Omega_- = 0
};

/// Normal-mode frequencies of the linearized Dicke model in either phase.
Polaritons polariton_frequencies(const DickeParams& p);

/// m tilted by `degrees` from +z towards +x (spin tilted from -z).
Vec3 tilted_ground_state(double degrees);

struct ExplicitSample {
    double t;
    Vec3 m;
    std::complex<double> alpha;
};

/// RK4 integration of the joint spin + cavity equations (three components of m
/// plus Re/Im alpha) with Gilbert damping on the spin and kappa on the cavity.
std::vector<ExplicitSample> integrate_explicit(const DickeParams& p, double gilbert_alpha, const Vec3& m0,
                                               std::complex<double> alpha0, double dt, double duration,
                                               std::size_t record_every = 1);

/// Engine setup for the single-cell Dicke realization (cavity on, zeeman on).
EngineSetup engine_setup(const DickeParams& p, double gilbert_alpha, const Vec3& m0, double x0 = 0.0,
                         double p0 = 0.0, double gamma = constants::gamma_ll, double hbar = constants::hbar);

}  // namespace cavimag::dicke
