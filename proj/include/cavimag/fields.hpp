#pragma once

#include <cstddef>

#include "cavimag/constants.hpp"
#include "cavimag/mesh.hpp"
#include "cavimag/vec3.hpp"

namespace cavimag {

struct MaterialParams {
    double msat = 0.0;       // A/m
    double aex = 0.0;        // J/m
    double ku1 = 0.0;        // J/m^3
    Vec3 anis_axis{0, 0, 1};
    double alpha = 0.0;      // Gilbert damping
    double gamma = constants::gamma_ll;  // rad/(s·T)

    void validate() const;
};

enum class TimeFunction { none, sinc, sine, constant };

/// Space- and time-dependent drive: shape * amplitude_scale * f(t).
/// sinc is unnormalized, sin(w t)/(w t) with sinc(0) = 1.
struct ExcitationSpec {
    FieldMap shape;
    double amplitude_scale = 1.0;
    TimeFunction time_fn = TimeFunction::none;
    double omega = 0.0;  // cutoff for sinc, angular frequency for sine

    double time_factor(double t) const;
};

double sinc(double x);

/// Which contributions enter the effective field.
struct FieldTerms {
    bool zeeman = false;
    bool exchange = false;
    bool anisotropy = false;
    bool demag = false;
    bool excitation = false;
    bool cavity = false;
};

inline constexpr std::size_t kDefaultDemagCellLimit = 4096;

struct FieldSources {
    Vec3 b_ext{};
    const ExcitationSpec* excitation = nullptr;
    const FieldMap* b_rms = nullptr;
    double cavity_gamma = 0.0;  // memory factor at the evaluation time
    std::size_t demag_cell_limit = kDefaultDemagCellLimit;
};

FieldMap zeeman_field(const CellState& state, const Vec3& b_ext);

/// Six-neighbour stencil, free boundaries; vacuum neighbours contribute nothing.
FieldMap exchange_field(const CellState& state, const Mesh& mesh, const MaterialParams& params, int threads = 1);

FieldMap uniaxial_anisotropy_field(const CellState& state, const MaterialParams& params);

/// Direct point-dipole sum over all magnetic cells, O(N^2).
/// Throws ConfigError when the mesh exceeds `cell_limit`.
FieldMap demag_field(const CellState& state, const Mesh& mesh, int threads = 1,
                     std::size_t cell_limit = kDefaultDemagCellLimit);

FieldMap excitation_field(const CellState& state, const ExcitationSpec& spec, double t);

/// Sums enabled terms cell by cell in the order zeeman, exchange, anisotropy,
/// demag, excitation, cavity. Vacuum cells read zero.
void effective_field_into(FieldMap& out, const CellState& state, const Mesh& mesh, const MaterialParams& params,
                          const FieldTerms& terms, const FieldSources& sources, double t, int threads = 1);

FieldMap effective_field(const CellState& state, const Mesh& mesh, const MaterialParams& params,
                         const FieldTerms& terms, const FieldSources& sources, double t, int threads = 1);

// Per-cell kernels shared by the map functions above and the integrator.
Vec3 exchange_at(const CellState& state, const Mesh& mesh, double aex, std::size_t i);
Vec3 anisotropy_at(const CellState& state, const MaterialParams& params, std::size_t i);
Vec3 demag_at(const CellState& state, const Mesh& mesh, std::size_t i);

}  // namespace cavimag
