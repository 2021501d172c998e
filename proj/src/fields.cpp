#include "cavimag/fields.hpp"

#include <cmath>
#include <string>

#include "cavimag/error.hpp"
#include "cavimag/parallel.hpp"

namespace cavimag {

void MaterialParams::validate() const {
    if (msat < 0.0) throw ConfigError("material: msat must be >= 0");
    if (aex < 0.0) throw ConfigError("material: aex must be >= 0");
    if (alpha < 0.0) throw ConfigError("material: alpha must be >= 0");
    if (!(gamma > 0.0)) throw ConfigError("material: gamma must be > 0");
    if (ku1 != 0.0 && std::abs(norm(anis_axis) - 1.0) > 1e-9)
        throw ConfigError("material: anis_axis must be a unit vector when ku1 != 0");
}

double sinc(double x) {
    if (std::abs(x) < 1e-8) return 1.0 - x * x / 6.0;
    return std::sin(x) / x;
}

double ExcitationSpec::time_factor(double t) const {
    switch (time_fn) {
        case TimeFunction::none: return 0.0;
        case TimeFunction::constant: return 1.0;
        case TimeFunction::sinc: return sinc(omega * t);
        case TimeFunction::sine: return std::sin(omega * t);
    }
    return 0.0;
}

FieldMap zeeman_field(const CellState& state, const Vec3& b_ext) {
    FieldMap out(state.size());
    for (std::size_t i = 0; i < state.size(); ++i)
        if (state.magnetic(i)) out[i] = b_ext;
    return out;
}

Vec3 exchange_at(const CellState& state, const Mesh& mesh, double aex, std::size_t i) {
    if (!state.magnetic(i) || aex == 0.0) return {};
    const auto [x, y, z] = mesh.coords(i);
    const Vec3 mi = state.m[i];
    Vec3 acc{};
    auto add = [&](int xx, int yy, int zz, double inv_d2) {
        const std::size_t j = mesh.index(xx, yy, zz);
        if (!state.magnetic(j)) return;
        acc += (state.m[j] - mi) * inv_d2;
    };
    const double ix = 1.0 / (mesh.dx() * mesh.dx());
    const double iy = 1.0 / (mesh.dy() * mesh.dy());
    const double iz = 1.0 / (mesh.dz() * mesh.dz());
    if (x > 0) add(x - 1, y, z, ix);
    if (x + 1 < mesh.nx()) add(x + 1, y, z, ix);
    if (y > 0) add(x, y - 1, z, iy);
    if (y + 1 < mesh.ny()) add(x, y + 1, z, iy);
    if (z > 0) add(x, y, z - 1, iz);
    if (z + 1 < mesh.nz()) add(x, y, z + 1, iz);
    return acc * (2.0 * aex / state.msat[i]);
}

FieldMap exchange_field(const CellState& state, const Mesh& mesh, const MaterialParams& params, int threads) {
    if (params.aex < 0.0) throw ConfigError("exchange: aex must be >= 0");
    FieldMap out(state.size());
    parallel_for(state.size(), threads, [&](std::size_t i) { out[i] = exchange_at(state, mesh, params.aex, i); });
    return out;
}

Vec3 anisotropy_at(const CellState& state, const MaterialParams& params, std::size_t i) {
    if (!state.magnetic(i) || params.ku1 == 0.0) return {};
    const Vec3& u = params.anis_axis;
    return u * (2.0 * params.ku1 / state.msat[i] * dot(state.m[i], u));
}

FieldMap uniaxial_anisotropy_field(const CellState& state, const MaterialParams& params) {
    FieldMap out(state.size());
    for (std::size_t i = 0; i < state.size(); ++i) out[i] = anisotropy_at(state, params, i);
    return out;
}

Vec3 demag_at(const CellState& state, const Mesh& mesh, std::size_t i) {
    if (!state.magnetic(i)) return {};
    constexpr double prefactor = constants::mu0 / (4.0 * constants::pi);
    const Vec3 ri = mesh.center(i);
    const double vc = mesh.cell_volume();
    Vec3 b{};
    for (std::size_t j = 0; j < state.size(); ++j) {
        if (j == i || !state.magnetic(j)) continue;
        const Vec3 r = ri - mesh.center(j);
        const double dist = norm(r);
        const Vec3 rhat = r * (1.0 / dist);
        const Vec3 mu = state.m[j] * (state.msat[j] * vc);
        b += (rhat * (3.0 * dot(mu, rhat)) - mu) * (1.0 / (dist * dist * dist));
    }
    return b * prefactor;
}

static void check_demag_limit(const Mesh& mesh, std::size_t limit) {
    if (mesh.cell_count() > limit)
        throw ConfigError("demag: mesh has " + std::to_string(mesh.cell_count()) +
                          " cells, above the direct-sum limit of " + std::to_string(limit) +
                          "; disable demag or shrink the mesh");
}

FieldMap demag_field(const CellState& state, const Mesh& mesh, int threads, std::size_t cell_limit) {
    check_demag_limit(mesh, cell_limit);
    FieldMap out(state.size());
    parallel_for(state.size(), threads, [&](std::size_t i) { out[i] = demag_at(state, mesh, i); });
    return out;
}

FieldMap excitation_field(const CellState& state, const ExcitationSpec& spec, double t) {
    if (spec.shape.size() != state.size()) throw ConfigError("excitation: shape map does not match the mesh");
    FieldMap out(state.size());
    const double f = spec.amplitude_scale * spec.time_factor(t);
    for (std::size_t i = 0; i < state.size(); ++i)
        if (state.magnetic(i)) out[i] = spec.shape[i] * f;
    return out;
}

void effective_field_into(FieldMap& out, const CellState& state, const Mesh& mesh, const MaterialParams& params,
                          const FieldTerms& terms, const FieldSources& sources, double t, int threads) {
    const std::size_t n = state.size();
    if (terms.demag) check_demag_limit(mesh, sources.demag_cell_limit);
    if (terms.excitation && (!sources.excitation || sources.excitation->shape.size() != n))
        throw ConfigError("excitation enabled without a shape matching the mesh");
    if (terms.cavity && (!sources.b_rms || sources.b_rms->size() != n))
        throw ConfigError("cavity enabled without a b_rms map matching the mesh");

    const double exc_factor =
        terms.excitation ? sources.excitation->amplitude_scale * sources.excitation->time_factor(t) : 0.0;
    out.resize(n);
    parallel_for(n, threads, [&](std::size_t i) {
        if (!state.magnetic(i)) {
            out[i] = {};
            return;
        }
        Vec3 b{};
        if (terms.zeeman) b += sources.b_ext;
        if (terms.exchange) b += exchange_at(state, mesh, params.aex, i);
        if (terms.anisotropy) b += anisotropy_at(state, params, i);
        if (terms.demag) b += demag_at(state, mesh, i);
        if (terms.excitation) b += sources.excitation->shape[i] * exc_factor;
        if (terms.cavity) b += (*sources.b_rms)[i] * sources.cavity_gamma;
        out[i] = b;
    });
}

FieldMap effective_field(const CellState& state, const Mesh& mesh, const MaterialParams& params,
                         const FieldTerms& terms, const FieldSources& sources, double t, int threads) {
    FieldMap out;
    effective_field_into(out, state, mesh, params, terms, sources, t, threads);
    return out;
}

}  // namespace cavimag
