#include "cavimag/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "cavimag/error.hpp"

namespace cavimag {

Mesh::Mesh(int nx, int ny, int nz, double dx, double dy, double dz)
    : nx_(nx), ny_(ny), nz_(nz), dx_(dx), dy_(dy), dz_(dz), volume_(0.0) {
    if (nx < 1 || ny < 1 || nz < 1)
        throw ConfigError("mesh: cell counts must be >= 1, got " + std::to_string(nx) + "x" +
                          std::to_string(ny) + "x" + std::to_string(nz));
    if (!(dx > 0.0) || !(dy > 0.0) || !(dz > 0.0))
        throw ConfigError("mesh: cell sizes must be positive");
    volume_ = dx_ * dy_ * dz_;
}

std::array<int, 3> Mesh::coords(std::size_t i) const {
    const auto sx = static_cast<std::size_t>(nx_);
    const auto sy = static_cast<std::size_t>(ny_);
    return {static_cast<int>(i % sx), static_cast<int>((i / sx) % sy), static_cast<int>(i / (sx * sy))};
}

Vec3 Mesh::center(std::size_t i) const {
    const auto [x, y, z] = coords(i);
    return {(x + 0.5) * dx_, (y + 0.5) * dy_, (z + 0.5) * dz_};
}

Mesh new_mesh(int nx, int ny, int nz, double dx, double dy, double dz) { return Mesh(nx, ny, nz, dx, dy, dz); }

CellState::CellState(const Mesh& mesh, double msat_all)
    : m(mesh.cell_count(), msat_all > 0.0 ? Vec3{0, 0, 1} : Vec3{}), msat(mesh.cell_count(), msat_all) {
    if (msat_all < 0.0) throw ConfigError("msat must be >= 0");
}

std::size_t CellState::magnetic_count() const {
    return static_cast<std::size_t>(std::count_if(msat.begin(), msat.end(), [](double v) { return v > 0.0; }));
}

void set_uniform(CellState& state, const Vec3& direction) {
    const double n = norm(direction);
    if (!(n > 0.0) || !std::isfinite(n)) throw ConfigError("set_uniform: direction must be a nonzero finite vector");
    const Vec3 u = direction * (1.0 / n);
    for (std::size_t i = 0; i < state.size(); ++i) state.m[i] = state.magnetic(i) ? u : Vec3{};
}

void normalize(CellState& state) {
    for (std::size_t i = 0; i < state.size(); ++i) {
        if (!state.magnetic(i)) {
            state.m[i] = {};
            continue;
        }
        const double n = norm(state.m[i]);
        if (n > 0.0) state.m[i] *= 1.0 / n;
    }
}

double max_norm_error(const CellState& state) {
    double worst = 0.0;
    for (std::size_t i = 0; i < state.size(); ++i)
        if (state.magnetic(i)) worst = std::max(worst, std::abs(norm(state.m[i]) - 1.0));
    return worst;
}

Vec3 average_magnetization(const CellState& state) {
    // shifted sum: offsets from the first magnetic cell, so uniform states are exact
    std::size_t first = 0;
    while (first < state.size() && !state.magnetic(first)) ++first;
    if (first == state.size()) throw SimulationError("average_magnetization: no magnetic cells");
    const Vec3 ref = state.m[first];
    Vec3 sum{};
    std::size_t count = 0;
    for (std::size_t i = first; i < state.size(); ++i) {
        if (!state.magnetic(i)) continue;
        sum += state.m[i] - ref;
        ++count;
    }
    return ref + sum * (1.0 / static_cast<double>(count));
}

void set_disc_geometry(CellState& state, const Mesh& mesh, double radius, double msat) {
    const double limit = 0.5 * std::min(mesh.nx() * mesh.dx(), mesh.ny() * mesh.dy());
    if (radius < 0.0 || radius > limit * (1.0 + 1e-12))
        throw ConfigError("disc radius must lie in [0, " + std::to_string(limit) + "] m");
    if (msat < 0.0) throw ConfigError("msat must be >= 0");
    state.m.resize(mesh.cell_count());
    state.msat.resize(mesh.cell_count());

    const double cx = 0.5 * mesh.nx() * mesh.dx();
    const double cy = 0.5 * mesh.ny() * mesh.dy();
    for (std::size_t i = 0; i < mesh.cell_count(); ++i) {
        const Vec3 r = mesh.center(i);
        const double ddx = r.x - cx, ddy = r.y - cy;
        const bool inside = radius > 0.0 && ddx * ddx + ddy * ddy <= radius * radius;
        if (inside && msat > 0.0) {
            if (state.msat[i] <= 0.0) state.m[i] = {0, 0, 1};
            state.msat[i] = msat;
        } else {
            state.msat[i] = 0.0;
            state.m[i] = {};
        }
    }
}

void set_vortex(CellState& state, const Mesh& mesh, int polarity, int chirality, double core_radius) {
    const double cx = 0.5 * mesh.nx() * mesh.dx();
    const double cy = 0.5 * mesh.ny() * mesh.dy();
    const double pz = polarity >= 0 ? 1.0 : -1.0;
    const double ch = chirality >= 0 ? 1.0 : -1.0;
    for (std::size_t i = 0; i < state.size(); ++i) {
        if (!state.magnetic(i)) continue;
        const Vec3 r = mesh.center(i);
        const double ddx = r.x - cx, ddy = r.y - cy;
        const double rho = std::hypot(ddx, ddy);
        // out-of-plane component decays as a Gaussian of the core radius
        const double mz = core_radius > 0.0 ? pz * std::exp(-(rho * rho) / (core_radius * core_radius)) : 0.0;
        const double inplane = std::sqrt(std::max(0.0, 1.0 - mz * mz));
        Vec3 m{0, 0, pz};
        if (rho > 0.0) m = {-ch * inplane * ddy / rho, ch * inplane * ddx / rho, mz};
        state.m[i] = m;
    }
    normalize(state);
}

}  // namespace cavimag
