#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "cavimag/vec3.hpp"

namespace cavimag {

/// Orthorhombic finite-difference grid. Linear index i = x + nx*(y + ny*z).
class Mesh {
public:
    Mesh(int nx, int ny, int nz, double dx, double dy, double dz);

    int nx() const { return nx_; }
    int ny() const { return ny_; }
    int nz() const { return nz_; }
    double dx() const { return dx_; }
    double dy() const { return dy_; }
    double dz() const { return dz_; }
    double cell_volume() const { return volume_; }
    std::size_t cell_count() const { return static_cast<std::size_t>(nx_) * ny_ * nz_; }

    std::size_t index(int x, int y, int z) const {
        return static_cast<std::size_t>(x) + static_cast<std::size_t>(nx_) * (y + static_cast<std::size_t>(ny_) * z);
    }
    std::array<int, 3> coords(std::size_t i) const;

    /// Cell center, ((x+1/2)dx, (y+1/2)dy, (z+1/2)dz).
    Vec3 center(std::size_t i) const;

    bool operator==(const Mesh&) const = default;

private:
    int nx_, ny_, nz_;
    double dx_, dy_, dz_;
    double volume_;
};

Mesh new_mesh(int nx, int ny, int nz, double dx, double dy, double dz);

/// Reduced magnetization and saturation magnetization per cell. msat == 0
/// marks vacuum; such cells hold m = 0 and are skipped everywhere.
struct CellState {
    std::vector<Vec3> m;
    std::vector<double> msat;

    CellState() = default;
    /// Every cell magnetic with the given msat, m = +z.
    CellState(const Mesh& mesh, double msat_all);

    std::size_t size() const { return m.size(); }
    bool magnetic(std::size_t i) const { return msat[i] > 0.0; }
    std::size_t magnetic_count() const;
};

void set_uniform(CellState& state, const Vec3& direction);

/// Renormalizes m on magnetic cells and zeroes vacuum cells.
void normalize(CellState& state);

/// Largest | |m_i| - 1 | over magnetic cells.
double max_norm_error(const CellState& state);

/// Mean of m over magnetic cells, summed in linear-index order.
Vec3 average_magnetization(const CellState& state);

/// Cells whose center lies within `radius` of the mesh xy-center get `msat`,
/// all others become vacuum. Newly magnetic cells are set to +z.
void set_disc_geometry(CellState& state, const Mesh& mesh, double radius, double msat);

/// In-plane curl around the disc center with an out-of-plane core.
/// polarity = +1/-1 sets core direction, chirality = +1/-1 the circulation.
void set_vortex(CellState& state, const Mesh& mesh, int polarity, int chirality, double core_radius);

}  // namespace cavimag
