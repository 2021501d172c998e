#include <doctest.h>

#include <cmath>
#include <random>

#include "cavimag/error.hpp"
#include "cavimag/mesh.hpp"

using namespace cavimag;

TEST_CASE("new_mesh volumes and counts") {
    const Mesh a = new_mesh(1, 1, 1, 1e-9, 1e-9, 1e-9);
    CHECK(a.cell_count() == 1);
    CHECK(a.cell_volume() == doctest::Approx(1e-27).epsilon(1e-15));

    const Mesh b = new_mesh(4, 4, 1, 5e-9, 5e-9, 50e-9);
    CHECK(b.cell_count() == 16);
    CHECK(b.cell_volume() == doctest::Approx(1.25e-24).epsilon(1e-15));
    CHECK(b.cell_volume() == 5e-9 * 5e-9 * 50e-9);
}

TEST_CASE("new_mesh rejects degenerate input") {
    CHECK_THROWS_AS(new_mesh(0, 1, 1, 1e-9, 1e-9, 1e-9), ConfigError);
    CHECK_THROWS_AS(new_mesh(1, -2, 1, 1e-9, 1e-9, 1e-9), ConfigError);
    CHECK_THROWS_AS(new_mesh(1, 1, 1, 0.0, 1e-9, 1e-9), ConfigError);
    CHECK_THROWS_AS(new_mesh(1, 1, 1, 1e-9, 1e-9, -1e-9), ConfigError);
}

TEST_CASE("linear index round-trips and centers are half-offset") {
    const Mesh m(3, 4, 5, 1.0, 2.0, 3.0);
    for (std::size_t i = 0; i < m.cell_count(); ++i) {
        const auto c = m.coords(i);
        CHECK(m.index(c[0], c[1], c[2]) == i);
    }
    CHECK(m.index(1, 0, 0) == 1);
    CHECK(m.index(0, 1, 0) == 3);
    CHECK(m.index(0, 0, 1) == 12);
    const Vec3 r = m.center(m.index(2, 1, 3));
    CHECK(r.x == 2.5);
    CHECK(r.y == 3.0);
    CHECK(r.z == 10.5);
}

TEST_CASE("set_uniform normalizes the direction") {
    const Mesh m(2, 2, 1, 1e-9, 1e-9, 1e-9);
    CellState s(m, 8e5);
    set_uniform(s, {0, 0, 2});
    for (const Vec3& v : s.m) CHECK((v.x == 0.0 && v.y == 0.0 && v.z == 1.0));
    set_uniform(s, {1, 1, 0});
    for (const Vec3& v : s.m) {
        CHECK(v.x == doctest::Approx(std::sqrt(2.0) / 2));
        CHECK(v.y == doctest::Approx(std::sqrt(2.0) / 2));
        CHECK(v.z == 0.0);
    }
    CHECK_THROWS_AS(set_uniform(s, {0, 0, 0}), ConfigError);
}

TEST_CASE("average_magnetization") {
    const Mesh m(2, 1, 1, 1e-9, 1e-9, 1e-9);
    CellState s(m, 1.0);
    set_uniform(s, {1, 0, 0});
    const Vec3 a = average_magnetization(s);
    CHECK((a.x == 1.0 && a.y == 0.0 && a.z == 0.0));

    s.m[1] = {-1, 0, 0};
    const Vec3 b = average_magnetization(s);
    CHECK((b.x == 0.0 && b.y == 0.0 && b.z == 0.0));

    CellState vac(m, 0.0);
    CHECK_THROWS_AS(average_magnetization(vac), SimulationError);
}

TEST_CASE("average_magnetization matches a naive per-component mean") {
    const Mesh m(7, 5, 3, 1e-9, 1e-9, 1e-9);
    CellState s(m, 1.0);
    std::mt19937_64 rng(12345);
    std::normal_distribution<double> g;
    for (auto& v : s.m) v = {g(rng), g(rng), g(rng)};
    normalize(s);
    // knock out some cells
    for (std::size_t i = 0; i < s.size(); i += 4) {
        s.msat[i] = 0.0;
        s.m[i] = {};
    }
    long double sx = 0, sy = 0, sz = 0;
    std::size_t n = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s.msat[i] == 0.0) continue;
        sx += s.m[i].x;
        sy += s.m[i].y;
        sz += s.m[i].z;
        ++n;
    }
    const Vec3 a = average_magnetization(s);
    CHECK(std::abs(a.x - static_cast<double>(sx / n)) <= 1e-14);
    CHECK(std::abs(a.y - static_cast<double>(sy / n)) <= 1e-14);
    CHECK(std::abs(a.z - static_cast<double>(sz / n)) <= 1e-14);
}

TEST_CASE("uniform state averages to its direction exactly") {
    const Mesh m(5, 3, 2, 1e-9, 1e-9, 1e-9);
    CellState s(m, 1.0);
    set_uniform(s, {0.3, -0.4, 0.5});
    const Vec3 a = average_magnetization(s);
    CHECK(a.x == s.m[0].x);
    CHECK(a.y == s.m[0].y);
    CHECK(a.z == s.m[0].z);
}

TEST_CASE("normalize keeps unit norm on magnetic cells and zero on vacuum") {
    const Mesh m(4, 1, 1, 1e-9, 1e-9, 1e-9);
    CellState s(m, 1.0);
    s.m = {{2, 0, 0}, {0, 3, 4}, {1, 1, 1}, {5, 5, 5}};
    s.msat[3] = 0.0;
    normalize(s);
    CHECK(max_norm_error(s) <= 1e-12);
    CHECK(norm(s.m[3]) == 0.0);
}

TEST_CASE("disc geometry") {
    const Mesh m(4, 4, 1, 1e-9, 1e-9, 1e-9);
    CellState s(m, 0.0);

    SUBCASE("radius covering the mesh center region") {
        set_disc_geometry(s, m, 2e-9, 8e5);
        // brute-force membership oracle
        std::size_t expected = 0;
        for (int y = 0; y < 4; ++y)
            for (int x = 0; x < 4; ++x) {
                const double px = (x + 0.5) * 1e-9 - 2e-9, py = (y + 0.5) * 1e-9 - 2e-9;
                if (px * px + py * py <= 4e-18) ++expected;
            }
        CHECK(s.magnetic_count() == expected);
        CHECK(expected == 12);
        for (std::size_t i = 0; i < s.size(); ++i) {
            if (!s.magnetic(i)) CHECK(norm(s.m[i]) == 0.0);
        }
    }
    SUBCASE("radius zero gives no magnetic cells") {
        set_disc_geometry(s, m, 0.0, 8e5);
        CHECK(s.magnetic_count() == 0);
    }
    SUBCASE("radius beyond half-width is rejected") {
        CHECK_THROWS_AS(set_disc_geometry(s, m, 2.1e-9, 8e5), ConfigError);
    }
}

TEST_CASE("disc covering the whole mesh") {
    // on a 2x2 grid every center lies sqrt(2)/2 cells from the disc center
    const Mesh m(2, 2, 1, 1e-9, 1e-9, 1e-9);
    CellState s(m, 0.0);
    set_disc_geometry(s, m, 1e-9, 8e5);
    CHECK(s.magnetic_count() == 4);
}

TEST_CASE("vortex texture") {
    const Mesh m(8, 8, 1, 5e-9, 5e-9, 5e-9);
    CellState s(m, 8e5);
    set_vortex(s, m, 1, 1, 5e-9);
    CHECK(max_norm_error(s) <= 1e-12);
    // in-plane circulation: m is perpendicular to the radius away from the core
    const std::size_t i = m.index(7, 4, 0);
    const Vec3 r = m.center(i) - Vec3{20e-9, 20e-9, 0};
    CHECK(std::abs(s.m[i].x * r.x + s.m[i].y * r.y) <= 1e-12 * norm(r));
    set_vortex(s, m, -1, -1, 5e-9);
    CHECK(average_magnetization(s).z < 0.0);
}
