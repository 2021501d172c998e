#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "cavimag/analysis.hpp"
#include "cavimag/error.hpp"

using namespace cavimag;

namespace {

constexpr double kPi = constants::pi;

struct Samples {
    std::vector<double> t, x;
};

template <class F>
Samples sample(std::size_t n, double dt, F f) {
    Samples s;
    for (std::size_t k = 0; k < n; ++k) {
        s.t.push_back(k * dt);
        s.x.push_back(f(k * dt));
    }
    return s;
}

// direct O(N^2) transform of the mean-subtracted samples
std::vector<double> direct_dft(const std::vector<double>& x) {
    const std::size_t n = x.size();
    double mean = 0;
    for (double v : x) mean += v;
    mean /= n;
    std::vector<double> out(n / 2 + 1);
    for (std::size_t j = 0; j <= n / 2; ++j) {
        std::complex<double> acc = 0;
        for (std::size_t k = 0; k < n; ++k)
            acc += (x[k] - mean) * std::polar(1.0, -2 * kPi * double((j * k) % n) / double(n));
        out[j] = std::abs(acc);
    }
    return out;
}

// two coupled modes around omega with coupling g at detuning d: Omega = omega + d/2 +- sqrt(g^2 + d^2/4)
ResponseMap polariton_map(double g, int rows = 21) {
    const double w = 2 * kPi * 5e9, T = 2 * kPi / w, dt = T / 20;
    ResponseMap map;
    map.axis = SweepAxis::b_ext_z;
    for (int r = 0; r < rows; ++r) {
        const double d = (r - rows / 2) * 0.02 * w;
        const double root = std::sqrt(g * g + d * d / 4);
        const double lo = w + d / 2 - root, hi = w + d / 2 + root;
        const Samples s = sample(1 << 14, dt, [&](double t) { return std::cos(lo * t) + std::cos(hi * t); });
        const Spectrum spec = fft_spectrum(s.t, s.x, Window::hann);
        SweepPoint p;
        p.value = w + d;
        p.ok = true;
        p.peaks = find_peaks(spec, 0.1);
        p.amplitudes = spec.amplitudes;
        map.frequencies = spec.frequencies;
        map.resolution = spec.resolution;
        map.points.push_back(std::move(p));
    }
    return map;
}

Engine larmor(double bz) {
    EngineSetup s;
    s.mesh = Mesh(1, 1, 1, 2e-9, 2e-9, 2e-9);
    s.state = CellState(s.mesh, 8e5);
    set_uniform(s.state, {1, 0, 1});
    s.material.msat = 8e5;
    s.terms.zeeman = true;
    s.b_ext = {0, 0, bz};
    return Engine(s);
}

}  // namespace

TEST_CASE("pure tone lands in one bin") {
    const std::size_t n = 1024;
    const double dt = 1e-12;
    const double res = 2 * kPi / (n * dt);
    const Samples s = sample(n, dt, [&](double t) { return std::cos(37 * res * t); });
    const Spectrum sp = fft_spectrum(s.t, s.x);
    CHECK(sp.resolution == doctest::Approx(res));
    CHECK(sp.frequencies.size() == n / 2 + 1);
    std::size_t arg = 0;
    for (std::size_t j = 0; j < sp.amplitudes.size(); ++j)
        if (sp.amplitudes[j] > sp.amplitudes[arg]) arg = j;
    CHECK(arg == 37);
    CHECK(sp.amplitudes[37] == doctest::Approx(n / 2.0));
    CHECK(sp.amplitudes[36] <= 1e-9 * n);
    const auto peaks = find_peaks(sp, 0.1);
    REQUIRE(peaks.size() == 1);
    CHECK(peaks[0].frequency == doctest::Approx(37 * res));
}

TEST_CASE("constant input has a zero spectrum and no peaks") {
    const Samples s = sample(64, 1e-12, [](double) { return 0.3; });
    const Spectrum sp = fft_spectrum(s.t, s.x, Window::hann);
    for (double a : sp.amplitudes) CHECK(a == 0.0);
    CHECK(find_peaks(sp, 0.1).empty());
}

TEST_CASE("matches a direct DFT and Parseval") {
    std::mt19937_64 rng(3);
    std::normal_distribution<double> g;
    const Samples s = sample(300, 2e-12, [&](double t) { return std::sin(3e10 * t) + 0.4 * std::cos(1.1e11 * t) + 0.01 * g(rng); });
    const Spectrum sp = fft_spectrum(s.t, s.x);
    const auto ref = direct_dft(s.x);
    REQUIRE(ref.size() == sp.amplitudes.size());
    double scale = 0;
    for (double a : ref) scale = std::max(scale, a);
    for (std::size_t j = 0; j < ref.size(); ++j) CHECK(std::abs(sp.amplitudes[j] - ref[j]) <= 1e-10 * scale);

    double mean = 0, energy = 0;
    for (double v : s.x) mean += v;
    mean /= s.x.size();
    for (double v : s.x) energy += (v - mean) * (v - mean);
    double spectral = sp.amplitudes.front() * sp.amplitudes.front() + sp.amplitudes.back() * sp.amplitudes.back();
    for (std::size_t j = 1; j + 1 < sp.amplitudes.size(); ++j) spectral += 2 * sp.amplitudes[j] * sp.amplitudes[j];
    CHECK(spectral / s.x.size() == doctest::Approx(energy).epsilon(1e-10));
}

TEST_CASE("spectrum input validation") {
    std::vector<double> t{0, 1, 2, 3, 4, 5, 6}, x(7, 0.0);
    CHECK_THROWS_AS(fft_spectrum(t, x), AnalysisError);
    t.push_back(7.5);
    x.push_back(0.0);
    CHECK_THROWS_AS(fft_spectrum(t, x), AnalysisError);
    CHECK_THROWS_AS(fft_spectrum(std::vector<double>(9, 0.0), std::vector<double>(8, 0.0)), AnalysisError);
    CHECK(parse_window("hann") == Window::hann);
    CHECK(parse_window("none") == Window::none);
    CHECK_THROWS_AS(parse_window("blackman"), ConfigError);
}

TEST_CASE("peak refinement beats the bin width") {
    const std::size_t n = 2048;
    const double dt = 1e-12;
    const double res = 2 * kPi / (n * dt);
    for (double frac : {0.1, 0.27, 0.5, 0.73}) {
        const double f = (200 + frac) * res;
        const Samples s = sample(n, dt, [&](double t) { return std::cos(f * t); });
        const auto peaks = find_peaks(fft_spectrum(s.t, s.x, Window::hann), 0.1);
        REQUIRE(peaks.size() >= 1);
        CHECK(std::abs(peaks[0].frequency - f) <= res / 5);
    }
    Spectrum empty;
    CHECK_THROWS_AS(find_peaks(empty, 0.1), AnalysisError);
    Spectrum flat;
    flat.frequencies = {0, 1, 2, 3, 4};
    flat.amplitudes = {1, 1, 1, 1, 1};
    flat.resolution = 1;
    CHECK(find_peaks(flat, 0.1).empty());
}

TEST_CASE("sweep runs one engine per value") {
    const double dt = 2e-13;
    const RunConfig rc{dt, 2047 * dt, 1, 1};
    SweepOptions opt;
    const ResponseMap one = sweep(larmor, SweepAxis::b_ext_z, {0.2}, rc, opt);
    REQUIRE(one.points.size() == 1);
    CHECK(one.points[0].ok);
    REQUIRE(one.points[0].peaks.size() == 1);
    CHECK(std::abs(one.points[0].peaks[0].frequency - constants::gamma_ll * 0.2) <= one.resolution);

    const ResponseMap none = sweep(larmor, SweepAxis::b_ext_z, {}, rc, opt);
    CHECK(none.points.empty());

    auto flaky = [](double v) {
        if (v < 0) throw ConfigError("negative field");
        return larmor(v);
    };
    opt.threads = 3;
    const ResponseMap mixed = sweep(flaky, SweepAxis::b_ext_z, {0.1, -1.0, 0.3, 0.2}, rc, opt);
    REQUIRE(mixed.points.size() == 4);
    CHECK(mixed.points[0].ok);
    CHECK_FALSE(mixed.points[1].ok);
    CHECK(mixed.points[1].error.find("negative field") != std::string::npos);
    CHECK(mixed.points[2].ok);
    CHECK(mixed.points[3].value == 0.2);

    opt.threads = 1;
    const ResponseMap serial = sweep(flaky, SweepAxis::b_ext_z, {0.1, -1.0, 0.3, 0.2}, rc, opt);
    for (std::size_t i = 0; i < 4; ++i) CHECK(serial.points[i].amplitudes == mixed.points[i].amplitudes);
    CHECK(parse_sweep_axis("omega_c") == SweepAxis::omega_c);
    CHECK_THROWS_AS(parse_sweep_axis("temperature"), ConfigError);
}

TEST_CASE("splitting from a synthetic polariton map") {
    const double w = 2 * kPi * 5e9;
    const double g = 0.02 * w;
    const Splitting s = extract_splitting(polariton_map(g));
    CHECK(s.resolved);
    CHECK(s.two_g == doctest::Approx(2 * g).epsilon(0.01));
    CHECK(s.parameter == doctest::Approx(w));

    const Splitting zero = extract_splitting(polariton_map(0.0));
    CHECK_FALSE(zero.resolved);

    double prev = 0;
    for (double k : {0.01, 0.02, 0.04}) {
        const Splitting sk = extract_splitting(polariton_map(k * w));
        CHECK(sk.two_g > prev);
        prev = sk.two_g;
    }

    ResponseMap single = polariton_map(g, 3);
    for (auto& p : single.points) p.peaks.resize(1);
    CHECK_THROWS_AS(extract_splitting(single), AnalysisError);
}

TEST_CASE("zero-point current of a resonator") {
    const double i = irms_from_circuit(2 * kPi * 1.4e9, 50.0);
    CHECK(std::abs(i - 11.3e-9) <= 0.1e-9);
    CHECK(irms_from_circuit(2 * kPi * 1.4e9, 200.0) == doctest::Approx(i / 2));
    CHECK(irms_from_circuit(2 * kPi * 2.8e9, 50.0) == doctest::Approx(2 * i));
}
