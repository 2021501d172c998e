#include "cavimag/commands.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "cavimag/analysis.hpp"
#include "cavimag/config.hpp"
#include "cavimag/csv.hpp"
#include "cavimag/error.hpp"
#include "cavimag/ovf.hpp"

namespace cavimag {

namespace {

using csv::format;

std::string vec(const Vec3& v) { return format(v.x) + ", " + format(v.y) + ", " + format(v.z); }

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ConfigError("cannot write '" + path.string() + "'");
    f << text;
    if (!f) throw ConfigError("write failed for '" + path.string() + "'");
}

std::filesystem::path prepare_out(const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw ConfigError("cannot create output directory '" + dir.string() + "': " + ec.message());
    return dir;
}

void describe_setup(std::ostream& s, const SimConfig& cfg, const EngineSetup& setup) {
    const Mesh& m = setup.mesh;
    s << "mesh: " << m.nx() << " x " << m.ny() << " x " << m.nz() << " cells of " << format(m.dx()) << " x "
      << format(m.dy()) << " x " << format(m.dz()) << " m\n";
    s << "magnetic cells: " << setup.state.magnetic_count() << "\n";
    s << "msat: " << format(setup.material.msat) << " A/m\n";
    s << "aex: " << format(setup.material.aex) << " J/m\n";
    s << "ku1: " << format(setup.material.ku1) << " J/m3\n";
    s << "alpha: " << format(setup.material.alpha) << "\n";
    s << "gamma: " << format(setup.material.gamma) << " rad/(s T)\n";
    s << "b_ext: " << vec(setup.b_ext) << " T\n";
    s << "terms:";
    const FieldTerms& t = setup.terms;
    if (t.zeeman) s << " zeeman";
    if (t.exchange) s << " exchange";
    if (t.anisotropy) s << " anisotropy";
    if (t.demag) s << " demag";
    if (setup.excitation) s << " excitation";
    if (setup.cavity) s << " cavity";
    s << "\n";
    if (setup.excitation) {
        s << "excitation amplitude scale: " << format(setup.excitation->amplitude_scale) << "\n";
        s << "excitation omega: " << format(setup.excitation->omega) << " rad/s\n";
    }
    s << (setup.cavity ? "cavity enabled\n" : "cavity disabled\n");
    if (setup.cavity) {
        s << "omega_c: " << format(setup.cavity->omega_c) << " rad/s\n";
        s << "kappa: " << format(setup.cavity->kappa) << " rad/s\n";
        s << "x0: " << format(setup.cavity->x0) << "\n";
        s << "p0: " << format(setup.cavity->p0) << "\n";
        s << "hbar: " << format(setup.cavity->hbar) << " J s\n";
    }
    if (cfg.dicke.present) {
        const auto p = cfg.dicke.resolved();
        s << "dicke omega_z: " << format(p.omega_z) << " rad/s\n";
        s << "dicke lambda: " << format(p.lambda) << " rad/s (" << format(p.lambda / dicke::lambda_critical(p))
          << " lambda_c)\n";
        s << "dicke s_total: " << format(p.s_total) << "\n";
    }
    s << "dt: " << format(cfg.run.dt) << " s\n";
    s << "duration: " << format(cfg.run.duration) << " s\n";
    s << "record every: " << cfg.run.record_every << "\n";
}

double seconds_between(const std::chrono::system_clock::time_point& a, const std::chrono::system_clock::time_point& b) {
    return std::chrono::duration<double>(b - a).count();
}

std::string wall_string(const std::chrono::system_clock::time_point& t) {
    const std::time_t tt = std::chrono::system_clock::to_time_t(t);
    std::tm tm{};
    localtime_r(&tt, &tm);
    std::ostringstream os;
    os << std::put_time(&tm, "%Y-%m-%d %H:%M:%S");
    return os.str();
}

std::string brief(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.8g", v);
    return buf;
}

int fail(std::ostream& err, const std::string& what) {
    err << "error: " << what << "\n";
    return 1;
}

}  // namespace

int cmd_run(const CommandOptions& opts, std::ostream& out, std::ostream& err) {
    try {
        const SimConfig cfg = load_config(opts.config);
        EngineSetup setup = build_setup(cfg);
        setup.threads = opts.threads;
        std::ostringstream summary;
        summary << "command: run\n";
        summary << "config: " << opts.config.string() << "\n";
        summary << "threads: " << opts.threads << "\n";
        describe_setup(summary, cfg, setup);

        Engine engine(std::move(setup));
        const RunResult result = engine.run(cfg.run);
        const RunSummary& rs = result.summary;

        const auto dir = prepare_out(opts.out_dir);
        {
            std::ostringstream body;
            csv::write_timeseries(body, result.series);
            write_text(dir / cfg.output.timeseries, body.str());
        }
        std::vector<std::string> written{cfg.output.timeseries};
        if (!cfg.output.spectrum.empty()) {
            std::vector<double> t, v;
            for (const Record& r : result.series) {
                t.push_back(r.t);
                const int c = cfg.output.spectrum_component;
                v.push_back(c == 0 ? r.m.x : c == 1 ? r.m.y : r.m.z);
            }
            const Spectrum spec = fft_spectrum(t, v, cfg.output.window);
            std::ostringstream body;
            csv::write_spectrum(body, spec);
            write_text(dir / cfg.output.spectrum, body.str());
            written.push_back(cfg.output.spectrum);
            for (const Peak& p : find_peaks(spec, cfg.output.min_prominence))
                summary << "spectrum peak: " << format(p.frequency) << " rad/s, amplitude " << format(p.amplitude)
                        << "\n";
        }
        if (!cfg.output.photon.empty()) {
            if (!engine.cavity()) throw ConfigError("[output] photon needs a cavity");
            std::vector<OverlapSample> samples;
            std::vector<double> times;
            for (const Record& r : result.series) {
                samples.push_back({r.t, r.overlap});
                times.push_back(r.t);
            }
            const auto alpha = reconstruct_alpha(samples, *engine.cavity());
            std::ostringstream body;
            csv::write_photon(body, times, alpha);
            write_text(dir / cfg.output.photon, body.str());
            written.push_back(cfg.output.photon);
            summary << "final photon number: " << format(photon_number(alpha.back())) << "\n";
        }
        if (!cfg.output.final_ovf.empty()) {
            const auto doc = ovf::from_field(engine.state().m, engine.mesh(), "m");
            ovf::write_file((dir / cfg.output.final_ovf).string(), doc, cfg.output.ovf_format);
            written.push_back(cfg.output.final_ovf);
        }

        const Record& last = result.series.back();
        summary << "steps: " << rs.steps << "\n";
        summary << "records: " << rs.records << "\n";
        summary << "simulated time: " << format(rs.start_time) << " to " << format(rs.end_time) << " s\n";
        summary << "final <m>: " << vec(last.m) << "\n";
        summary << "max norm drift: " << format(rs.max_norm_drift) << "\n";
        summary << "final norm error: " << format(rs.final_norm_error) << "\n";
        if (rs.kappa_overflow_regime) {
            summary << "kappa overflow regime: yes\n";
            err << "warning: kappa * t exceeded 700; the memory term ran in the rescaled overflow regime\n";
        }
        summary << "wall clock start: " << rs.wall_start << "\n";
        summary << "wall clock end: " << rs.wall_end << "\n";
        summary << "wall clock elapsed: " << std::fixed << std::setprecision(3) << rs.wall_seconds << " s\n";
        for (const auto& w : written) summary << "wrote: " << (dir / w).string() << "\n";

        write_text(dir / cfg.output.summary, summary.str());
        if (!opts.quiet) out << summary.str();
        return 0;
    } catch (const std::exception& e) {
        return fail(err, e.what());
    }
}

int cmd_sweep(const CommandOptions& opts, std::ostream& out, std::ostream& err) {
    try {
        const SimConfig cfg = load_config(opts.config);
        if (!cfg.sweep.present) throw ConfigError(opts.config.string() + ": no [sweep] section");
        // the base point must build before any engine runs
        const EngineSetup base = build_setup(cfg);

        std::ostringstream summary;
        summary << "command: sweep\n";
        summary << "config: " << opts.config.string() << "\n";
        summary << "threads: " << opts.threads << "\n";
        describe_setup(summary, cfg, base);
        summary << "sweep parameter: " << to_string(cfg.sweep.axis) << "\n";
        summary << "sweep points: " << cfg.sweep.values.size() << "\n";

        SweepOptions so = cfg.sweep.options;
        so.threads = opts.threads;
        const auto wall0 = std::chrono::system_clock::now();
        const ResponseMap map = sweep(
            [&](double v) { return Engine(build_setup(cfg, cfg.sweep.axis, v)); }, cfg.sweep.axis,
            cfg.sweep.values, cfg.run, so);
        const auto wall1 = std::chrono::system_clock::now();

        const auto dir = prepare_out(opts.out_dir);
        {
            std::ostringstream body;
            csv::write_response_map(body, map);
            write_text(dir / cfg.output.map, body.str());
        }
        {
            std::ostringstream body;
            csv::write_sweep_points(body, map);
            write_text(dir / cfg.output.points, body.str());
        }

        std::size_t failed = 0;
        for (const SweepPoint& p : map.points) {
            if (p.ok) continue;
            ++failed;
            err << "warning: sweep point " << format(p.value) << " failed: " << p.error << "\n";
            summary << "failed point: " << format(p.value) << ": " << p.error << "\n";
        }
        summary << "failed points: " << failed << "\n";
        summary << "frequency resolution: " << format(map.resolution) << " rad/s\n";
        if (!map.points.empty() && failed < map.points.size()) {
            try {
                const Splitting s = extract_splitting(map);
                summary << "splitting: " << format(s.two_g) << " rad/s at " << to_string(map.axis) << " = "
                        << format(s.parameter) << (s.resolved ? "" : " (unresolved)") << "\n";
            } catch (const AnalysisError& e) {
                summary << "splitting: unavailable (" << e.what() << ")\n";
            }
        }
        summary << "wall clock start: " << wall_string(wall0) << "\n";
        summary << "wall clock end: " << wall_string(wall1) << "\n";
        summary << "wall clock elapsed: " << std::fixed << std::setprecision(3) << seconds_between(wall0, wall1)
                << " s\n";
        summary << "wrote: " << (dir / cfg.output.map).string() << "\n";
        summary << "wrote: " << (dir / cfg.output.points).string() << "\n";
        write_text(dir / cfg.output.summary, summary.str());
        if (!opts.quiet) out << summary.str();
        if (!map.points.empty() && failed == map.points.size()) return fail(err, "every sweep point failed");
        return 0;
    } catch (const std::exception& e) {
        return fail(err, e.what());
    }
}

int cmd_validate_ovf(const std::filesystem::path& path, std::ostream& out, std::ostream& err) {
    try {
        const ovf::Document doc = ovf::read_file(path.string());
        Vec3 lo{HUGE_VAL, HUGE_VAL, HUGE_VAL}, hi{-HUGE_VAL, -HUGE_VAL, -HUGE_VAL};
        double nmin = HUGE_VAL, nmax = 0.0;
        for (const Vec3& v : doc.values) {
            lo = {std::min(lo.x, v.x), std::min(lo.y, v.y), std::min(lo.z, v.z)};
            hi = {std::max(hi.x, v.x), std::max(hi.y, v.y), std::max(hi.z, v.z)};
            nmin = std::min(nmin, norm(v));
            nmax = std::max(nmax, norm(v));
        }
        out << "file: " << path.string() << "\n";
        out << "format: OVF 2.0 " << to_string(doc.representation) << "\n";
        out << "title: " << doc.title << "\n";
        out << "nodes: " << doc.xnodes << " x " << doc.ynodes << " x " << doc.znodes << " (" << doc.node_count()
            << ")\n";
        out << "step: " << format(doc.xstepsize) << " x " << format(doc.ystepsize) << " x " << format(doc.zstepsize)
            << " " << doc.meshunit << "\n";
        out << "value units: " << doc.valueunits << "\n";
        out << "x range: " << format(lo.x) << " to " << format(hi.x) << "\n";
        out << "y range: " << format(lo.y) << " to " << format(hi.y) << "\n";
        out << "z range: " << format(lo.z) << " to " << format(hi.z) << "\n";
        out << "norm range: " << format(nmin) << " to " << format(nmax) << "\n";
        return 0;
    } catch (const ovf::OvfError& e) {
        err << "error: " << path.string() << ": " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        return fail(err, e.what());
    }
}

DickeBenchReport dicke_bench(const DickeBenchOptions& o) {
    if (!(o.lambda_over_lc >= 0.0)) throw ConfigError("lambda_over_lc must be >= 0");
    if (o.steps_per_period < 8) throw ConfigError("steps per period must be >= 8");
    DickeBenchReport rep;
    dicke::DickeParams p{o.omega_z, o.omega_c, 0.0, o.s_total, o.kappa};
    p.validate();
    rep.lambda_c = dicke::lambda_critical(p);
    p.lambda = o.lambda_over_lc * rep.lambda_c;
    rep.params = p;
    rep.polaritons = dicke::polariton_frequencies(p);

    const double period = 2.0 * constants::pi / o.omega_c;
    const double dt = period / o.steps_per_period;
    const double duration = o.duration > 0.0 ? o.duration : 400.0 * period;
    const Vec3 m0 = dicke::tilted_ground_state(o.tilt_deg);

    Engine engine(dicke::engine_setup(p, o.alpha, m0));
    const RunResult run = engine.run({dt, duration, 1, 1});
    const auto oracle = dicke::integrate_explicit(p, o.alpha, m0, {0.0, 0.0}, dt, duration, 1);

    rep.mx_engine = run.series.back().m.x;
    rep.mx_oracle = oracle.back().m.x;
    const auto eq = dicke::equilibrium_mx(p);
    rep.mx_analytic = eq.values.front();
    rep.softened = rep.polaritons.softened;

    std::vector<double> t, x;
    std::vector<OverlapSample> samples;
    for (const Record& r : run.series) {
        t.push_back(r.t);
        x.push_back(r.m.x);
        samples.push_back({r.t, r.overlap});
    }
    const Spectrum spec = fft_spectrum(t, x, Window::none);
    rep.resolution = spec.resolution;
    auto peaks = find_peaks(spec, 0.1);
    rep.peak_count = peaks.size();
    if (peaks.size() >= 2) {
        std::partial_sort(peaks.begin(), peaks.begin() + 2, peaks.end(),
                          [](const Peak& a, const Peak& b) { return a.amplitude > b.amplitude; });
        rep.peak_lower = std::min(peaks[0].frequency, peaks[1].frequency);
        rep.peak_upper = std::max(peaks[0].frequency, peaks[1].frequency);
    }

    const auto alpha = reconstruct_alpha(samples, *engine.cavity());
    const double window = o.compare_periods * period * (1.0 + 1e-12);
    double num = 0, den = 0, pnum = 0, pden = 0;
    for (std::size_t k = 0; k < oracle.size() && k < run.series.size(); ++k) {
        if (run.series[k].t > window) break;
        const double d = run.series[k].m.x - oracle[k].m.x;
        num += d * d;
        den += oracle[k].m.x * oracle[k].m.x;
        const double a = std::abs(alpha[k]) - std::abs(oracle[k].alpha);
        pnum += a * a;
        pden += std::norm(oracle[k].alpha);
    }
    rep.l2_mx = den > 0 ? std::sqrt(num / den) : std::sqrt(num);
    rep.l2_photon = pden > 0 ? std::sqrt(pnum / pden) : std::sqrt(pnum);

    const double ratio = o.lambda_over_lc;
    if (std::abs(ratio - 1.0) < 1e-12) {
        rep.softened = true;  // boundary: report only
    } else if (ratio < 1.0) {
        rep.check_peaks = true;
        rep.peaks_ok = rep.peak_count >= 2 && std::abs(rep.peak_lower - rep.polaritons.lower) <= rep.resolution &&
                       std::abs(rep.peak_upper - rep.polaritons.upper) <= rep.resolution;
        rep.check_decay = true;
        rep.decay_ok = std::abs(rep.mx_engine) <= 1e-3;
        if (ratio <= 0.5) {
            rep.check_l2 = true;
            rep.l2_ok = rep.l2_mx <= 1e-3 && rep.l2_photon <= 1e-3;
        }
    } else {
        rep.check_superradiant = true;
        rep.superradiant_ok = std::abs(std::abs(rep.mx_engine) - rep.mx_analytic) <= 0.01;
    }

    if (o.out_dir) {
        const auto dir = prepare_out(*o.out_dir);
        std::ostringstream eng;
        csv::write_timeseries(eng, run.series);
        write_text(dir / "dicke_engine.csv", eng.str());
        // oracle in the engine schema: gamma = 2 Re alpha, overlap = msat m_x b_rms
        const dicke::DickeFields f = dicke::dicke_to_fields(p);
        const double msat = engine.material().msat;
        TimeSeries os;
        for (const auto& s : oracle) os.push_back({s.t, s.m, 2.0 * s.alpha.real(), msat * s.m.x * f.b_rms.x});
        std::ostringstream orc;
        csv::write_timeseries(orc, os);
        write_text(dir / "dicke_oracle.csv", orc.str());
        std::ostringstream sp;
        csv::write_spectrum(sp, spec);
        write_text(dir / "dicke_spectrum.csv", sp.str());
    }
    return rep;
}

int cmd_dicke_bench(const DickeBenchOptions& opts, std::ostream& out, std::ostream& err) {
    DickeBenchReport r;
    try {
        r = dicke_bench(opts);
    } catch (const std::exception& e) {
        return fail(err, e.what());
    }
    auto verdict = [](bool checked, bool ok) { return !checked ? "n/a" : ok ? "ok" : "FAIL"; };
    if (!opts.quiet) {
        const double w = r.params.omega_c;
        out << "omega_z: " << format(r.params.omega_z) << " rad/s\n";
        out << "omega_c: " << format(r.params.omega_c) << " rad/s\n";
        out << "lambda: " << format(r.params.lambda) << " rad/s (" << format(opts.lambda_over_lc) << " lambda_c)\n";
        out << "kappa: " << format(r.params.kappa) << " rad/s\n";
        out << "phase: "
            << (r.softened ? "critical" : r.polaritons.superradiant ? "superradiant" : "normal") << "\n";
        out << std::left << std::setw(26) << "quantity" << std::setw(16) << "engine" << std::setw(16) << "oracle"
            << std::setw(16) << "analytic" << "check\n";
        auto row = [&](const std::string& name, double a, const std::string& b, double c, const char* v) {
            out << std::setw(26) << name << std::setw(16) << brief(a) << std::setw(16) << b
                << std::setw(16) << brief(c) << v << "\n";
        };
        row("final m_x", r.mx_engine, brief(r.mx_oracle), r.mx_analytic,
            verdict(r.check_decay || r.check_superradiant, r.decay_ok && r.superradiant_ok));
        row("Omega- / omega_c", r.peak_lower / w, "-", r.polaritons.lower / w, verdict(r.check_peaks, r.peaks_ok));
        row("Omega+ / omega_c", r.peak_upper / w, "-", r.polaritons.upper / w, verdict(r.check_peaks, r.peaks_ok));
        out << "frequency bin: " << format(r.resolution / w) << " omega_c\n";
        out << "peaks found: " << r.peak_count << "\n";
        out << "m_x relative L2 vs oracle: " << format(r.l2_mx) << " (" << verdict(r.check_l2, r.l2_ok) << ")\n";
        out << "|alpha| relative L2 vs oracle: " << format(r.l2_photon) << " (" << verdict(r.check_l2, r.l2_ok)
            << ")\n";
        if (r.softened) out << "mode softening: lower polariton at zero frequency\n";
        out << "result: " << (r.passed() ? "pass" : "fail") << "\n";
    }
    if (!r.passed()) {
        err << "dicke-bench: tolerances violated\n";
        return 1;
    }
    return 0;
}

}  // namespace cavimag
