#include "cavimag/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "cavimag/error.hpp"

namespace cavimag {

namespace {

std::string lower(std::string_view s) {
    std::string out(s);
    for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

[[noreturn]] void fail(int line, std::string_view section, std::string_view key, const std::string& msg) {
    std::string where = "line " + std::to_string(line) + ": [" + std::string(section) + "]";
    if (!key.empty()) where += " " + std::string(key);
    throw ConfigError(where + ": " + msg);
}

struct Value {
    std::string_view text;
    int line;
    std::string_view section;
    std::string_view key;

    [[noreturn]] void error(const std::string& msg) const { fail(line, section, key, msg); }

    double number() const {
        double v = 0.0;
        const char* first = text.data();
        const char* last = first + text.size();
        if (!text.empty() && *first == '+') ++first;
        auto [ptr, ec] = std::from_chars(first, last, v);
        if (ec != std::errc() || ptr != last || text.empty() || !std::isfinite(v))
            error("expected a number, got '" + std::string(text) + "'");
        return v;
    }
    double positive() const {
        const double v = number();
        if (!(v > 0.0)) error("must be > 0");
        return v;
    }
    double non_negative() const {
        const double v = number();
        if (v < 0.0) error("must be >= 0");
        return v;
    }
    long long integer() const {
        long long v = 0;
        auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
        if (ec != std::errc() || ptr != text.data() + text.size() || text.empty())
            error("expected an integer, got '" + std::string(text) + "'");
        return v;
    }
    int count(long long min_value) const {
        const long long v = integer();
        if (v < min_value || v > 1'000'000'000) error("must be >= " + std::to_string(min_value));
        return static_cast<int>(v);
    }
    bool boolean() const {
        const std::string s = lower(text);
        if (s == "true" || s == "yes" || s == "on" || s == "1") return true;
        if (s == "false" || s == "no" || s == "off" || s == "0") return false;
        error("expected true or false, got '" + std::string(text) + "'");
    }
    std::vector<double> list() const {
        std::vector<double> out;
        std::string_view rest = text;
        while (true) {
            const auto comma = rest.find(',');
            Value item{trim(rest.substr(0, comma)), line, section, key};
            out.push_back(item.number());
            if (comma == std::string_view::npos) break;
            rest = rest.substr(comma + 1);
        }
        return out;
    }
    Vec3 vec3() const {
        const auto v = list();
        if (v.size() != 3) error("expected three comma-separated numbers, got '" + std::string(text) + "'");
        return {v[0], v[1], v[2]};
    }
    std::string string() const {
        if (text.empty()) error("value must not be empty");
        return std::string(text);
    }
    int sign() const {
        const long long v = integer();
        if (v != 1 && v != -1) error("must be 1 or -1");
        return static_cast<int>(v);
    }
};

using Setter = std::function<void(SimConfig&, const Value&)>;

struct SectionSpec {
    std::map<std::string, Setter> keys;
    std::vector<std::vector<std::string>> required;  // each inner list: any one of these keys
};

TimeFunction parse_time_fn(const Value& v) {
    const std::string s = lower(v.text);
    if (s == "none") return TimeFunction::none;
    if (s == "sinc") return TimeFunction::sinc;
    if (s == "sin" || s == "sine") return TimeFunction::sine;
    if (s == "constant") return TimeFunction::constant;
    v.error("expected one of none, sinc, sine, constant");
}

int parse_component(const Value& v) {
    const std::string s = lower(v.text);
    if (s == "x" || s == "mx" || s == "0") return 0;
    if (s == "y" || s == "my" || s == "1") return 1;
    if (s == "z" || s == "mz" || s == "2") return 2;
    v.error("expected x, y or z");
}

std::map<std::string, SectionSpec> section_specs() {
    std::map<std::string, SectionSpec> s;

    auto& mesh = s["mesh"];
    mesh.keys = {
        {"nx", [](SimConfig& c, const Value& v) { c.mesh.nx = v.count(1); }},
        {"ny", [](SimConfig& c, const Value& v) { c.mesh.ny = v.count(1); }},
        {"nz", [](SimConfig& c, const Value& v) { c.mesh.nz = v.count(1); }},
        {"dx", [](SimConfig& c, const Value& v) { c.mesh.dx = v.positive(); }},
        {"dy", [](SimConfig& c, const Value& v) { c.mesh.dy = v.positive(); }},
        {"dz", [](SimConfig& c, const Value& v) { c.mesh.dz = v.positive(); }},
        {"geometry",
         [](SimConfig& c, const Value& v) {
             const std::string g = lower(v.text);
             if (g == "box") c.mesh.disc = false;
             else if (g == "disc") c.mesh.disc = true;
             else v.error("expected box or disc");
         }},
        {"disc_radius", [](SimConfig& c, const Value& v) { c.mesh.disc_radius = v.positive(); }},
        {"initial",
         [](SimConfig& c, const Value& v) {
             const std::string g = lower(v.text);
             if (g == "uniform") c.mesh.initial = InitialTexture::uniform;
             else if (g == "vortex") c.mesh.initial = InitialTexture::vortex;
             else if (g == "file") c.mesh.initial = InitialTexture::file;
             else v.error("expected uniform, vortex or file");
         }},
        {"m0",
         [](SimConfig& c, const Value& v) {
             const Vec3 m = v.vec3();
             if (!(norm(m) > 0.0)) v.error("direction must be nonzero");
             c.mesh.m0 = m * (1.0 / norm(m));
         }},
        {"polarity", [](SimConfig& c, const Value& v) { c.mesh.polarity = v.sign(); }},
        {"chirality", [](SimConfig& c, const Value& v) { c.mesh.chirality = v.sign(); }},
        {"core_radius", [](SimConfig& c, const Value& v) { c.mesh.core_radius = v.non_negative(); }},
        {"m0_file", [](SimConfig& c, const Value& v) { c.mesh.m0_file = v.string(); }},
    };
    mesh.required = {{"dx"}, {"dy"}, {"dz"}};

    auto& material = s["material"];
    material.keys = {
        {"msat", [](SimConfig& c, const Value& v) { c.material.msat = v.positive(); }},
        {"aex", [](SimConfig& c, const Value& v) { c.material.aex = v.non_negative(); }},
        {"ku1", [](SimConfig& c, const Value& v) { c.material.ku1 = v.number(); }},
        {"anis_axis",
         [](SimConfig& c, const Value& v) {
             const Vec3 a = v.vec3();
             if (!(norm(a) > 0.0)) v.error("axis must be nonzero");
             c.material.anis_axis = a * (1.0 / norm(a));
         }},
        {"alpha", [](SimConfig& c, const Value& v) { c.material.alpha = v.non_negative(); }},
        {"gamma", [](SimConfig& c, const Value& v) { c.material.gamma = v.positive(); }},
    };
    material.required = {{"msat"}};

    auto& fields = s["fields"];
    fields.keys = {
        {"b_ext", [](SimConfig& c, const Value& v) { c.fields.b_ext = v.vec3(); }},
        {"exchange", [](SimConfig& c, const Value& v) { c.fields.exchange = v.boolean(); }},
        {"anisotropy", [](SimConfig& c, const Value& v) { c.fields.anisotropy = v.boolean(); }},
        {"demag", [](SimConfig& c, const Value& v) { c.fields.demag = v.boolean(); }},
        {"demag_cell_limit",
         [](SimConfig& c, const Value& v) { c.fields.demag_cell_limit = static_cast<std::size_t>(v.count(1)); }},
    };

    auto& cavity = s["cavity"];
    auto set_wc = [](SimConfig& c, const Value& v) { c.cavity.omega_c = v.positive(); };
    cavity.keys = {
        {"wc", set_wc},
        {"omega_c", set_wc},
        {"kappa", [](SimConfig& c, const Value& v) { c.cavity.kappa = v.non_negative(); }},
        {"x0", [](SimConfig& c, const Value& v) { c.cavity.x0 = v.number(); }},
        {"p0", [](SimConfig& c, const Value& v) { c.cavity.p0 = v.number(); }},
        {"hbar", [](SimConfig& c, const Value& v) { c.cavity.hbar = v.positive(); }},
        {"b_rms", [](SimConfig& c, const Value& v) { c.cavity.b_rms = v.vec3(); }},
        {"b_rms_file", [](SimConfig& c, const Value& v) { c.cavity.b_rms_file = v.string(); }},
    };
    cavity.required = {{"wc", "omega_c"}, {"kappa"}, {"b_rms", "b_rms_file"}};

    auto& exc = s["excitation"];
    exc.keys = {
        {"shape", [](SimConfig& c, const Value& v) { c.excitation.shape = v.vec3(); }},
        {"shape_file", [](SimConfig& c, const Value& v) { c.excitation.shape_file = v.string(); }},
        {"amplitude_scale", [](SimConfig& c, const Value& v) { c.excitation.amplitude_scale = v.number(); }},
        {"time_fn", [](SimConfig& c, const Value& v) { c.excitation.time_fn = parse_time_fn(v); }},
        {"omega", [](SimConfig& c, const Value& v) { c.excitation.omega = v.non_negative(); }},
    };
    exc.required = {{"shape", "shape_file"}, {"time_fn"}};

    auto& dk = s["dicke"];
    dk.keys = {
        {"omega_z", [](SimConfig& c, const Value& v) { c.dicke.params.omega_z = v.positive(); }},
        {"omega_c", [](SimConfig& c, const Value& v) { c.dicke.params.omega_c = v.positive(); }},
        {"wc", [](SimConfig& c, const Value& v) { c.dicke.params.omega_c = v.positive(); }},
        {"lambda", [](SimConfig& c, const Value& v) { c.dicke.params.lambda = v.non_negative(); }},
        {"lambda_over_lc", [](SimConfig& c, const Value& v) { c.dicke.lambda_over_lc = v.non_negative(); }},
        {"s_total", [](SimConfig& c, const Value& v) { c.dicke.params.s_total = v.positive(); }},
        {"kappa", [](SimConfig& c, const Value& v) { c.dicke.params.kappa = v.non_negative(); }},
        {"alpha", [](SimConfig& c, const Value& v) { c.dicke.alpha = v.non_negative(); }},
        {"tilt_deg", [](SimConfig& c, const Value& v) { c.dicke.tilt_deg = v.number(); }},
        {"x0", [](SimConfig& c, const Value& v) { c.dicke.x0 = v.number(); }},
        {"p0", [](SimConfig& c, const Value& v) { c.dicke.p0 = v.number(); }},
        {"gamma", [](SimConfig& c, const Value& v) { c.dicke.gamma = v.positive(); }},
        {"hbar", [](SimConfig& c, const Value& v) { c.dicke.hbar = v.positive(); }},
    };
    dk.required = {{"omega_z"}, {"omega_c", "wc"}, {"lambda", "lambda_over_lc"}, {"kappa"}};

    auto& sw = s["sweep"];
    sw.keys = {
        {"parameter",
         [](SimConfig& c, const Value& v) {
             try {
                 c.sweep.axis = parse_sweep_axis(lower(v.text));
             } catch (const ConfigError& e) {
                 v.error(e.what());
             }
         }},
        {"values", [](SimConfig& c, const Value& v) { c.sweep.values = v.list(); }},
        // start/stop/count are collected as a group by parse_config
        {"start", [](SimConfig&, const Value&) {}},
        {"stop", [](SimConfig&, const Value&) {}},
        {"count", [](SimConfig&, const Value&) {}},
        {"component", [](SimConfig& c, const Value& v) { c.sweep.options.component = parse_component(v); }},
        {"window",
         [](SimConfig& c, const Value& v) {
             try {
                 c.sweep.options.window = parse_window(lower(v.text));
             } catch (const ConfigError& e) {
                 v.error(e.what());
             }
         }},
        {"min_prominence",
         [](SimConfig& c, const Value& v) {
             const double p = v.non_negative();
             if (p > 1.0) v.error("must be in [0, 1]");
             c.sweep.options.min_prominence = p;
         }},
    };
    sw.required = {{"parameter"}, {"values", "start"}};

    auto& run = s["run"];
    run.keys = {
        {"dt", [](SimConfig& c, const Value& v) { c.run.dt = v.positive(); }},
        {"duration", [](SimConfig& c, const Value& v) { c.run.duration = v.non_negative(); }},
        {"record_every",
         [](SimConfig& c, const Value& v) { c.run.record_every = static_cast<std::size_t>(v.count(1)); }},
        {"renormalize_every",
         [](SimConfig& c, const Value& v) { c.run.renormalize_every = static_cast<std::size_t>(v.count(0)); }},
    };
    run.required = {{"dt"}, {"duration"}};

    auto& out = s["output"];
    out.keys = {
        {"timeseries", [](SimConfig& c, const Value& v) { c.output.timeseries = v.string(); }},
        {"summary", [](SimConfig& c, const Value& v) { c.output.summary = v.string(); }},
        {"spectrum", [](SimConfig& c, const Value& v) { c.output.spectrum = v.string(); }},
        {"photon", [](SimConfig& c, const Value& v) { c.output.photon = v.string(); }},
        {"final_ovf", [](SimConfig& c, const Value& v) { c.output.final_ovf = v.string(); }},
        {"ovf_format",
         [](SimConfig& c, const Value& v) {
             const std::string f = lower(v.text);
             if (f == "text") c.output.ovf_format = ovf::Representation::text;
             else if (f == "binary4") c.output.ovf_format = ovf::Representation::binary4;
             else if (f == "binary8") c.output.ovf_format = ovf::Representation::binary8;
             else v.error("expected text, binary4 or binary8");
         }},
        {"map", [](SimConfig& c, const Value& v) { c.output.map = v.string(); }},
        {"points", [](SimConfig& c, const Value& v) { c.output.points = v.string(); }},
        {"spectrum_component", [](SimConfig& c, const Value& v) { c.output.spectrum_component = parse_component(v); }},
        {"window",
         [](SimConfig& c, const Value& v) {
             try {
                 c.output.window = parse_window(lower(v.text));
             } catch (const ConfigError& e) {
                 v.error(e.what());
             }
         }},
        {"min_prominence",
         [](SimConfig& c, const Value& v) {
             const double p = v.non_negative();
             if (p > 1.0) v.error("must be in [0, 1]");
             c.output.min_prominence = p;
         }},
    };
    return s;
}

}  // namespace

dicke::DickeParams DickeSection::resolved() const {
    dicke::DickeParams p = params;
    if (lambda_over_lc) p.lambda = *lambda_over_lc * dicke::lambda_critical(p);
    return p;
}

SimConfig parse_config(std::string_view text, const std::filesystem::path& base_dir) {
    static const auto specs = section_specs();
    SimConfig cfg;
    cfg.base_dir = base_dir;

    std::map<std::string, int> section_line;
    std::map<std::string, std::set<std::string>> seen;
    std::map<std::string, double> sweep_range;
    int sweep_range_line = 0;
    std::string current;
    int line_no = 0;

    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto nl = text.find('\n', pos);
        std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;

        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line.back() != ']') throw ConfigError("line " + std::to_string(line_no) + ": malformed section header");
            current = lower(trim(line.substr(1, line.size() - 2)));
            if (!specs.count(current))
                throw ConfigError("line " + std::to_string(line_no) + ": unknown section [" + current + "]");
            if (section_line.count(current))
                throw ConfigError("line " + std::to_string(line_no) + ": section [" + current + "] repeated");
            section_line[current] = line_no;
            if (current == "cavity") cfg.cavity.present = true;
            if (current == "excitation") cfg.excitation.present = true;
            if (current == "dicke") cfg.dicke.present = true;
            if (current == "sweep") cfg.sweep.present = true;
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos)
            throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");
        if (current.empty())
            throw ConfigError("line " + std::to_string(line_no) + ": key outside of any section");
        const std::string key = lower(trim(line.substr(0, eq)));
        const std::string_view value = trim(line.substr(eq + 1));
        const SectionSpec& spec = specs.at(current);
        const auto it = spec.keys.find(key);
        if (it == spec.keys.end()) fail(line_no, current, key, "unknown key");
        if (!seen[current].insert(key).second) fail(line_no, current, key, "duplicate key");
        const Value v{value, line_no, current, key};
        if (current == "sweep" && (key == "start" || key == "stop" || key == "count")) {
            sweep_range[key] = key == "count" ? v.count(1) : v.number();
            sweep_range_line = line_no;
            continue;
        }
        it->second(cfg, v);
    }

    auto missing = [&](const std::string& section) {
        const auto it = section_line.find(section);
        return it == section_line.end() ? 0 : it->second;
    };

    for (const auto& [name, line] : section_line) {
        for (const auto& group : specs.at(name).required) {
            const bool any = std::any_of(group.begin(), group.end(),
                                         [&](const std::string& k) { return seen[name].count(k) > 0; });
            if (!any) fail(line, name, "", "missing required key '" + group.front() + "'");
        }
    }
    if (!section_line.count("run")) throw ConfigError("missing required section [run]");

    if (cfg.dicke.present) {
        for (const char* other : {"mesh", "material", "fields", "cavity", "excitation"}) {
            if (section_line.count(other))
                fail(section_line[other], other, "", "cannot be combined with [dicke]");
        }
        if (seen["dicke"].count("lambda") && seen["dicke"].count("lambda_over_lc"))
            fail(missing("dicke"), "dicke", "", "give either lambda or lambda_over_lc, not both");
        try {
            cfg.dicke.resolved().validate();
        } catch (const ConfigError& e) {
            fail(missing("dicke"), "dicke", "", e.what());
        }
    } else {
        if (!section_line.count("mesh")) throw ConfigError("missing required section [mesh] (or [dicke])");
        if (!section_line.count("material")) throw ConfigError("missing required section [material] (or [dicke])");
        if (cfg.mesh.disc && !seen["mesh"].count("disc_radius"))
            fail(missing("mesh"), "mesh", "", "geometry = disc needs disc_radius");
        if (cfg.mesh.initial == InitialTexture::file && cfg.mesh.m0_file.empty())
            fail(missing("mesh"), "mesh", "", "initial = file needs m0_file");
        if (cfg.cavity.b_rms && !cfg.cavity.b_rms_file.empty())
            fail(missing("cavity"), "cavity", "", "give either b_rms or b_rms_file, not both");
        if (cfg.excitation.shape && !cfg.excitation.shape_file.empty())
            fail(missing("excitation"), "excitation", "", "give either shape or shape_file, not both");
        if (cfg.excitation.present &&
            (cfg.excitation.time_fn == TimeFunction::sinc || cfg.excitation.time_fn == TimeFunction::sine) &&
            !(cfg.excitation.omega > 0.0))
            fail(missing("excitation"), "excitation", "", "time_fn sinc/sine needs omega > 0");
    }

    if (cfg.sweep.present) {
        const bool listed = seen["sweep"].count("values") > 0;
        if (!sweep_range.empty()) {
            if (listed) fail(sweep_range_line, "sweep", "", "give either values or start/stop/count");
            if (sweep_range.size() != 3) fail(sweep_range_line, "sweep", "", "start, stop and count go together");
            const auto n = static_cast<int>(sweep_range["count"]);
            const double a = sweep_range["start"], b = sweep_range["stop"];
            cfg.sweep.values.clear();
            for (int k = 0; k < n; ++k)
                cfg.sweep.values.push_back(n == 1 ? a : a + (b - a) * static_cast<double>(k) / (n - 1));
        } else if (!listed) {
            fail(missing("sweep"), "sweep", "", "missing required key 'values'");
        }
        if (cfg.sweep.axis == SweepAxis::lambda && !cfg.dicke.present)
            fail(missing("sweep"), "sweep", "parameter", "lambda sweeps need a [dicke] section");
        if (cfg.sweep.axis == SweepAxis::omega_c && !cfg.cavity_enabled())
            fail(missing("sweep"), "sweep", "parameter", "omega_c sweeps need a cavity");
    }

    try {
        cfg.run.validate();
        if (!cfg.dicke.present) cfg.material.validate();
    } catch (const ConfigError& e) {
        throw ConfigError(std::string("invalid configuration: ") + e.what());
    }
    return cfg;
}

SimConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read config file '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    try {
        return parse_config(ss.str(), path.parent_path());
    } catch (const ConfigError& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
}

namespace {

FieldMap load_map(const SimConfig& cfg, const std::string& file, const Mesh& mesh) {
    std::filesystem::path p(file);
    if (p.is_relative()) p = cfg.base_dir / p;
    return ovf::map_to_mesh(ovf::read_file(p.string()), mesh);
}

EngineSetup build_dicke(const SimConfig& cfg, std::optional<std::pair<SweepAxis, double>> over) {
    const DickeSection& d = cfg.dicke;
    dicke::DickeParams p = d.resolved();
    if (over) {
        switch (over->first) {
            case SweepAxis::omega_c: p.omega_c = over->second; break;
            case SweepAxis::b_ext_z: p.omega_z = d.gamma * over->second; break;
            case SweepAxis::lambda: p.lambda = over->second; break;
        }
    }
    EngineSetup s = dicke::engine_setup(p, d.alpha, dicke::tilted_ground_state(d.tilt_deg), d.x0, d.p0, d.gamma, d.hbar);
    return s;
}

EngineSetup build(const SimConfig& cfg, std::optional<std::pair<SweepAxis, double>> over) {
    if (cfg.dicke.present) return build_dicke(cfg, over);

    const MeshSection& ms = cfg.mesh;
    EngineSetup s;
    s.mesh = Mesh(ms.nx, ms.ny, ms.nz, ms.dx, ms.dy, ms.dz);
    s.state = CellState(s.mesh, cfg.material.msat);
    if (ms.disc) set_disc_geometry(s.state, s.mesh, ms.disc_radius, cfg.material.msat);
    switch (ms.initial) {
        case InitialTexture::uniform: set_uniform(s.state, ms.m0); break;
        case InitialTexture::vortex: set_vortex(s.state, s.mesh, ms.polarity, ms.chirality, ms.core_radius); break;
        case InitialTexture::file: {
            const FieldMap m = load_map(cfg, ms.m0_file, s.mesh);
            for (std::size_t i = 0; i < s.state.size(); ++i)
                if (s.state.magnetic(i)) s.state.m[i] = m[i];
            break;
        }
    }
    s.material = cfg.material;
    s.terms.zeeman = true;
    s.terms.exchange = cfg.fields.exchange.value_or(cfg.material.aex > 0.0);
    s.terms.anisotropy = cfg.fields.anisotropy.value_or(cfg.material.ku1 != 0.0);
    s.terms.demag = cfg.fields.demag;
    s.demag_cell_limit = cfg.fields.demag_cell_limit;
    s.b_ext = cfg.fields.b_ext;

    if (cfg.excitation.present) {
        ExcitationSpec e;
        e.shape = cfg.excitation.shape ? FieldMap(s.mesh.cell_count(), *cfg.excitation.shape)
                                       : load_map(cfg, cfg.excitation.shape_file, s.mesh);
        e.amplitude_scale = cfg.excitation.amplitude_scale;
        e.time_fn = cfg.excitation.time_fn;
        e.omega = cfg.excitation.omega;
        s.excitation = std::move(e);
    }
    if (cfg.cavity.present) {
        CavityParams c;
        c.omega_c = cfg.cavity.omega_c;
        c.kappa = cfg.cavity.kappa;
        c.x0 = cfg.cavity.x0;
        c.p0 = cfg.cavity.p0;
        c.hbar = cfg.cavity.hbar;
        c.b_rms = cfg.cavity.b_rms ? FieldMap(s.mesh.cell_count(), *cfg.cavity.b_rms)
                                   : load_map(cfg, cfg.cavity.b_rms_file, s.mesh);
        s.cavity = std::move(c);
    }
    if (over) {
        switch (over->first) {
            case SweepAxis::omega_c:
                if (!s.cavity) throw ConfigError("omega_c sweeps need a cavity");
                s.cavity->omega_c = over->second;
                break;
            case SweepAxis::b_ext_z: s.b_ext.z = over->second; break;
            case SweepAxis::lambda: throw ConfigError("lambda sweeps need a [dicke] section");
        }
    }
    return s;
}

}  // namespace

EngineSetup build_setup(const SimConfig& config) { return build(config, std::nullopt); }

EngineSetup build_setup(const SimConfig& config, SweepAxis axis, double value) {
    return build(config, std::make_pair(axis, value));
}

}  // namespace cavimag
