#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cavimag/analysis.hpp"
#include "cavimag/dicke.hpp"
#include "cavimag/fields.hpp"
#include "cavimag/integrator.hpp"
#include "cavimag/ovf.hpp"

namespace cavimag {

enum class InitialTexture { uniform, vortex, file };

struct MeshSection {
    int nx = 1, ny = 1, nz = 1;
    double dx = 0, dy = 0, dz = 0;
    bool disc = false;
    double disc_radius = 0.0;
    InitialTexture initial = InitialTexture::uniform;
    Vec3 m0{0, 0, 1};
    int polarity = 1;
    int chirality = 1;
    double core_radius = 0.0;
    std::string m0_file;
};

struct FieldsSection {
    Vec3 b_ext{};
    std::optional<bool> exchange;    // default: aex > 0
    std::optional<bool> anisotropy;  // default: ku1 != 0
    bool demag = false;
    std::size_t demag_cell_limit = kDefaultDemagCellLimit;
};

struct CavitySection {
    bool present = false;
    double omega_c = 0.0;
    double kappa = 0.0;
    double x0 = 0.0;
    double p0 = 0.0;
    double hbar = constants::hbar;
    std::optional<Vec3> b_rms;  // uniform over magnetic cells
    std::string b_rms_file;     // OVF map
};

struct ExcitationSection {
    bool present = false;
    std::optional<Vec3> shape;
    std::string shape_file;
    double amplitude_scale = 1.0;  // free proportionality factor
    TimeFunction time_fn = TimeFunction::none;
    double omega = 0.0;
};

/// Single-cell Dicke realization; replaces mesh, material, fields and cavity.
struct DickeSection {
    bool present = false;
    dicke::DickeParams params;
    std::optional<double> lambda_over_lc;  // when set, lambda = this * lambda_c
    double alpha = 0.01;
    double tilt_deg = 1.0;  // seed: m tilted from +z towards +x
    double x0 = 0.0;
    double p0 = 0.0;
    double gamma = constants::gamma_ll;
    double hbar = constants::hbar;

    dicke::DickeParams resolved() const;
};

struct SweepSection {
    bool present = false;
    SweepAxis axis = SweepAxis::b_ext_z;
    std::vector<double> values;
    SweepOptions options;
};

struct OutputSection {
    std::string timeseries = "table.csv";
    std::string summary = "summary.txt";
    std::string spectrum;  // empty: not written
    std::string photon;    // empty: not written
    std::string final_ovf;
    ovf::Representation ovf_format = ovf::Representation::binary8;
    std::string map = "map.csv";
    std::string points = "sweep_points.csv";
    int spectrum_component = 0;
    Window window = Window::none;
    double min_prominence = 0.1;
};

struct SimConfig {
    std::filesystem::path base_dir;  // relative file paths resolve against this
    MeshSection mesh;
    MaterialParams material;
    FieldsSection fields;
    CavitySection cavity;
    ExcitationSection excitation;
    DickeSection dicke;
    SweepSection sweep;
    RunConfig run;
    OutputSection output;

    bool cavity_enabled() const { return dicke.present || cavity.present; }
};

/// INI-style text: [section] headers, key = value, # comments. Keys are
/// case-insensitive. Errors carry the offending line number.
SimConfig parse_config(std::string_view text, const std::filesystem::path& base_dir = {});

/// Reads and parses a file; the message names the path when it cannot be read.
SimConfig load_config(const std::filesystem::path& path);

/// Materializes the engine inputs (mesh, initial state, maps from OVF files).
EngineSetup build_setup(const SimConfig& config);

/// Same, with one swept parameter overridden.
EngineSetup build_setup(const SimConfig& config, SweepAxis axis, double value);

}  // namespace cavimag
