#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "cavimag/cavity.hpp"
#include "cavimag/fields.hpp"
#include "cavimag/mesh.hpp"

namespace cavimag {

struct RunConfig {
    double dt = 0.0;        // s
    double duration = 0.0;  // s
    std::size_t record_every = 1;
    std::size_t renormalize_every = 1;  // 0 disables renormalization

    void validate() const;
    std::size_t step_count() const;
};

struct Record {
    double t;
    Vec3 m;          // spatial average
    double gamma;    // memory factor, 0 without cavity
    double overlap;  // weighted overlap, 0 without cavity
};

using TimeSeries = std::vector<Record>;

struct RunSummary {
    std::size_t steps = 0;
    std::size_t records = 0;
    double start_time = 0.0;
    double end_time = 0.0;
    double wall_seconds = 0.0;
    std::string wall_start;
    std::string wall_end;
    double max_norm_drift = 0.0;    // largest | |m|-1 | seen before renormalizing
    double final_norm_error = 0.0;
    bool cavity_enabled = false;
    bool kappa_overflow_regime = false;
};

struct RunResult {
    TimeSeries series;
    RunSummary summary;
};

/// Everything needed to build an Engine.
struct EngineSetup {
    Mesh mesh{1, 1, 1, 1e-9, 1e-9, 1e-9};
    CellState state;
    MaterialParams material;
    FieldTerms terms;
    Vec3 b_ext{};
    std::optional<ExcitationSpec> excitation;
    std::optional<CavityParams> cavity;  // present means cavity enabled
    std::size_t demag_cell_limit = kDefaultDemagCellLimit;
    int threads = 1;
};

/// dm/dt = -gamma/(1+alpha^2) [ m x B + alpha m x (m x B) ] per cell.
void llg_rhs_into(std::vector<Vec3>& out, const CellState& state, const FieldMap& field,
                  const MaterialParams& params, int threads = 1);
std::vector<Vec3> llg_rhs(const CellState& state, const FieldMap& field, const MaterialParams& params);

/// LLG time stepper with the cavity memory term.
///
/// Steps are classical RK4 on a fixed grid. Stage fields evaluate Gamma at the
/// stage time from the accumulators of the last accepted step; once the step is
/// accepted (and renormalized) the overlap of the new state is folded into the
/// accumulators at t + dt.
class Engine {
public:
    explicit Engine(EngineSetup setup);

    const Mesh& mesh() const { return mesh_; }
    const CellState& state() const { return state_; }
    CellState& mutable_state() { return state_; }
    const MaterialParams& material() const { return material_; }
    const FieldTerms& terms() const { return terms_; }
    bool cavity_enabled() const { return cavity_.has_value(); }
    const std::optional<CavityParams>& cavity() const { return cavity_; }
    const MemoryAccumulators& memory() const { return memory_; }
    double time() const { return time_; }
    int threads() const { return threads_; }
    void set_threads(int threads) { threads_ = threads < 1 ? 1 : threads; }

    /// Gamma at the current time; 0 without a cavity.
    double gamma_now() const;
    /// Overlap of the current state with b_rms; 0 without a cavity.
    double overlap_now() const;

    /// Full effective field (including the cavity term) at time t for the current state.
    FieldMap field_at(double t) const;

    /// One RK4 step, renormalization, then the memory update at t + dt.
    void step_rk4(double dt);
    void renormalize() { normalize(state_); }

    /// Advances floor(duration/dt) steps and records (t, <m>, Gamma, overlap)
    /// every record_every steps, starting with the initial state.
    RunResult run(const RunConfig& config, const std::function<void(const Record&)>& recorder = {});

    /// Restarts the cavity memory and the clock: the current state becomes t = 0.
    void reset_memory();

private:
    /// Returns the norm error of the raw RK4 result.
    double advance(double dt, double t_next, bool renormalize_now);
    void stage_derivative(const CellState& s, double t, std::vector<Vec3>& k);
    Record make_record() const;

    Mesh mesh_;
    CellState state_;
    MaterialParams material_;
    FieldTerms terms_;
    FieldSources sources_;
    std::optional<ExcitationSpec> excitation_;
    std::optional<CavityParams> cavity_;
    MemoryAccumulators memory_;
    double time_ = 0.0;
    int threads_ = 1;

    // RK4 work buffers
    CellState stage_;
    FieldMap field_;
    std::vector<Vec3> k1_, k2_, k3_, k4_;
};

/// Zeeman energy -sum msat_i V_c m_i . b, in joules.
double zeeman_energy(const CellState& state, const Mesh& mesh, const Vec3& b);

}  // namespace cavimag
