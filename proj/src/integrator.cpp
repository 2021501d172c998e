#include "cavimag/integrator.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <iomanip>
#include <sstream>

#include "cavimag/error.hpp"
#include "cavimag/parallel.hpp"

namespace cavimag {

void RunConfig::validate() const {
    if (!(dt > 0.0)) throw ConfigError("run: dt must be > 0");
    if (!(duration >= 0.0)) throw ConfigError("run: duration must be >= 0");
    if (record_every < 1) throw ConfigError("run: record_every must be >= 1");
}

std::size_t RunConfig::step_count() const {
    // tolerate duration = k*dt landing one ulp below the integer
    return static_cast<std::size_t>(std::floor(duration / dt + 1e-9));
}

void llg_rhs_into(std::vector<Vec3>& out, const CellState& state, const FieldMap& field,
                  const MaterialParams& params, int threads) {
    out.resize(state.size());
    const double pre = -params.gamma / (1.0 + params.alpha * params.alpha);
    const double alpha = params.alpha;
    parallel_for(state.size(), threads, [&](std::size_t i) {
        if (!state.magnetic(i)) {
            out[i] = {};
            return;
        }
        const Vec3& m = state.m[i];
        const Vec3 mxb = cross(m, field[i]);
        out[i] = (mxb + cross(m, mxb) * alpha) * pre;
    });
}

std::vector<Vec3> llg_rhs(const CellState& state, const FieldMap& field, const MaterialParams& params) {
    std::vector<Vec3> out;
    llg_rhs_into(out, state, field, params);
    return out;
}

double zeeman_energy(const CellState& state, const Mesh& mesh, const Vec3& b) {
    double e = 0.0;
    for (std::size_t i = 0; i < state.size(); ++i)
        if (state.magnetic(i)) e -= state.msat[i] * mesh.cell_volume() * dot(state.m[i], b);
    return e;
}

Engine::Engine(EngineSetup setup)
    : mesh_(setup.mesh),
      state_(std::move(setup.state)),
      material_(setup.material),
      terms_(setup.terms),
      excitation_(std::move(setup.excitation)),
      cavity_(std::move(setup.cavity)),
      threads_(std::max(1, setup.threads)) {
    material_.validate();
    if (state_.m.size() != mesh_.cell_count() || state_.msat.size() != mesh_.cell_count())
        throw ConfigError("engine: cell state does not match the mesh");
    if (state_.magnetic_count() == 0) throw ConfigError("engine: mesh has no magnetic cells");
    normalize(state_);

    sources_.b_ext = setup.b_ext;
    sources_.demag_cell_limit = setup.demag_cell_limit;
    if (terms_.demag && mesh_.cell_count() > setup.demag_cell_limit)
        throw ConfigError("demag: mesh has " + std::to_string(mesh_.cell_count()) +
                          " cells, above the direct-sum limit of " + std::to_string(setup.demag_cell_limit) +
                          "; disable demag or shrink the mesh");

    if (excitation_) {
        if (excitation_->shape.size() != mesh_.cell_count())
            throw ConfigError("excitation: shape map does not match the mesh");
        terms_.excitation = excitation_->time_fn != TimeFunction::none;
    } else {
        terms_.excitation = false;
    }

    if (cavity_) {
        cavity_->cell_volume = mesh_.cell_volume();
        cavity_->validate();
        if (cavity_->b_rms.size() != mesh_.cell_count())
            throw ConfigError("cavity: b_rms map does not match the mesh");
        terms_.cavity = true;
    } else {
        terms_.cavity = false;
    }
}

double Engine::gamma_now() const { return cavity_ ? memory_factor(memory_, time_, *cavity_) : 0.0; }

double Engine::overlap_now() const { return cavity_ ? weighted_overlap(state_, cavity_->b_rms, mesh_) : 0.0; }

FieldMap Engine::field_at(double t) const {
    FieldSources src = sources_;
    if (excitation_) src.excitation = &*excitation_;
    if (cavity_) {
        src.b_rms = &cavity_->b_rms;
        src.cavity_gamma = memory_factor(memory_, t, *cavity_);
    }
    return effective_field(state_, mesh_, material_, terms_, src, t, threads_);
}

void Engine::stage_derivative(const CellState& s, double t, std::vector<Vec3>& k) {
    FieldSources src = sources_;
    if (excitation_) src.excitation = &*excitation_;
    if (cavity_) {
        src.b_rms = &cavity_->b_rms;
        src.cavity_gamma = memory_factor(memory_, t, *cavity_);
    }
    effective_field_into(field_, s, mesh_, material_, terms_, src, t, threads_);
    llg_rhs_into(k, s, field_, material_, threads_);
}

void Engine::step_rk4(double dt) { advance(dt, time_ + dt, true); }

double Engine::advance(double dt, double t_next, bool renormalize_now) {
    if (!(dt > 0.0)) throw SimulationError("step_rk4: dt must be > 0");
    const double t = time_;
    const std::size_t n = state_.size();
    stage_ = state_;

    auto combine = [&](const std::vector<Vec3>& k, double h) {
        parallel_for(n, threads_, [&](std::size_t i) { stage_.m[i] = state_.m[i] + k[i] * h; });
    };

    stage_derivative(state_, t, k1_);
    combine(k1_, 0.5 * dt);
    stage_derivative(stage_, t + 0.5 * dt, k2_);
    combine(k2_, 0.5 * dt);
    stage_derivative(stage_, t + 0.5 * dt, k3_);
    combine(k3_, dt);
    stage_derivative(stage_, t + dt, k4_);

    const double w = dt / 6.0;
    parallel_for(n, threads_, [&](std::size_t i) {
        if (!state_.magnetic(i)) return;
        state_.m[i] += (k1_[i] + k2_[i] * 2.0 + k3_[i] * 2.0 + k4_[i]) * w;
    });
    time_ = t_next;

    const double drift = max_norm_error(state_);
    if (renormalize_now) normalize(state_);
    // right-endpoint sample: the accepted state at t + dt
    if (cavity_) update_memory(memory_, weighted_overlap(state_, cavity_->b_rms, mesh_), time_, dt, *cavity_);
    return drift;
}

Record Engine::make_record() const {
    return {time_, average_magnetization(state_), gamma_now(), overlap_now()};
}

void Engine::reset_memory() {
    cavimag::reset_memory(memory_);
    time_ = 0.0;
}

static std::string wall_clock_string(std::chrono::system_clock::time_point tp) {
    const std::time_t tt = std::chrono::system_clock::to_time_t(tp);
    std::tm tm{};
    localtime_r(&tt, &tm);
    std::ostringstream os;
    os << std::put_time(&tm, "%Y-%m-%d %H:%M:%S");
    return os.str();
}

RunResult Engine::run(const RunConfig& config, const std::function<void(const Record&)>& recorder) {
    config.validate();
    RunResult result;
    RunSummary& sum = result.summary;
    sum.cavity_enabled = cavity_enabled();
    sum.start_time = time_;

    const auto wall0 = std::chrono::system_clock::now();
    const auto mono0 = std::chrono::steady_clock::now();
    sum.wall_start = wall_clock_string(wall0);

    auto emit = [&] {
        const Record r = make_record();
        result.series.push_back(r);
        if (recorder) recorder(r);
    };
    emit();

    const std::size_t steps = config.step_count();
    const double t0 = time_;
    for (std::size_t k = 1; k <= steps; ++k) {
        const bool renorm = config.renormalize_every > 0 && k % config.renormalize_every == 0;
        // pin the grid to t0 + k dt so long runs do not accumulate rounding in t
        const double drift = advance(config.dt, t0 + static_cast<double>(k) * config.dt, renorm);
        sum.max_norm_drift = std::max(sum.max_norm_drift, drift);
        if (k % config.record_every == 0) emit();
    }

    sum.steps = steps;
    sum.records = result.series.size();
    sum.end_time = time_;
    sum.final_norm_error = max_norm_error(state_);
    sum.kappa_overflow_regime = memory_.overflow_regime;
    const auto wall1 = std::chrono::system_clock::now();
    sum.wall_end = wall_clock_string(wall1);
    sum.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - mono0).count();
    return result;
}

}  // namespace cavimag
