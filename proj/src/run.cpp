#include "dfluid/run.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "dfluid/dynamics.hpp"
#include "dfluid/io.hpp"
#include "dfluid/scenario.hpp"

namespace dfluid {

RunSummary run_simulation(const RunConfig& cfg, const MeshGeometry& mesh) {
    namespace fs = std::filesystem;
    fs::create_directories(cfg.output_dir);
    {
        std::ofstream rc(cfg.output_dir + "/resolved_config.txt");
        rc << render_config(cfg);
    }

    ScenarioSetup setup = build_scenario(cfg, mesh);
    Integrator integ(mesh, cfg.sim);
    CurveAdvector advector(mesh);

    SimState state;
    state.velocity = std::move(setup.velocity);
    // file- or sample-based initial data may carry divergence; project it out
    if (max_abs_divergence(state.velocity) > cfg.sim.newton_tol)
        state.velocity = integ.pressure_project(state.velocity);
    state.pressure.assign(mesh.cell_count, 0.0);

    EnergyCsv energy(cfg.output_dir + "/energy.csv");
    CirculationCsv circulation(cfg.output_dir + "/circulation.csv");

    RunSummary summary;
    summary.initial_energy = kinetic_energy(state.velocity);
    summary.min_energy = summary.max_energy = summary.initial_energy;

    auto emit = [&](const SimState& s) {
        const Real ke = kinetic_energy(s.velocity);
        const Real dv = max_abs_divergence(s.velocity);
        energy.row(s.step, s.time, ke, dv, s.last_newton_iters);
        for (std::size_t c = 0; c < setup.curves.size(); ++c)
            circulation.row(s.step, s.time, static_cast<int>(c),
                            dfluid::circulation(s.velocity, setup.curves[c]),
                            setup.curves[c].support_size());
        char name[64];
        std::snprintf(name, sizeof name, "/frame_%06ld.txt", s.step);
        write_frame(cfg.output_dir + name, s.velocity, s.scalars);
    };

    emit(state);
    for (long k = 0; k < cfg.sim.steps; ++k) {
        const VelocityField A_k = state.velocity;
        try {
            integ.step(state);
        } catch (const NonConvergenceError& e) {
            throw NonConvergenceError("step " + std::to_string(k + 1) + ": " + e.what(),
                                      e.last_residual, e.iterations);
        } catch (const SingularJacobianError& e) {
            throw SingularJacobianError("step " + std::to_string(k + 1) + ": " + e.what());
        }
        for (DiscreteCurve& curve : setup.curves)
            curve = advector.advance(curve, A_k, state.velocity, cfg.sim.tau);

        const Real ke = kinetic_energy(state.velocity);
        summary.min_energy = std::min(summary.min_energy, ke);
        summary.max_energy = std::max(summary.max_energy, ke);
        summary.max_divergence = std::max(summary.max_divergence, max_abs_divergence(state.velocity));
        summary.total_newton_iters += state.last_newton_iters;
        summary.max_newton_iters = std::max(summary.max_newton_iters, state.last_newton_iters);
        summary.steps_completed = state.step;
        if (state.step % cfg.sim.output_every == 0 || k + 1 == cfg.sim.steps) emit(state);
    }
    summary.final_energy = kinetic_energy(state.velocity);
    return summary;
}

}  // namespace dfluid
