#pragma once

#include <string>

#include "dfluid/config.hpp"
#include "dfluid/mesh.hpp"

namespace dfluid {

struct RunSummary {
    long steps_completed = 0;
    Real min_energy = 0, max_energy = 0, initial_energy = 0, final_energy = 0;
    Real max_divergence = 0;
    long total_newton_iters = 0;
    int max_newton_iters = 0;
};

// Execute a configured simulation: writes resolved_config.txt, energy.csv,
// circulation.csv (when curves are configured) and one field frame per
// output step into the output directory.
RunSummary run_simulation(const RunConfig& cfg, const MeshGeometry& mesh);

}  // namespace dfluid
