#pragma once

#include <vector>

#include "dfluid/config.hpp"
#include "dfluid/fields.hpp"
#include "dfluid/kelvin.hpp"
#include "dfluid/mesh.hpp"

namespace dfluid {

struct ScenarioSetup {
    VelocityField velocity;
    std::vector<DiscreteCurve> curves;
};

// Taylor vortex streamfunction: psi(r) = U a exp((1 - r^2/a^2)/2), summed
// over the 3x3 nearest periodic images on periodic meshes.
Real taylor_vortex_psi(const Vec3& p, const Vec3& center, Real a, Real U, Real Lx, Real Ly,
                       bool periodic);

// Builds the initial field (exactly divergence-free through the
// streamfunction on 2D meshes) and instantiates the configured curves.
ScenarioSetup build_scenario(const RunConfig& cfg, const MeshGeometry& mesh);

}  // namespace dfluid
