#pragma once

#include <string>
#include <vector>

#include "dfluid/dynamics.hpp"
#include "dfluid/mesh.hpp"

namespace dfluid {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class MeshKind { Grid, File };
enum class ScenarioName { UniformFlow, SingleTaylorVortex, TaylorVortexPair, FromFile };

struct RunConfig {
    MeshKind mesh_kind = MeshKind::Grid;
    Index nx = 0, ny = 0;
    Real h = 0;
    BoundaryMode boundary = BoundaryMode::Periodic;
    std::string mesh_file;

    ScenarioName scenario = ScenarioName::UniformFlow;
    Real vortex_radius = 0.1;   // scenario.a
    Real strength = 0.5;        // scenario.U
    Real separation = 0.3;      // scenario.d
    std::string scenario_file;  // from_file initial state

    SimConfig sim;

    std::string output_dir = "out";
    std::vector<std::vector<Index>> curves;

    bool operator==(const RunConfig&) const = default;
};

// Flat "key = value" file with '#' comments. Unknown keys are rejected by
// name; parse errors carry the line number. Defaults are applied for any key
// not present.
RunConfig parse_config(const std::string& path);
RunConfig parse_config_text(const std::string& text, const std::string& origin = "<string>");

// The effective configuration, echoed in the same format it is parsed from.
std::string render_config(const RunConfig& cfg);

MeshGeometry build_mesh(const RunConfig& cfg);

}  // namespace dfluid
