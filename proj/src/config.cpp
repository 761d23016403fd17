#include "dfluid/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

namespace dfluid {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

Real parse_real(const std::string& v, const std::string& key, int line) {
    try {
        std::size_t used = 0;
        const Real r = std::stod(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        return r;
    } catch (const std::exception&) {
        throw ConfigError("line " + std::to_string(line) + ": key '" + key +
                          "' needs a number, got '" + v + "'");
    }
}

long parse_long(const std::string& v, const std::string& key, int line) {
    try {
        std::size_t used = 0;
        const long r = std::stol(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        return r;
    } catch (const std::exception&) {
        throw ConfigError("line " + std::to_string(line) + ": key '" + key +
                          "' needs an integer, got '" + v + "'");
    }
}

}  // namespace

RunConfig parse_config_text(const std::string& text, const std::string& origin) {
    RunConfig cfg;
    std::map<std::string, std::pair<std::string, int>> kv;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(origin + " line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (kv.count(key))
            throw ConfigError(origin + " line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
        kv[key] = {val, lineno};
    }

    long curve_count = 0;
    bool boundary_given = false;
    for (const auto& [key, vl] : kv) {
        const std::string& v = vl.first;
        const int ln = vl.second;
        if (key == "mesh.kind") {
            if (v == "grid") cfg.mesh_kind = MeshKind::Grid;
            else if (v == "file") cfg.mesh_kind = MeshKind::File;
            else throw ConfigError("line " + std::to_string(ln) + ": mesh.kind must be grid or file");
        } else if (key == "mesh.nx") {
            cfg.nx = static_cast<Index>(parse_long(v, key, ln));
        } else if (key == "mesh.ny") {
            cfg.ny = static_cast<Index>(parse_long(v, key, ln));
        } else if (key == "mesh.h") {
            cfg.h = parse_real(v, key, ln);
        } else if (key == "mesh.file") {
            cfg.mesh_file = v;
        } else if (key == "mesh.boundary") {
            boundary_given = true;
            if (v == "periodic") cfg.boundary = BoundaryMode::Periodic;
            else if (v == "wall") cfg.boundary = BoundaryMode::Wall;
            else throw ConfigError("line " + std::to_string(ln) + ": mesh.boundary must be periodic or wall");
        } else if (key == "scenario.name") {
            if (v == "uniform_flow") cfg.scenario = ScenarioName::UniformFlow;
            else if (v == "single_taylor_vortex") cfg.scenario = ScenarioName::SingleTaylorVortex;
            else if (v == "taylor_vortex_pair") cfg.scenario = ScenarioName::TaylorVortexPair;
            else if (v == "from_file") cfg.scenario = ScenarioName::FromFile;
            else throw ConfigError("line " + std::to_string(ln) + ": unknown scenario '" + v + "'");
        } else if (key == "scenario.a") {
            cfg.vortex_radius = parse_real(v, key, ln);
        } else if (key == "scenario.U") {
            cfg.strength = parse_real(v, key, ln);
        } else if (key == "scenario.d") {
            cfg.separation = parse_real(v, key, ln);
        } else if (key == "scenario.file") {
            cfg.scenario_file = v;
        } else if (key == "sim.dt") {
            cfg.sim.tau = parse_real(v, key, ln);
        } else if (key == "sim.steps") {
            cfg.sim.steps = parse_long(v, key, ln);
        } else if (key == "sim.newton_tol") {
            cfg.sim.newton_tol = parse_real(v, key, ln);
        } else if (key == "sim.max_iters") {
            cfg.sim.max_newton_iters = static_cast<int>(parse_long(v, key, ln));
        } else if (key == "sim.jacobian") {
            if (v == "full") cfg.sim.jacobian_mode = JacobianMode::Full;
            else if (v == "diagonal") cfg.sim.jacobian_mode = JacobianMode::Diagonal;
            else throw ConfigError("line " + std::to_string(ln) + ": sim.jacobian must be full or diagonal");
        } else if (key == "sim.viscosity") {
            cfg.sim.viscosity = parse_real(v, key, ln);
        } else if (key == "output.dir") {
            cfg.output_dir = v;
        } else if (key == "output.every") {
            cfg.sim.output_every = parse_long(v, key, ln);
        } else if (key == "curve.N") {
            curve_count = parse_long(v, key, ln);
        } else if (key.rfind("curve.", 0) == 0 && key.size() > 6 && key.substr(key.size() - 6) == ".cells") {
            // handled after curve.N below
        } else {
            throw ConfigError("line " + std::to_string(ln) + ": unknown key '" + key + "'");
        }
    }

    for (long c = 0; c < curve_count; ++c) {
        const std::string key = "curve." + std::to_string(c) + ".cells";
        auto it = kv.find(key);
        if (it == kv.end()) throw ConfigError("missing key '" + key + "'");
        std::vector<Index> cells;
        std::stringstream ss(it->second.first);
        std::string tok;
        while (std::getline(ss, tok, ','))
            cells.push_back(static_cast<Index>(parse_long(trim(tok), key, it->second.second)));
        cfg.curves.push_back(std::move(cells));
    }
    for (const auto& [key, vl] : kv) {
        if (key.rfind("curve.", 0) != 0 || key == "curve.N") continue;
        const std::string idx = key.substr(6, key.size() - 12);
        long c = -1;
        try {
            c = std::stol(idx);
        } catch (const std::exception&) {
        }
        if (c < 0 || c >= curve_count)
            throw ConfigError("line " + std::to_string(vl.second) + ": unknown key '" + key + "'");
    }

    // validation
    if (cfg.mesh_kind == MeshKind::Grid) {
        if (!kv.count("mesh.nx") || !kv.count("mesh.ny") || !kv.count("mesh.h"))
            throw ConfigError("grid mesh needs mesh.nx, mesh.ny and mesh.h");
        if (cfg.nx < 1 || cfg.ny < 1) throw ConfigError("mesh.nx and mesh.ny must be >= 1");
        if (cfg.h <= 0) throw ConfigError("mesh.h must be positive");
    } else {
        if (cfg.mesh_file.empty()) throw ConfigError("mesh.kind = file needs mesh.file");
        if (boundary_given && cfg.boundary != BoundaryMode::Wall)
            throw ConfigError("file meshes support only wall boundaries");
        cfg.boundary = BoundaryMode::Wall;
    }
    if (cfg.scenario == ScenarioName::FromFile && cfg.scenario_file.empty())
        throw ConfigError("scenario.name = from_file needs scenario.file");
    if (cfg.scenario != ScenarioName::FromFile && !cfg.scenario_file.empty())
        throw ConfigError("scenario.file is only valid with scenario.name = from_file");
    if (cfg.vortex_radius <= 0) throw ConfigError("scenario.a must be positive");
    if (cfg.separation < 0) throw ConfigError("scenario.d must be >= 0");
    try {
        cfg.sim.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    return cfg;
}

RunConfig parse_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str(), path);
}

std::string render_config(const RunConfig& cfg) {
    std::ostringstream out;
    out.precision(17);
    out << "mesh.kind = " << (cfg.mesh_kind == MeshKind::Grid ? "grid" : "file") << "\n";
    if (cfg.mesh_kind == MeshKind::Grid) {
        out << "mesh.nx = " << cfg.nx << "\n";
        out << "mesh.ny = " << cfg.ny << "\n";
        out << "mesh.h = " << cfg.h << "\n";
        out << "mesh.boundary = "
            << (cfg.boundary == BoundaryMode::Periodic ? "periodic" : "wall") << "\n";
    } else {
        out << "mesh.file = " << cfg.mesh_file << "\n";
        out << "mesh.boundary = wall\n";
    }
    const char* names[] = {"uniform_flow", "single_taylor_vortex", "taylor_vortex_pair",
                           "from_file"};
    out << "scenario.name = " << names[static_cast<int>(cfg.scenario)] << "\n";
    out << "scenario.a = " << cfg.vortex_radius << "\n";
    out << "scenario.U = " << cfg.strength << "\n";
    out << "scenario.d = " << cfg.separation << "\n";
    if (!cfg.scenario_file.empty()) out << "scenario.file = " << cfg.scenario_file << "\n";
    out << "sim.dt = " << cfg.sim.tau << "\n";
    out << "sim.steps = " << cfg.sim.steps << "\n";
    out << "sim.newton_tol = " << cfg.sim.newton_tol << "\n";
    out << "sim.max_iters = " << cfg.sim.max_newton_iters << "\n";
    out << "sim.jacobian = "
        << (cfg.sim.jacobian_mode == JacobianMode::Full ? "full" : "diagonal") << "\n";
    out << "sim.viscosity = " << cfg.sim.viscosity << "\n";
    out << "output.dir = " << cfg.output_dir << "\n";
    out << "output.every = " << cfg.sim.output_every << "\n";
    out << "curve.N = " << cfg.curves.size() << "\n";
    for (std::size_t c = 0; c < cfg.curves.size(); ++c) {
        out << "curve." << c << ".cells = ";
        for (std::size_t k = 0; k < cfg.curves[c].size(); ++k)
            out << (k ? "," : "") << cfg.curves[c][k];
        out << "\n";
    }
    return out.str();
}

MeshGeometry build_mesh(const RunConfig& cfg) {
    if (cfg.mesh_kind == MeshKind::Grid)
        return build_regular_grid(cfg.nx, cfg.ny, cfg.h, cfg.boundary);
    return load_mesh_file(cfg.mesh_file);
}

}  // namespace dfluid
