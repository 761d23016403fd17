#include <CLI11.hpp>
#include <cstdio>
#include <exception>

#include "dfluid/config.hpp"
#include "dfluid/io.hpp"
#include "dfluid/run.hpp"
#include "dfluid/selftest.hpp"

namespace {

constexpr int exit_ok = 0;
constexpr int exit_validation = 2;
constexpr int exit_nonconvergence = 3;
constexpr int exit_usage = 64;

int cmd_simulate(const std::string& config_path) {
    using namespace dfluid;
    RunConfig cfg;
    try {
        cfg = parse_config(config_path);
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return exit_validation;
    }
    try {
        const MeshGeometry mesh = build_mesh(cfg);
        const RunSummary s = run_simulation(cfg, mesh);
        std::printf("completed %ld steps\n", s.steps_completed);
        std::printf("energy: initial %s, final %s, range [%s, %s]\n",
                    format_real(s.initial_energy).c_str(), format_real(s.final_energy).c_str(),
                    format_real(s.min_energy).c_str(), format_real(s.max_energy).c_str());
        std::printf("max divergence: %s\n", format_real(s.max_divergence).c_str());
        std::printf("newton iterations: total %ld, max per step %d\n", s.total_newton_iters,
                    s.max_newton_iters);
        return exit_ok;
    } catch (const SolveError& e) {
        std::fprintf(stderr, "solver failure: %s\n", e.what());
        return exit_nonconvergence;
    } catch (const MeshError& e) {
        std::fprintf(stderr, "mesh error: %s\n", e.what());
        return exit_validation;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "validation error: %s\n", e.what());
        return exit_validation;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return exit_validation;
    }
}

int cmd_check_mesh(const std::string& mesh_path) {
    using namespace dfluid;
    try {
        const MeshGeometry m = load_mesh_file(mesh_path);
        const MeshQuality q = m.quality();
        std::printf("mesh ok: dimension %d, %d cells, %zu interior faces, %zu boundary faces, %zu hinges, %zu corner triples\n",
                    m.dimension, m.cell_count, m.faces.size(), m.boundary_faces.size(),
                    m.hinges.size(), m.triples.size());
        std::printf("quality: min dual edge %s (%s of diameter), min volume %s, min corner fraction %s\n",
                    format_real(q.min_dual_length).c_str(),
                    format_real(q.min_dual_over_diameter).c_str(),
                    format_real(q.min_volume).c_str(),
                    format_real(q.min_corner_fraction).c_str());
        return exit_ok;
    } catch (const MeshError& e) {
        std::fprintf(stderr, "mesh check failed: %s\n", e.what());
        return exit_validation;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return exit_validation;
    }
}

int cmd_selftest(const std::string& filter) {
    using namespace dfluid;
    try {
        const SelfTestReport report = selftest(filter);
        for (const auto& r : report.results)
            std::printf("[%s] %s: %s\n", r.passed ? "PASS" : "FAIL", r.name.c_str(),
                        r.detail.c_str());
        return report.all_passed() ? exit_ok : 1;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "selftest error: %s\n", e.what());
        return exit_validation;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"structure-preserving incompressible flow simulator"};
    app.require_subcommand(1);

    std::string config_path, mesh_path, filter;
    CLI::App* simulate = app.add_subcommand("simulate", "run a configured simulation");
    simulate->add_option("--config", config_path, "configuration file")->required();
    CLI::App* check = app.add_subcommand("check-mesh", "validate a mesh file");
    check->add_option("--mesh", mesh_path, "mesh file")->required();
    CLI::App* self = app.add_subcommand("selftest", "run the built-in oracle suite");
    self->add_option("--filter", filter, "select suites by substring");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return exit_usage;
    }

    if (simulate->parsed()) return cmd_simulate(config_path);
    if (check->parsed()) return cmd_check_mesh(mesh_path);
    return cmd_selftest(filter);
}
