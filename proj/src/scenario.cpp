#include "dfluid/scenario.hpp"

#include <cmath>
#include <stdexcept>

#include "dfluid/io.hpp"

namespace dfluid {

Real taylor_vortex_psi(const Vec3& p, const Vec3& center, Real a, Real U, Real Lx, Real Ly,
                       bool periodic) {
    Real s = 0;
    const int images = periodic ? 1 : 0;
    for (int ix = -images; ix <= images; ++ix)
        for (int iy = -images; iy <= images; ++iy) {
            const Real dx = p.x - center.x - ix * Lx;
            const Real dy = p.y - center.y - iy * Ly;
            const Real r2 = (dx * dx + dy * dy) / (a * a);
            s += U * a * std::exp(0.5 * (1.0 - r2));
        }
    return s;
}

ScenarioSetup build_scenario(const RunConfig& cfg, const MeshGeometry& mesh) {
    ScenarioSetup setup;
    const bool periodic = mesh.boundary == BoundaryMode::Periodic;

    Real Lx = 1, Ly = 1;
    Vec3 center{0.5, 0.5, 0};
    if (mesh.grid) {
        Lx = mesh.grid->nx * mesh.grid->h;
        Ly = mesh.grid->ny * mesh.grid->h;
        center = {0.5 * Lx, 0.5 * Ly, 0};
    } else if (mesh.cell_count > 0) {
        Vec3 lo{1e300, 1e300, 0}, hi{-1e300, -1e300, 0};
        for (const Vec3& c : mesh.circumcenter) {
            lo.x = std::min(lo.x, c.x); lo.y = std::min(lo.y, c.y);
            hi.x = std::max(hi.x, c.x); hi.y = std::max(hi.y, c.y);
        }
        Lx = hi.x - lo.x;
        Ly = hi.y - lo.y;
        center = (lo + hi) * 0.5;
    }

    switch (cfg.scenario) {
        case ScenarioName::UniformFlow: {
            if (mesh.dimension == 2) {
                const Real U = cfg.strength;
                setup.velocity = discretize_from_streamfunction(
                    [U](const Vec3& p) { return U * p.y; }, mesh);
            } else {
                setup.velocity = discretize_from_face_samples(
                    [&](const Vec3&) { return Vec3{cfg.strength, 0, 0}; }, mesh);
            }
            break;
        }
        case ScenarioName::SingleTaylorVortex: {
            if (mesh.dimension != 2)
                throw std::invalid_argument("taylor vortex scenarios need a 2D mesh");
            const Real a = cfg.vortex_radius, U = cfg.strength;
            setup.velocity = discretize_from_streamfunction(
                [=](const Vec3& p) { return taylor_vortex_psi(p, center, a, U, Lx, Ly, periodic); },
                mesh);
            break;
        }
        case ScenarioName::TaylorVortexPair: {
            if (mesh.dimension != 2)
                throw std::invalid_argument("taylor vortex scenarios need a 2D mesh");
            const Real a = cfg.vortex_radius, U = cfg.strength, d = cfg.separation;
            const Vec3 c1{center.x - 0.5 * d, center.y, 0};
            const Vec3 c2{center.x + 0.5 * d, center.y, 0};
            setup.velocity = discretize_from_streamfunction(
                [=](const Vec3& p) {
                    return taylor_vortex_psi(p, c1, a, U, Lx, Ly, periodic) +
                           taylor_vortex_psi(p, c2, a, U, Lx, Ly, periodic);
                },
                mesh);
            break;
        }
        case ScenarioName::FromFile:
            setup.velocity = read_frame_fluxes(cfg.scenario_file, mesh);
            break;
    }

    for (const auto& loop : cfg.curves) setup.curves.push_back(curve_from_cell_loop(loop, mesh));
    return setup;
}

}  // namespace dfluid
