#include "dfluid/kelvin.hpp"

#include <set>
#include <stdexcept>

#include "dfluid/flat.hpp"

namespace dfluid {

DiscreteCurve curve_from_cell_loop(const std::vector<Index>& cells, const MeshGeometry& mesh) {
    if (cells.size() < 2) throw std::invalid_argument("curve needs at least two cells");
    DiscreteCurve curve;
    curve.chain = VelocityField(mesh);
    curve.seed_cells = cells;
    std::set<std::pair<Index, Index>> seen;
    const std::size_t n = cells.size();
    for (std::size_t k = 0; k < n; ++k) {
        const Index a = cells[k], b = cells[(k + 1) % n];
        const Index f = mesh.face_between(a, b);
        if (f < 0) {
            if (k + 1 == n)
                throw std::invalid_argument("curve does not close: cells " + std::to_string(a) +
                                            " and " + std::to_string(b) + " are not adjacent");
            throw std::invalid_argument("curve cells " + std::to_string(a) + " and " +
                                        std::to_string(b) + " are not adjacent");
        }
        if (!seen.insert({a, b}).second)
            throw std::invalid_argument("curve repeats the directed pair " + std::to_string(a) +
                                        "->" + std::to_string(b));
        // Ω_a Γ_ab = 1/2  =>  flux contribution +1 in the a->b direction
        curve.chain.flux[f] += mesh.orientation_sign(f, a);
    }
    return curve;
}

Real circulation(const VelocityField& A, const DiscreteCurve& curve) {
    return pair_flat(A, curve.chain);
}

DiscreteCurve CurveAdvector::advance(const DiscreteCurve& curve, const VelocityField& A_k,
                                     const VelocityField& A_next, Real tau) {
    const MeshGeometry& m = *mesh_;
    const Index nf = m.face_count();

    if (!saddle_.factorized() || factored_tau_ != tau) {
        std::vector<SaddleProblem::Triplet> diag;
        diag.reserve(nf);
        for (Index f = 0; f < nf; ++f) diag.emplace_back(f, f, m.flat_weight[f] / tau);
        saddle_.factorize(diag, factored_tau_ != 0);
        factored_tau_ = tau;
    }

    // (w/τ) Γ' + Gμ = (w/τ) Γ − ½ ρ(A_k, Γ) − ½ ρ(A_next, Γ'), D Γ' = 0,
    // iterated on the right-hand side until the implicit half settles.
    const std::vector<Real> rho_k = commutator_pairing_functional(m, A_k, curve.chain);
    Eigen::VectorXd rhs0 = Eigen::VectorXd::Zero(nf + m.cell_count);
    for (Index f = 0; f < nf; ++f)
        rhs0[f] = m.flat_weight[f] * curve.chain.flux[f] / tau - 0.5 * rho_k[f];

    Real scale = 1e-300;
    for (Index f = 0; f < nf; ++f) scale = std::max(scale, std::abs(curve.chain.flux[f]));

    VelocityField next = curve.chain;
    Eigen::VectorXd x;
    for (int it = 0;; ++it) {
        if (it > 64)
            throw NonConvergenceError("curve advection fixed point did not settle", 0.0, it);
        const std::vector<Real> rho_n = commutator_pairing_functional(m, A_next, next);
        Eigen::VectorXd rhs = rhs0;
        for (Index f = 0; f < nf; ++f) rhs[f] -= 0.5 * rho_n[f];
        x = saddle_.solve_factorized(rhs);
        Real change = 0;
        for (Index f = 0; f < nf; ++f) {
            change = std::max(change, std::abs(x[f] - next.flux[f]));
            next.flux[f] = x[f];
        }
        if (change <= 1e-13 * scale) break;
    }

    DiscreteCurve out;
    out.chain = std::move(next);
    out.seed_cells = curve.seed_cells;
    return out;
}

}  // namespace dfluid
