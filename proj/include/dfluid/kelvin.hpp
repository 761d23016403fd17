#pragma once

#include <vector>

#include "dfluid/fields.hpp"
#include "dfluid/mesh.hpp"
#include "dfluid/saddle.hpp"

namespace dfluid {

// Closed dual 1-chain sharing the velocity representation: the flux of the
// chain is +-1 across consecutive cells (Ω_i Γ_ij = ±1/2), real-valued after
// advection.
struct DiscreteCurve {
    VelocityField chain;
    std::vector<Index> seed_cells;  // construction metadata

    Index support_size(Real tol = 1e-14) const {
        Index n = 0;
        for (Real f : chain.flux)
            if (std::abs(f) > tol) ++n;
        return n;
    }
};

// Build Γ from a closed loop of pairwise-adjacent cells. Throws on a
// non-adjacent step, an open loop, or a repeated directed pair.
DiscreteCurve curve_from_cell_loop(const std::vector<Index>& cells, const MeshGeometry& mesh);

// C_Γ A = <<A-flat, Γ>>.
Real circulation(const VelocityField& A, const DiscreteCurve& curve);

// Weak trapezoidal advection: Γ' with
//   <<X-flat, (Γ'-Γ)/τ + ([A_k,Γ] + [A_next,Γ'])/2>> = 0  for all X in S.
// The constant part (w/τ plus the constraints) is factorized once per time
// step size; the small implicit pairing term is resolved by fixed-point
// iteration on that factorization.
class CurveAdvector {
public:
    explicit CurveAdvector(const MeshGeometry& mesh) : mesh_(&mesh), saddle_(mesh) {}
    DiscreteCurve advance(const DiscreteCurve& curve, const VelocityField& A_k,
                          const VelocityField& A_next, Real tau);

private:
    const MeshGeometry* mesh_;
    SaddleProblem saddle_;
    Real factored_tau_ = 0;
};

}  // namespace dfluid
