#pragma once

#include <vector>

#include "dfluid/calculus.hpp"
#include "dfluid/fields.hpp"
#include "dfluid/mesh.hpp"

namespace dfluid {

// The flat of a field in canonical form: values on adjacent pairs plus the
// two-form d(A-flat) on the corner triples (through the cached hinge
// vorticities). Individual two-away entries of A-flat are not materialized;
// they are ill-defined on simplicial meshes when a non-adjacent pair has
// several common neighbors around a hinge.
struct FlatAssembly {
    const MeshGeometry* mesh = nullptr;
    std::vector<Real> adjacent;   // per face, in the stored orientation
    std::vector<Real> vorticity;  // omega_DEC per hinge

    Real adjacent_entry(Index i, Index j) const {
        const Index f = mesh->face_between(i, j);
        if (f < 0) return 0;
        return mesh->orientation_sign(f, i) * adjacent[f];
    }
};

FlatAssembly flat_adjacent(const VelocityField& A);

// (dA-flat)_(mid,next,prev) = K * omega_DEC(hinge) on the corner triples.
Form2 d_flat_triples(const VelocityField& A);
Form2 d_flat_triples(const FlatAssembly& fa);

// <<A-flat, B>> using adjacent entries only (exact for B in S).
Real pair_flat(const VelocityField& A, const VelocityField& B);

// <<d A-flat, B, C>>; equals -<<A-flat, [B,C]>> where the full flat exists.
Real pair_dflat(const VelocityField& A, const VelocityField& B, const VelocityField& C);

// Per-hinge coefficient c_e with pair_dflat(X,B,C) = sum_e omega_X(e) c_e(B,C);
// the workhorse behind the weak advection equation and its linearization.
std::vector<Real> dflat_hinge_coefficients(const MeshGeometry& mesh, const VelocityField& B,
                                           const VelocityField& C);

// rho_f with <<X-flat, [B,C]>> = sum_f F^X_f rho_f.
std::vector<Real> commutator_pairing_functional(const MeshGeometry& mesh, const VelocityField& B,
                                                const VelocityField& C);

// Full one-form flat on a regular 2D grid (adjacent and two-away entries per
// the lattice formula); regular-grid cross checks only.
Form1 flat_regular_full(const VelocityField& A);

}  // namespace dfluid
