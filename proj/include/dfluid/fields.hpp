#pragma once

#include <functional>
#include <unordered_map>
#include <vector>

#include "dfluid/core.hpp"
#include "dfluid/mesh.hpp"

namespace dfluid {

// Discrete 0-form: one value per cell.
using Form0 = std::vector<Real>;

// Element of the constrained velocity space S, stored as one flux per
// interior face: F_ij = 2 Ω_i A_ij with F_ij = -F_ji held structurally (a
// single scalar per unordered face, signed by the stored face orientation).
struct VelocityField {
    const MeshGeometry* mesh = nullptr;
    std::vector<Real> flux;  // per face, in the face's stored orientation

    VelocityField() = default;
    explicit VelocityField(const MeshGeometry& m) : mesh(&m), flux(m.faces.size(), 0.0) {}

    // A_ij for adjacent cells (0 when not adjacent).
    Real entry(Index i, Index j) const {
        const Index f = mesh->face_between(i, j);
        if (f < 0) return 0;
        return entry_on_face(f, i);
    }
    // A_{cell,other} given the face id.
    Real entry_on_face(Index f, Index cell) const {
        return mesh->orientation_sign(f, cell) * flux[f] / (2 * mesh->volume[cell]);
    }

    VelocityField& operator+=(const VelocityField& o);
    VelocityField& operator*=(Real s);
    friend VelocityField operator+(VelocityField a, const VelocityField& b) { return a += b; }
    friend VelocityField operator*(VelocityField a, Real s) { return a *= s; }
};

// Sparse Omega-antisymmetric matrix with support at graph distance <= 2
// (commutators of constrained fields land here). Entries are stored once per
// unordered pair, at the (min,max) orientation.
struct GeneralMatrixField {
    const MeshGeometry* mesh = nullptr;
    bool omega_antisymmetric = true;
    std::unordered_map<std::uint64_t, Real> entries;  // value X_{min,max}

    GeneralMatrixField() = default;
    explicit GeneralMatrixField(const MeshGeometry& m) : mesh(&m) {}

    Real entry(Index i, Index j) const {
        auto it = entries.find(pair_key(i, j));
        if (it == entries.end()) return 0;
        if (i < j) return it->second;
        return -(mesh->volume[j] / mesh->volume[i]) * it->second;
    }
    void add(Index i, Index j, Real v) {
        if (i < j) {
            entries[pair_key(i, j)] += v;
        } else {
            entries[pair_key(i, j)] += -(mesh->volume[i] / mesh->volume[j]) * v;
        }
    }
    // Largest violation of the declared support bound / antisymmetry flags.
    void validate_support() const;
};

// Exactly divergence-free 2D initialization: the flux through a face is the
// streamfunction difference between its endpoints.
VelocityField discretize_from_streamfunction(const std::function<Real(const Vec3&)>& psi,
                                             const MeshGeometry& mesh);

// Face-barycenter flux sampling A_ij = (v(x_ij), n_ij) |S_ij| / (2 Ω_i); the
// result generally needs a pressure projection to restore exact null rows.
VelocityField discretize_from_face_samples(const std::function<Vec3(const Vec3&)>& v,
                                           const MeshGeometry& mesh);

// (div A)_i = sum_j A_ij.
Form0 divergence(const VelocityField& A);
Real max_abs_divergence(const VelocityField& A);

// [A,B] = AB - BA; support reaches two cells away.
GeneralMatrixField commutator(const VelocityField& A, const VelocityField& B);

// tr(A M) for M = commutator-like fields.
Real trace_product(const VelocityField& A, const GeneralMatrixField& M);

// Flat-metric projection of a face field onto the null-row subspace S
// (equivalently: one pressure-Poisson solve); multiplier optionally returned.
VelocityField project_null_row(const VelocityField& A, Form0* multiplier = nullptr);

// Projection onto S in the flat-weighted Gram form: the unique Y in S with
// <<Z-flat, Y - X>> = 0 for all Z in S. Two-away entries of X are paired
// through the lattice flat on regular grids; on simplicial meshes X must be
// supported on adjacent pairs.
VelocityField project_to_S(const GeneralMatrixField& X);

// Projection of [B,C] onto S through the weak pairing
// <<Z-flat,[B,C]>> = -<<dZ-flat,B,C>>; valid on any mesh.
VelocityField project_commutator(const VelocityField& B, const VelocityField& C);

}  // namespace dfluid
