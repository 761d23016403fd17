#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>
#include <Eigen/SparseLU>
#include <memory>
#include <vector>

#include "dfluid/core.hpp"
#include "dfluid/mesh.hpp"

namespace dfluid {

// Square sparse system shared by the pressure projection, the curve
// advection, and the Newton update:
//
//   [ M  G ] [x_F]   [b_F]        rows 0..n_f-1     momentum / Gram
//   [ D  0 ] [x_p] = [b_p]        rows n_f..n_f+N-1 null-row constraints
//
// where G is the discrete gradient (p_j - p_i per face) and D the divergence
// rows; the constraint row of `gauge_cell` is replaced by the gauge equation
// x_p[gauge_cell] = b_p[gauge_cell], removing the one redundant row.
class SaddleProblem {
public:
    using Triplet = Eigen::Triplet<Real>;

    explicit SaddleProblem(const MeshGeometry& mesh, Index gauge_cell = 0);

    Index size() const { return n_; }
    Index gauge_cell() const { return gauge_cell_; }

    // Constant blocks (gradient + constraints + gauge); append the momentum
    // block to a copy of these before solving.
    const std::vector<Triplet>& fixed_triplets() const { return fixed_; }

    // Solve with the given momentum-block triplets (rows/cols < n_faces).
    // Set `same_pattern` once the caller guarantees the momentum block's
    // structure matches the previous call; the symbolic factorization is
    // then reused.
    Eigen::VectorXd solve(const std::vector<Triplet>& momentum_block, const Eigen::VectorXd& rhs,
                          bool same_pattern);

    // Split form: factorize once, back-substitute many times.
    void factorize(const std::vector<Triplet>& momentum_block, bool same_pattern);
    bool factorized() const { return factorized_; }
    Eigen::VectorXd solve_factorized(const Eigen::VectorXd& rhs) const;

private:
    const MeshGeometry* mesh_;
    Index gauge_cell_;
    Index n_;
    std::vector<Triplet> fixed_;
    Eigen::SparseMatrix<Real> matrix_;
    Eigen::SparseLU<Eigen::SparseMatrix<Real>> lu_;
    bool analyzed_ = false;
    bool factorized_ = false;
};

}  // namespace dfluid
