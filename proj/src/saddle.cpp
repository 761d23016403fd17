#include "dfluid/saddle.hpp"

namespace dfluid {

SaddleProblem::SaddleProblem(const MeshGeometry& mesh, Index gauge_cell)
    : mesh_(&mesh), gauge_cell_(gauge_cell) {
    const Index nf = mesh.face_count();
    n_ = nf + mesh.cell_count;

    for (Index f = 0; f < nf; ++f) {
        const Face& face = mesh.faces[f];
        fixed_.emplace_back(f, nf + face.i, -1.0);
        fixed_.emplace_back(f, nf + face.j, 1.0);
    }
    for (Index i = 0; i < mesh.cell_count; ++i) {
        if (i == gauge_cell_) {
            fixed_.emplace_back(nf + i, nf + i, 1.0);
            continue;
        }
        for (Index f : mesh.faces_of(i))
            fixed_.emplace_back(nf + i, f, mesh.orientation_sign(f, i) / (2 * mesh.volume[i]));
    }
}

void SaddleProblem::factorize(const std::vector<Triplet>& momentum_block, bool same_pattern) {
    std::vector<Triplet> all = fixed_;
    all.insert(all.end(), momentum_block.begin(), momentum_block.end());
    matrix_.resize(n_, n_);
    matrix_.setFromTriplets(all.begin(), all.end());

    if (!analyzed_ || !same_pattern) {
        lu_.analyzePattern(matrix_);
        analyzed_ = true;
    }
    factorized_ = false;
    lu_.factorize(matrix_);
    if (lu_.info() != Eigen::Success)
        throw SingularJacobianError("sparse factorization failed (singular system)");
    factorized_ = true;
}

Eigen::VectorXd SaddleProblem::solve_factorized(const Eigen::VectorXd& rhs) const {
    Eigen::VectorXd x = lu_.solve(rhs);
    if (lu_.info() != Eigen::Success) throw SolveError("sparse back-substitution failed");
    return x;
}

Eigen::VectorXd SaddleProblem::solve(const std::vector<Triplet>& momentum_block,
                                     const Eigen::VectorXd& rhs, bool same_pattern) {
    factorize(momentum_block, same_pattern);
    return solve_factorized(rhs);
}

}  // namespace dfluid
