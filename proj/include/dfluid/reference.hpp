#pragma once

#include <Eigen/Dense>
#include <vector>

#include "dfluid/calculus.hpp"
#include "dfluid/fields.hpp"
#include "dfluid/mesh.hpp"

// Serial reference implementations, independent of the mesh/triple machinery
// the production kernels use. The tests and the self-test suite compare the
// two paths; keep these simple and obviously-correct rather than fast.
namespace dfluid::reference {

// Advection term on a periodic regular grid written directly in the local
// vorticity/kinetic form (the staggered-grid update of Harlow and Welsh):
// horizontal face (i -> east j):
//   T = -(ω_+/2)(A_{i,N(i)} + A_{j,N(j)}) + (ω_-/2)(A_{i,S(i)} + A_{j,S(j)}) + Q_j - Q_i
// vertical face (i -> north j):
//   T = +(ω_R/2)(A_{i,E(i)} + A_{j,E(j)}) - (ω_L/2)(A_{i,W(i)} + A_{j,W(j)}) + Q_j - Q_i
// with ω the node circulation and Q_i = 2h^2 Σ_l A_il^2.
std::vector<Real> harlow_welsh_advection(const VelocityField& A);

// Dense-matrix oracles.
Eigen::MatrixXd dense_velocity(const VelocityField& A);
Eigen::MatrixXd dense_form1(const Form1& F);
Eigen::MatrixXd dense_commutator(const VelocityField& A, const VelocityField& B);
// A F - (A F)^T for the Lie-derivative lemma.
Eigen::MatrixXd dense_lie(const VelocityField& A, const Form1& F);

// Five-point vector Laplacian of the adjacent flat values on a periodic grid.
std::vector<Real> five_point_laplacian_flat(const VelocityField& A);

}  // namespace dfluid::reference
