#include "dfluid/reference.hpp"

#include <stdexcept>

namespace dfluid::reference {

namespace {

struct GridIndexer {
    Index nx, ny;
    Real h;
    Index wrap(Index v, Index n) const { return (v % n + n) % n; }
    Index fx(Index x, Index y) const { return wrap(x, nx) + nx * wrap(y, ny); }
    Index fy(Index x, Index y) const { return nx * ny + wrap(x, nx) + nx * wrap(y, ny); }
};

}  // namespace

std::vector<Real> harlow_welsh_advection(const VelocityField& A) {
    const MeshGeometry& m = *A.mesh;
    if (!m.grid || !m.grid->periodic)
        throw std::invalid_argument("harlow_welsh_advection needs a periodic regular grid");
    const GridIndexer g{m.grid->nx, m.grid->ny, m.grid->h};
    const std::vector<Real>& F = A.flux;
    const Real h2 = g.h * g.h;
    const Real inv2h2 = 1.0 / (2 * h2);

    auto omega = [&](Index X, Index Y) {
        return F[g.fx(X - 1, Y - 1)] + F[g.fy(X, Y - 1)] - F[g.fx(X - 1, Y)] - F[g.fy(X - 1, Y - 1)];
    };
    auto Q = [&](Index x, Index y) {
        const Real q = F[g.fx(x, y)] * F[g.fx(x, y)] + F[g.fx(x - 1, y)] * F[g.fx(x - 1, y)] +
                       F[g.fy(x, y)] * F[g.fy(x, y)] + F[g.fy(x, y - 1)] * F[g.fy(x, y - 1)];
        return q * inv2h2;
    };

    std::vector<Real> T(m.faces.size());
    for (Index y = 0; y < g.ny; ++y)
        for (Index x = 0; x < g.nx; ++x) {
            {  // horizontal face (x,y) -> (x+1,y)
                const Real w_top = omega(x + 1, y + 1);
                const Real w_bot = omega(x + 1, y);
                const Real a_iN = F[g.fy(x, y)] * inv2h2;
                const Real a_jN = F[g.fy(x + 1, y)] * inv2h2;
                const Real a_iS = -F[g.fy(x, y - 1)] * inv2h2;
                const Real a_jS = -F[g.fy(x + 1, y - 1)] * inv2h2;
                T[g.fx(x, y)] = -0.5 * w_top * (a_iN + a_jN) + 0.5 * w_bot * (a_iS + a_jS) +
                                Q(x + 1, y) - Q(x, y);
            }
            {  // vertical face (x,y) -> (x,y+1)
                const Real w_right = omega(x + 1, y + 1);
                const Real w_left = omega(x, y + 1);
                const Real a_iE = F[g.fx(x, y)] * inv2h2;
                const Real a_jE = F[g.fx(x, y + 1)] * inv2h2;
                const Real a_iW = -F[g.fx(x - 1, y)] * inv2h2;
                const Real a_jW = -F[g.fx(x - 1, y + 1)] * inv2h2;
                T[g.fy(x, y)] = 0.5 * w_right * (a_iE + a_jE) - 0.5 * w_left * (a_iW + a_jW) +
                                Q(x, y + 1) - Q(x, y);
            }
        }
    return T;
}

Eigen::MatrixXd dense_velocity(const VelocityField& A) {
    const MeshGeometry& m = *A.mesh;
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(m.cell_count, m.cell_count);
    for (Index f = 0; f < m.face_count(); ++f) {
        const Index i = m.faces[f].i, j = m.faces[f].j;
        M(i, j) = A.entry_on_face(f, i);
        M(j, i) = A.entry_on_face(f, j);
    }
    return M;
}

Eigen::MatrixXd dense_form1(const Form1& F) {
    const MeshGeometry& m = *F.mesh;
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(m.cell_count, m.cell_count);
    for (const auto& [key, v] : F.entries) {
        const Index i = static_cast<Index>(key >> 32);
        const Index j = static_cast<Index>(key & 0xffffffffu);
        M(i, j) = v;
        M(j, i) = -v;
    }
    return M;
}

Eigen::MatrixXd dense_commutator(const VelocityField& A, const VelocityField& B) {
    const Eigen::MatrixXd a = dense_velocity(A), b = dense_velocity(B);
    return a * b - b * a;
}

Eigen::MatrixXd dense_lie(const VelocityField& A, const Form1& F) {
    const Eigen::MatrixXd a = dense_velocity(A), f = dense_form1(F);
    const Eigen::MatrixXd af = a * f;
    return af - af.transpose();
}

std::vector<Real> five_point_laplacian_flat(const VelocityField& A) {
    const MeshGeometry& m = *A.mesh;
    if (!m.grid || !m.grid->periodic)
        throw std::invalid_argument("five_point_laplacian_flat needs a periodic regular grid");
    const GridIndexer g{m.grid->nx, m.grid->ny, m.grid->h};
    const std::vector<Real>& F = A.flux;  // flat value = flux on a unit-ratio grid face
    const Real inv_h2 = 1.0 / (g.h * g.h);
    std::vector<Real> out(m.faces.size());
    for (Index y = 0; y < g.ny; ++y)
        for (Index x = 0; x < g.nx; ++x) {
            out[g.fx(x, y)] = inv_h2 * (F[g.fx(x + 1, y)] + F[g.fx(x - 1, y)] + F[g.fx(x, y + 1)] +
                                        F[g.fx(x, y - 1)] - 4 * F[g.fx(x, y)]);
            out[g.fy(x, y)] = inv_h2 * (F[g.fy(x + 1, y)] + F[g.fy(x - 1, y)] + F[g.fy(x, y + 1)] +
                                        F[g.fy(x, y - 1)] - 4 * F[g.fy(x, y)]);
        }
    return out;
}

}  // namespace dfluid::reference
