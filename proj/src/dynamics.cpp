#include "dfluid/dynamics.hpp"

#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>

#include "dfluid/calculus.hpp"
#include "dfluid/par.hpp"
#include "dfluid/reference.hpp"

namespace dfluid {

namespace {

// Cached face id of the unordered pair {a,b} within a corner triple.
inline Index triple_face(const CornerTriple& t, Index a, Index b) {
    if (a == t.mid || b == t.mid) {
        const Index other = (a == t.mid) ? b : a;
        return other == t.next ? t.face_mid_next : t.face_mid_prev;
    }
    return t.face_next_prev;
}

Eigen::SparseMatrix<Real, Eigen::RowMajor> assemble_flux_laplacian(const MeshGeometry& m) {
    std::vector<Eigen::Triplet<Real>> trips;
    // curl-curl part: (δd α)_f = w_f Σ_e (|e|/|S_e|) σ_f ω(e)
    for (const Hinge& h : m.hinges) {
        const Real we = h.edge_length / h.dual_area;
        for (std::size_t a = 0; a < h.faces.size(); ++a)
            for (std::size_t b = 0; b < h.faces.size(); ++b) {
                const Index f = h.faces[a], g = h.faces[b];
                trips.emplace_back(f, g,
                                   -m.flat_weight[f] * we * h.face_sign[a] * h.face_sign[b] *
                                       m.flat_weight[g]);
            }
    }
    // grad-div part on fluxes: (dδ α)_f = Σ_i s_{i,f} s_{i,g} F_g / Ω_i
    for (Index i = 0; i < m.cell_count; ++i)
        for (Index f : m.faces_of(i))
            for (Index g : m.faces_of(i))
                trips.emplace_back(f, g,
                                   -Real(m.orientation_sign(f, i)) * m.orientation_sign(g, i) /
                                       m.volume[i]);
    Eigen::SparseMatrix<Real, Eigen::RowMajor> L(m.face_count(), m.face_count());
    L.setFromTriplets(trips.begin(), trips.end());
    return L;
}

struct AdvectionScratch {
    FlatAssembly fa;
    std::vector<Real> Q;
};

AdvectionScratch advection_scratch(const VelocityField& A) {
    const MeshGeometry& m = *A.mesh;
    AdvectionScratch s;
    s.fa = flat_adjacent(A);
    s.Q.resize(m.cell_count);
    par::parallel_for(m.cell_count, [&](std::ptrdiff_t i) {
        Real q = 0;
        for (Index f : m.faces_of(static_cast<Index>(i)))
            q += m.flat_weight[f] * A.flux[f] * A.flux[f];
        s.Q[i] = q / (2 * m.volume[i]);
    });
    return s;
}

std::vector<Real> advection_from_scratch(const VelocityField& A, const AdvectionScratch& s,
                                         bool include_gradient_part = true) {
    const MeshGeometry& m = *A.mesh;
    std::vector<Real> T(m.faces.size());
    par::parallel_for(m.face_count(), [&](std::ptrdiff_t ff) {
        const Index f = static_cast<Index>(ff);
        const Index i = m.faces[f].i, j = m.faces[f].j;
        Real acc = include_gradient_part ? s.Q[j] - s.Q[i] : 0.0;
        for (Index k = m.face_triple_offset[f]; k < m.face_triple_offset[f + 1]; ++k) {
            const CornerTriple& t = m.triples[m.face_triple[k]];
            const Index cells[3] = {t.mid, t.next, t.prev};
            Index z = -1;
            for (Index c : cells)
                if (c != i && c != j) z = c;
            const Real V = t.coeff * s.fa.vorticity[t.hinge];
            const Index fiz = triple_face(t, i, z);
            const Index fjz = triple_face(t, j, z);
            if (fiz >= 0)
                acc += permutation_sign(i, z, j, t.mid, t.next, t.prev) * V * A.entry_on_face(fiz, i);
            if (fjz >= 0)
                acc -= permutation_sign(j, z, i, t.mid, t.next, t.prev) * V * A.entry_on_face(fjz, j);
        }
        T[f] = acc;
    });
    return T;
}

}  // namespace

void SimConfig::validate() const {
    if (tau <= 0) throw std::invalid_argument("time step must be positive");
    if (newton_tol <= 0) throw std::invalid_argument("newton tolerance must be positive");
    if (max_newton_iters < 1) throw std::invalid_argument("max newton iterations must be >= 1");
    if (viscosity < 0) throw std::invalid_argument("viscosity must be >= 0");
    if (steps < 0) throw std::invalid_argument("step count must be >= 0");
    if (output_every < 1) throw std::invalid_argument("output cadence must be >= 1");
}

Real kinetic_energy(const VelocityField& A) { return 0.5 * pair_flat(A, A); }

std::vector<Real> advection_term(const VelocityField& A, bool include_gradient_part) {
    return advection_from_scratch(A, advection_scratch(A), include_gradient_part);
}

std::vector<Real> viscosity_term(const VelocityField& A, Real nu) {
    const MeshGeometry& m = *A.mesh;
    std::vector<Real> out(m.faces.size(), 0.0);
    if (nu == 0) return out;
    const auto L = assemble_flux_laplacian(m);
    Eigen::Map<const Eigen::VectorXd> F(A.flux.data(), A.flux.size());
    Eigen::VectorXd v = nu * (L * F);
    for (Index f = 0; f < m.face_count(); ++f) out[f] = v[f];
    return out;
}

Residual residual(const VelocityField& A_k, const VelocityField& A_next, const Form0& pressure,
                  const SimConfig& cfg) {
    if (A_k.mesh != A_next.mesh) throw std::invalid_argument("residual mesh mismatch");
    const MeshGeometry& m = *A_k.mesh;
    Residual r;
    r.momentum.resize(m.faces.size());
    const std::vector<Real> Tk = advection_term(A_k);
    const std::vector<Real> Tn = advection_term(A_next);
    std::vector<Real> visc(m.faces.size(), 0.0);
    if (cfg.viscosity > 0) {
        VelocityField mid(m);
        for (Index f = 0; f < m.face_count(); ++f)
            mid.flux[f] = 0.5 * (A_k.flux[f] + A_next.flux[f]);
        visc = viscosity_term(mid, cfg.viscosity);
    }
    for (Index f = 0; f < m.face_count(); ++f) {
        const Index i = m.faces[f].i, j = m.faces[f].j;
        r.momentum[f] = m.flat_weight[f] * (A_next.flux[f] - A_k.flux[f]) / cfg.tau +
                        0.5 * (Tk[f] + Tn[f]) + (pressure[j] - pressure[i]) - visc[f];
    }
    r.constraint = divergence(A_next);
    return r;
}

// ---------------------------------------------------------------------------

Integrator::Integrator(const MeshGeometry& mesh, const SimConfig& cfg)
    : mesh_(&mesh), cfg_(cfg), saddle_(mesh), projection_saddle_(mesh) {
    cfg_.validate();
    lap_flux_ = assemble_flux_laplacian(mesh);
}

Eigen::VectorXd Integrator::residual_vector(const VelocityField& A_k, const std::vector<Real>& T_k,
                                            const Eigen::VectorXd& x) const {
    const MeshGeometry& m = *mesh_;
    const Index nf = m.face_count();
    VelocityField A_next(m);
    for (Index f = 0; f < nf; ++f) A_next.flux[f] = x[f];

    const std::vector<Real> Tn =
        cfg_.reference_advection
            ? reference::harlow_welsh_advection(A_next)
            : advection_from_scratch(A_next, advection_scratch(A_next),
                                     cfg_.advection_gradient_part);

    Eigen::VectorXd R(nf + m.cell_count);
    Eigen::VectorXd visc = Eigen::VectorXd::Zero(nf);
    if (cfg_.viscosity > 0) {
        Eigen::VectorXd mid(nf);
        for (Index f = 0; f < nf; ++f) mid[f] = 0.5 * (A_k.flux[f] + x[f]);
        visc = cfg_.viscosity * (lap_flux_ * mid);
    }
    for (Index f = 0; f < nf; ++f) {
        const Index i = m.faces[f].i, j = m.faces[f].j;
        R[f] = m.flat_weight[f] * (x[f] - A_k.flux[f]) / cfg_.tau + 0.5 * (T_k[f] + Tn[f]) +
               (x[nf + j] - x[nf + i]) - visc[f];
    }
    for (Index i = 0; i < m.cell_count; ++i) {
        if (i == saddle_.gauge_cell()) {
            R[nf + i] = x[nf + i];  // pressure gauge row
            continue;
        }
        Real div = 0;
        for (Index f : m.faces_of(i)) div += m.orientation_sign(f, i) * x[f];
        R[nf + i] = div / (2 * m.volume[i]);
    }
    return R;
}

std::vector<SaddleProblem::Triplet> Integrator::momentum_jacobian(const Eigen::VectorXd& x) const {
    const MeshGeometry& m = *mesh_;
    const Index nf = m.face_count();
    VelocityField A(m);
    for (Index f = 0; f < nf; ++f) A.flux[f] = x[f];
    const FlatAssembly fa = flat_adjacent(A);

    std::vector<SaddleProblem::Triplet> trips;
    const bool diag_only = cfg_.jacobian_mode == JacobianMode::Diagonal;
    auto add = [&](Index r, Index c, Real v) {
        if (!diag_only || r == c) trips.emplace_back(r, c, v);
    };

    for (Index f = 0; f < nf; ++f) {
        const Index i = m.faces[f].i, j = m.faces[f].j;
        add(f, f, m.flat_weight[f] / cfg_.tau);

        // d(ι_A A-flat): Q_j - Q_i
        if (cfg_.advection_gradient_part) {
            for (Index g : m.faces_of(j)) add(f, g, 0.5 * m.flat_weight[g] * x[g] / m.volume[j]);
            for (Index g : m.faces_of(i)) add(f, g, -0.5 * m.flat_weight[g] * x[g] / m.volume[i]);
        }

        // ι_A dA-flat through the corner triples
        for (Index k = m.face_triple_offset[f]; k < m.face_triple_offset[f + 1]; ++k) {
            const CornerTriple& t = m.triples[m.face_triple[k]];
            const Index cells[3] = {t.mid, t.next, t.prev};
            Index z = -1;
            for (Index c : cells)
                if (c != i && c != j) z = c;
            const Real V = t.coeff * fa.vorticity[t.hinge];
            const Index fiz = triple_face(t, i, z);
            const Index fjz = triple_face(t, j, z);
            const int si = permutation_sign(i, z, j, t.mid, t.next, t.prev);
            const int sj = permutation_sign(j, z, i, t.mid, t.next, t.prev);
            Real omega_coef = 0;
            if (fiz >= 0) {
                add(f, fiz, 0.5 * si * V * m.orientation_sign(fiz, i) / (2 * m.volume[i]));
                omega_coef += si * A.entry_on_face(fiz, i);
            }
            if (fjz >= 0) {
                add(f, fjz, -0.5 * sj * V * m.orientation_sign(fjz, j) / (2 * m.volume[j]));
                omega_coef -= sj * A.entry_on_face(fjz, j);
            }
            if (omega_coef != 0) {
                const Hinge& h = m.hinges[t.hinge];
                for (std::size_t r = 0; r < h.faces.size(); ++r)
                    add(f, h.faces[r],
                        0.5 * omega_coef * t.coeff * h.face_sign[r] * m.flat_weight[h.faces[r]]);
            }
        }
    }
    if (cfg_.viscosity > 0) {
        for (Index f = 0; f < nf; ++f)
            for (Eigen::SparseMatrix<Real, Eigen::RowMajor>::InnerIterator it(lap_flux_, f); it;
                 ++it)
                add(f, static_cast<Index>(it.col()), -0.5 * cfg_.viscosity * it.value());
    }
    return trips;
}

void Integrator::step(SimState& state) {
    const MeshGeometry& m = *mesh_;
    const Index nf = m.face_count();
    if (state.pressure.empty()) state.pressure.assign(m.cell_count, 0.0);

    const VelocityField A_k = state.velocity;
    const std::vector<Real> T_k = cfg_.reference_advection
                                      ? reference::harlow_welsh_advection(A_k)
                                      : advection_term(A_k, cfg_.advection_gradient_part);

    Eigen::VectorXd x(nf + m.cell_count);
    for (Index f = 0; f < nf; ++f) x[f] = A_k.flux[f];
    for (Index i = 0; i < m.cell_count; ++i) x[nf + i] = state.pressure[i];

    Eigen::VectorXd R = residual_vector(A_k, T_k, x);
    Real rnorm = R.lpNorm<Eigen::Infinity>();
    int iters = 0;
    // Modified Newton: the factorized Jacobian is kept across iterations and
    // steps; it is rebuilt at the current iterate whenever progress stalls.
    // The convergence test always uses the true residual.
    bool fresh = false;
    while (rnorm > cfg_.newton_tol) {
        if (iters >= cfg_.max_newton_iters)
            throw NonConvergenceError("newton iteration did not converge (residual " +
                                          std::to_string(rnorm) + ")",
                                      rnorm, iters);
        if (!saddle_.factorized()) {
            saddle_.factorize(momentum_jacobian(x), pattern_cached_);
            pattern_cached_ = true;
            fresh = true;
        }
        const Eigen::VectorXd dx = saddle_.solve_factorized(-R);
        Real alpha = 1.0;
        Eigen::VectorXd x_new, R_new;
        Real rnorm_new = 0;
        for (int damp = 0; damp <= 8; ++damp) {
            x_new = x + alpha * dx;
            R_new = residual_vector(A_k, T_k, x_new);
            rnorm_new = R_new.lpNorm<Eigen::Infinity>();
            if (rnorm_new < rnorm || damp == 8) break;
            alpha *= 0.5;
        }
        // a stale operator that converges slowly (or not at all) is replaced
        // by a fresh linearization before the step is accepted
        if (!fresh && rnorm_new > 0.25 * rnorm) {
            saddle_.factorize(momentum_jacobian(x), pattern_cached_);
            fresh = true;
            continue;
        }
        x = x_new;
        R = R_new;
        rnorm = rnorm_new;
        fresh = false;
        ++iters;
    }

    VelocityField A_next(m);
    for (Index f = 0; f < nf; ++f) A_next.flux[f] = x[f];
    Form0 p(m.cell_count);
    for (Index i = 0; i < m.cell_count; ++i) p[i] = x[nf + i];
    if (cfg_.pressure_gauge == PressureGauge::ZeroMean) {
        Real num = 0, den = 0;
        for (Index i = 0; i < m.cell_count; ++i) {
            num += m.volume[i] * p[i];
            den += m.volume[i];
        }
        const Real mean = num / den;
        for (Real& v : p) v -= mean;
    }

    if (!state.scalars.empty()) {
        VelocityField A_mid(m);
        for (Index f = 0; f < nf; ++f) A_mid.flux[f] = 0.5 * (A_k.flux[f] + A_next.flux[f]);
        for (Form0& phi : state.scalars) phi = advect_scalar(A_mid, phi, cfg_.tau);
    }

    state.velocity = A_next;
    state.pressure = p;
    state.last_newton_iters = iters;
    ++state.step;
    state.time = state.step * cfg_.tau;
}

VelocityField Integrator::pressure_project(const VelocityField& A, Form0* pressure_out) {
    const MeshGeometry& m = *mesh_;
    const Index nf = m.face_count();
    std::vector<SaddleProblem::Triplet> diag;
    diag.reserve(nf);
    for (Index f = 0; f < nf; ++f) diag.emplace_back(f, f, m.flat_weight[f]);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(nf + m.cell_count);
    for (Index f = 0; f < nf; ++f) rhs[f] = m.flat_weight[f] * A.flux[f];
    const Eigen::VectorXd x = projection_saddle_.solve(diag, rhs, projection_cached_);
    projection_cached_ = true;
    VelocityField out(m);
    for (Index f = 0; f < nf; ++f) out.flux[f] = x[f];
    if (pressure_out) {
        pressure_out->resize(m.cell_count);
        for (Index i = 0; i < m.cell_count; ++i) (*pressure_out)[i] = x[nf + i];
    }
    return out;
}

Form0 Integrator::advect_scalar(const VelocityField& A_mid, const Form0& phi, Real tau) const {
    const MeshGeometry& m = *mesh_;
    std::vector<Eigen::Triplet<Real>> plus, minus;
    for (Index i = 0; i < m.cell_count; ++i) {
        plus.emplace_back(i, i, 1.0);
        minus.emplace_back(i, i, 1.0);
        for (Index f : m.faces_of(i)) {
            const Index j = m.other_cell(f, i);
            const Real a = A_mid.entry_on_face(f, i);
            plus.emplace_back(i, j, 0.5 * tau * a);
            minus.emplace_back(i, j, -0.5 * tau * a);
        }
    }
    Eigen::SparseMatrix<Real> Mp(m.cell_count, m.cell_count), Mm(m.cell_count, m.cell_count);
    Mp.setFromTriplets(plus.begin(), plus.end());
    Mm.setFromTriplets(minus.begin(), minus.end());
    Eigen::Map<const Eigen::VectorXd> ph(phi.data(), phi.size());
    Eigen::VectorXd rhs = Mm * ph;
    Eigen::SparseLU<Eigen::SparseMatrix<Real>> lu;
    lu.compute(Mp);
    if (lu.info() != Eigen::Success) throw SolveError("scalar advection factorization failed");
    Eigen::VectorXd sol = lu.solve(rhs);
    if (lu.info() != Eigen::Success) throw SolveError("scalar advection solve failed");
    return Form0(sol.data(), sol.data() + sol.size());
}

// ---------------------------------------------------------------------------

Real DiagnosticQ::max_row_sum_deviation() const {
    return (q.rowwise().sum().array() - 1.0).abs().maxCoeff();
}

Real DiagnosticQ::omega_orthogonality_drift(const MeshGeometry& mesh) const {
    Eigen::VectorXd om(mesh.cell_count);
    for (Index i = 0; i < mesh.cell_count; ++i) om[i] = mesh.volume[i];
    const Eigen::MatrixXd lhs = q.transpose() * om.asDiagonal() * q;
    return (lhs - Eigen::MatrixXd(om.asDiagonal())).norm();
}

DiagnosticQ advance_configuration(const DiagnosticQ& q, const VelocityField& A_k, Real tau) {
    const MeshGeometry& m = *A_k.mesh;
    std::vector<Eigen::Triplet<Real>> trips;
    for (Index i = 0; i < m.cell_count; ++i)
        for (Index f : m.faces_of(i))
            trips.emplace_back(i, m.other_cell(f, i), A_k.entry_on_face(f, i));
    Eigen::SparseMatrix<Real> A(m.cell_count, m.cell_count);
    A.setFromTriplets(trips.begin(), trips.end());
    DiagnosticQ out;
    out.q = q.q - tau * (A * q.q);
    return out;
}

}  // namespace dfluid
