#include "dfluid/fields.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "dfluid/flat.hpp"
#include "dfluid/par.hpp"
#include "dfluid/saddle.hpp"

namespace dfluid {

VelocityField& VelocityField::operator+=(const VelocityField& o) {
    if (mesh != o.mesh) throw std::invalid_argument("field mesh mismatch");
    for (std::size_t f = 0; f < flux.size(); ++f) flux[f] += o.flux[f];
    return *this;
}

VelocityField& VelocityField::operator*=(Real s) {
    for (Real& v : flux) v *= s;
    return *this;
}

void GeneralMatrixField::validate_support() const {
    for (const auto& [key, v] : entries) {
        (void)v;
        const Index i = static_cast<Index>(key >> 32);
        const Index j = static_cast<Index>(key & 0xffffffffu);
        if (mesh->adjacent(i, j)) continue;
        bool two_away = false;
        for (Index f : mesh->faces_of(i)) {
            const Index k = mesh->other_cell(f, i);
            if (mesh->adjacent(k, j)) two_away = true;
        }
        if (!two_away)
            throw std::invalid_argument("matrix field entry outside the two-away support class");
    }
}

VelocityField discretize_from_streamfunction(const std::function<Real(const Vec3&)>& psi,
                                             const MeshGeometry& mesh) {
    if (mesh.dimension != 2)
        throw std::invalid_argument("streamfunction initialization needs a 2D mesh");
    VelocityField A(mesh);
    par::parallel_for(mesh.face_count(), [&](std::ptrdiff_t f) {
        const Face& face = mesh.faces[f];
        // endpoints ordered so that positive flux flows i -> j:
        // with tangent t = rot90(n), flux = psi(end) - psi(start)
        const Vec3 t{-face.normal.y, face.normal.x, 0};
        const Vec3 p0 = face.center - t * (0.5 * face.area);
        const Vec3 p1 = face.center + t * (0.5 * face.area);
        A.flux[f] = psi(p1) - psi(p0);
    });
    return A;
}

VelocityField discretize_from_face_samples(const std::function<Vec3(const Vec3&)>& v,
                                           const MeshGeometry& mesh) {
    VelocityField A(mesh);
    par::parallel_for(mesh.face_count(), [&](std::ptrdiff_t f) {
        const Face& face = mesh.faces[f];
        A.flux[f] = dot(v(face.center), face.normal) * face.area;
    });
    return A;
}

Form0 divergence(const VelocityField& A) {
    const MeshGeometry& m = *A.mesh;
    Form0 div(m.cell_count, 0.0);
    par::parallel_for(m.cell_count, [&](std::ptrdiff_t i) {
        Real s = 0;
        for (Index f : m.faces_of(static_cast<Index>(i)))
            s += m.orientation_sign(f, static_cast<Index>(i)) * A.flux[f];
        div[i] = s / (2 * m.volume[i]);
    });
    return div;
}

Real max_abs_divergence(const VelocityField& A) {
    Form0 d = divergence(A);
    Real mx = 0;
    for (Real v : d) mx = std::max(mx, std::abs(v));
    return mx;
}

GeneralMatrixField commutator(const VelocityField& A, const VelocityField& B) {
    if (A.mesh != B.mesh) throw std::invalid_argument("commutator mesh mismatch");
    const MeshGeometry& m = *A.mesh;
    GeneralMatrixField X(m);
    for (Index i = 0; i < m.cell_count; ++i) {
        for (Index fik : m.faces_of(i)) {
            const Index k = m.other_cell(fik, i);
            const Real a_ik = A.entry_on_face(fik, i);
            const Real b_ik = B.entry_on_face(fik, i);
            for (Index fkj : m.faces_of(k)) {
                const Index j = m.other_cell(fkj, k);
                if (j == i || i > j) continue;  // each unordered pair once, from the smaller side
                const Real a_kj = A.entry_on_face(fkj, k);
                const Real b_kj = B.entry_on_face(fkj, k);
                X.add(i, j, a_ik * b_kj - b_ik * a_kj);
            }
        }
    }
    X.omega_antisymmetric = true;
    return X;
}

namespace {

VelocityField solve_gram(const MeshGeometry& m, const std::vector<Real>& b, Form0* multiplier) {
    SaddleProblem saddle(m);
    const Index nf = m.face_count();
    std::vector<SaddleProblem::Triplet> diag;
    diag.reserve(nf);
    for (Index f = 0; f < nf; ++f) diag.emplace_back(f, f, m.flat_weight[f]);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(nf + m.cell_count);
    for (Index f = 0; f < nf; ++f) rhs[f] = b[f];
    const Eigen::VectorXd x = saddle.solve(diag, rhs, false);
    VelocityField out(m);
    for (Index f = 0; f < nf; ++f) out.flux[f] = x[f];
    if (multiplier) {
        multiplier->resize(m.cell_count);
        for (Index i = 0; i < m.cell_count; ++i) (*multiplier)[i] = x[nf + i];
    }
    return out;
}

}  // namespace

VelocityField project_null_row(const VelocityField& A, Form0* multiplier) {
    const MeshGeometry& m = *A.mesh;
    std::vector<Real> b(m.face_count());
    for (Index f = 0; f < m.face_count(); ++f) b[f] = m.flat_weight[f] * A.flux[f];
    return solve_gram(m, b, multiplier);
}

VelocityField project_to_S(const GeneralMatrixField& X) {
    const MeshGeometry& m = *X.mesh;
    std::vector<Real> b(m.face_count(), 0.0);
    for (const auto& [key, v] : X.entries) {
        (void)v;
        const Index p = static_cast<Index>(key >> 32);
        const Index q = static_cast<Index>(key & 0xffffffffu);
        const Index f = m.face_between(p, q);
        if (f >= 0) {
            // adjacent entry: <<E_f-flat, X>> picks up w_f F^X_f
            b[f] += m.flat_weight[f] * 2 * m.volume[p] * X.entry(p, q) * m.orientation_sign(f, p);
            continue;
        }
        if (!m.grid)
            throw std::invalid_argument(
                "project_to_S of two-away entries is only defined on regular grids; "
                "use project_commutator");
        // two-away entry: pair against the lattice flat averaged over the
        // routes, Z-flat_pq = (2h^2/R) sum_k (Z_pk + Z_kq)
        std::vector<Index> routes;
        for (Index fc : m.faces_of(p)) {
            const Index k = m.other_cell(fc, p);
            if (m.adjacent(k, q)) routes.push_back(k);
        }
        if (routes.empty()) throw std::invalid_argument("matrix entry outside the two-away class");
        const Real h2 = m.grid->h * m.grid->h;
        const Real lead = 2 * m.volume[p] * X.entry(p, q) * (2 * h2 / routes.size());
        for (Index k : routes) {
            const Index fpk = m.face_between(p, k);
            const Index fkq = m.face_between(k, q);
            b[fpk] += lead * m.orientation_sign(fpk, p) / (2 * m.volume[p]);
            b[fkq] += lead * m.orientation_sign(fkq, k) / (2 * m.volume[k]);
        }
    }
    return solve_gram(m, b, nullptr);
}

VelocityField project_commutator(const VelocityField& B, const VelocityField& C) {
    const MeshGeometry& m = *B.mesh;
    return solve_gram(m, commutator_pairing_functional(m, B, C), nullptr);
}

Real trace_product(const VelocityField& A, const GeneralMatrixField& M) {
    const MeshGeometry& m = *A.mesh;
    Real tr = 0;
    for (Index f = 0; f < m.face_count(); ++f) {
        const Index i = m.faces[f].i, j = m.faces[f].j;
        const Real a_ij = A.entry_on_face(f, i);
        const Real a_ji = A.entry_on_face(f, j);
        tr += a_ij * M.entry(j, i) + a_ji * M.entry(i, j);
    }
    return tr;
}

}  // namespace dfluid
