#include "dfluid/flat.hpp"

#include <stdexcept>

#include "dfluid/par.hpp"

namespace dfluid {

FlatAssembly flat_adjacent(const VelocityField& A) {
    const MeshGeometry& m = *A.mesh;
    FlatAssembly fa;
    fa.mesh = &m;
    fa.adjacent.resize(m.faces.size());
    // A-flat_ij = A_ij Ω_i (2|e_ij|/|S_ij|) = F_ij |e_ij|/|S_ij|
    par::parallel_for(m.face_count(),
                      [&](std::ptrdiff_t f) { fa.adjacent[f] = m.flat_weight[f] * A.flux[f]; });
    fa.vorticity.resize(m.hinges.size());
    par::parallel_for(static_cast<std::ptrdiff_t>(m.hinges.size()), [&](std::ptrdiff_t e) {
        const Hinge& h = m.hinges[e];
        Real s = 0;
        for (std::size_t r = 0; r < h.faces.size(); ++r)
            s += h.face_sign[r] * fa.adjacent[h.faces[r]];
        fa.vorticity[e] = s;
    });
    return fa;
}

Form2 d_flat_triples(const FlatAssembly& fa) {
    const MeshGeometry& m = *fa.mesh;
    Form2 f = Form2::on_triples(m);
    par::parallel_for(static_cast<std::ptrdiff_t>(m.triples.size()), [&](std::ptrdiff_t t) {
        f.triple_value[t] = m.triples[t].coeff * fa.vorticity[m.triples[t].hinge];
    });
    return f;
}

Form2 d_flat_triples(const VelocityField& A) { return d_flat_triples(flat_adjacent(A)); }

Real pair_flat(const VelocityField& A, const VelocityField& B) {
    if (A.mesh != B.mesh) throw std::invalid_argument("pair_flat mesh mismatch");
    const MeshGeometry& m = *A.mesh;
    Real s = 0;
    for (Index f = 0; f < m.face_count(); ++f) s += m.flat_weight[f] * A.flux[f] * B.flux[f];
    return s;
}

Real pair_dflat(const VelocityField& A, const VelocityField& B, const VelocityField& C) {
    if (A.mesh != B.mesh || B.mesh != C.mesh) throw std::invalid_argument("pair_dflat mesh mismatch");
    const MeshGeometry& m = *A.mesh;
    const FlatAssembly fa = flat_adjacent(A);
    const std::vector<Real> c = dflat_hinge_coefficients(m, B, C);
    Real s = 0;
    for (std::size_t e = 0; e < m.hinges.size(); ++e) s += fa.vorticity[e] * c[e];
    return s;
}

std::vector<Real> dflat_hinge_coefficients(const MeshGeometry& mesh, const VelocityField& B,
                                           const VelocityField& C) {
    std::vector<Real> coeff(mesh.hinges.size(), 0.0);
    // Accumulate per hinge: sum over its triples of the pair2 contribution
    // per unit vorticity.
    for (const CornerTriple& t : mesh.triples) {
        const Index cells[3] = {t.mid, t.next, t.prev};
        Real s = 0;
        for (int a = 0; a < 3; ++a) {
            const Index x = cells[a];
            const Index y = cells[(a + 1) % 3], z = cells[(a + 2) % 3];
            if (!mesh.adjacent(x, y) || !mesh.adjacent(x, z)) continue;
            const int sgn = permutation_sign(x, y, z, t.mid, t.next, t.prev);
            s += 2 * mesh.volume[x] * sgn *
                 (B.entry(x, y) * C.entry(x, z) - B.entry(x, z) * C.entry(x, y));
        }
        coeff[t.hinge] += t.coeff * s;
    }
    return coeff;
}

std::vector<Real> commutator_pairing_functional(const MeshGeometry& mesh, const VelocityField& B,
                                                const VelocityField& C) {
    const std::vector<Real> c = dflat_hinge_coefficients(mesh, B, C);
    std::vector<Real> rho(mesh.faces.size(), 0.0);
    // <<X-flat,[B,C]>> = -<<dX-flat,B,C>> = -sum_e omega_X(e) c_e
    par::parallel_for(mesh.face_count(), [&](std::ptrdiff_t f) {
        Real s = 0;
        for (Index k = mesh.face_hinge_offset[f]; k < mesh.face_hinge_offset[f + 1]; ++k)
            s += mesh.face_hinge_sign[k] * c[mesh.face_hinge[k]];
        rho[f] = -mesh.flat_weight[f] * s;
    });
    return rho;
}

Form1 flat_regular_full(const VelocityField& A) {
    const MeshGeometry& m = *A.mesh;
    if (!m.grid) throw std::invalid_argument("flat_regular_full needs a regular grid");
    const Real h2 = m.grid->h * m.grid->h;
    Form1 out(m);
    for (Index f = 0; f < m.face_count(); ++f)
        out.set(m.faces[f].i, m.faces[f].j, 2 * h2 * A.entry_on_face(f, m.faces[f].i));
    const auto& stencil = m.two_away_stencil();
    for (Index i = 0; i < m.cell_count; ++i)
        for (Index j : stencil[i]) {
            if (i > j || m.adjacent(i, j)) continue;
            Real s = 0;
            for (Index fc : m.faces_of(i)) {
                const Index k = m.other_cell(fc, i);
                if (!m.adjacent(k, j)) continue;
                s += A.entry_on_face(fc, i) + A.entry(k, j);
            }
            out.set(i, j, h2 * s);
        }
    return out;
}

}  // namespace dfluid
