#include "dfluid/calculus.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dfluid {

Real Form2::value(Index i, Index j, Index k) const {
    if (i == j || j == k || i == k) return 0;
    if (source) {
        return source->entry(i, j) + source->entry(j, k) + source->entry(k, i);
    }
    const Index t = mesh->triple_of_set(i, j, k);
    if (t < 0) return 0;
    const CornerTriple& ct = mesh->triples[t];
    return permutation_sign(i, j, k, ct.mid, ct.next, ct.prev) * triple_value[t];
}

Real integrate0(const Form0& f, const MeshGeometry& mesh) {
    Real s = 0;
    for (Index i = 0; i < mesh.cell_count; ++i) s += mesh.volume[i] * f[i];
    return s;
}

Form1 d0(const Form0& f, const MeshGeometry& mesh) {
    Form1 out(mesh);
    const auto& stencil = mesh.two_away_stencil();
    for (Index i = 0; i < mesh.cell_count; ++i)
        for (Index j : stencil[i])
            if (i < j) out.set(i, j, f[j] - f[i]);
    return out;
}

Form2 d1(const Form1& f) {
    return Form2::derivative_of(*f.mesh, f);
}

Form0 contract1(const VelocityField& A, const Form1& f) {
    if (A.mesh != f.mesh) throw std::invalid_argument("contract1 mesh mismatch");
    const MeshGeometry& m = *A.mesh;
    Form0 out(m.cell_count, 0.0);
    for (Index i = 0; i < m.cell_count; ++i) {
        Real s = 0;
        for (Index fc : m.faces_of(i)) {
            const Index j = m.other_cell(fc, i);
            s += A.entry_on_face(fc, i) * f.entry(i, j);
        }
        out[i] = s;
    }
    return out;
}

Form1 contract2(const VelocityField& A, const Form2& f) {
    if (A.mesh != f.mesh) throw std::invalid_argument("contract2 mesh mismatch");
    const MeshGeometry& m = *A.mesh;
    Form1 out(m);
    if (f.tabulated()) {
        // scatter per canonical triple; each unordered output pair once
        for (std::size_t t = 0; t < m.triples.size(); ++t) {
            const CornerTriple& ct = m.triples[t];
            const Index cells[3] = {ct.mid, ct.next, ct.prev};
            for (int a = 0; a < 3; ++a)
                for (int b = a + 1; b < 3; ++b) {
                    const Index x = cells[a], y = cells[b];
                    const Index z = cells[3 - a - b];
                    Real contrib = 0;
                    if (m.adjacent(x, z)) contrib += f.value(x, z, y) * A.entry(x, z);
                    if (m.adjacent(y, z)) contrib -= f.value(y, z, x) * A.entry(y, z);
                    if (contrib != 0) out.add(x, y, contrib);
                }
        }
        return out;
    }
    // derivative-backed form: evaluate the Cartan sums on a dense pair range
    if (m.cell_count > 512)
        throw std::invalid_argument("contract2 of a derived two-form is restricted to small meshes");
    for (Index i = 0; i < m.cell_count; ++i)
        for (Index j = i + 1; j < m.cell_count; ++j) {
            Real s = 0;
            for (Index fc : m.faces_of(i)) {
                const Index k = m.other_cell(fc, i);
                s += f.value(i, k, j) * A.entry_on_face(fc, i);
            }
            for (Index fc : m.faces_of(j)) {
                const Index k = m.other_cell(fc, j);
                s -= f.value(j, k, i) * A.entry_on_face(fc, j);
            }
            if (s != 0) out.add(i, j, s);
        }
    return out;
}

Real pair1(const Form1& f, const VelocityField& X) {
    if (f.mesh != X.mesh) throw std::invalid_argument("pair1 mesh mismatch");
    const MeshGeometry& m = *X.mesh;
    Real s = 0;
    for (Index fc = 0; fc < m.face_count(); ++fc) {
        const Index i = m.faces[fc].i, j = m.faces[fc].j;
        s += 2 * m.volume[i] * X.entry_on_face(fc, i) * f.entry(i, j);
    }
    return s;
}

Real pair1(const Form1& f, const GeneralMatrixField& X) {
    if (f.mesh != X.mesh) throw std::invalid_argument("pair1 mesh mismatch");
    const MeshGeometry& m = *X.mesh;
    Real s = 0;
    for (const auto& [key, v] : X.entries) {
        (void)v;
        const Index i = static_cast<Index>(key >> 32);
        const Index j = static_cast<Index>(key & 0xffffffffu);
        s += m.volume[i] * X.entry(i, j) * f.entry(i, j) +
             m.volume[j] * X.entry(j, i) * f.entry(j, i);
    }
    return s;
}

Real pair2(const Form2& f, const VelocityField& A, const VelocityField& B) {
    if (f.mesh != A.mesh || A.mesh != B.mesh) throw std::invalid_argument("pair2 mesh mismatch");
    const MeshGeometry& m = *A.mesh;
    Real s = 0;
    if (f.tabulated()) {
        for (std::size_t t = 0; t < m.triples.size(); ++t) {
            const CornerTriple& ct = m.triples[t];
            const Index cells[3] = {ct.mid, ct.next, ct.prev};
            // ordered (x, y, z): x must be adjacent to both others
            for (int a = 0; a < 3; ++a) {
                const Index x = cells[a];
                const Index y = cells[(a + 1) % 3], z = cells[(a + 2) % 3];
                if (!m.adjacent(x, y) || !m.adjacent(x, z)) continue;
                s += 2 * m.volume[x] *
                     (f.value(x, y, z) * A.entry(x, y) * B.entry(x, z) +
                      f.value(x, z, y) * A.entry(x, z) * B.entry(x, y));
            }
        }
        return s;
    }
    for (Index i = 0; i < m.cell_count; ++i)
        for (Index fa : m.faces_of(i))
            for (Index fb : m.faces_of(i)) {
                const Index j = m.other_cell(fa, i);
                const Index k = m.other_cell(fb, i);
                if (j == k) continue;
                s += 2 * m.volume[i] * f.value(i, j, k) * A.entry_on_face(fa, i) *
                     B.entry_on_face(fb, i);
            }
    return s;
}

Form1 lie1(const VelocityField& A, const Form1& f, Real null_row_tol) {
    if (A.mesh != f.mesh) throw std::invalid_argument("lie1 mesh mismatch");
    const MeshGeometry& m = *A.mesh;
    if (max_abs_divergence(A) > null_row_tol)
        throw std::invalid_argument("lie1 requires a null-row velocity field");

    const Form0 g = contract1(A, f);  // ι_A F
    Form1 out(m);
    const auto& stencil = m.two_away_stencil();
    for (Index i = 0; i < m.cell_count; ++i)
        for (Index j : stencil[i]) {
            if (i > j) continue;
            Real s = 0;
            for (Index fc : m.faces_of(i)) {
                const Index k = m.other_cell(fc, i);
                s += (f.entry(i, k) + f.entry(k, j) + f.entry(j, i)) * A.entry_on_face(fc, i);
            }
            for (Index fc : m.faces_of(j)) {
                const Index k = m.other_cell(fc, j);
                s -= (f.entry(j, k) + f.entry(k, i) + f.entry(i, j)) * A.entry_on_face(fc, j);
            }
            s += g[j] - g[i];
            out.set(i, j, s);
        }
    return out;
}

std::vector<Real> dec_vorticity(const VelocityField& A) {
    const MeshGeometry& m = *A.mesh;
    std::vector<Real> omega(m.hinges.size(), 0.0);
    for (std::size_t e = 0; e < m.hinges.size(); ++e) {
        const Hinge& h = m.hinges[e];
        Real s = 0;
        for (std::size_t r = 0; r < h.faces.size(); ++r) {
            const Index fc = h.faces[r];
            s += h.face_sign[r] * m.flat_weight[fc] * A.flux[fc];
        }
        omega[e] = s;
    }
    return omega;
}

}  // namespace dfluid
