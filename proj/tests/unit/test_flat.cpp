#include <doctest.h>

#include <cmath>

#include "dfluid/calculus.hpp"
#include "dfluid/flat.hpp"
#include "dfluid/reference.hpp"
#include "test_util.hpp"

using namespace dfluid;

namespace {

// Full flat completed so that every non-corner triple vanishes: colinear
// two-away entries are the sums through their unique middle cell. Defined on
// periodic grids with nx,ny >= 5.
Form1 flat_triple_consistent(const VelocityField& A) {
    const MeshGeometry& m = *A.mesh;
    Form1 out = flat_regular_full(A);
    const Real h2 = m.grid->h * m.grid->h;
    const auto& stencil = m.two_away_stencil();
    for (Index i = 0; i < m.cell_count; ++i)
        for (Index j : stencil[i]) {
            if (i > j || m.adjacent(i, j)) continue;
            std::vector<Index> routes;
            for (Index f : m.faces_of(i))
                if (m.adjacent(m.other_cell(f, i), j)) routes.push_back(m.other_cell(f, i));
            if (routes.size() == 1) {
                const Index k = routes[0];
                out.set(i, j, 2 * h2 * (A.entry(i, k) + A.entry(k, j)));
            }
        }
    return out;
}

}  // namespace

TEST_CASE("adjacent flat values") {
    const MeshGeometry m = build_regular_grid(3, 3, 1.0, BoundaryMode::Periodic);
    VelocityField A(m);
    A.flux[0] = 2 * m.volume[m.faces[0].i] * 0.5;  // A = 0.5 on one face
    const FlatAssembly fa = flat_adjacent(A);
    CHECK(fa.adjacent[0] == doctest::Approx(1.0));  // 2 h^2 A
    for (Index f = 1; f < m.face_count(); ++f) CHECK(fa.adjacent[f] == 0.0);

    // simplicial face: A-flat = A Ω_i 2|e|/|S|
    std::vector<Vec3> nodes = {{0, 0}, {1, 0}, {0.5, 0.9}, {0.5, -0.9}};
    std::vector<std::vector<Index>> cells = {{0, 1, 2}, {0, 3, 1}};
    const MeshGeometry s = build_simplicial(nodes, cells, 2);
    VelocityField B(s);
    B.flux[0] = 2 * s.volume[s.faces[0].i] * 1.0;  // A_ij = 1
    const FlatAssembly fb = flat_adjacent(B);
    const Real expect = 1.0 * s.volume[s.faces[0].i] * 2 * s.faces[0].dual_length / s.faces[0].area;
    CHECK(fb.adjacent[0] == doctest::Approx(expect).epsilon(1e-13));
}

TEST_CASE("triple values of the flat derivative") {
    const MeshGeometry m = build_regular_grid(3, 3, 1.0, BoundaryMode::Periodic);

    // uniform flow: all triple values vanish
    const VelocityField u = discretize_from_streamfunction([](const Vec3& p) { return p.y; }, m);
    for (Real v : d_flat_triples(u).triple_value) CHECK(std::abs(v) <= 1e-14);

    // the triple value is (±) half the hinge vorticity on a regular grid
    const VelocityField A = testutil::random_divfree(m, 41);
    const FlatAssembly fa = flat_adjacent(A);
    const Form2 f = d_flat_triples(fa);
    for (std::size_t t = 0; t < m.triples.size(); ++t)
        CHECK(std::abs(f.triple_value[t]) ==
              doctest::Approx(std::abs(0.5 * fa.vorticity[m.triples[t].hinge])).epsilon(1e-13));

    // cross-assembly oracle: triple values equal the exterior derivative of
    // the full lattice flat on the corner triples
    const Form2 dfull = d1(flat_regular_full(A));
    for (std::size_t t = 0; t < m.triples.size(); ++t) {
        const CornerTriple& ct = m.triples[t];
        CHECK(f.triple_value[t] ==
              doctest::Approx(dfull.value(ct.mid, ct.next, ct.prev)).epsilon(1e-12));
    }
}

TEST_CASE("pair_flat") {
    const MeshGeometry m = build_regular_grid(3, 3, 1.0, BoundaryMode::Periodic);
    const VelocityField u = discretize_from_streamfunction([](const Vec3& p) { return p.y; }, m);
    CHECK(pair_flat(u, u) == doctest::Approx(9.0).epsilon(1e-13));  // ∫|v|² over area 9

    const VelocityField zero(m);
    CHECK(pair_flat(u, zero) == 0.0);

    const VelocityField A = testutil::random_divfree(m, 51);
    const VelocityField B = testutil::random_divfree(m, 52);
    CHECK(pair_flat(A, B) == doctest::Approx(pair_flat(B, A)).epsilon(1e-12));
    const VelocityField A2 = A * 2.0;
    CHECK(pair_flat(A2, B) == doctest::Approx(2 * pair_flat(A, B)).epsilon(1e-12));
}

TEST_CASE("full lattice flat") {
    const MeshGeometry m = build_regular_grid(5, 5, 1.0, BoundaryMode::Periodic);
    const VelocityField zero(m);
    for (const auto& [k, v] : flat_regular_full(zero).entries) {
        (void)k;
        CHECK(v == 0.0);
    }

    const VelocityField A = testutil::random_divfree(m, 61);
    const Form1 full = flat_regular_full(A);
    // diagonal pair: both common neighbors contribute
    for (Index i = 0; i < m.cell_count; ++i)
        for (Index j : m.two_away_stencil()[i]) {
            if (m.adjacent(i, j)) continue;
            Real want = 0;
            for (Index f : m.faces_of(i)) {
                const Index k = m.other_cell(f, i);
                if (m.adjacent(k, j)) want += A.entry(i, k) + A.entry(k, j);
            }
            CHECK(full.entry(i, j) == doctest::Approx(want).epsilon(1e-12));
        }

    // Cartan assembly of the Lie derivative equals the fast path AF-(AF)^T
    const Form1 lf = lie1(A, full);
    const Eigen::MatrixXd want = reference::dense_lie(A, full);
    for (Index i = 0; i < m.cell_count; ++i)
        for (Index j : m.two_away_stencil()[i])
            CHECK(lf.entry(i, j) == doctest::Approx(want(i, j)).epsilon(1e-12));
}

TEST_CASE("pair_dflat identities") {
    const MeshGeometry m = build_regular_grid(5, 5, 1.0, BoundaryMode::Periodic);
    const VelocityField A = testutil::random_divfree(m, 71);
    const VelocityField B = testutil::random_divfree(m, 72);
    const VelocityField C = testutil::random_divfree(m, 73);

    CHECK(std::abs(pair_dflat(A, B, B)) <= 1e-13);

    const VelocityField u = discretize_from_streamfunction([](const Vec3& p) { return p.y; }, m);
    CHECK(std::abs(pair_dflat(u, B, C)) <= 1e-13);

    // <<dA-flat, B, C>> = -<<A-flat, [B,C]>> with the triple-consistent
    // completion of the lattice flat
    const Form1 full = flat_triple_consistent(A);
    const Real lhs = pair_dflat(A, B, C);
    const Real rhs = -pair1(full, commutator(B, C));
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));

    // exact matrix identity: <<dF, B, C>> = -<<F, [B,C]>> for any stored
    // one-form F (pure trace algebra)
    const Form1 lattice = flat_regular_full(A);
    CHECK(pair2(d1(lattice), B, C) ==
          doctest::Approx(-pair1(lattice, commutator(B, C))).epsilon(1e-12));
}

TEST_CASE("flat consistency under refinement") {
    // v = (sin 2πy, 0), u = (0, sin 2πx) on the unit periodic square
    auto psi_v = [](const Vec3& p) { return -std::cos(2 * M_PI * p.y) / (2 * M_PI); };
    auto psi_u = [](const Vec3& p) { return std::cos(2 * M_PI * p.x) / (2 * M_PI); };
    Real prev_err = 0;
    for (int k = 0; k < 3; ++k) {
        const Index n = 8 << k;
        const MeshGeometry m = build_regular_grid(n, n, 1.0 / n, BoundaryMode::Periodic);
        const VelocityField v = discretize_from_streamfunction(psi_v, m);
        const VelocityField u = discretize_from_streamfunction(psi_u, m);
        CHECK(std::abs(pair_flat(v, u)) <= 1e-12);  // orthogonal components
        const Real err = std::abs(pair_flat(v, v) - 0.5);
        if (k > 0) CHECK(err <= prev_err / 2.0);  // order >= 1
        prev_err = err;
    }
}
