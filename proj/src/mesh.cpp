#include "dfluid/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace dfluid {

namespace {

Vec3 circumcenter_triangle2(const Vec3& a, const Vec3& b, const Vec3& c) {
    const Real d = 2 * ((a.x - c.x) * (b.y - c.y) - (b.x - c.x) * (a.y - c.y));
    const Real aa = dot(a - c, a - c);
    const Real bb = dot(b - c, b - c);
    return {c.x + (aa * (b.y - c.y) - bb * (a.y - c.y)) / d,
            c.y + (bb * (a.x - c.x) - aa * (b.x - c.x)) / d, 0};
}

// Circumcenter of a triangle embedded in 3D: the equidistant point in its plane.
Vec3 circumcenter_triangle3(const Vec3& a, const Vec3& b, const Vec3& c) {
    const Vec3 ab = b - a, ac = c - a;
    const Vec3 n = cross(ab, ac);
    const Vec3 t = (cross(n, ab) * dot(ac, ac) + cross(ac, n) * dot(ab, ab)) / (2 * dot(n, n));
    return a + t;
}

Vec3 circumcenter_tet(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d) {
    const Vec3 r1 = b - a, r2 = c - a, r3 = d - a;
    const Real q1 = 0.5 * dot(r1, r1), q2 = 0.5 * dot(r2, r2), q3 = 0.5 * dot(r3, r3);
    const Real det = dot(r1, cross(r2, r3));
    return a + (cross(r2, r3) * q1 + cross(r3, r1) * q2 + cross(r1, r2) * q3) / det;
}

Real signed_area2(const Vec3& a, const Vec3& b, const Vec3& c) {
    return 0.5 * ((b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y));
}

Real tet_signed_volume(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d) {
    return dot(cross(b - a, c - a), d - a) / 6.0;
}

// Signed area of a (planar) polygon about `axis`, measured around `origin`.
Real polygon_area(const std::vector<Vec3>& pts, const Vec3& origin, const Vec3& axis) {
    Vec3 acc{0, 0, 0};
    for (std::size_t r = 0; r < pts.size(); ++r)
        acc += cross(pts[r] - origin, pts[(r + 1) % pts.size()] - origin);
    return 0.5 * dot(acc, axis);
}

constexpr Real triple_coeff_2d = 2.0;
constexpr Real triple_coeff_3d = 8.0 / 3.0;

// Emit the canonical corner triples of one hinge ring. Ordered as
// (mid, next, prev) with the ring positively oriented; a closed 3-ring is
// pairwise adjacent and gets a single canonical entry (smallest cell as mid).
void emit_triples(MeshGeometry& m, Index hinge_id, Real cdim) {
    const Hinge& hg = m.hinges[hinge_id];
    const int n = static_cast<int>(hg.cells.size());
    if (n < 3) return;
    auto push = [&](int r) {
        CornerTriple t;
        t.hinge = hinge_id;
        t.mid = hg.cells[r];
        t.next = hg.cells[(r + 1) % n];
        t.prev = hg.cells[(r + n - 1) % n];
        t.coeff = cdim * hg.corner[r] / hg.dual_area;
        m.triples.push_back(t);
    };
    if (hg.closed && n == 3) {
        int r = 0;
        for (int k = 1; k < 3; ++k)
            if (hg.cells[k] < hg.cells[r]) r = k;
        push(r);
        return;
    }
    const int lo = hg.closed ? 0 : 1;
    const int hi = hg.closed ? n - 1 : n - 2;
    for (int r = lo; r <= hi; ++r) push(r);
}

void resolve_triple_faces(MeshGeometry& m) {
    for (CornerTriple& t : m.triples) {
        t.face_mid_next = m.face_between(t.mid, t.next);
        t.face_mid_prev = m.face_between(t.mid, t.prev);
        t.face_next_prev = m.face_between(t.next, t.prev);
    }
}

}  // namespace

void MeshGeometry::finalize_connectivity() {
    const Index nf = face_count();

    cell_face_offset.assign(cell_count + 1, 0);
    for (const Face& f : faces) {
        ++cell_face_offset[f.i + 1];
        ++cell_face_offset[f.j + 1];
    }
    for (Index i = 0; i < cell_count; ++i) cell_face_offset[i + 1] += cell_face_offset[i];
    cell_face.assign(cell_face_offset[cell_count], -1);
    {
        std::vector<Index> cursor(cell_face_offset.begin(), cell_face_offset.end() - 1);
        for (Index f = 0; f < nf; ++f) {
            cell_face[cursor[faces[f].i]++] = f;
            cell_face[cursor[faces[f].j]++] = f;
        }
    }

    face_of_pair_.clear();
    face_of_pair_.reserve(faces.size() * 2);
    for (Index f = 0; f < nf; ++f) face_of_pair_[pair_key(faces[f].i, faces[f].j)] = f;

    flat_weight.resize(faces.size());
    for (Index f = 0; f < nf; ++f) flat_weight[f] = faces[f].dual_length / faces[f].area;

    face_hinge_offset.assign(nf + 1, 0);
    for (const Hinge& h : hinges)
        for (Index f : h.faces) ++face_hinge_offset[f + 1];
    for (Index f = 0; f < nf; ++f) face_hinge_offset[f + 1] += face_hinge_offset[f];
    face_hinge.assign(face_hinge_offset[nf], -1);
    face_hinge_sign.assign(face_hinge_offset[nf], 0);
    {
        std::vector<Index> cursor(face_hinge_offset.begin(), face_hinge_offset.end() - 1);
        for (std::size_t e = 0; e < hinges.size(); ++e) {
            for (std::size_t r = 0; r < hinges[e].faces.size(); ++r) {
                const Index f = hinges[e].faces[r];
                face_hinge[cursor[f]] = static_cast<Index>(e);
                face_hinge_sign[cursor[f]] = hinges[e].face_sign[r];
                ++cursor[f];
            }
        }
    }

    face_triple_offset.assign(nf + 1, 0);
    auto each_triple_face = [&](const CornerTriple& t, auto&& fn) {
        if (t.face_mid_next >= 0) fn(t.face_mid_next, 0);
        if (t.face_mid_prev >= 0) fn(t.face_mid_prev, 1);
        if (t.face_next_prev >= 0) fn(t.face_next_prev, 2);
    };
    for (const CornerTriple& t : triples)
        each_triple_face(t, [&](Index f, int) { ++face_triple_offset[f + 1]; });
    for (Index f = 0; f < nf; ++f) face_triple_offset[f + 1] += face_triple_offset[f];
    face_triple.assign(face_triple_offset[nf], -1);
    face_triple_role.assign(face_triple_offset[nf], 0);
    {
        std::vector<Index> cursor(face_triple_offset.begin(), face_triple_offset.end() - 1);
        for (std::size_t t = 0; t < triples.size(); ++t) {
            each_triple_face(triples[t], [&](Index f, int role) {
                face_triple[cursor[f]] = static_cast<Index>(t);
                face_triple_role[cursor[f]] = role;
                ++cursor[f];
            });
        }
    }

    Vec3 lo{1e300, 1e300, 1e300}, hi{-1e300, -1e300, -1e300};
    auto grow = [&](const Vec3& p) {
        lo.x = std::min(lo.x, p.x); lo.y = std::min(lo.y, p.y); lo.z = std::min(lo.z, p.z);
        hi.x = std::max(hi.x, p.x); hi.y = std::max(hi.y, p.y); hi.z = std::max(hi.z, p.z);
    };
    for (const Vec3& c : circumcenter) grow(c);
    for (const Face& f : faces) grow(f.center);
    if (cell_count > 0) bbox_diameter = norm(hi - lo);

    // eager lookup caches so a finished mesh is immutable and sharable
    two_away_.assign(cell_count, {});
    for (Index i = 0; i < cell_count; ++i) {
        std::set<Index> reach;
        for (Index f : faces_of(i)) {
            const Index j = other_cell(f, i);
            reach.insert(j);
            for (Index g : faces_of(j)) {
                const Index k = other_cell(g, j);
                if (k != i) reach.insert(k);
            }
        }
        two_away_[i].assign(reach.begin(), reach.end());
    }
    triple_of_set_.clear();
    for (std::size_t t = 0; t < triples.size(); ++t) {
        Index v[3] = {triples[t].mid, triples[t].next, triples[t].prev};
        std::sort(v, v + 3);
        triple_of_set_[(static_cast<std::uint64_t>(v[0]) << 42) |
                       (static_cast<std::uint64_t>(v[1]) << 21) |
                       static_cast<std::uint64_t>(v[2])] = static_cast<Index>(t);
    }
}

const std::vector<std::vector<Index>>& MeshGeometry::two_away_stencil() const {
    return two_away_;
}

Index MeshGeometry::triple_of_set(Index a, Index b, Index c) const {
    Index v[3] = {a, b, c};
    std::sort(v, v + 3);
    const std::uint64_t key = (static_cast<std::uint64_t>(v[0]) << 42) |
                              (static_cast<std::uint64_t>(v[1]) << 21) |
                              static_cast<std::uint64_t>(v[2]);
    auto it = triple_of_set_.find(key);
    return it == triple_of_set_.end() ? -1 : it->second;
}

MeshQuality MeshGeometry::quality() const {
    MeshQuality q;
    q.min_dual_length = 1e300;
    q.min_corner_fraction = 1e300;
    q.min_volume = 1e300;
    for (const Face& f : faces) q.min_dual_length = std::min(q.min_dual_length, f.dual_length);
    for (Real v : volume) q.min_volume = std::min(q.min_volume, v);
    for (const Hinge& h : hinges)
        for (Real c : h.corner)
            q.min_corner_fraction = std::min(q.min_corner_fraction, c / h.dual_area);
    q.min_dual_over_diameter = bbox_diameter > 0 ? q.min_dual_length / bbox_diameter : 0;
    return q;
}

void MeshGeometry::perturb_triple_coefficient(std::size_t triple_index, Real delta) {
    triples.at(triple_index).coeff += delta;
}

// ---------------------------------------------------------------------------
// Regular grids

MeshGeometry build_regular_grid(Index nx, Index ny, Real h, BoundaryMode boundary) {
    if (nx < 1 || ny < 1) throw MeshError("grid dimensions must be >= 1");
    if (h <= 0) throw MeshError("grid spacing must be positive");
    const bool periodic = boundary == BoundaryMode::Periodic;
    if (periodic && (nx < 3 || ny < 3))
        throw MeshError(
            "periodic grid needs nx,ny >= 3; smaller grids give duplicate faces between the same cell pair");

    MeshGeometry m;
    m.dimension = 2;
    m.boundary = boundary;
    m.cell_count = nx * ny;
    m.grid = RegularGridInfo{nx, ny, h, periodic};

    auto cell = [&](Index x, Index y) {
        if (periodic) {
            x = (x % nx + nx) % nx;
            y = (y % ny + ny) % ny;
        }
        return x + nx * y;
    };

    m.volume.assign(m.cell_count, h * h);
    m.circumcenter.resize(m.cell_count);
    for (Index y = 0; y < ny; ++y)
        for (Index x = 0; x < nx; ++x)
            m.circumcenter[cell(x, y)] = {(x + 0.5) * h, (y + 0.5) * h, 0};

    const Index xcols = periodic ? nx : nx - 1;
    const Index yrows = periodic ? ny : ny - 1;
    for (Index y = 0; y < ny; ++y)
        for (Index x = 0; x < xcols; ++x)
            m.faces.push_back({cell(x, y), cell(x + 1, y), h, h, {1, 0, 0},
                               {(x + 1) * h, (y + 0.5) * h, 0}});
    for (Index y = 0; y < yrows; ++y)
        for (Index x = 0; x < nx; ++x)
            m.faces.push_back({cell(x, y), cell(x, y + 1), h, h, {0, 1, 0},
                               {(x + 0.5) * h, (y + 1) * h, 0}});

    if (!periodic) {
        for (Index y = 0; y < ny; ++y) {
            m.boundary_faces.push_back({cell(0, y), h, {-1, 0, 0}, {0, (y + 0.5) * h, 0}});
            m.boundary_faces.push_back({cell(nx - 1, y), h, {1, 0, 0}, {nx * h, (y + 0.5) * h, 0}});
        }
        for (Index x = 0; x < nx; ++x) {
            m.boundary_faces.push_back({cell(x, 0), h, {0, -1, 0}, {(x + 0.5) * h, 0, 0}});
            m.boundary_faces.push_back({cell(x, ny - 1), h, {0, 1, 0}, {(x + 0.5) * h, ny * h, 0}});
        }
    }

    m.finalize_connectivity();  // face_between is needed to wire the hinges

    // One hinge per grid node, ring SW,SE,NE,NW (counterclockwise).
    const Index node_nx = periodic ? nx : nx + 1;
    const Index node_ny = periodic ? ny : ny + 1;
    for (Index Y = 0; Y < node_ny; ++Y)
        for (Index X = 0; X < node_nx; ++X) {
            Hinge hg;
            hg.position = {X * h, Y * h, 0};
            hg.axis = {0, 0, 1};
            hg.edge_length = 1.0;

            const Index sx[4] = {X - 1, X, X, X - 1};
            const Index sy[4] = {Y - 1, Y - 1, Y, Y};
            auto present = [&](int r) {
                return periodic || (sx[r] >= 0 && sx[r] < nx && sy[r] >= 0 && sy[r] < ny);
            };
            int count = 0;
            for (int r = 0; r < 4; ++r)
                if (present(r)) ++count;
            hg.closed = (count == 4);
            int first = 0;
            if (!hg.closed)
                for (int r = 0; r < 4; ++r)
                    if (present(r) && !present((r + 3) % 4)) first = r;
            for (int k = 0; k < count; ++k) {
                const int r = (first + k) % 4;
                hg.cells.push_back(cell(sx[r], sy[r]));
                hg.corner.push_back(0.25 * h * h);
            }
            const int nfaces = hg.closed ? count : count - 1;
            for (int r = 0; r < nfaces; ++r) {
                const Index a = hg.cells[r], b = hg.cells[(r + 1) % count];
                const Index f = m.face_between(a, b);
                hg.faces.push_back(f);
                hg.face_sign.push_back(m.faces[f].i == a ? 1 : -1);
            }
            hg.dual_area = count * 0.25 * h * h;
            m.hinges.push_back(std::move(hg));
        }

    for (std::size_t e = 0; e < m.hinges.size(); ++e)
        emit_triples(m, static_cast<Index>(e), triple_coeff_2d);

    resolve_triple_faces(m);
    m.finalize_connectivity();
    return m;
}

// ---------------------------------------------------------------------------
// Simplicial meshes

MeshGeometry build_simplicial(const std::vector<Vec3>& nodes,
                              const std::vector<std::vector<Index>>& cells,
                              int dimension) {
    if (dimension != 2 && dimension != 3) throw MeshError("dimension must be 2 or 3");
    MeshGeometry m;
    m.dimension = dimension;
    m.boundary = BoundaryMode::Wall;
    m.cell_count = static_cast<Index>(cells.size());

    Vec3 lo{1e300, 1e300, 1e300}, hi{-1e300, -1e300, -1e300};
    for (const Vec3& p : nodes) {
        lo.x = std::min(lo.x, p.x); lo.y = std::min(lo.y, p.y); lo.z = std::min(lo.z, p.z);
        hi.x = std::max(hi.x, p.x); hi.y = std::max(hi.y, p.y); hi.z = std::max(hi.z, p.z);
    }
    m.bbox_diameter = norm(hi - lo);
    const Real eps_geom = 1e-10 * m.bbox_diameter;

    std::vector<Vec3> centroid(cells.size());
    m.volume.resize(cells.size());
    m.circumcenter.resize(cells.size());
    for (Index c = 0; c < m.cell_count; ++c) {
        const auto& vs = cells[c];
        if (static_cast<int>(vs.size()) != dimension + 1)
            throw MeshError("cell " + std::to_string(c) + " has wrong vertex count");
        for (Index v : vs)
            if (v < 0 || v >= static_cast<Index>(nodes.size()))
                throw MeshError("cell " + std::to_string(c) + " references a missing node");
        if (dimension == 2) {
            const Vec3 a = nodes[vs[0]], b = nodes[vs[1]], cc = nodes[vs[2]];
            const Real vol = signed_area2(a, b, cc);
            if (vol <= 0)
                throw InvertedCellError("cell " + std::to_string(c) + " has non-positive area");
            m.volume[c] = vol;
            m.circumcenter[c] = circumcenter_triangle2(a, b, cc);
            centroid[c] = (a + b + cc) / 3.0;
        } else {
            const Vec3 a = nodes[vs[0]], b = nodes[vs[1]], cc = nodes[vs[2]], d = nodes[vs[3]];
            const Real vol = tet_signed_volume(a, b, cc, d);
            if (vol <= 0)
                throw InvertedCellError("cell " + std::to_string(c) + " has non-positive volume");
            m.volume[c] = vol;
            m.circumcenter[c] = circumcenter_tet(a, b, cc, d);
            centroid[c] = (a + b + cc + d) / 4.0;
        }
    }

    // Faces: match (dim-1)-simplices across cells; keep the induced
    // orientations to detect inconsistently oriented input.
    std::map<std::vector<Index>, std::vector<std::pair<Index, std::vector<Index>>>> face_table;
    for (Index c = 0; c < m.cell_count; ++c) {
        const auto& vs = cells[c];
        for (std::size_t drop = 0; drop < vs.size(); ++drop) {
            std::vector<Index> directed;
            for (std::size_t k = 0; k < vs.size(); ++k)
                if (k != drop) directed.push_back(vs[k]);
            if (drop % 2 == 1) std::swap(directed[0], directed[1]);
            std::vector<Index> key = directed;
            std::sort(key.begin(), key.end());
            face_table[key].push_back({c, directed});
        }
    }
    for (auto& [key, users] : face_table) {
        if (users.size() > 2) throw MeshError("face shared by more than two cells");
        if (users.size() == 2) {
            const auto& d0 = users[0].second;
            const auto& d1 = users[1].second;
            bool same = false;
            if (dimension == 2) {
                same = (d0 == d1);
            } else {
                for (int rot = 0; rot < 3 && !same; ++rot)
                    same = (d1[rot] == d0[0] && d1[(rot + 1) % 3] == d0[1] &&
                            d1[(rot + 2) % 3] == d0[2]);
            }
            if (same)
                throw InconsistentOrientationError(
                    "cells " + std::to_string(users[0].first) + " and " +
                    std::to_string(users[1].first) + " induce the same orientation on their shared face");
            Face f;
            f.i = users[0].first;
            f.j = users[1].first;
            if (dimension == 2) {
                const Vec3 a = nodes[key[0]], b = nodes[key[1]];
                f.area = norm(b - a);
                f.center = (a + b) * 0.5;
                const Vec3 t = normalized(b - a);
                f.normal = {t.y, -t.x, 0};
            } else {
                const Vec3 a = nodes[key[0]], b = nodes[key[1]], c3 = nodes[key[2]];
                f.area = 0.5 * norm(cross(b - a, c3 - a));
                f.center = (a + b + c3) / 3.0;
                f.normal = normalized(cross(b - a, c3 - a));
            }
            if (dot(f.normal, centroid[f.j] - centroid[f.i]) < 0) f.normal *= -1;
            f.dual_length = dot(m.circumcenter[f.j] - m.circumcenter[f.i], f.normal);
            if (f.dual_length <= eps_geom)
                throw NonDelaunayError("degenerate dual edge between cells " + std::to_string(f.i) +
                                       " and " + std::to_string(f.j));
            m.faces.push_back(f);
        } else {
            const Index c = users[0].first;
            BoundaryFace bf;
            bf.cell = c;
            if (dimension == 2) {
                const Vec3 a = nodes[key[0]], b = nodes[key[1]];
                bf.area = norm(b - a);
                bf.center = (a + b) * 0.5;
                const Vec3 t = normalized(b - a);
                bf.normal = {t.y, -t.x, 0};
            } else {
                const Vec3 a = nodes[key[0]], b = nodes[key[1]], c3 = nodes[key[2]];
                bf.area = 0.5 * norm(cross(b - a, c3 - a));
                bf.center = (a + b + c3) / 3.0;
                bf.normal = normalized(cross(b - a, c3 - a));
            }
            if (dot(bf.normal, bf.center - centroid[c]) < 0) bf.normal *= -1;
            m.boundary_faces.push_back(bf);
        }
    }

    m.finalize_connectivity();

    // Hinges: vertices (2D) or edges (3D); walk the incident-cell fan.
    std::map<std::vector<Index>, std::vector<Index>> hinge_cells;
    for (Index c = 0; c < m.cell_count; ++c) {
        const auto& vs = cells[c];
        if (dimension == 2) {
            for (Index v : vs) hinge_cells[{v}].push_back(c);
        } else {
            for (std::size_t a = 0; a < vs.size(); ++a)
                for (std::size_t b = a + 1; b < vs.size(); ++b)
                    hinge_cells[{std::min(vs[a], vs[b]), std::max(vs[a], vs[b])}].push_back(c);
        }
    }

    for (auto& [key, inc] : hinge_cells) {
        Hinge hg;
        Vec3 e0, e1;  // hinge endpoints (3D)
        if (dimension == 2) {
            hg.position = nodes[key[0]];
            hg.axis = {0, 0, 1};
            hg.edge_length = 1.0;
        } else {
            e0 = nodes[key[0]];
            e1 = nodes[key[1]];
            hg.position = (e0 + e1) * 0.5;
            hg.axis = normalized(e1 - e0);
            hg.edge_length = norm(e1 - e0);
        }

        const int n = static_cast<int>(inc.size());
        std::vector<std::vector<int>> nbrs(n);
        for (int a = 0; a < n; ++a)
            for (int b = a + 1; b < n; ++b)
                if (m.adjacent(inc[a], inc[b])) {
                    nbrs[a].push_back(b);
                    nbrs[b].push_back(a);
                }
        int start = 0;
        bool closed = (n > 2);
        for (int a = 0; a < n; ++a) {
            if (static_cast<int>(nbrs[a].size()) > 2) throw MeshError("non-manifold hinge fan");
            if (nbrs[a].size() < 2) {
                start = a;
                closed = false;
            }
        }
        hg.closed = closed;

        std::vector<char> used(n, 0);
        int cur = start, prev = -1;
        for (int step = 0; step < n; ++step) {
            hg.cells.push_back(inc[cur]);
            used[cur] = 1;
            if (step + 1 == n) break;
            int nxt = -1;
            for (int cand : nbrs[cur])
                if (cand != prev && !used[cand]) nxt = cand;
            if (nxt < 0) throw MeshError("disconnected or non-manifold hinge fan");
            prev = cur;
            cur = nxt;
        }

        // orient positively about the axis
        Real winding = 0;
        const int nseg = hg.closed ? n : n - 1;
        for (int r = 0; r < nseg; ++r)
            winding += dot(cross(m.circumcenter[hg.cells[r]] - hg.position,
                                 m.circumcenter[hg.cells[(r + 1) % n]] - hg.position),
                           hg.axis);
        if (n > 1 && winding < 0) std::reverse(hg.cells.begin(), hg.cells.end());

        for (int r = 0; r < nseg; ++r) {
            const Index a = hg.cells[r], b = hg.cells[(r + 1) % n];
            const Index f = m.face_between(a, b);
            hg.faces.push_back(f);
            hg.face_sign.push_back(m.faces[f].i == a ? 1 : -1);
        }

        // corner pieces: quad (hinge, in, circumcenter, out) per cell, where
        // in/out are the equidistant points on the two cell faces containing
        // the hinge (edge midpoints in 2D, face circumcenters in 3D)
        hg.corner.resize(n);
        std::vector<Vec3> in_pt(n), out_pt(n);
        for (int r = 0; r < n; ++r) {
            const Index c = hg.cells[r];
            const auto& vs = cells[c];
            Vec3 pts[2];
            int np = 0;
            if (dimension == 2) {
                for (Index w : vs)
                    if (w != key[0]) pts[np++] = (nodes[key[0]] + nodes[w]) * 0.5;
            } else {
                for (Index w : vs)
                    if (w != key[0] && w != key[1]) pts[np++] = circumcenter_triangle3(e0, e1, nodes[w]);
            }
            if (np != 2) throw MeshError("hinge corner construction failed");
            if (dot(cross(pts[0] - hg.position, pts[1] - hg.position), hg.axis) < 0)
                std::swap(pts[0], pts[1]);
            in_pt[r] = pts[0];
            out_pt[r] = pts[1];
            hg.corner[r] =
                polygon_area({hg.position, pts[0], m.circumcenter[c], pts[1]}, hg.position, hg.axis);
        }

        std::vector<Vec3> poly;
        if (hg.closed) {
            for (int r = 0; r < n; ++r) {
                poly.push_back(in_pt[r]);
                poly.push_back(m.circumcenter[hg.cells[r]]);
            }
        } else {
            poly.push_back(hg.position);
            for (int r = 0; r < n; ++r) {
                poly.push_back(in_pt[r]);
                poly.push_back(m.circumcenter[hg.cells[r]]);
            }
            poly.push_back(out_pt[n - 1]);
        }
        hg.dual_area = polygon_area(poly, hg.position, hg.axis);

        m.hinges.push_back(std::move(hg));
    }

    const Real cdim = dimension == 2 ? triple_coeff_2d : triple_coeff_3d;
    for (std::size_t e = 0; e < m.hinges.size(); ++e)
        emit_triples(m, static_cast<Index>(e), cdim);

    resolve_triple_faces(m);
    m.finalize_connectivity();
    return m;
}

// ---------------------------------------------------------------------------
// Mesh files

MeshGeometry load_mesh_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw MeshError("cannot open mesh file: " + path);
    std::string magic;
    int dim = 0;
    in >> magic >> dim;
    if (magic != "dmeshv1" || (dim != 2 && dim != 3))
        throw MeshError("bad mesh header in " + path);
    std::size_t nn = 0, nc = 0;
    in >> nn >> nc;
    std::vector<Vec3> nodes(nn);
    for (auto& p : nodes) {
        in >> p.x >> p.y;
        if (dim == 3) in >> p.z;
    }
    std::vector<std::vector<Index>> cells(nc, std::vector<Index>(dim + 1));
    for (auto& c : cells)
        for (auto& v : c) in >> v;
    if (!in) throw MeshError("truncated mesh file: " + path);
    return build_simplicial(nodes, cells, dim);
}

void save_mesh_file(const std::string& path, const std::vector<Vec3>& nodes,
                    const std::vector<std::vector<Index>>& cells, int dimension) {
    std::ofstream out(path);
    out.precision(17);
    out << "dmeshv1 " << dimension << "\n" << nodes.size() << " " << cells.size() << "\n";
    for (const Vec3& p : nodes) {
        out << p.x << " " << p.y;
        if (dimension == 3) out << " " << p.z;
        out << "\n";
    }
    for (const auto& c : cells) {
        for (std::size_t k = 0; k < c.size(); ++k) out << (k ? " " : "") << c[k];
        out << "\n";
    }
}

}  // namespace dfluid
