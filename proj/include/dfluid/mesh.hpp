#pragma once

#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "dfluid/core.hpp"

namespace dfluid {

enum class BoundaryMode { Periodic, Wall };

// Interior face between two cells, stored once with a fixed orientation i->j.
// On regular grids the orientation follows the +x / +y axis (also across the
// periodic seam), so `normal` always points in the physical i->j direction.
struct Face {
    Index i = -1, j = -1;
    Real area = 0;       // |S_ij| (edge length in 2D, triangle area in 3D)
    Real dual_length = 0;  // |e_ij|, distance between circumcenters
    Vec3 normal;         // unit, oriented i->j
    Vec3 center;         // barycenter of the face
};

struct BoundaryFace {
    Index cell = -1;
    Real area = 0;
    Vec3 normal;  // outward
    Vec3 center;
};

// A primal hinge: a vertex in 2D, an edge in 3D. Holds the oriented ring of
// incident cells. `cells[r]` and `cells[r+1]` share `faces[r]`; for a closed
// (interior) ring the last face wraps to cells[0]. `face_sign[r]` is +1 when
// the stored face orientation agrees with the ring direction. The ring is
// oriented positively: counterclockwise in 2D, right-handed about `axis` in
// 3D (axis points from the lower- to the higher-index hinge vertex).
struct Hinge {
    Vec3 position;     // vertex (2D) or edge midpoint (3D)
    Vec3 axis;         // z in 2D, unit edge direction in 3D
    Real edge_length = 1;  // |e|; 1 in 2D
    Real dual_area = 0;    // |S_e|
    bool closed = false;
    std::vector<Index> cells;
    std::vector<Index> faces;
    std::vector<int> face_sign;
    std::vector<Real> corner;  // |S_e ∩ C_i| per ring cell (signed)
};

// Canonical corner triple (hinge; mid, next, prev): `mid` is adjacent to both
// `next` and `prev`, which are its ring successor/predecessor. The discrete
// two-form built from a flat assembly takes the value
//     value(mid, next, prev) = coeff * omega_dec(hinge),
// extended to other index orders by full antisymmetry. `coeff` carries the
// orientation sign (it is negative when the corner piece is inverted).
struct CornerTriple {
    Index hinge = -1;
    Index mid = -1, next = -1, prev = -1;
    Real coeff = 0;            // K
    Index face_mid_next = -1;  // face between mid and next
    Index face_mid_prev = -1;
    Index face_next_prev = -1;  // valid only for pairwise-adjacent rings
};

struct RegularGridInfo {
    Index nx = 0, ny = 0;
    Real h = 0;
    bool periodic = false;
};

struct MeshQuality {
    Real min_dual_length = 0;
    Real min_dual_over_diameter = 0;  // min |e_ij| / bbox diameter
    Real min_corner_fraction = 0;     // min |S_e∩C_i| / |S_e| (can be negative)
    Real min_volume = 0;
};

class MeshGeometry {
public:
    int dimension = 2;
    Index cell_count = 0;
    BoundaryMode boundary = BoundaryMode::Wall;

    std::vector<Real> volume;        // Ω_i
    std::vector<Vec3> circumcenter;  // per cell
    std::vector<Face> faces;
    std::vector<BoundaryFace> boundary_faces;
    std::vector<Hinge> hinges;
    std::vector<CornerTriple> triples;

    // CSR: interior faces incident to each cell.
    std::vector<Index> cell_face_offset;
    std::vector<Index> cell_face;

    // CSR: hinges incident to each face, with the ring sign of the face.
    std::vector<Index> face_hinge_offset;
    std::vector<Index> face_hinge;
    std::vector<int> face_hinge_sign;

    // CSR: triples touching each face, role 0 = (mid,next), 1 = (mid,prev),
    // 2 = (next,prev) for pairwise-adjacent rings.
    std::vector<Index> face_triple_offset;
    std::vector<Index> face_triple;
    std::vector<int> face_triple_role;

    std::vector<Real> flat_weight;  // |e_ij| / |S_ij| per face

    std::optional<RegularGridInfo> grid;
    Real bbox_diameter = 0;

    Index face_count() const { return static_cast<Index>(faces.size()); }

    // Face id between cells a,b or -1.
    Index face_between(Index a, Index b) const {
        auto it = face_of_pair_.find(pair_key(a, b));
        return it == face_of_pair_.end() ? -1 : it->second;
    }
    bool adjacent(Index a, Index b) const { return face_between(a, b) >= 0; }

    // Iteration helpers over the faces of one cell.
    struct CellFaceRange {
        const MeshGeometry* m;
        Index begin_, end_;
        const Index* begin() const { return m->cell_face.data() + begin_; }
        const Index* end() const { return m->cell_face.data() + end_; }
    };
    CellFaceRange faces_of(Index cell) const {
        return {this, cell_face_offset[cell], cell_face_offset[cell + 1]};
    }
    Index other_cell(Index face, Index cell) const {
        const Face& f = faces[face];
        return f.i == cell ? f.j : f.i;
    }
    // +1 when `cell` is the tail of the stored orientation.
    int orientation_sign(Index face, Index cell) const {
        return faces[face].i == cell ? 1 : -1;
    }

    // Cells within graph distance <= 2 of each cell (excluding the cell);
    // the support class of the wide-form sparse containers.
    const std::vector<std::vector<Index>>& two_away_stencil() const;

    // Canonical corner triple holding the cell set {a,b,c}, or -1.
    Index triple_of_set(Index a, Index b, Index c) const;

    MeshQuality quality() const;

    // Test hook: additively perturb one corner-triple coefficient.
    void perturb_triple_coefficient(std::size_t triple_index, Real delta);

    // Wiring shared by the builders; public for the builders' use only.
    void finalize_connectivity();

private:
    std::unordered_map<std::uint64_t, Index> face_of_pair_;
    std::vector<std::vector<Index>> two_away_;
    std::unordered_map<std::uint64_t, Index> triple_of_set_;
};

// nx-by-ny grid of square cells of side h. Periodic grids identify opposite
// sides (nx, ny >= 3 to keep cell pairs sharing a single face); wall grids
// drop the boundary fluxes (free slip).
MeshGeometry build_regular_grid(Index nx, Index ny, Real h, BoundaryMode boundary);

// Delaunay triangle (2D, points with z = 0) or tetrahedral (3D) mesh with
// wall boundaries. Throws NonDelaunayError / InvertedCellError /
// InconsistentOrientationError on bad input.
MeshGeometry build_simplicial(const std::vector<Vec3>& nodes,
                              const std::vector<std::vector<Index>>& cells,
                              int dimension);

// Text mesh file: "dmeshv1 <dim>", "<node_count> <cell_count>", node
// coordinates, then cell vertex tuples (0-based).
MeshGeometry load_mesh_file(const std::string& path);
void save_mesh_file(const std::string& path, const std::vector<Vec3>& nodes,
                    const std::vector<std::vector<Index>>& cells, int dimension);

}  // namespace dfluid
