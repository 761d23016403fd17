#pragma once

#include <memory>
#include <unordered_map>
#include <vector>

#include "dfluid/fields.hpp"
#include "dfluid/mesh.hpp"

namespace dfluid {

// Discrete 1-form: antisymmetric matrix, stored once per unordered pair at
// the (min,max) orientation. Support is expected within the two-away class.
struct Form1 {
    const MeshGeometry* mesh = nullptr;
    std::unordered_map<std::uint64_t, Real> entries;

    Form1() = default;
    explicit Form1(const MeshGeometry& m) : mesh(&m) {}

    Real entry(Index i, Index j) const {
        auto it = entries.find(pair_key(i, j));
        if (it == entries.end()) return 0;
        return i < j ? it->second : -it->second;
    }
    void add(Index i, Index j, Real v) {
        entries[pair_key(i, j)] += (i < j) ? v : -v;
    }
    void set(Index i, Index j, Real v) {
        entries[pair_key(i, j)] = (i < j) ? v : -v;
    }
};

// Discrete 2-form: fully antisymmetric 3-tensor. Two reifications share one
// interface: values tabulated on the canonical corner triples (zero off the
// table), or the exterior derivative of a stored one-form evaluated on the
// fly. Permutation access applies the sign.
struct Form2 {
    const MeshGeometry* mesh = nullptr;
    std::vector<Real> triple_value;          // per mesh corner triple
    std::shared_ptr<const Form1> source;     // d of this one-form when set

    static Form2 on_triples(const MeshGeometry& m) {
        Form2 f;
        f.mesh = &m;
        f.triple_value.assign(m.triples.size(), 0.0);
        return f;
    }
    static Form2 derivative_of(const MeshGeometry& m, Form1 f1) {
        Form2 f;
        f.mesh = &m;
        f.source = std::make_shared<Form1>(std::move(f1));
        return f;
    }

    bool tabulated() const { return !source; }
    Real value(Index i, Index j, Index k) const;
};

// Operations (paired tolerances live in the tests).
Real integrate0(const Form0& f, const MeshGeometry& mesh);

Form1 d0(const Form0& f, const MeshGeometry& mesh);  // on the two-away stencil
Form2 d1(const Form1& f);

Form0 contract1(const VelocityField& A, const Form1& f);
Form1 contract2(const VelocityField& A, const Form2& f);

Real pair1(const Form1& f, const VelocityField& X);
Real pair1(const Form1& f, const GeneralMatrixField& X);
Real pair2(const Form2& f, const VelocityField& A, const VelocityField& B);

// Lie derivative via Cartan's formula, materialized on the two-away stencil.
Form1 lie1(const VelocityField& A, const Form1& f, Real null_row_tol = 1e-10);

// DEC vorticity: circulation of A around the dual loop of each hinge.
std::vector<Real> dec_vorticity(const VelocityField& A);

}  // namespace dfluid
