#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace dfluid {

using Index = std::int32_t;
using Real = double;

struct Vec3 {
    Real x = 0, y = 0, z = 0;

    Vec3() = default;
    Vec3(Real x_, Real y_, Real z_ = 0) : x(x_), y(y_), z(z_) {}

    Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator*(Real s) const { return {x * s, y * s, z * s}; }
    Vec3 operator/(Real s) const { return {x / s, y / s, z / s}; }
    Vec3& operator+=(const Vec3& o) { x += o.x; y += o.y; z += o.z; return *this; }
    Vec3& operator*=(Real s) { x *= s; y *= s; z *= s; return *this; }
};

inline Real dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline Real norm(const Vec3& a) { return std::sqrt(dot(a, a)); }
inline Vec3 normalized(const Vec3& a) { return a / norm(a); }

// Unordered cell-pair key for hash maps.
inline std::uint64_t pair_key(Index a, Index b) {
    if (a > b) std::swap(a, b);
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) |
           static_cast<std::uint32_t>(b);
}

// Sign of the permutation taking (a,b,c) to (p,q,r), both orderings of the
// same three distinct values. Returns 0 if the value sets differ.
inline int permutation_sign(Index a, Index b, Index c, Index p, Index q, Index r) {
    if (a == p) {
        if (b == q && c == r) return 1;
        if (b == r && c == q) return -1;
        return 0;
    }
    if (a == q) {
        if (b == r && c == p) return 1;
        if (b == p && c == r) return -1;
        return 0;
    }
    if (a == r) {
        if (b == p && c == q) return 1;
        if (b == q && c == p) return -1;
        return 0;
    }
    return 0;
}

struct MeshError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NonDelaunayError : MeshError {
    using MeshError::MeshError;
};
struct InvertedCellError : MeshError {
    using MeshError::MeshError;
};
struct InconsistentOrientationError : MeshError {
    using MeshError::MeshError;
};

struct SolveError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct SingularJacobianError : SolveError {
    using SolveError::SolveError;
};
struct NonConvergenceError : SolveError {
    Real last_residual = 0;
    int iterations = 0;
    NonConvergenceError(const std::string& msg, Real r, int it)
        : SolveError(msg), last_residual(r), iterations(it) {}
};

}  // namespace dfluid
