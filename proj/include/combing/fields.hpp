#pragma once

// Catalog of non-singular vector fields on S³.
//
// Every field is a unit tangent field. Fields are described by an immutable
// FieldSpec tree that can be evaluated anywhere and printed/parsed in a
// canonical text form:
//
//   hopf+                  (iz1, iz2)
//   hopf-                  (iz1, −iz2), the push-forward of hopf+ by R
//   seifert:P,Q            unit field tangent to the (P,Q) Seifert fibers
//   xn:N                   twist field, positively collinear with seifert:N,1
//                          on one regular fiber, negatively on another;
//                          in the frame of seifert:N,1 it is the Seifert map
//   ms:N                   Morse–Smale field with N−1 closed orbits plus
//                          L_N, modelled on the Seifert (N−1,1) fibration
//   R(SPEC)                push-forward by R(x1,x2,x3,x4) = (x1,x2,x3,−x4)
//   perturb(SPEC;seed=S;amp=A)   small smooth perturbation of SPEC

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include "combing/loops.hpp"
#include "combing/quat_core.hpp"

namespace combing {

class FieldSpec;

namespace field {
struct HopfPlus {};
struct HopfMinus {};
struct Seifert {
    int p = 1;
    int q = 1;
};
struct TubularTwist {
    int n = 1;
};
struct MorseSmale {
    int n = 1;
};
struct PushForwardR {
    std::shared_ptr<const FieldSpec> inner;
};
struct Perturbed {
    std::shared_ptr<const FieldSpec> inner;
    std::uint64_t seed = 0;
    double amplitude = 1e-3;
};
using Variant = std::variant<HopfPlus, HopfMinus, Seifert, TubularTwist, MorseSmale, PushForwardR, Perturbed>;
}  // namespace field

class FieldSpec {
public:
    FieldSpec() : node_(field::HopfPlus{}) {}
    explicit FieldSpec(field::Variant node) : node_(std::move(node)) {}

    const field::Variant& node() const { return node_; }

    /// Canonical text form; parse(to_string()) reproduces the spec.
    std::string to_string() const;
    static FieldSpec parse(std::string_view text);

    bool operator==(const FieldSpec& other) const { return to_string() == other.to_string(); }

private:
    field::Variant node_;
};

// Constructors (validate parameters; throw std::invalid_argument).
FieldSpec hopf_plus();
FieldSpec hopf_minus();
FieldSpec seifert(int p, int q);
FieldSpec tubular_twist(int n);
FieldSpec morse_smale(int n);
FieldSpec push_forward_R(const FieldSpec& inner);
FieldSpec perturbed(const FieldSpec& inner, std::uint64_t seed, double amplitude = 1e-3);

/// Unit tangent vector of the field at x.
TangentVector eval(const FieldSpec& spec, const S3Point& x);
/// Same as eval, as a raw 4-vector.
Vec4 eval_vec(const FieldSpec& spec, const S3Point& x);

/// The field written in the right-invariant frame: the pure unit quaternion
/// X(q)·q̄.
S2Point express_in_right_frame(const FieldSpec& spec, const S3Point& x);

/// R(x1,x2,x3,x4) = (x1,x2,x3,−x4).
S3Point reflect_R(const S3Point& x);
Vec4 reflect_R(const Vec4& v);

/// Global orthonormal, positively oriented frame whose first vector is the
/// field. Available for hopf±, seifert, ms:1 and R/perturb of those;
/// throws NoGlobalFraming otherwise.
std::array<Vec4, 3> framing(const FieldSpec& spec, const S3Point& x);
bool has_framing(const FieldSpec& spec);

// ---------------------------------------------------------------------------
// Seifert fibrations

/// [z2^q : z1^p] ∈ ℂP¹ ≅ S², with z1 = 0 mapped to the north pole (0,0,1)
/// and z2 = 0 to the south pole. For p < 0 the invariant ratio uses z̄1^|p|.
S2Point seifert_map(int p, int q, const S3Point& x);

/// Orbit t ↦ (e^{iqt} z1, e^{ipt} z2), t ∈ [0, 2π), sampled at m points.
/// Throws SingularFiber within 1e-6 of {z1 = 0} ∪ {z2 = 0}.
OrientedLoop seifert_regular_fiber(int p, int q, const S3Point& x0, std::size_t m);

/// A point of S³ on the fiber of seifert_map(p, q, ·) over y.
S3Point seifert_fiber_point(int p, int q, const S2Point& y);

/// Singular fibers {z1 = 0} (over the north pole) and {z2 = 0} (over the
/// south pole), oriented along the Seifert flow for p, q > 0.
OrientedLoop seifert_north_fiber(int p, int q, std::size_t m);
OrientedLoop seifert_south_fiber(int p, int q, std::size_t m);

// ---------------------------------------------------------------------------
// Fields on S² and their lifts

enum class Sphere2Field {
    X0,  ///< gradient-like: source at the north pole, sink at the south pole
    X1,  ///< sources at both poles, saddle at (1,0,0), sink at (−1,0,0)
};

Vec3 sphere_field_eval(Sphere2Field f, const S2Point& y);

/// The lift of f through seifert_map(p, q, ·) orthogonal to the fibers;
/// zero on the singular fibers.
TangentVector orthogonal_lift(int p, int q, Sphere2Field f, const S3Point& x);

// ---------------------------------------------------------------------------
// Geometry of the constructed fields

/// Parameters of the Morse–Smale construction for ms:n, n ≥ 3.
struct MorseSmaleLayout {
    int p = 1;               ///< fibration S_{p,1}
    bool flip_attractor = true;
    bool flip_north = false;
};
MorseSmaleLayout morse_smale_layout(int n);

/// Chord radius on S² of the tubes where orbit orientation is flipped.
inline constexpr double kFlipTubeRadius = 0.6;

/// Periodic orbits of ms:n (n ≥ 2) with the flow orientation of the field:
/// north, south, saddle (index 1) and attractor (index 0).
struct MorseSmaleOrbits {
    OrientedLoop north, south, saddle, attractor;
};
MorseSmaleOrbits morse_smale_orbits(int n, std::size_t m);

/// The two fibers of xn:n where it is positively (first) and negatively
/// (second) collinear with seifert:n,1. They are regular fibers of the
/// (−n,1) fibration, oriented along seifert:-n,1.
std::array<OrientedLoop, 2> twist_fibers(int n, std::size_t m);

}  // namespace combing
