#pragma once

// Quaternion arithmetic and the geometry of S³ ⊂ ℍ and S² ⊂ Im(ℍ).
//
// Conventions used throughout the library:
//   * a quaternion x1 + x2 i + x3 j + x4 k is stored as (x1, x2, x3, x4);
//   * ℂ² is identified with ℝ⁴ by (z1, z2) = (x1 + i x2, x3 + i x4), so that
//     q = z1 + z2 j;
//   * S³ carries the orientation of the boundary of the unit ball
//     (outward normal first); S² likewise;
//   * tangent vectors at q are written v·q with v pure (right-invariant frame).

#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

namespace combing {

using Vec3 = std::array<double, 3>;
using Vec4 = std::array<double, 4>;
using Complex = std::complex<double>;

// ---------------------------------------------------------------------------
// Small vector helpers

template <std::size_t N>
constexpr std::array<double, N> operator+(const std::array<double, N>& a,
                                          const std::array<double, N>& b) {
    std::array<double, N> r{};
    for (std::size_t i = 0; i < N; ++i) r[i] = a[i] + b[i];
    return r;
}

template <std::size_t N>
constexpr std::array<double, N> operator-(const std::array<double, N>& a,
                                          const std::array<double, N>& b) {
    std::array<double, N> r{};
    for (std::size_t i = 0; i < N; ++i) r[i] = a[i] - b[i];
    return r;
}

template <std::size_t N>
constexpr std::array<double, N> operator-(const std::array<double, N>& a) {
    std::array<double, N> r{};
    for (std::size_t i = 0; i < N; ++i) r[i] = -a[i];
    return r;
}

template <std::size_t N>
constexpr std::array<double, N> operator*(double s, const std::array<double, N>& a) {
    std::array<double, N> r{};
    for (std::size_t i = 0; i < N; ++i) r[i] = s * a[i];
    return r;
}

template <std::size_t N>
constexpr double dot(const std::array<double, N>& a, const std::array<double, N>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < N; ++i) s += a[i] * b[i];
    return s;
}

template <std::size_t N>
double norm(const std::array<double, N>& a) {
    return std::sqrt(dot(a, a));
}

template <std::size_t N>
double distance(const std::array<double, N>& a, const std::array<double, N>& b) {
    return norm(a - b);
}

constexpr Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

constexpr double det3(const Vec3& a, const Vec3& b, const Vec3& c) { return dot(a, cross(b, c)); }

double det4(const Vec4& a, const Vec4& b, const Vec4& c, const Vec4& d);

// ---------------------------------------------------------------------------
// Errors

enum class ErrorKind {
    ProjectionPole,
    DegenerateVector,
    SingularFiber,
    TransversalityFailure,
    ResolutionTooCoarse,
    MaxStepsExceeded,
    IrregularValue,
    OrientationAmbiguous,
    LoopsTooClose,
    NoPoleFound,
    NoGenericProjection,
    UnreliableLinking,
    LiftInconsistent,
    InconsistentDistances,
    NoGlobalFraming,
    ParseError,
};

const char* to_string(ErrorKind kind);

/// Numerical or domain failure raised by the library. `kind()` identifies the
/// failure mode so callers can retry (e.g. with a perturbed field).
class ComputationError : public std::runtime_error {
public:
    ComputationError(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

// ---------------------------------------------------------------------------
// Quaternions

struct Quaternion {
    double x1 = 0.0, x2 = 0.0, x3 = 0.0, x4 = 0.0;

    constexpr Quaternion() = default;
    constexpr Quaternion(double a, double b, double c, double d) : x1(a), x2(b), x3(c), x4(d) {}
    constexpr explicit Quaternion(const Vec4& v) : x1(v[0]), x2(v[1]), x3(v[2]), x4(v[3]) {}

    static constexpr Quaternion real(double a) { return {a, 0, 0, 0}; }
    static constexpr Quaternion pure(const Vec3& v) { return {0, v[0], v[1], v[2]}; }
    static Quaternion from_complex(Complex z1, Complex z2) {
        return {z1.real(), z1.imag(), z2.real(), z2.imag()};
    }

    constexpr Vec4 vec() const { return {x1, x2, x3, x4}; }
    constexpr Vec3 imaginary() const { return {x2, x3, x4}; }
    Complex z1() const { return {x1, x2}; }
    Complex z2() const { return {x3, x4}; }

    constexpr Quaternion conj() const { return {x1, -x2, -x3, -x4}; }
    constexpr double norm_sq() const { return x1 * x1 + x2 * x2 + x3 * x3 + x4 * x4; }
    double norm() const { return std::sqrt(norm_sq()); }

    constexpr bool operator==(const Quaternion&) const = default;
};

constexpr Quaternion operator+(const Quaternion& a, const Quaternion& b) {
    return {a.x1 + b.x1, a.x2 + b.x2, a.x3 + b.x3, a.x4 + b.x4};
}
constexpr Quaternion operator-(const Quaternion& a, const Quaternion& b) {
    return {a.x1 - b.x1, a.x2 - b.x2, a.x3 - b.x3, a.x4 - b.x4};
}
constexpr Quaternion operator-(const Quaternion& a) { return {-a.x1, -a.x2, -a.x3, -a.x4}; }
constexpr Quaternion operator*(double s, const Quaternion& a) {
    return {s * a.x1, s * a.x2, s * a.x3, s * a.x4};
}

/// Hamilton product.
constexpr Quaternion qmul(const Quaternion& a, const Quaternion& b) {
    return {a.x1 * b.x1 - a.x2 * b.x2 - a.x3 * b.x3 - a.x4 * b.x4,
            a.x1 * b.x2 + a.x2 * b.x1 + a.x3 * b.x4 - a.x4 * b.x3,
            a.x1 * b.x3 - a.x2 * b.x4 + a.x3 * b.x1 + a.x4 * b.x2,
            a.x1 * b.x4 + a.x2 * b.x3 - a.x3 * b.x2 + a.x4 * b.x1};
}
constexpr Quaternion operator*(const Quaternion& a, const Quaternion& b) { return qmul(a, b); }

namespace quat {
inline constexpr Quaternion one{1, 0, 0, 0};
inline constexpr Quaternion i{0, 1, 0, 0};
inline constexpr Quaternion j{0, 0, 1, 0};
inline constexpr Quaternion k{0, 0, 0, 1};
}  // namespace quat

// ---------------------------------------------------------------------------
// Points of S³ and S²

inline constexpr double kUnitTolerance = 1e-10;

/// Unit quaternion. Construction renormalizes; inputs farther than
/// kUnitTolerance from the sphere are still accepted but must be nonzero.
class S3Point {
public:
    S3Point() = default;
    explicit S3Point(const Quaternion& q);
    explicit S3Point(const Vec4& v) : S3Point(Quaternion(v)) {}
    static S3Point from_complex(Complex z1, Complex z2) {
        return S3Point(Quaternion::from_complex(z1, z2));
    }

    const Quaternion& q() const { return q_; }
    Vec4 vec() const { return q_.vec(); }
    Complex z1() const { return q_.z1(); }
    Complex z2() const { return q_.z2(); }
    S3Point antipode() const { return S3Point(-q_); }

private:
    Quaternion q_ = quat::one;
};

class S2Point {
public:
    S2Point() = default;
    explicit S2Point(const Vec3& v);
    const Vec3& v() const { return v_; }

private:
    Vec3 v_ = {1.0, 0.0, 0.0};
};

/// Vector attached to an S³ point, orthogonal to it.
struct TangentVector {
    S3Point base;
    Vec4 vec{};
};

// ---------------------------------------------------------------------------
// Operations

/// ρ_s(v) = s·v·s⁻¹ for a pure quaternion v.
Vec3 rho(const S3Point& s, const Vec3& v);

/// Matrix of ρ_s (columns are images of i, j, k).
std::array<Vec3, 3> rho_matrix(const S3Point& s);

/// Unit quaternion s with ρ_s = R for a rotation matrix given by its columns.
/// The sign is chosen with nonnegative real part.
Quaternion quaternion_from_rotation(const std::array<Vec3, 3>& columns);

/// c_u = cos u + i sin u.
S3Point circle_point(double u);

/// Hopf map s ↦ s̄·i·s; its fibers are the left cosets {c_u·s}, i.e. the
/// great circles cut out by complex lines of ℂ².
S2Point hopf_map(const S3Point& s);

/// A base point s_y with hopf_map(s_y) = y.
S3Point hopf_base_point(const S2Point& y);

/// The fiber over y, parameterized by u ↦ c_u·s_y.
S3Point hopf_fiber(const S2Point& y, double u);

/// Orthogonal projection of w onto T_x S³.
TangentVector tangent_project(const S3Point& x, const Vec4& w);

/// Projection followed by normalization; throws DegenerateVector if the
/// projected vector has norm below 1e-12.
TangentVector tangent_project_unit(const S3Point& x, const Vec4& w);

/// Right-invariant orthonormal frame (i·x, j·x, k·x) of T_x S³. It is
/// positively oriented for the boundary orientation of S³.
std::array<Vec4, 3> right_frame(const S3Point& x);

/// Coordinates of a tangent vector in the right-invariant frame, i.e. the
/// pure part of w·x̄.
Vec3 to_right_coords(const S3Point& x, const Vec4& w);
Vec4 from_right_coords(const S3Point& x, const Vec3& c);

// ---------------------------------------------------------------------------
// Stereographic charts

/// Stereographic chart centered at `pole`: pole ↦ 0 and −pole ↦ ∞. The map
/// is orientation preserving from S³ to ℝ³.
class Chart {
public:
    static constexpr double kDefaultRadius = 2.5;

    explicit Chart(S3Point pole = S3Point(), double r_max = kDefaultRadius)
        : pole_(pole), r_max_(r_max) {}

    const S3Point& pole() const { return pole_; }
    double r_max() const { return r_max_; }

    /// Throws ProjectionPole when ‖p + pole‖ < 1e-6.
    Vec3 project(const S3Point& p) const;
    S3Point unproject(const Vec3& y) const;
    bool in_domain(const Vec3& y) const { return norm(y) <= r_max_; }

private:
    S3Point pole_;
    double r_max_;
};

/// The two standard charts centered at ±1.
std::array<Chart, 2> standard_charts();

}  // namespace combing
