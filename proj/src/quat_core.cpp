#include "combing/quat_core.hpp"

#include <algorithm>

namespace combing {

const char* to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::ProjectionPole: return "ProjectionPole";
        case ErrorKind::DegenerateVector: return "DegenerateVector";
        case ErrorKind::SingularFiber: return "SingularFiber";
        case ErrorKind::TransversalityFailure: return "TransversalityFailure";
        case ErrorKind::ResolutionTooCoarse: return "ResolutionTooCoarse";
        case ErrorKind::MaxStepsExceeded: return "MaxStepsExceeded";
        case ErrorKind::IrregularValue: return "IrregularValue";
        case ErrorKind::OrientationAmbiguous: return "OrientationAmbiguous";
        case ErrorKind::LoopsTooClose: return "LoopsTooClose";
        case ErrorKind::NoPoleFound: return "NoPoleFound";
        case ErrorKind::NoGenericProjection: return "NoGenericProjection";
        case ErrorKind::UnreliableLinking: return "UnreliableLinking";
        case ErrorKind::LiftInconsistent: return "LiftInconsistent";
        case ErrorKind::InconsistentDistances: return "InconsistentDistances";
        case ErrorKind::NoGlobalFraming: return "NoGlobalFraming";
        case ErrorKind::ParseError: return "ParseError";
    }
    return "Unknown";
}

double det4(const Vec4& a, const Vec4& b, const Vec4& c, const Vec4& d) {
    // Laplace expansion along the first vector.
    auto minor = [&](int skip) {
        Vec3 r1{}, r2{}, r3{};
        int col = 0;
        for (int k = 0; k < 4; ++k) {
            if (k == skip) continue;
            r1[col] = b[k];
            r2[col] = c[k];
            r3[col] = d[k];
            ++col;
        }
        return det3(r1, r2, r3);
    };
    double s = 0.0;
    for (int k = 0; k < 4; ++k) {
        const double sign = (k % 2 == 0) ? 1.0 : -1.0;
        s += sign * a[k] * minor(k);
    }
    return s;
}

S3Point::S3Point(const Quaternion& q) {
    const double n = q.norm();
    if (n < 1e-300) throw ComputationError(ErrorKind::DegenerateVector, "zero quaternion is not a point of S3");
    q_ = (1.0 / n) * q;
}

S2Point::S2Point(const Vec3& v) {
    const double n = norm(v);
    if (n < 1e-300) throw ComputationError(ErrorKind::DegenerateVector, "zero vector is not a point of S2");
    v_ = (1.0 / n) * v;
}

Vec3 rho(const S3Point& s, const Vec3& v) {
    const Quaternion& q = s.q();
    return (q * Quaternion::pure(v) * q.conj()).imaginary();
}

std::array<Vec3, 3> rho_matrix(const S3Point& s) {
    return {rho(s, {1, 0, 0}), rho(s, {0, 1, 0}), rho(s, {0, 0, 1})};
}

Quaternion quaternion_from_rotation(const std::array<Vec3, 3>& c) {
    // m(r, col) = c[col][r]
    const double m00 = c[0][0], m11 = c[1][1], m22 = c[2][2];
    const double tr = m00 + m11 + m22;
    Quaternion q;
    if (tr > 0.0) {
        const double s = std::sqrt(tr + 1.0) * 2.0;
        q = {0.25 * s, (c[1][2] - c[2][1]) / s, (c[2][0] - c[0][2]) / s, (c[0][1] - c[1][0]) / s};
    } else if (m00 > m11 && m00 > m22) {
        const double s = std::sqrt(1.0 + m00 - m11 - m22) * 2.0;
        q = {(c[1][2] - c[2][1]) / s, 0.25 * s, (c[1][0] + c[0][1]) / s, (c[2][0] + c[0][2]) / s};
    } else if (m11 > m22) {
        const double s = std::sqrt(1.0 + m11 - m00 - m22) * 2.0;
        q = {(c[2][0] - c[0][2]) / s, (c[1][0] + c[0][1]) / s, 0.25 * s, (c[2][1] + c[1][2]) / s};
    } else {
        const double s = std::sqrt(1.0 + m22 - m00 - m11) * 2.0;
        q = {(c[0][1] - c[1][0]) / s, (c[2][0] + c[0][2]) / s, (c[2][1] + c[1][2]) / s, 0.25 * s};
    }
    if (q.x1 < 0.0) q = -q;
    return (1.0 / q.norm()) * q;
}

S3Point circle_point(double u) { return S3Point(Quaternion{std::cos(u), std::sin(u), 0.0, 0.0}); }

S2Point hopf_map(const S3Point& s) {
    const Quaternion& q = s.q();
    return S2Point((q.conj() * quat::i * q).imaginary());
}

S3Point hopf_base_point(const S2Point& y) {
    // r rotates i onto y (ρ_r(i) = y); then s = r̄ satisfies s̄·i·s = y.
    const Vec3& v = y.v();
    const Vec3 a{1.0, 0.0, 0.0};
    Quaternion r;
    if (1.0 + v[0] < 1e-12) {
        r = quat::j;
    } else {
        const Vec3 ax = cross(a, v);
        r = Quaternion{1.0 + v[0], ax[0], ax[1], ax[2]};
    }
    return S3Point(r.conj());
}

S3Point hopf_fiber(const S2Point& y, double u) {
    return S3Point(circle_point(u).q() * hopf_base_point(y).q());
}

TangentVector tangent_project(const S3Point& x, const Vec4& w) {
    const Vec4 p = x.vec();
    return {x, w - dot(p, w) * p};
}

TangentVector tangent_project_unit(const S3Point& x, const Vec4& w) {
    TangentVector t = tangent_project(x, w);
    const double n = norm(t.vec);
    if (n < 1e-12) throw ComputationError(ErrorKind::DegenerateVector, "tangent projection vanishes");
    t.vec = (1.0 / n) * t.vec;
    return t;
}

std::array<Vec4, 3> right_frame(const S3Point& x) {
    const Quaternion& q = x.q();
    return {(quat::i * q).vec(), (quat::j * q).vec(), (quat::k * q).vec()};
}

Vec3 to_right_coords(const S3Point& x, const Vec4& w) {
    return (Quaternion(w) * x.q().conj()).imaginary();
}

Vec4 from_right_coords(const S3Point& x, const Vec3& c) {
    return (Quaternion::pure(c) * x.q()).vec();
}

Vec3 Chart::project(const S3Point& p) const {
    if (distance(p.vec(), (-pole_.q()).vec()) < 1e-6)
        throw ComputationError(ErrorKind::ProjectionPole, "point at the projection pole");
    const Quaternion local = pole_.q().conj() * p.q();
    const double d = 1.0 + local.x1;
    return {local.x2 / d, local.x3 / d, local.x4 / d};
}

S3Point Chart::unproject(const Vec3& y) const {
    const double s = dot(y, y);
    const Quaternion local{(1.0 - s) / (1.0 + s), 2.0 * y[0] / (1.0 + s), 2.0 * y[1] / (1.0 + s),
                           2.0 * y[2] / (1.0 + s)};
    return S3Point(pole_.q() * local);
}

std::array<Chart, 2> standard_charts() {
    return {Chart(S3Point(quat::one)), Chart(S3Point(-quat::one))};
}

}  // namespace combing
