#include "combing/loops.hpp"

#include <algorithm>
#include <limits>
#include <vector>

namespace combing {

namespace {

// Closest distance between segments [p0,p1] and [q0,q1] in ℝ⁴.
double segment_distance(const Vec4& p0, const Vec4& p1, const Vec4& q0, const Vec4& q1) {
    const Vec4 d1 = p1 - p0;
    const Vec4 d2 = q1 - q0;
    const Vec4 r = p0 - q0;
    const double a = dot(d1, d1);
    const double e = dot(d2, d2);
    const double f = dot(d2, r);
    double s = 0.0, t = 0.0;
    if (a <= 1e-300 && e <= 1e-300) return norm(r);
    if (a <= 1e-300) {
        t = std::clamp(f / e, 0.0, 1.0);
    } else {
        const double c = dot(d1, r);
        if (e <= 1e-300) {
            s = std::clamp(-c / a, 0.0, 1.0);
        } else {
            const double b = dot(d1, d2);
            const double denom = a * e - b * b;
            s = denom > 1e-300 ? std::clamp((b * f - c * e) / denom, 0.0, 1.0) : 0.0;
            t = (b * s + f) / e;
            if (t < 0.0) {
                t = 0.0;
                s = std::clamp(-c / a, 0.0, 1.0);
            } else if (t > 1.0) {
                t = 1.0;
                s = std::clamp((b - c) / a, 0.0, 1.0);
            }
        }
    }
    return norm((p0 + s * d1) - (q0 + t * d2));
}

}  // namespace

double OrientedLoop::length() const {
    double s = 0.0;
    for (std::size_t k = 0; k < points.size(); ++k)
        s += distance(points[k].vec(), points[(k + 1) % points.size()].vec());
    return s;
}

double OrientedLoop::max_gap() const {
    double g = 0.0;
    for (std::size_t k = 0; k < points.size(); ++k)
        g = std::max(g, distance(points[k].vec(), points[(k + 1) % points.size()].vec()));
    return g;
}

OrientedLoop OrientedLoop::reversed() const {
    OrientedLoop r{points};
    std::reverse(r.points.begin(), r.points.end());
    return r;
}

OrientedLoop OrientedLoop::refined() const {
    OrientedLoop r;
    r.points.reserve(points.size() * 2);
    for (std::size_t k = 0; k < points.size(); ++k) {
        const Vec4 a = points[k].vec();
        const Vec4 b = points[(k + 1) % points.size()].vec();
        r.points.push_back(points[k]);
        r.points.emplace_back(a + b);
    }
    return r;
}

double min_distance(const OrientedLoop& a, const OrientedLoop& b) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& p : a.points)
        for (const auto& q : b.points) best = std::min(best, distance(p.vec(), q.vec()));
    return best;
}

double min_self_distance(const OrientedLoop& loop, double min_arc) {
    const std::size_t n = loop.size();
    double best = std::numeric_limits<double>::infinity();
    if (n < 4) return best;
    // s[k] = arc length from vertex 0 to vertex k
    std::vector<double> s(n + 1, 0.0);
    for (std::size_t k = 0; k < n; ++k)
        s[k + 1] = s[k] + distance(loop.points[k].vec(), loop.points[(k + 1) % n].vec());
    const double total = s[n];
    for (std::size_t i = 0; i < n; ++i) {
        const Vec4 p0 = loop.points[i].vec();
        const Vec4 p1 = loop.points[(i + 1) % n].vec();
        for (std::size_t j = i + 2; j < n; ++j) {
            // arc between the two segments, either way round
            const double gap = std::min(s[j] - s[i + 1], total - s[j + 1] + s[i]);
            if (gap < min_arc) continue;
            const Vec4 q0 = loop.points[j].vec();
            const Vec4 q1 = loop.points[(j + 1) % n].vec();
            best = std::min(best, segment_distance(p0, p1, q0, q1));
        }
    }
    return best;
}

double hausdorff_distance(const OrientedLoop& a, const OrientedLoop& b) {
    auto directed = [](const OrientedLoop& x, const OrientedLoop& y) {
        double worst = 0.0;
        for (const auto& p : x.points) {
            double best = std::numeric_limits<double>::infinity();
            for (const auto& q : y.points) best = std::min(best, distance(p.vec(), q.vec()));
            worst = std::max(worst, best);
        }
        return worst;
    };
    return std::max(directed(a, b), directed(b, a));
}

}  // namespace combing
