#include "combing/extract.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "combing/parallel.hpp"

namespace combing {

namespace {

constexpr double kFdStep = 1e-6;
constexpr int kNewtonIterations = 30;
constexpr double kMaxNewtonStep = 0.25;
constexpr double kMinStepFraction = 1e-4;
constexpr double kMaxCorrection = 0.3;

Vec3 unit(const Vec3& v) { return (1.0 / norm(v)) * v; }

std::pair<Vec3, Vec3> gauge_basis(const Vec3& base, const Gauge& g) {
    const Vec3 e1 = unit(g.axis - dot(g.axis, base) * base);
    return {e1, cross(base, e1)};
}

std::array<double, 2> project_residual(const Vec3& base, const Vec3& target, const Gauge& g) {
    const auto [e1, e2] = gauge_basis(base, g);
    return {dot(target, e1), dot(target, e2)};
}

double residual_norm(const std::array<double, 2>& h) { return std::hypot(h[0], h[1]); }

struct TangentInfo {
    Vec4 tangent;  // unit, ambient, oriented by the convention
    double sigma_min;
};

TangentInfo oriented_tangent(const AlignmentProblem& p, const S3Point& x) {
    const Vec3 b = p.base(x);
    const Gauge g = gauge_for(b);
    const auto grads = constraint_gradients(p, x, g);
    const double smin = smallest_singular_value(grads);
    Vec3 t = cross(grads[0], grads[1]);
    const double n = norm(t);
    if (n == 0.0) return {Vec4{}, smin};
    if (dot(b, p.target(x)) < 0.0) t = -t;
    return {from_right_coords(x, (1.0 / n) * t), smin};
}

struct Refined {
    S3Point x;
    double residual = 0.0;
};

std::optional<Refined> newton_impl(const AlignmentProblem& p, const S3Point& x0, const ExtractionParams& params) {
    const Gauge g = gauge_for(p.base(x0));
    S3Point x = x0;
    for (int it = 0; it < kNewtonIterations; ++it) {
        const auto h = constraint_value(p, x, g);
        const double r = residual_norm(h);
        if (r < params.epsilon) return Refined{x, r};
        const auto gr = constraint_gradients(p, x, g);
        const double a = dot(gr[0], gr[0]), b = dot(gr[0], gr[1]), c = dot(gr[1], gr[1]);
        const double det = a * c - b * b;
        if (!(det > 1e-300)) return std::nullopt;
        const double l1 = (c * h[0] - b * h[1]) / det;
        const double l2 = (a * h[1] - b * h[0]) / det;
        Vec3 step = -1.0 * (l1 * gr[0] + l2 * gr[1]);
        const double sn = norm(step);
        if (!std::isfinite(sn)) return std::nullopt;
        if (sn > kMaxNewtonStep) step = (kMaxNewtonStep / sn) * step;
        x = S3Point(x.vec() + from_right_coords(x, step));
    }
    return std::nullopt;
}

struct TraceResult {
    OrientedLoop loop;
    double max_residual = 0.0;
    double min_sigma = std::numeric_limits<double>::infinity();
};

TraceResult trace_impl(const AlignmentProblem& p, const S3Point& seed, const ExtractionParams& params) {
    TraceResult out;
    out.loop.points.push_back(seed);
    S3Point x = seed;
    double h = params.step;
    std::size_t steps = 0;
    TangentInfo ti = oriented_tangent(p, x);
    for (;;) {
        if (ti.sigma_min < params.transversality)
            throw ComputationError(ErrorKind::TransversalityFailure,
                                   "constraint Jacobian is rank deficient along a traced curve");
        out.min_sigma = std::min(out.min_sigma, ti.sigma_min);
        const S3Point predicted(x.vec() + h * ti.tangent);
        const auto corrected = newton_impl(p, predicted, params);
        bool accepted = false;
        TangentInfo next{};
        if (corrected) {
            const double d = distance(corrected->x.vec(), x.vec());
            // A long correction means the predictor left the branch; near a
            // narrow neck it would land on the neighbouring one.
            const double jump = distance(corrected->x.vec(), predicted.vec());
            if (d < 2.0 * h && d > 0.2 * h && jump < kMaxCorrection * h) {
                next = oriented_tangent(p, corrected->x);
                accepted = dot(next.tangent, ti.tangent) > 0.8;
            }
        }
        if (!accepted) {
            h *= 0.5;
            if (h < kMinStepFraction * params.step)
                throw ComputationError(ErrorKind::TransversalityFailure, "continuation step underflow");
            continue;
        }
        x = corrected->x;
        ti = next;
        out.max_residual = std::max(out.max_residual, corrected->residual);
        ++steps;
        h = std::min(params.step, 1.5 * h);
        const double to_start = distance(x.vec(), seed.vec());
        if (steps >= 10 && to_start < params.step) {
            if (to_start > 0.25 * params.step) out.loop.points.push_back(x);
            return out;
        }
        out.loop.points.push_back(x);
        if (steps >= params.max_steps)
            throw ComputationError(ErrorKind::MaxStepsExceeded, "curve did not close");
    }
}

bool near_any(const std::vector<OrientedLoop>& loops, const S3Point& x, double d) {
    for (const auto& l : loops)
        for (const auto& q : l.points)
            if (distance(q.vec(), x.vec()) < d) return true;
    return false;
}

struct Extraction {
    std::vector<OrientedLoop> positive, negative;
    ExtractionStats stats;
};

// Grid seeding on both charts, Newton refinement, then sequential tracing
// in grid order so the result does not depend on the thread count.
Extraction extract_all(const AlignmentProblem& p, const ExtractionParams& params, bool want_negative,
                       double rank_threshold, ErrorKind rank_error) {
    const int n = params.resolution;
    if (n < 2) throw ComputationError(ErrorKind::ResolutionTooCoarse, "grid resolution must be at least 2");
    const double ext = params.grid_extent;
    const double cell = 2.0 * ext / n;
    const std::size_t side = std::size_t(n) + 1;
    auto coord = [&](std::size_t k) { return -ext + cell * double(k); };

    std::vector<S3Point> seeds;
    for (const Chart& chart : standard_charts()) {
        std::vector<Vec3> bases(side * side * side), targets(side * side * side);
        parallel_for(side * side, [&](std::size_t ij) {
            const std::size_t i = ij / side, j = ij % side;
            for (std::size_t k = 0; k < side; ++k) {
                const S3Point x = chart.unproject({coord(i), coord(j), coord(k)});
                const std::size_t idx = (i * side + j) * side + k;
                bases[idx] = p.base(x);
                targets[idx] = p.target(x);
            }
        });

        const std::size_t ncell = std::size_t(n) * n * n;
        std::vector<char> candidate(ncell, 0);
        const double own = 1.0 + 0.5 * std::sqrt(3.0) * cell;
        parallel_for(ncell, [&](std::size_t c) {
            const std::size_t i = c / (std::size_t(n) * n), j = (c / n) % n, k = c % n;
            const Vec3 center{coord(i) + 0.5 * cell, coord(j) + 0.5 * cell, coord(k) + 0.5 * cell};
            if (norm(center) > own) return;
            double lo0 = 1e300, hi0 = -1e300, lo1 = 1e300, hi1 = -1e300, label = -1e300;
            const Vec3 cb = p.base(chart.unproject(center));
            const Gauge g = gauge_for(cb);
            const auto [e1, e2] = gauge_basis(cb, g);
            const Vec3 ct = p.target(chart.unproject(center));
            const Vec3 cw = ct - dot(cb, ct) * cb;
            const double c0 = dot(cw, e1), c1 = dot(cw, e2);
            double spread = 0.0;
            for (int corner = 0; corner < 8; ++corner) {
                const std::size_t idx =
                    ((i + (corner & 1)) * side + (j + ((corner >> 1) & 1))) * side + (k + ((corner >> 2) & 1));
                const Vec3& b = bases[idx];
                const Vec3& t = targets[idx];
                const double bt = dot(b, t);
                const Vec3 w = t - bt * b;
                const double h0 = dot(w, e1), h1 = dot(w, e2);
                lo0 = std::min(lo0, h0), hi0 = std::max(hi0, h0);
                lo1 = std::min(lo1, h1), hi1 = std::max(hi1, h1);
                spread = std::max(spread, std::hypot(h0 - c0, h1 - c1));
                label = std::max(label, bt);
            }
            // Corner bracketing misses zeros where the map turns within one
            // cell; the spread bound catches those.
            const bool bracketed = lo0 <= 0.0 && hi0 >= 0.0 && lo1 <= 0.0 && hi1 >= 0.0;
            const bool close = std::hypot(c0, c1) <= spread;
            if ((bracketed || close) && (want_negative || label > 0.0)) candidate[c] = 1;
        });
        for (std::size_t c = 0; c < ncell; ++c) {
            if (!candidate[c]) continue;
            const std::size_t i = c / (std::size_t(n) * n), j = (c / n) % n, k = c % n;
            seeds.push_back(chart.unproject({coord(i) + 0.5 * cell, coord(j) + 0.5 * cell, coord(k) + 0.5 * cell}));
        }
    }

    Extraction out;
    out.stats.candidate_cells = seeds.size();
    out.stats.min_singular_value = std::numeric_limits<double>::infinity();

    std::vector<std::optional<Refined>> refined(seeds.size());
    std::vector<double> sigma(seeds.size(), std::numeric_limits<double>::infinity());
    parallel_for(seeds.size(), [&](std::size_t s) {
        auto r = newton_impl(p, seeds[s], params);
        if (!r) return;
        if (!want_negative && alignment_sign(p, r->x) < 0.0) return;
        sigma[s] = smallest_singular_value(constraint_gradients(p, r->x, gauge_for(p.base(r->x))));
        refined[s] = r;
    });
    for (std::size_t s = 0; s < seeds.size(); ++s)
        if (refined[s] && sigma[s] < rank_threshold)
            throw ComputationError(rank_error, "zero set is not transverse (smallest singular value " +
                                                   std::to_string(sigma[s]) + ")");

    std::vector<OrientedLoop> all;
    for (std::size_t s = 0; s < seeds.size(); ++s) {
        if (!refined[s]) continue;
        const S3Point& x = refined[s]->x;
        if (near_any(all, x, params.dedup_distance)) continue;
        TraceResult tr = trace_impl(p, x, params);
        ++out.stats.traced;
        out.stats.max_residual = std::max(out.stats.max_residual, tr.max_residual);
        out.stats.min_singular_value = std::min(out.stats.min_singular_value, tr.min_sigma);
        if (tr.loop.size() < 10)
            throw ComputationError(ErrorKind::ResolutionTooCoarse, "traced component is too short");
        tr.loop = orient_loop(p, tr.loop);
        if (min_self_distance(tr.loop) < 1e-3)
            throw ComputationError(ErrorKind::ResolutionTooCoarse, "traced loop is not embedded");
        for (const auto& other : all)
            if (min_distance(other, tr.loop) < 1e-3)
                throw ComputationError(ErrorKind::ResolutionTooCoarse, "traced loops are not disjoint");
        const bool positive = alignment_sign(p, x) > 0.0;
        all.push_back(tr.loop);
        (positive ? out.positive : out.negative).push_back(std::move(tr.loop));
    }
    if (out.stats.traced == 0) out.stats.min_singular_value = 0.0;
    return out;
}

}  // namespace

AlignmentProblem collinearity_problem(const FieldSpec& x, const FieldSpec& y) {
    return {[x](const S3Point& q) { return to_right_coords(q, eval_vec(x, q)); },
            [y](const S3Point& q) { return to_right_coords(q, eval_vec(y, q)); }};
}

Gauge gauge_for(const Vec3& base) {
    int best = 0;
    for (int k = 1; k < 3; ++k)
        if (std::abs(base[k]) < std::abs(base[best])) best = k;
    Vec3 axis{};
    axis[best] = 1.0;
    return {axis};
}

std::array<double, 2> constraint_value(const AlignmentProblem& p, const S3Point& x, const Gauge& g) {
    return project_residual(p.base(x), p.target(x), g);
}

std::array<Vec3, 2> constraint_gradients(const AlignmentProblem& p, const S3Point& x, const Gauge& g) {
    std::array<Vec3, 2> grads{};
    const auto frame = right_frame(x);
    for (int k = 0; k < 3; ++k) {
        const S3Point plus(x.vec() + kFdStep * frame[k]);
        const S3Point minus(x.vec() - kFdStep * frame[k]);
        const auto hp = constraint_value(p, plus, g);
        const auto hm = constraint_value(p, minus, g);
        grads[0][k] = (hp[0] - hm[0]) / (2.0 * kFdStep);
        grads[1][k] = (hp[1] - hm[1]) / (2.0 * kFdStep);
    }
    return grads;
}

double smallest_singular_value(const std::array<Vec3, 2>& g) {
    const double a = dot(g[0], g[0]), b = dot(g[0], g[1]), c = dot(g[1], g[1]);
    const double tr = 0.5 * (a + c);
    const double disc = std::sqrt(std::max(0.0, 0.25 * (a - c) * (a - c) + b * b));
    return std::sqrt(std::max(0.0, tr - disc));
}

std::optional<S3Point> newton_refine(const AlignmentProblem& p, const S3Point& x0, const ExtractionParams& params) {
    auto r = newton_impl(p, x0, params);
    if (!r) return std::nullopt;
    return r->x;
}

double alignment_sign(const AlignmentProblem& p, const S3Point& x) {
    return dot(p.base(x), p.target(x)) >= 0.0 ? 1.0 : -1.0;
}

OrientedLoop trace_curve(const AlignmentProblem& p, const S3Point& seed, const ExtractionParams& params) {
    const auto r = newton_impl(p, seed, params);
    if (!r) throw ComputationError(ErrorKind::TransversalityFailure, "seed does not converge onto the zero set");
    return trace_impl(p, r->x, params).loop;
}

OrientedLoop orient_loop(const AlignmentProblem& p, const OrientedLoop& loop) {
    const std::size_t n = loop.size();
    if (n < 3) throw ComputationError(ErrorKind::OrientationAmbiguous, "loop has fewer than 3 points");
    int votes[2] = {0, 0};
    for (std::size_t s = 0; s < 3; ++s) {
        const std::size_t i = s * n / 3;
        const Vec4 chord = loop.points[(i + 1) % n].vec() - loop.points[(i + n - 1) % n].vec();
        const TangentInfo ti = oriented_tangent(p, loop.points[i]);
        const double c = dot(chord, ti.tangent) / norm(chord);
        if (std::abs(c) < 0.5)
            throw ComputationError(ErrorKind::OrientationAmbiguous, "loop is not tangent to the constraint kernel");
        ++votes[c > 0.0 ? 0 : 1];
    }
    if (votes[0] != 3 && votes[1] != 3)
        throw ComputationError(ErrorKind::OrientationAmbiguous, "orientation differs between sample points");
    return votes[0] == 3 ? loop : loop.reversed();
}

OrientedLoop orient_loop(const OrientedLoop& loop, const FieldSpec& x, const FieldSpec& y) {
    return orient_loop(collinearity_problem(x, y), loop);
}

CollinearityLinks collinearity_links(const FieldSpec& x, const FieldSpec& y, const ExtractionParams& params) {
    Extraction e = extract_all(collinearity_problem(x, y), params, true, params.transversality,
                               ErrorKind::TransversalityFailure);
    CollinearityLinks out;
    out.positive = {std::move(e.positive), SignClass::Positive};
    out.negative = {std::move(e.negative), SignClass::Negative};
    out.stats = e.stats;
    return out;
}

LinkSet preimage_link(const SphereValued& m, const S2Point& value, const ExtractionParams& params) {
    const Vec3 y = value.v();
    const AlignmentProblem p{[y](const S3Point&) { return y; }, [m](const S3Point& x) { return unit(m(x)); }};
    Extraction e = extract_all(p, params, false, kRegularValueThreshold, ErrorKind::IrregularValue);
    return {std::move(e.positive), SignClass::Positive};
}

}  // namespace combing
