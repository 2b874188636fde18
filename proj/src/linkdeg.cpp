#include "combing/linkdeg.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <memory>
#include <limits>
#include <numbers>
#include <optional>

#include "combing/parallel.hpp"

namespace combing {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kMinPoleDistance = 0.2;
constexpr double kLinkResidual = 0.1;
constexpr double kLoopsTooClose = 1e-3;

Vec3 normalize3(const Vec3& v) { return (1.0 / norm(v)) * v; }

// Kronecker-sequence points, uniform on S³.
std::vector<S3Point> pole_candidates() {
    std::vector<S3Point> out;
    const double a1 = 0.6180339887498949, a2 = 0.4142135623730951, a3 = 0.7320508075688772;
    for (int k = 1; k <= 64; ++k) {
        const double u = std::fmod(k * a1, 1.0), v = std::fmod(k * a2, 1.0), w = std::fmod(k * a3, 1.0);
        const double r1 = std::sqrt(1.0 - u), r2 = std::sqrt(u);
        out.emplace_back(Vec4{r1 * std::sin(2 * kPi * v), r1 * std::cos(2 * kPi * v), r2 * std::sin(2 * kPi * w),
                              r2 * std::cos(2 * kPi * w)});
    }
    return out;
}

std::vector<Vec3> project_loop(const Chart& chart, const OrientedLoop& loop) {
    std::vector<Vec3> out;
    out.reserve(loop.size());
    for (const auto& p : loop.points) out.push_back(chart.project(p));
    return out;
}

double gauss_sum(const std::vector<Vec3>& a, const std::vector<Vec3>& b) {
    const std::size_t n = a.size(), m = b.size();
    std::vector<Vec3> bm(m), db(m);
    for (std::size_t j = 0; j < m; ++j) {
        bm[j] = 0.5 * (b[j] + b[(j + 1) % m]);
        db[j] = b[(j + 1) % m] - b[j];
    }
    std::vector<double> partial(n, 0.0);
    parallel_for(n, [&](std::size_t i) {
        const Vec3 am = 0.5 * (a[i] + a[(i + 1) % n]);
        const Vec3 da = a[(i + 1) % n] - a[i];
        double s = 0.0;
        for (std::size_t j = 0; j < m; ++j) {
            const Vec3 r = am - bm[j];
            const double d = norm(r);
            s += dot(r, cross(da, db[j])) / (d * d * d);
        }
        partial[i] = s;
    });
    double total = 0.0;
    for (double s : partial) total += s;
    return total / (4.0 * kPi);
}

LinkingResult make_result(double raw) {
    LinkingResult r;
    r.raw = raw;
    r.rounded = int(std::lround(raw));
    r.residual = std::abs(raw - r.rounded);
    return r;
}

}  // namespace

S3Point projection_pole(const std::vector<const OrientedLoop*>& loops) {
    double best = -1.0;
    std::optional<S3Point> pole;
    for (const auto& c : pole_candidates()) {
        double d = std::numeric_limits<double>::infinity();
        for (const auto* l : loops)
            for (const auto& p : l->points) d = std::min(d, distance(p.vec(), c.vec()));
        if (d > best) {
            best = d;
            pole = c;
        }
    }
    if (!pole || best <= kMinPoleDistance)
        throw ComputationError(ErrorKind::NoPoleFound, "no projection pole away from the loops");
    return *pole;
}

LinkingResult gauss_linking(const OrientedLoop& a, const OrientedLoop& b) {
    if (a.size() < 3 || b.size() < 3) throw ComputationError(ErrorKind::DegenerateVector, "loop has fewer than 3 points");
    if (min_distance(a, b) < kLoopsTooClose) throw ComputationError(ErrorKind::LoopsTooClose, "loops intersect");
    const Chart chart(S3Point(-projection_pole({&a, &b}).q()));
    LinkingResult r = make_result(gauss_sum(project_loop(chart, a), project_loop(chart, b)));
    if (r.residual >= kLinkResidual) {
        r = make_result(gauss_sum(project_loop(chart, a.refined()), project_loop(chart, b.refined())));
        if (r.residual >= kLinkResidual)
            throw ComputationError(ErrorKind::UnreliableLinking,
                                   "Gauss integral " + std::to_string(r.raw) + " is not close to an integer");
    }
    return r;
}

int total_linking(const LinkSet& a, const LinkSet& b) {
    int s = 0;
    for (const auto& la : a.loops)
        for (const auto& lb : b.loops) s += gauss_linking(la, lb).rounded;
    return s;
}

namespace {

struct Crossings {
    bool generic = true;
    int sum = 0;
};

Crossings count_crossings(const std::vector<Vec3>& a, const std::vector<Vec3>& b, const Vec3& d) {
    const Vec3 p1 = normalize3(cross(d, std::abs(d[0]) < 0.9 ? Vec3{1, 0, 0} : Vec3{0, 1, 0}));
    const Vec3 p2 = cross(d, p1);
    auto flat = [&](const Vec3& v) { return std::array<double, 2>{dot(v, p1), dot(v, p2)}; };
    Crossings out;
    const std::size_t n = a.size(), m = b.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Vec3& a0 = a[i];
        const Vec3& a1 = a[(i + 1) % n];
        const auto fa0 = flat(a0), fa1 = flat(a1);
        const double ax = fa1[0] - fa0[0], ay = fa1[1] - fa0[1];
        for (std::size_t j = 0; j < m; ++j) {
            const Vec3& b0 = b[j];
            const Vec3& b1 = b[(j + 1) % m];
            const auto fb0 = flat(b0), fb1 = flat(b1);
            const double bx = fb1[0] - fb0[0], by = fb1[1] - fb0[1];
            if (std::max(fa0[0], fa1[0]) < std::min(fb0[0], fb1[0]) ||
                std::max(fb0[0], fb1[0]) < std::min(fa0[0], fa1[0]) ||
                std::max(fa0[1], fa1[1]) < std::min(fb0[1], fb1[1]) ||
                std::max(fb0[1], fb1[1]) < std::min(fa0[1], fa1[1]))
                continue;
            const double den = ax * by - ay * bx;
            const double scale = std::hypot(ax, ay) * std::hypot(bx, by);
            const double rx = fb0[0] - fa0[0], ry = fb0[1] - fa0[1];
            if (std::abs(den) <= 1e-9 * scale) {
                // Parallel segments only matter if they overlap.
                if (std::abs(rx * ay - ry * ax) <= 1e-9 * std::hypot(ax, ay) * (1.0 + std::hypot(rx, ry)))
                    out.generic = false;
                continue;
            }
            const double s = (rx * by - ry * bx) / den;
            const double t = (rx * ay - ry * ax) / den;
            constexpr double tol = 1e-9;
            if (s < -tol || s > 1.0 + tol || t < -tol || t > 1.0 + tol) continue;
            if (s < tol || s > 1.0 - tol || t < tol || t > 1.0 - tol) {
                out.generic = false;
                continue;
            }
            const Vec3 pa = a0 + s * (a1 - a0), pb = b0 + t * (b1 - b0);
            const double ha = dot(pa, d), hb = dot(pb, d);
            if (std::abs(ha - hb) < 1e-9) {
                out.generic = false;
                continue;
            }
            if (ha > hb) out.sum += dot(cross(a1 - a0, b1 - b0), d) > 0.0 ? 1 : -1;
        }
    }
    return out;
}

}  // namespace

int crossing_linking(const OrientedLoop& a, const OrientedLoop& b, const Vec3& direction) {
    if (min_distance(a, b) < kLoopsTooClose) throw ComputationError(ErrorKind::LoopsTooClose, "loops intersect");
    const Chart chart(S3Point(-projection_pole({&a, &b}).q()));
    const auto pa = project_loop(chart, a), pb = project_loop(chart, b);
    for (int attempt = 0; attempt < 32; ++attempt) {
        Vec3 d = direction;
        if (attempt > 0)
            d = d + 0.15 * Vec3{std::sin(1.3 * attempt), std::cos(2.1 * attempt), std::sin(0.7 * attempt + 0.4)};
        d = normalize3(d);
        const Crossings c = count_crossings(pa, pb, d);
        if (c.generic) return c.sum;
    }
    throw ComputationError(ErrorKind::NoGenericProjection, "no generic projection direction found");
}

// ---------------------------------------------------------------------------
// Degrees

namespace {

// The 26 (or 80) directions of {−1,0,1}ⁿ \ {0}, those with more nonzero
// entries first.
template <std::size_t N>
std::vector<std::array<double, N>> candidate_directions() {
    std::vector<std::array<double, N>> out;
    for (std::size_t nonzero = N; nonzero >= 1; --nonzero) {
        std::size_t total = 1;
        for (std::size_t k = 0; k < N; ++k) total *= 3;
        for (std::size_t code = 0; code < total; ++code) {
            std::array<double, N> v{};
            std::size_t c = code, nz = 0;
            double n2 = 0.0;
            for (std::size_t k = 0; k < N; ++k) {
                v[k] = double(int(c % 3) - 1);
                c /= 3;
                if (v[k] != 0.0) ++nz;
                n2 += v[k] * v[k];
            }
            if (nz != nonzero) continue;
            for (auto& x : v) x /= std::sqrt(n2);
            out.push_back(v);
        }
    }
    return out;
}

struct S2Chart {
    Vec3 c, a, b;
    Vec3 unproject(double y1, double y2) const {
        const double s = y1 * y1 + y2 * y2;
        return (1.0 / (1.0 + s)) * ((1.0 - s) * c + (2.0 * y1) * a + (2.0 * y2) * b);
    }
};

std::array<S2Chart, 2> s2_charts() {
    return {S2Chart{{0, 0, 1}, {1, 0, 0}, {0, 1, 0}}, S2Chart{{0, 0, -1}, {0, 1, 0}, {1, 0, 0}}};
}

// Smallest singular value of a 3×3 matrix given by rows.
double smallest_singular_value3(const std::array<Vec3, 3>& r) {
    // Eigenvalues of the Gram matrix by the trigonometric method.
    double g[3][3];
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) g[i][j] = dot(r[i], r[j]);
    const double p1 = g[0][1] * g[0][1] + g[0][2] * g[0][2] + g[1][2] * g[1][2];
    const double q = (g[0][0] + g[1][1] + g[2][2]) / 3.0;
    const double p2 = (g[0][0] - q) * (g[0][0] - q) + (g[1][1] - q) * (g[1][1] - q) + (g[2][2] - q) * (g[2][2] - q) +
                      2.0 * p1;
    const double p = std::sqrt(p2 / 6.0);
    if (p < 1e-300) return std::sqrt(std::max(0.0, q));
    double b[3][3];
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) b[i][j] = (g[i][j] - (i == j ? q : 0.0)) / p;
    const double detb = b[0][0] * (b[1][1] * b[2][2] - b[1][2] * b[2][1]) -
                        b[0][1] * (b[1][0] * b[2][2] - b[1][2] * b[2][0]) +
                        b[0][2] * (b[1][0] * b[2][1] - b[1][1] * b[2][0]);
    const double rr = std::clamp(detb / 2.0, -1.0, 1.0);
    const double phi = std::acos(rr) / 3.0;
    const double smallest = q + 2.0 * p * std::cos(phi + 2.0 * kPi / 3.0);
    return std::sqrt(std::max(0.0, smallest));
}

constexpr double kPreimageDedup = 1e-6;
constexpr double kDegreeFd = 1e-7;
constexpr double kDegreeResidual = 1e-11;

struct Preimage {
    Vec4 point;
    int sign;
};

// Collects signed preimages found from one chart grid; false if a preimage
// fails the rank test. values_at(y) returns the Dim constraint components
// and the label (positive near the value, negative near its antipode);
// solve(y0) refines a seed and returns the preimage with its smallest
// singular value.
template <int Dim, class Values, class Solve>
bool preimages_on_grid(int resolution, double extent, Values&& values_at, Solve&& solve,
                       std::vector<Preimage>& found) {
    using Coord = std::array<double, Dim>;
    const int n = resolution;
    const double cell = 2.0 * extent / n;
    const std::size_t side = std::size_t(n) + 1;
    std::size_t corners = 1, cells = 1;
    for (int d = 0; d < Dim; ++d) corners *= side, cells *= std::size_t(n);
    auto decode = [](std::size_t idx, std::size_t base) {
        std::array<std::size_t, Dim> c{};
        for (int d = Dim - 1; d >= 0; --d) {
            c[d] = idx % base;
            idx /= base;
        }
        return c;
    };
    std::vector<std::array<double, Dim + 1>> values(corners);
    parallel_for(corners, [&](std::size_t k) {
        const auto c = decode(k, side);
        Coord y{};
        for (int d = 0; d < Dim; ++d) y[d] = -extent + cell * double(c[d]);
        values[k] = values_at(y);
    });
    const double own = 1.0 + 0.5 * std::sqrt(double(Dim)) * cell;
    std::vector<std::optional<Preimage>> sols(cells);
    std::vector<char> irregular(cells, 0);
    parallel_for(cells, [&](std::size_t k) {
        const auto c = decode(k, std::size_t(n));
        Coord center{};
        double r2 = 0.0;
        for (int d = 0; d < Dim; ++d) {
            center[d] = -extent + cell * (double(c[d]) + 0.5);
            r2 += center[d] * center[d];
        }
        if (std::sqrt(r2) > own) return;
        std::array<double, Dim> lo, hi;
        lo.fill(1e300);
        hi.fill(-1e300);
        double label = -1e300;
        for (std::size_t corner = 0; corner < (std::size_t(1) << Dim); ++corner) {
            std::size_t idx = 0;
            for (int d = 0; d < Dim; ++d) idx = idx * side + c[d] + ((corner >> d) & 1);
            const auto& v = values[idx];
            for (int d = 0; d < Dim; ++d) lo[d] = std::min(lo[d], v[d]), hi[d] = std::max(hi[d], v[d]);
            label = std::max(label, v[Dim]);
        }
        if (label <= 0.0) return;
        for (int d = 0; d < Dim; ++d)
            if (lo[d] > 0.0 || hi[d] < 0.0) return;
        const auto sol = solve(center);
        if (!sol) return;
        if (sol->second < kRegularValueThreshold) irregular[k] = 1;
        sols[k] = sol->first;
    });
    for (std::size_t k = 0; k < cells; ++k) {
        if (irregular[k]) return false;
        if (!sols[k]) continue;
        const auto& s = *sols[k];
        const bool dup = std::any_of(found.begin(), found.end(),
                                     [&](const Preimage& f) { return distance(f.point, s.point) < kPreimageDedup; });
        if (!dup) found.push_back(s);
    }
    return true;
}

// Newton solve of Dim equations in Dim chart coordinates; J given by
// finite differences of `f`.
template <int Dim, class F>
std::optional<std::array<double, Dim>> newton_chart(F&& f, std::array<double, Dim> y) {
    for (int it = 0; it < 50; ++it) {
        const auto v = f(y);
        double r = 0.0;
        for (int d = 0; d < Dim; ++d) r += v[d] * v[d];
        if (std::sqrt(r) < kDegreeResidual) return y;
        double j[Dim][Dim];
        for (int c = 0; c < Dim; ++c) {
            auto yp = y, ym = y;
            yp[c] += kDegreeFd;
            ym[c] -= kDegreeFd;
            const auto fp = f(yp), fm = f(ym);
            for (int d = 0; d < Dim; ++d) j[d][c] = (fp[d] - fm[d]) / (2.0 * kDegreeFd);
        }
        std::array<double, Dim> step{};
        if constexpr (Dim == 2) {
            const double det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
            if (std::abs(det) < 1e-300) return std::nullopt;
            step = {(j[1][1] * v[0] - j[0][1] * v[1]) / det, (j[0][0] * v[1] - j[1][0] * v[0]) / det};
        } else {
            const Vec3 c0{j[0][0], j[1][0], j[2][0]}, c1{j[0][1], j[1][1], j[2][1]}, c2{j[0][2], j[1][2], j[2][2]};
            const Vec3 rhs{v[0], v[1], v[2]};
            const double det = det3(c0, c1, c2);
            if (std::abs(det) < 1e-300) return std::nullopt;
            step = {det3(rhs, c1, c2) / det, det3(c0, rhs, c2) / det, det3(c0, c1, rhs) / det};
        }
        double sn = 0.0;
        for (int d = 0; d < Dim; ++d) sn += step[d] * step[d];
        sn = std::sqrt(sn);
        if (!std::isfinite(sn)) return std::nullopt;
        const double damp = sn > 0.5 ? 0.5 / sn : 1.0;
        for (int d = 0; d < Dim; ++d) y[d] -= damp * step[d];
        double y2 = 0.0;
        for (int d = 0; d < Dim; ++d) y2 += y[d] * y[d];
        if (y2 > 25.0) return std::nullopt;
    }
    return std::nullopt;
}

}  // namespace

DegreeResult degree_s2(const S2Map& m, int resolution) {
    auto eval_unit = [&](const Vec3& x) { return normalize3(m(S2Point(x))); };
    for (const auto& dir : candidate_directions<3>()) {
        const Vec3 v{dir[0], dir[1], dir[2]};
        const Gauge g = gauge_for(v);
        const Vec3 e1 = normalize3(g.axis - dot(g.axis, v) * v);
        const Vec3 e2 = cross(v, e1);
        std::vector<Preimage> found;
        bool regular = true;
        for (const S2Chart& chart : s2_charts()) {
            auto f = [&](const std::array<double, 2>& y) {
                const Vec3 w = eval_unit(chart.unproject(y[0], y[1]));
                return std::array<double, 2>{dot(w, e1), dot(w, e2)};
            };
            auto values_at = [&](const std::array<double, 2>& y) {
                const Vec3 w = eval_unit(chart.unproject(y[0], y[1]));
                return std::array<double, 3>{dot(w, e1), dot(w, e2), dot(w, v)};
            };
            auto solve = [&](std::array<double, 2> y0) -> std::optional<std::pair<Preimage, double>> {
                const auto y = newton_chart<2>(f, y0);
                if (!y) return std::nullopt;
                const Vec3 x = chart.unproject((*y)[0], (*y)[1]);
                if (dot(eval_unit(x), v) <= 0.0) return std::nullopt;
                Vec3 cols[2];
                for (int c = 0; c < 2; ++c) {
                    auto yp = *y, ym = *y;
                    yp[c] += kDegreeFd;
                    ym[c] -= kDegreeFd;
                    cols[c] = (1.0 / (2.0 * kDegreeFd)) *
                              (eval_unit(chart.unproject(yp[0], yp[1])) - eval_unit(chart.unproject(ym[0], ym[1])));
                }
                const double scale = 2.0 / (1.0 + (*y)[0] * (*y)[0] + (*y)[1] * (*y)[1]);
                const std::array<Vec3, 2> rows{Vec3{dot(cols[0], e1), dot(cols[1], e1), 0.0},
                                               Vec3{dot(cols[0], e2), dot(cols[1], e2), 0.0}};
                const double smin = smallest_singular_value(rows) / scale;
                const int sign = det3(v, cols[0], cols[1]) > 0.0 ? 1 : -1;
                return std::make_pair(Preimage{Vec4{x[0], x[1], x[2], 0.0}, sign}, smin);
            };
            if (!preimages_on_grid<2>(resolution, 1.1, values_at, solve, found)) {
                regular = false;
                break;
            }
        }
        if (!regular) continue;
        DegreeResult r;
        r.regular_value = {v[0], v[1], v[2], 0.0};
        for (const auto& p : found) {
            r.preimages.push_back(p.point);
            r.signs.push_back(p.sign);
            r.value += p.sign;
        }
        return r;
    }
    throw ComputationError(ErrorKind::IrregularValue, "no regular value among the candidate directions");
}

DegreeResult degree_s3(const S3Map& h, int resolution) {
    auto eval_unit = [&](const S3Point& x) { return S3Point(h(x)).vec(); };
    for (const auto& dir : candidate_directions<4>()) {
        const S3Point v(Vec4{dir[0], dir[1], dir[2], dir[3]});
        const auto basis = right_frame(v);
        std::vector<Preimage> found;
        bool regular = true;
        for (const Chart& chart : standard_charts()) {
            auto at = [&](const std::array<double, 3>& y) { return eval_unit(chart.unproject({y[0], y[1], y[2]})); };
            auto f = [&](const std::array<double, 3>& y) {
                const Vec4 w = at(y);
                return std::array<double, 3>{dot(w, basis[0]), dot(w, basis[1]), dot(w, basis[2])};
            };
            auto values_at = [&](const std::array<double, 3>& y) {
                const Vec4 w = at(y);
                return std::array<double, 4>{dot(w, basis[0]), dot(w, basis[1]), dot(w, basis[2]), dot(w, v.vec())};
            };
            auto solve = [&](std::array<double, 3> y0) -> std::optional<std::pair<Preimage, double>> {
                const auto y = newton_chart<3>(f, y0);
                if (!y) return std::nullopt;
                const S3Point x = chart.unproject({(*y)[0], (*y)[1], (*y)[2]});
                if (dot(eval_unit(x), v.vec()) <= 0.0) return std::nullopt;
                Vec4 cols[3];
                for (int c = 0; c < 3; ++c) {
                    auto yp = *y, ym = *y;
                    yp[c] += kDegreeFd;
                    ym[c] -= kDegreeFd;
                    cols[c] = (1.0 / (2.0 * kDegreeFd)) * (at(yp) - at(ym));
                }
                const double y2 = (*y)[0] * (*y)[0] + (*y)[1] * (*y)[1] + (*y)[2] * (*y)[2];
                const double scale = 2.0 / (1.0 + y2);
                std::array<Vec3, 3> rows{};
                for (int r = 0; r < 3; ++r)
                    for (int c = 0; c < 3; ++c) rows[r][c] = dot(basis[r], cols[c]);
                const double smin = smallest_singular_value3(rows) / scale;
                const int sign = det4(v.vec(), cols[0], cols[1], cols[2]) > 0.0 ? 1 : -1;
                return std::make_pair(Preimage{x.vec(), sign}, smin);
            };
            if (!preimages_on_grid<3>(resolution, 1.1, values_at, solve, found)) {
                regular = false;
                break;
            }
        }
        if (!regular) continue;
        DegreeResult r;
        r.regular_value = v.vec();
        for (const auto& p : found) {
            r.preimages.push_back(p.point);
            r.signs.push_back(p.sign);
            r.value += p.sign;
        }
        return r;
    }
    throw ComputationError(ErrorKind::IrregularValue, "no regular value among the candidate directions");
}

// ---------------------------------------------------------------------------
// Hopf invariant

HopfInvariantResult hopf_invariant(const SphereValued& m, const ExtractionParams& params) {
    std::vector<std::pair<Vec3, LinkSet>> regular;
    for (const auto& dir : candidate_directions<3>()) {
        const Vec3 v{dir[0], dir[1], dir[2]};
        try {
            regular.emplace_back(v, preimage_link(m, S2Point(v), params));
        } catch (const ComputationError& e) {
            if (e.kind() != ErrorKind::IrregularValue) throw;
            continue;
        }
        if (regular.size() == 4) break;
    }
    if (regular.size() < 2) throw ComputationError(ErrorKind::IrregularValue, "fewer than two regular values found");
    HopfInvariantResult r;
    r.y = regular[0].first;
    r.z = regular[1].first;
    r.value = total_linking(regular[0].second, regular[1].second);
    r.check = regular.size() >= 4 ? total_linking(regular[2].second, regular[3].second) : r.value;
    if (r.check != r.value)
        throw ComputationError(ErrorKind::UnreliableLinking, "Hopf invariant depends on the regular values (" +
                                                                 std::to_string(r.value) + " vs " +
                                                                 std::to_string(r.check) + ")");
    return r;
}

// ---------------------------------------------------------------------------
// Framings

namespace {

// Unit quaternion s with ρ_s taking the frame of y to the frame of x, both
// written in right-frame coordinates. Defined up to sign.
Quaternion frame_rotation(const FieldSpec& x, const FieldSpec& y, const S3Point& q) {
    const auto fx = framing(x, q), fy = framing(y, q);
    std::array<Vec3, 3> a{}, b{}, cols{};
    for (int k = 0; k < 3; ++k) {
        a[k] = to_right_coords(q, fx[k]);
        b[k] = to_right_coords(q, fy[k]);
    }
    for (int c = 0; c < 3; ++c)
        for (int k = 0; k < 3; ++k) cols[c] = cols[c] + b[k][c] * a[k];
    return quaternion_from_rotation(cols);
}

struct LiftGrid {
    int n = 0;
    double extent = 1.1;
    double cell = 0.0;
    std::array<Chart, 2> charts = standard_charts();
    std::array<std::vector<Vec4>, 2> lifted;

    std::size_t side() const { return std::size_t(n) + 1; }
    std::size_t index(std::size_t i, std::size_t j, std::size_t k) const { return (i * side() + j) * side() + k; }
    Vec3 coords(std::size_t i, std::size_t j, std::size_t k) const {
        return {-extent + cell * double(i), -extent + cell * double(j), -extent + cell * double(k)};
    }
    std::size_t nearest(const Vec3& y) const {
        std::array<std::size_t, 3> c{};
        for (int d = 0; d < 3; ++d) {
            const double t = std::round((y[d] + extent) / cell);
            c[d] = std::size_t(std::clamp(t, 0.0, double(n)));
        }
        return index(c[0], c[1], c[2]);
    }
};

void lift_chart(const FieldSpec& x, const FieldSpec& y, LiftGrid& g, int chart) {
    const std::size_t side = g.side(), total = side * side * side;
    std::vector<Vec4> raw(total);
    parallel_for(total, [&](std::size_t idx) {
        const std::size_t i = idx / (side * side), j = (idx / side) % side, k = idx % side;
        raw[idx] = frame_rotation(x, y, g.charts[chart].unproject(g.coords(i, j, k))).vec();
    });
    auto& out = g.lifted[chart];
    out.assign(total, Vec4{});
    std::vector<char> seen(total, 0);
    const std::size_t mid = std::size_t(g.n / 2);
    const std::size_t root = g.index(mid, mid, mid);
    out[root] = raw[root][0] < 0.0 ? -raw[root] : raw[root];
    seen[root] = 1;
    std::deque<std::size_t> queue{root};
    while (!queue.empty()) {
        const std::size_t idx = queue.front();
        queue.pop_front();
        const std::size_t c[3] = {idx / (side * side), (idx / side) % side, idx % side};
        for (int d = 0; d < 3; ++d)
            for (int step : {-1, 1}) {
                if ((step < 0 && c[d] == 0) || (step > 0 && c[d] + 1 == side)) continue;
                std::size_t nc[3] = {c[0], c[1], c[2]};
                nc[d] = std::size_t(long(nc[d]) + step);
                const std::size_t nb = g.index(nc[0], nc[1], nc[2]);
                if (seen[nb]) continue;
                seen[nb] = 1;
                out[nb] = dot(raw[nb], out[idx]) < 0.0 ? -raw[nb] : raw[nb];
                queue.push_back(nb);
            }
    }
    // Every grid edge, tree or not, must join lifts of the same sign.
    for (std::size_t idx = 0; idx < total; ++idx) {
        const std::size_t c[3] = {idx / (side * side), (idx / side) % side, idx % side};
        for (int d = 0; d < 3; ++d) {
            if (c[d] + 1 == side) continue;
            std::size_t nc[3] = {c[0], c[1], c[2]};
            ++nc[d];
            if (dot(out[idx], out[g.index(nc[0], nc[1], nc[2])]) <= 0.0)
                throw ComputationError(ErrorKind::LiftInconsistent, "frame rotation lift is inconsistent on the grid");
        }
    }
}

}  // namespace

S3Map framing_rotation_lift(const FieldSpec& x, const FieldSpec& y, int resolution) {
    auto g = std::make_shared<LiftGrid>();
    g->n = std::max(4, resolution + (resolution % 2));
    g->cell = 2.0 * g->extent / g->n;
    lift_chart(x, y, *g, 0);
    lift_chart(x, y, *g, 1);

    // Match the second chart to the first across the equator.
    int agree = 0, disagree = 0;
    const std::size_t side = g->side();
    for (std::size_t idx = 0; idx < side * side * side; ++idx) {
        const std::size_t i = idx / (side * side), j = (idx / side) % side, k = idx % side;
        const Vec3 y1 = g->coords(i, j, k);
        const double r = norm(y1);
        if (r < 0.95 || r > 1.05) continue;
        const Vec3 y0 = g->charts[0].project(g->charts[1].unproject(y1));
        const double d = dot(g->lifted[1][idx], g->lifted[0][g->nearest(y0)]);
        if (std::abs(d) < 0.3) continue;
        ++(d > 0.0 ? agree : disagree);
    }
    if ((agree > 0) == (disagree > 0))
        throw ComputationError(ErrorKind::LiftInconsistent, "frame rotation lifts disagree between charts");
    if (disagree > 0)
        for (auto& q : g->lifted[1]) q = -q;

    return [g, x, y](const S3Point& q) -> Vec4 {
        const int chart = q.vec()[0] >= 0.0 ? 0 : 1;
        const Vec3 local = g->charts[chart].project(q);
        const Vec4 ref = g->lifted[chart][g->nearest(local)];
        const Vec4 raw = frame_rotation(x, y, q).vec();
        const double d = dot(raw, ref);
        if (std::abs(d) < 0.3)
            throw ComputationError(ErrorKind::LiftInconsistent, "frame rotation lift is ambiguous off the grid");
        return d < 0.0 ? -raw : raw;
    };
}

int framing_difference_degree(const FieldSpec& x, const FieldSpec& y, const FramingDegreeOptions& options) {
    if (has_framing(x) && has_framing(y))
        return 2 * degree_s3(framing_rotation_lift(x, y, options.lift_resolution), options.degree_resolution).value;
    auto right = [](const FieldSpec& f) -> SphereValued {
        return [f](const S3Point& q) { return express_in_right_frame(f, q).v(); };
    };
    return 2 * (hopf_invariant(right(y), options.extraction).value -
                hopf_invariant(right(x), options.extraction).value);
}

}  // namespace combing
