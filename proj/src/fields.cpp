#include "combing/fields.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <numeric>
#include <random>
#include <stdexcept>
#include <vector>

namespace combing {

namespace {

constexpr double kPi = std::numbers::pi;

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

Vec4 from_complex(Complex a, Complex b) { return {a.real(), a.imag(), b.real(), b.imag()}; }

Vec3 normalized(const Vec3& v) { return (1.0 / norm(v)) * v; }
Vec4 normalized(const Vec4& v) { return (1.0 / norm(v)) * v; }

Complex ipow(Complex z, int n) {
    Complex r = 1.0;
    for (int k = 0; k < n; ++k) r *= z;
    return r;
}

// Quintic smoothstep on [0,1]: C² with flat ends.
double smooth01(double t) {
    if (t <= 0.0) return 0.0;
    if (t >= 1.0) return 1.0;
    return t * t * t * (t * (6.0 * t - 15.0) + 10.0);
}

// Minimal rotation taking unit a to unit b (a·b > −1), applied to v.
Vec3 min_rotate(const Vec3& a, const Vec3& b, const Vec3& v) {
    const Vec3 w = cross(a, b);
    const double c = dot(a, b);
    const Vec3 wv = cross(w, v);
    return v + wv + (1.0 / (1.0 + c)) * cross(w, wv);
}

Vec4 seifert_vec(int p, int q, const S3Point& x) {
    const Complex i(0.0, 1.0);
    return normalized(from_complex(double(q) * i * x.z1(), double(p) * i * x.z2()));
}

// Numerator/denominator pair (u, v) of the Seifert ratio.
std::pair<Complex, Complex> seifert_uv(int p, int q, const S3Point& x) {
    const Complex u = p > 0 ? ipow(x.z1(), p) : ipow(std::conj(x.z1()), -p);
    const Complex v = ipow(x.z2(), q);
    return {u, v};
}

Vec3 seifert_point(int p, int q, const S3Point& x) {
    const auto [u, v] = seifert_uv(p, q, x);
    const double uu = std::norm(u), vv = std::norm(v);
    const Complex w = 2.0 * u * std::conj(v);
    const double s = uu + vv;
    return {w.real() / s, w.imag() / s, (vv - uu) / s};
}

// Flip factor: −1 on the orbit, +1 outside the tube of chord radius r.
double flip_profile(double chord_sq, double r) { return -1.0 + 2.0 * smooth01(chord_sq / (r * r)); }

// ---------------------------------------------------------------------------
// Deterministic trigonometric noise for the Perturbed variant.

struct NoiseTerm {
    std::array<int, 4> k{};
    double phase = 0.0;
    double coeff = 0.0;
};

constexpr int kNoiseTerms = 6;

}  // namespace

struct field_noise {
    std::array<std::array<NoiseTerm, kNoiseTerms>, 4> terms{};

    explicit field_noise(std::uint64_t seed) {
        std::mt19937_64 rng(seed);
        auto uniform = [&rng] { return double(rng() >> 11) * 0x1.0p-53; };
        for (auto& component : terms)
            for (auto& t : component) {
                for (int& kk : t.k) kk = int(rng() % 5) - 2;
                t.phase = 2.0 * kPi * uniform();
                t.coeff = 2.0 * uniform() - 1.0;
            }
    }

    Vec4 operator()(const Vec4& x) const {
        Vec4 r{};
        for (int c = 0; c < 4; ++c)
            for (const auto& t : terms[c])
                r[c] += t.coeff * std::cos(t.k[0] * x[0] + t.k[1] * x[1] + t.k[2] * x[2] + t.k[3] * x[3] + t.phase);
        return r;
    }
};

namespace {

std::shared_ptr<const field_noise> noise_for(std::uint64_t seed) { return std::make_shared<const field_noise>(seed); }

}  // namespace

// ---------------------------------------------------------------------------
// Constructors

FieldSpec hopf_plus() { return FieldSpec(field::HopfPlus{}); }
FieldSpec hopf_minus() { return FieldSpec(field::HopfMinus{}); }

FieldSpec seifert(int p, int q) {
    if (p == 0 || q <= 0 || std::gcd(std::abs(p), q) != 1)
        throw std::invalid_argument("seifert requires p != 0, q > 0 and gcd(|p|, q) = 1");
    return FieldSpec(field::Seifert{p, q});
}

FieldSpec tubular_twist(int n) {
    if (n < 1) throw std::invalid_argument("xn requires n >= 1");
    return FieldSpec(field::TubularTwist{n});
}

FieldSpec morse_smale(int n) {
    if (n < 1) throw std::invalid_argument("ms requires n >= 1");
    return FieldSpec(field::MorseSmale{n});
}

FieldSpec push_forward_R(const FieldSpec& inner) {
    return FieldSpec(field::PushForwardR{std::make_shared<const FieldSpec>(inner)});
}

FieldSpec perturbed(const FieldSpec& inner, std::uint64_t seed, double amplitude) {
    if (!(amplitude >= 0.0) || !std::isfinite(amplitude))
        throw std::invalid_argument("perturbation amplitude must be a finite nonnegative number");
    return FieldSpec(field::Perturbed{std::make_shared<const FieldSpec>(inner), seed, amplitude});
}

namespace {

std::shared_ptr<const field_noise> noise_of(const field::Perturbed& pert) {
    // Small per-thread cache keyed by seed.
    thread_local std::vector<std::pair<std::uint64_t, std::shared_ptr<const field_noise>>> cache;
    for (const auto& [seed, n] : cache)
        if (seed == pert.seed) return n;
    auto n = noise_for(pert.seed);
    cache.emplace_back(pert.seed, n);
    return n;
}

}  // namespace

// ---------------------------------------------------------------------------
// Seifert fibrations

S2Point seifert_map(int p, int q, const S3Point& x) { return S2Point(seifert_point(p, q, x)); }

OrientedLoop seifert_regular_fiber(int p, int q, const S3Point& x0, std::size_t m) {
    if (std::abs(x0.z1()) < 1e-6 || std::abs(x0.z2()) < 1e-6)
        throw ComputationError(ErrorKind::SingularFiber, "base point lies on a singular fiber");
    OrientedLoop loop;
    loop.points.reserve(m);
    for (std::size_t k = 0; k < m; ++k) {
        const double t = 2.0 * kPi * double(k) / double(m);
        loop.points.push_back(S3Point::from_complex(std::polar(1.0, q * t) * x0.z1(), std::polar(1.0, p * t) * x0.z2()));
    }
    return loop;
}

S3Point seifert_fiber_point(int p, int q, const S2Point& y) {
    const Vec3& v = y.v();
    const double phi = std::acos(std::clamp(v[2], -1.0, 1.0));
    if (phi < 1e-12) return S3Point::from_complex(0.0, 1.0);
    if (kPi - phi < 1e-12) return S3Point::from_complex(1.0, 0.0);
    const double theta = std::atan2(v[1], v[0]);
    // tan(φ/2) = cos^|p| η / sin^q η is decreasing in η on (0, π/2).
    const double target = std::log(std::tan(phi / 2.0));
    double lo = 0.0, hi = kPi / 2.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double g = std::abs(p) * std::log(std::cos(mid)) - q * std::log(std::sin(mid)) - target;
        if (g > 0.0)
            lo = mid;
        else
            hi = mid;
    }
    const double eta = 0.5 * (lo + hi);
    const double alpha = theta / double(p);
    return S3Point::from_complex(std::polar(std::cos(eta), alpha), std::sin(eta));
}

OrientedLoop seifert_north_fiber(int p, int /*q*/, std::size_t m) {
    OrientedLoop loop;
    const double dir = p > 0 ? 1.0 : -1.0;
    for (std::size_t k = 0; k < m; ++k)
        loop.points.push_back(S3Point::from_complex(0.0, std::polar(1.0, dir * 2.0 * kPi * double(k) / double(m))));
    return loop;
}

OrientedLoop seifert_south_fiber(int /*p*/, int /*q*/, std::size_t m) {
    OrientedLoop loop;
    for (std::size_t k = 0; k < m; ++k)
        loop.points.push_back(S3Point::from_complex(std::polar(1.0, 2.0 * kPi * double(k) / double(m)), 0.0));
    return loop;
}

// ---------------------------------------------------------------------------
// Sphere fields and lifts

Vec3 sphere_field_eval(Sphere2Field f, const S2Point& y) {
    const Vec3& v = y.v();
    // y3·y − e3 is the gradient of −y3 along S².
    const Vec3 meridional{v[2] * v[0], v[2] * v[1], v[2] * v[2] - 1.0};
    if (f == Sphere2Field::X0) return meridional;
    const Vec3 azimuthal{-v[1] * v[1], v[0] * v[1], 0.0};
    return v[2] * meridional + azimuthal;
}

namespace {

// Horizontal lift in closed form. With z1 = cos η e^{iα}, z2 = sin η e^{iβ}
// the Seifert map has polar angle φ(η) and azimuth θ = pα − qβ. Writing the
// sphere field as φ̇ = a·sin φ and θ̇ = b, the lift is
//   −a·(−|z2|² z1, |z1|² z2)/(|p||z2|² + q|z1|²)
//   + b·(p|z2|² i z1, −q|z1|² i z2)/(p²|z2|² + q²|z1|²),
// which is smooth and vanishes on both singular fibers.
Vec4 lift_vec(int p, int q, Sphere2Field f, const S3Point& x) {
    const Complex z1 = x.z1(), z2 = x.z2();
    const double n1 = std::norm(z1), n2 = std::norm(z2);
    double a = 1.0, b = 0.0;
    if (f == Sphere2Field::X1) {
        const auto [u, v] = seifert_uv(p, q, x);
        const double uu = std::norm(u), vv = std::norm(v);
        a = (vv - uu) / (uu + vv);
        b = std::imag(2.0 * u * std::conj(v)) / (uu + vv);
    }
    const double pa = std::abs(p);
    const double d1 = pa * n2 + q * n1;
    const double d2 = double(p) * p * n2 + double(q) * q * n1;
    const Complex i(0.0, 1.0);
    const Complex c1 = -(a / d1) * (-n2 * z1) + (b / d2) * (double(p) * n2 * i * z1);
    const Complex c2 = -(a / d1) * (n1 * z2) + (b / d2) * (-double(q) * n1 * i * z2);
    return from_complex(c1, c2);
}

}  // namespace

TangentVector orthogonal_lift(int p, int q, Sphere2Field f, const S3Point& x) {
    return {x, lift_vec(p, q, f, x)};
}

MorseSmaleLayout morse_smale_layout(int n) {
    if (n < 3) throw std::invalid_argument("the fibration layout applies to ms:n with n >= 3");
    MorseSmaleLayout layout;
    layout.p = (n - 1) / 2;
    layout.flip_attractor = true;
    layout.flip_north = (n % 2 == 0);
    return layout;
}

namespace {

const Vec3 kSaddlePoint{1.0, 0.0, 0.0};
const Vec3 kSinkPoint{-1.0, 0.0, 0.0};
const Vec3 kNorthPoint{0.0, 0.0, 1.0};

// ms:2 parameters: α̇ on the invariant torus is kMs2Alpha·cos η·sin α.
constexpr double kMs2Alpha = 0.5;
constexpr double kMs2North = 1.0;
constexpr double kMs2Beta = -1.0;

Vec4 ms2_vec(const S3Point& x) {
    const Complex z1 = x.z1(), z2 = x.z2();
    const double n1 = std::norm(z1), n2 = std::norm(z2);
    const Complex i(0.0, 1.0);
    const double w1 = (n1 - n2) + kMs2Alpha * z1.imag();
    const double w2 = kMs2North * (n2 - n1) + kMs2Beta * z1.real();
    const double w3 = n1 - n2;
    const Complex c1 = w1 * i * z1 + w3 * (-n2 * z1);
    const Complex c2 = w2 * i * z2 + w3 * (n1 * z2);
    return normalized(from_complex(c1, c2));
}

Vec4 morse_smale_vec(int n, const S3Point& x) {
    if (n == 1) {
        const Vec4 h = seifert_vec(1, 1, x);
        return normalized(h + lift_vec(1, 1, Sphere2Field::X0, x));
    }
    if (n == 2) return ms2_vec(x);
    const MorseSmaleLayout layout = morse_smale_layout(n);
    const Vec3 s = seifert_point(layout.p, 1, x);
    double mu = 1.0;
    const double r0 = kFlipTubeRadius;
    if (layout.flip_attractor) {
        const double d = dot(s - kSinkPoint, s - kSinkPoint);
        if (d < r0 * r0) mu *= flip_profile(d, r0);
    }
    if (layout.flip_north) {
        const double d = dot(s - kNorthPoint, s - kNorthPoint);
        if (d < r0 * r0) mu *= flip_profile(d, r0);
    }
    const Vec4 h = seifert_vec(layout.p, 1, x);
    return normalized(mu * h + lift_vec(layout.p, 1, Sphere2Field::X1, x));
}

// Right-frame completion (F, e1, e2) of a Seifert field with p > 0. In the
// right frame F has positive i-component, so F is never ±j.
std::array<Vec3, 3> seifert_right_frame(int p, int q, const S3Point& x) {
    const Vec3 f = to_right_coords(x, seifert_vec(p, q, x));
    const Vec3 j{0.0, 1.0, 0.0};
    const Vec3 e1 = normalized(j - dot(j, f) * f);
    return {f, e1, cross(f, e1)};
}

// s1·F + s2·e1 + s3·e2 in the frame of seifert:n,1, with s the (−n,1)
// Seifert map. C± are the two (−n,1) fibers over (±1,0,0), which link n
// times; the relative map has Hopf invariant −n.
Vec3 twist_right_vec(int n, const S3Point& x) {
    const auto [f, e1, e2] = seifert_right_frame(n, 1, x);
    const Vec3 s = seifert_point(-n, 1, x);
    return s[0] * f + s[1] * e1 + s[2] * e2;
}

std::array<Vec4, 3> from_right(const S3Point& x, const std::array<Vec3, 3>& fr) {
    return {from_right_coords(x, fr[0]), from_right_coords(x, fr[1]), from_right_coords(x, fr[2])};
}

}  // namespace

Vec4 reflect_R(const Vec4& v) { return {v[0], v[1], v[2], -v[3]}; }
S3Point reflect_R(const S3Point& x) { return S3Point(reflect_R(x.vec())); }

Vec4 eval_vec(const FieldSpec& spec, const S3Point& x) {
    return std::visit(
        overloaded{
            [&](const field::HopfPlus&) -> Vec4 {
                const Vec4 v = x.vec();
                return {-v[1], v[0], -v[3], v[2]};
            },
            [&](const field::HopfMinus&) -> Vec4 {
                const Vec4 v = x.vec();
                return {-v[1], v[0], v[3], -v[2]};
            },
            [&](const field::Seifert& s) -> Vec4 { return seifert_vec(s.p, s.q, x); },
            [&](const field::TubularTwist& t) -> Vec4 {
                return from_right_coords(x, twist_right_vec(t.n, x));
            },
            [&](const field::MorseSmale& m) -> Vec4 { return morse_smale_vec(m.n, x); },
            [&](const field::PushForwardR& r) -> Vec4 {
                return reflect_R(eval_vec(*r.inner, reflect_R(x)));
            },
            [&](const field::Perturbed& pt) -> Vec4 {
                const Vec4 base = eval_vec(*pt.inner, x);
                const Vec4 w = (*noise_of(pt))(x.vec());
                const Vec4 t = tangent_project(x, w).vec;
                return normalized(base + pt.amplitude * t);
            },
        },
        spec.node());
}

TangentVector eval(const FieldSpec& spec, const S3Point& x) { return {x, eval_vec(spec, x)}; }

S2Point express_in_right_frame(const FieldSpec& spec, const S3Point& x) {
    return S2Point(to_right_coords(x, eval_vec(spec, x)));
}

bool has_framing(const FieldSpec& spec) {
    return std::visit(overloaded{
                          [](const field::MorseSmale& m) { return m.n == 1; },
                          [](const field::TubularTwist&) { return false; },
                          [](const field::PushForwardR& r) { return has_framing(*r.inner); },
                          [](const field::Perturbed& p) { return has_framing(*p.inner); },
                          [](const auto&) { return true; },
                      },
                      spec.node());
}

std::array<Vec4, 3> framing(const FieldSpec& spec, const S3Point& x) {
    auto pushed = [&](const FieldSpec& inner) -> std::array<Vec4, 3> {
        const auto f = framing(inner, reflect_R(x));
        // R reverses orientation; negating the last vector restores it.
        return {reflect_R(f[0]), reflect_R(f[1]), -reflect_R(f[2])};
    };
    return std::visit(
        overloaded{
            [&](const field::HopfPlus&) { return right_frame(x); },
            [&](const field::HopfMinus&) { return pushed(hopf_plus()); },
            [&](const field::Seifert& s) {
                if (s.p < 0) return pushed(seifert(-s.p, s.q));
                return from_right(x, seifert_right_frame(s.p, s.q, x));
            },
            [&](const field::TubularTwist&) -> std::array<Vec4, 3> {
                throw ComputationError(ErrorKind::NoGlobalFraming, "no closed-form framing for " + spec.to_string());
            },
            [&](const field::MorseSmale& m) -> std::array<Vec4, 3> {
                if (m.n != 1)
                    throw ComputationError(ErrorKind::NoGlobalFraming,
                                           "no closed-form framing for " + spec.to_string());
                const Vec3 f = to_right_coords(x, morse_smale_vec(1, x));
                const Vec3 i{1, 0, 0};
                return from_right(x, {f, min_rotate(i, f, {0, 1, 0}), min_rotate(i, f, {0, 0, 1})});
            },
            [&](const field::PushForwardR& r) { return pushed(*r.inner); },
            [&](const field::Perturbed& pt) -> std::array<Vec4, 3> {
                const auto base = framing(*pt.inner, x);
                const Vec3 a = to_right_coords(x, base[0]);
                const Vec3 b = to_right_coords(x, eval_vec(spec, x));
                return {from_right_coords(x, b), from_right_coords(x, min_rotate(a, b, to_right_coords(x, base[1]))),
                        from_right_coords(x, min_rotate(a, b, to_right_coords(x, base[2])))};
            },
        },
        spec.node());
}

// ---------------------------------------------------------------------------
// Orbits of the constructed fields

MorseSmaleOrbits morse_smale_orbits(int n, std::size_t m) {
    if (n < 2) throw std::invalid_argument("orbit layout is defined for ms:n with n >= 2");
    MorseSmaleOrbits o;
    if (n == 2) {
        const double r = 1.0 / std::sqrt(2.0);
        o.north = seifert_north_fiber(1, 1, m);
        o.south = seifert_south_fiber(1, 1, m);
        for (std::size_t k = 0; k < m; ++k) {
            const double t = 2.0 * kPi * double(k) / double(m);
            o.saddle.points.push_back(S3Point::from_complex(r, std::polar(r, -t)));
            o.attractor.points.push_back(S3Point::from_complex(-r, std::polar(r, t)));
        }
        return o;
    }
    const MorseSmaleLayout layout = morse_smale_layout(n);
    const int p = layout.p;
    o.north = seifert_north_fiber(p, 1, m);
    if (layout.flip_north) o.north = o.north.reversed();
    o.south = seifert_south_fiber(p, 1, m);
    o.saddle = seifert_regular_fiber(p, 1, seifert_fiber_point(p, 1, S2Point(kSaddlePoint)), m);
    o.attractor = seifert_regular_fiber(p, 1, seifert_fiber_point(p, 1, S2Point(kSinkPoint)), m).reversed();
    return o;
}

std::array<OrientedLoop, 2> twist_fibers(int n, std::size_t m) {
    return {seifert_regular_fiber(-n, 1, seifert_fiber_point(-n, 1, S2Point(kSaddlePoint)), m),
            seifert_regular_fiber(-n, 1, seifert_fiber_point(-n, 1, S2Point(kSinkPoint)), m)};
}

// ---------------------------------------------------------------------------
// Text form

namespace {

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

class SpecParser {
public:
    explicit SpecParser(std::string_view text) : s_(text) {}

    FieldSpec parse_all() {
        FieldSpec f = parse_spec();
        skip_ws();
        if (pos_ != s_.size()) fail("trailing characters");
        return f;
    }

private:
    std::string_view s_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& msg) const {
        throw ComputationError(ErrorKind::ParseError,
                               msg + " at position " + std::to_string(pos_) + " in '" + std::string(s_) + "'");
    }

    void skip_ws() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    bool consume(std::string_view tok) {
        skip_ws();
        if (s_.substr(pos_, tok.size()) == tok) {
            pos_ += tok.size();
            return true;
        }
        return false;
    }

    void expect(std::string_view tok) {
        if (!consume(tok)) fail("expected '" + std::string(tok) + "'");
    }

    long long parse_int() {
        skip_ws();
        long long v = 0;
        const auto res = std::from_chars(s_.data() + pos_, s_.data() + s_.size(), v);
        if (res.ec != std::errc()) fail("expected integer");
        pos_ = std::size_t(res.ptr - s_.data());
        return v;
    }

    double parse_double() {
        skip_ws();
        double v = 0;
        const auto res = std::from_chars(s_.data() + pos_, s_.data() + s_.size(), v);
        if (res.ec != std::errc()) fail("expected number");
        pos_ = std::size_t(res.ptr - s_.data());
        return v;
    }

    FieldSpec parse_spec() {
        try {
            if (consume("hopf+")) return hopf_plus();
            if (consume("hopf-")) return hopf_minus();
            if (consume("seifert:")) {
                const long long p = parse_int();
                expect(",");
                const long long q = parse_int();
                return seifert(int(p), int(q));
            }
            if (consume("xn:")) return tubular_twist(int(parse_int()));
            if (consume("ms:")) return morse_smale(int(parse_int()));
            if (consume("R(")) {
                FieldSpec inner = parse_spec();
                expect(")");
                return push_forward_R(inner);
            }
            if (consume("perturb(")) {
                FieldSpec inner = parse_spec();
                std::uint64_t seed = 0;
                double amp = 1e-3;
                while (consume(";")) {
                    if (consume("seed=")) {
                        const long long v = parse_int();
                        if (v < 0) fail("seed must be nonnegative");
                        seed = std::uint64_t(v);
                    } else if (consume("amp=")) {
                        amp = parse_double();
                    } else {
                        fail("expected seed= or amp=");
                    }
                }
                expect(")");
                return perturbed(inner, seed, amp);
            }
        } catch (const std::invalid_argument& e) {
            fail(e.what());
        }
        fail("unknown field");
    }
};

}  // namespace

std::string FieldSpec::to_string() const {
    return std::visit(overloaded{
                          [](const field::HopfPlus&) -> std::string { return "hopf+"; },
                          [](const field::HopfMinus&) -> std::string { return "hopf-"; },
                          [](const field::Seifert& s) {
                              return "seifert:" + std::to_string(s.p) + "," + std::to_string(s.q);
                          },
                          [](const field::TubularTwist& t) { return "xn:" + std::to_string(t.n); },
                          [](const field::MorseSmale& m) { return "ms:" + std::to_string(m.n); },
                          [](const field::PushForwardR& r) { return "R(" + r.inner->to_string() + ")"; },
                          [](const field::Perturbed& p) {
                              return "perturb(" + p.inner->to_string() + ";seed=" + std::to_string(p.seed) +
                                     ";amp=" + format_double(p.amplitude) + ")";
                          },
                      },
                      node_);
}

FieldSpec FieldSpec::parse(std::string_view text) { return SpecParser(text).parse_all(); }

}  // namespace combing
