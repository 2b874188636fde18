#include "combing/acceptance.hpp"

#include <chrono>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>

#include "combing/extract.hpp"
#include "combing/fields.hpp"
#include "combing/invar.hpp"
#include "combing/linkdeg.hpp"

namespace combing {

namespace {

constexpr double kPi = std::numbers::pi;

class Checks {
public:
    void expect(bool ok, const std::string& line) {
        lines.push_back(std::string(ok ? "ok    " : "FAIL  ") + line);
        passed = passed && ok;
    }

    template <class F>
    void guard(const std::string& what, F&& f) {
        try {
            f();
        } catch (const std::exception& e) {
            expect(false, what + ": " + e.what());
        }
    }

    bool passed = true;
    std::vector<std::string> lines;
};

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(4);
    os << v;
    return os.str();
}

OrientedLoop hopf_circle(const S2Point& y, std::size_t m) {
    OrientedLoop l;
    for (std::size_t k = 0; k < m; ++k) l.points.push_back(hopf_fiber(y, 2 * kPi * double(k) / double(m)));
    return l;
}

// (φ, θ) ↦ (φ, 2θ), degree 2 on S².
Vec3 double_angle(const Vec3& v) {
    const double r = std::hypot(v[0], v[1]);
    if (r < 1e-15) return v;
    const double c = v[0] / r, s = v[1] / r;
    return {r * (c * c - s * s), r * 2 * c * s, v[2]};
}

S3Point random_s3(std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    return S3Point(Vec4{g(rng), g(rng), g(rng), g(rng)});
}

Vec3 rotate(const Vec3& v, double a, double b) {
    const Vec3 r1{std::cos(a) * v[0] - std::sin(a) * v[1], std::sin(a) * v[0] + std::cos(a) * v[1], v[2]};
    return {r1[0], std::cos(b) * r1[1] - std::sin(b) * r1[2], std::sin(b) * r1[1] + std::cos(b) * r1[2]};
}

OrientedLoop lift_curve(const std::vector<Vec3>& pts) {
    const Chart chart;
    OrientedLoop l;
    for (const auto& p : pts) l.points.push_back(chart.unproject(p));
    return l;
}

double chord_cosine(const OrientedLoop& loop, const OrientedLoop& ref) {
    const std::size_t m = ref.size();
    const Vec4 chord = loop.points[1].vec() - loop.points[0].vec();
    std::size_t best = 0;
    for (std::size_t k = 1; k < m; ++k)
        if (distance(ref.points[k].vec(), loop.points[0].vec()) < distance(ref.points[best].vec(), loop.points[0].vec()))
            best = k;
    const Vec4 rc = ref.points[(best + 1) % m].vec() - ref.points[(best + m - 1) % m].vec();
    return dot(chord, rc) / (norm(chord) * norm(rc));
}

// ---------------------------------------------------------------------------

void hopf_fiber_linking(Checks& c) {
    const auto a = hopf_circle(S2Point(Vec3{1, 0.2, 0.3}), 256);
    const auto b = hopf_circle(S2Point(Vec3{-0.3, 1, 0.5}), 256);
    const LinkingResult r = gauss_linking(a, b);
    c.expect(r.rounded == 1, "link of two Hopf fibers = " + std::to_string(r.rounded) + " (expected 1)");
    c.expect(r.residual < 0.02, "Gauss residual " + fmt(r.residual) + " < 0.02");
}

void hopf_pair_distance(Checks& c) {
    const DistanceComputation d = compute_distance(hopf_plus(), hopf_minus());
    c.expect(*d.report.D == 1, "D(hopf+, hopf-) = " + std::to_string(*d.report.D) + " (expected 1)");
    const auto& pos = d.links.positive.loops;
    const auto& neg = d.links.negative.loops;
    c.expect(pos.size() == 1 && neg.size() == 1,
             "components " + std::to_string(pos.size()) + "+" + std::to_string(neg.size()) + " (expected 1+1)");
    if (pos.size() == 1 && neg.size() == 1) {
        const double hp = hausdorff_distance(pos[0], seifert_south_fiber(1, 1, 1000));
        const double hn = hausdorff_distance(neg[0], seifert_north_fiber(1, 1, 1000));
        c.expect(hp < 0.05, "C+ to C x {0}: Hausdorff " + fmt(hp));
        c.expect(hn < 0.05, "C- to {0} x C: Hausdorff " + fmt(hn));
    }
}

void seifert_fiber_linking(Checks& c) {
    struct Case {
        int p, q, expected;
    };
    for (const Case k : {Case{1, 1, 1}, Case{2, 1, 2}, Case{3, 2, 6}, Case{-2, 1, -2}}) {
        const std::string name = "seifert:" + std::to_string(k.p) + "," + std::to_string(k.q);
        c.guard(name, [&] {
            const S3Point x0 = seifert_fiber_point(k.p, k.q, S2Point(Vec3{0.3, 0.1, 0.2}));
            const S3Point x1 = seifert_fiber_point(k.p, k.q, S2Point(Vec3{-0.5, 0.4, -0.6}));
            const LinkingResult r = gauss_linking(seifert_regular_fiber(k.p, k.q, x0, 800),
                                                  seifert_regular_fiber(k.p, k.q, x1, 800));
            c.expect(r.rounded == k.expected && r.residual < 0.05,
                     name + " fibers link " + std::to_string(r.rounded) + " (expected " + std::to_string(k.expected) +
                         "), residual " + fmt(r.residual));
        });
    }
}

void seifert_classification(Checks& c) {
    for (const auto& [p, q] : std::vector<std::pair<int, int>>{{1, 1}, {2, 1}, {3, 1}, {3, 2}}) {
        const std::string name = "seifert:" + std::to_string(p) + "," + std::to_string(q);
        c.guard(name, [&] {
            const InvariantReport r = distance(seifert(p, q), hopf_plus());
            c.expect(r.negative_components == 0 && r.homotopic(),
                     "C-(" + name + ", hopf+) has " + std::to_string(r.negative_components) +
                         " components, verdict " + (r.homotopic() ? "homotopic" : "not homotopic") +
                         (r.perturbation ? " (perturbed)" : ""));
        });
    }
    for (const auto& [p, q] : std::vector<std::pair<int, int>>{{-1, 1}, {-2, 1}}) {
        const std::string name = "seifert:" + std::to_string(p) + "," + std::to_string(q);
        c.guard(name, [&] {
            const InvariantReport r = distance(seifert(p, q), hopf_minus());
            // H_{-1,1} is hopf- itself, so the empty set here is C-.
            c.expect(r.negative_components == 0 && r.homotopic(),
                     "C-(" + name + ", hopf-) has " + std::to_string(r.negative_components) +
                         " components, verdict " + (r.homotopic() ? "homotopic" : "not homotopic") +
                         (r.perturbation ? " (perturbed)" : ""));
        });
    }
}

void twist_fields(Checks& c) {
    for (int n : {2, 3}) {
        const std::string name = "xn:" + std::to_string(n);
        c.guard(name, [&] {
            const int d = *distance(tubular_twist(n), hopf_plus()).D;
            c.expect(d == n, "D(" + name + ", hopf+) = " + std::to_string(d) + " (expected " + std::to_string(n) + ")");
            const int i = *homotopy_number(tubular_twist(n)).I;
            c.expect(i == n - 1, "I(" + name + ") = " + std::to_string(i) + " (expected " + std::to_string(n - 1) + ")");
        });
    }
}

// Expected (D(M_n, hopf+), D(M_n, hopf-)).
std::pair<int, int> morse_smale_distances(int n) {
    if (n == 2) return {1, 2};
    const int p = (n - 1) / 2;
    return n % 2 ? std::pair{2 * p + 1, 2 * p} : std::pair{2 * p + 2, 2 * p + 1};
}

void expect_link(Checks& c, const std::string& label, const OrientedLoop& a, const OrientedLoop& b, int expected) {
    const int l = gauss_linking(a, b).rounded;
    c.expect(l == expected, label + " = " + std::to_string(l) + " (expected " + std::to_string(expected) + ")");
}

void morse_smale_two(Checks& c) {
    const auto links = collinearity_links(morse_smale(2), hopf_plus());
    c.expect(links.positive.size() == 3 && links.negative.size() == 1,
             "ms:2 vs hopf+: components " + std::to_string(links.positive.size()) + "+" +
                 std::to_string(links.negative.size()) + " (expected 3+1)");
    const MorseSmaleOrbits o = morse_smale_orbits(2, 600);
    expect_link(c, "ms:2 link(saddle, attractor)", o.saddle, o.attractor, 0);
    expect_link(c, "ms:2 link(saddle, L_N)", o.saddle, o.north, 0);
    expect_link(c, "ms:2 link(attractor, L_N)", o.attractor, o.north, 0);
    const int rr = gauss_linking(o.north, o.south).rounded;
    c.expect(std::abs(rr) == 1, "ms:2 repellors form a Hopf link: link = " + std::to_string(rr));
    const int ls = gauss_linking(o.saddle, o.south).rounded;
    const int la = gauss_linking(o.attractor, o.south).rounded;
    c.expect(std::abs(ls) == 1 && la == -ls,
             "ms:2 link(saddle, L_S) = " + std::to_string(ls) + ", link(attractor, L_S) = " + std::to_string(la) +
                 " (expected opposite units)");
}

void morse_smale_fibered(int n, Checks& c) {
    const int p = morse_smale_layout(n).p;
    const std::string name = "ms:" + std::to_string(n);
    const auto links = collinearity_links(morse_smale(n), seifert(p, 1));
    const std::size_t want_pos = n % 2 ? 3 : 2, want_neg = n % 2 ? 1 : 2;
    c.expect(links.positive.size() == want_pos && links.negative.size() == want_neg,
             name + " vs seifert:" + std::to_string(p) + ",1: components " + std::to_string(links.positive.size()) +
                 "+" + std::to_string(links.negative.size()) + " (expected " + std::to_string(want_pos) + "+" +
                 std::to_string(want_neg) + ")");

    // Orbits oriented along H_{p,1}.
    const std::size_t m = 800;
    const OrientedLoop ln = seifert_north_fiber(p, 1, m);
    const OrientedLoop ls = seifert_south_fiber(p, 1, m);
    const OrientedLoop l1 = seifert_regular_fiber(p, 1, seifert_fiber_point(p, 1, S2Point(Vec3{1, 0, 0})), m);
    const OrientedLoop l0 = seifert_regular_fiber(p, 1, seifert_fiber_point(p, 1, S2Point(Vec3{-1, 0, 0})), m);

    struct Named {
        const char* label;
        const OrientedLoop* loop;
        bool positive;
    };
    const bool odd = n % 2 == 1;
    const Named orbits[] = {{"L_N", &ln, odd}, {"L_S", &ls, true}, {"L_1", &l1, true}, {"L_0", &l0, false}};
    for (const Named& orbit : orbits) {
        const auto& set = orbit.positive ? links.positive.loops : links.negative.loops;
        double best = 1e9;
        for (const auto& l : set) best = std::min(best, hausdorff_distance(l, *orbit.loop));
        c.expect(best < 0.05, name + " " + orbit.label + " found in C" + (orbit.positive ? "+" : "-") +
                                  " (Hausdorff " + fmt(best) + ")");
    }
    if (odd) {
        expect_link(c, name + " link(L_0, L_1)", l0, l1, p);
        expect_link(c, name + " link(L_0, L_S)", l0, ls, p);
        expect_link(c, name + " link(L_0, L_N)", l0, ln, 1);
    } else {
        expect_link(c, name + " link(L_S, L_0)", ls, l0, p);
        expect_link(c, name + " link(L_1, L_0)", l1, l0, p);
        expect_link(c, name + " link(L_1, L_N)", l1, ln, 1);
        expect_link(c, name + " link(L_S, L_N)", ls, ln, 1);
    }
}

void morse_smale_fields(Checks& c) {
    for (int n = 2; n <= 5; ++n) {
        const std::string name = "ms:" + std::to_string(n);
        c.guard(name + " structure", [&] {
            if (n == 2)
                morse_smale_two(c);
            else
                morse_smale_fibered(n, c);
        });
        c.guard(name + " distances", [&] {
            const auto [want_plus, want_minus] = morse_smale_distances(n);
            const int dp = *distance(morse_smale(n), hopf_plus()).D;
            const int dm = *distance(morse_smale(n), push_forward_R(hopf_plus())).D;
            c.expect(dp == want_plus && dm == want_minus, "D(" + name + ", hopf+) = " + std::to_string(dp) +
                                                              ", D(" + name + ", R(hopf+)) = " + std::to_string(dm) +
                                                              " (expected " + std::to_string(want_plus) + ", " +
                                                              std::to_string(want_minus) + ")");
            const int sum = dp + dm;
            c.expect(sum % 2 == 1 && (sum - 1) / 2 == n - 1,
                     "I(" + name + ") = " + (sum % 2 ? std::to_string((sum - 1) / 2) : "undefined") + " (expected " +
                         std::to_string(n - 1) + ")");
        });
    }
}

void composition_laws(Checks& c) {
    const DegreeResult g = degree_s2([](const S2Point& y) { return double_angle(y.v()); });
    c.expect(g.value == 2, "deg(g2) = " + std::to_string(g.value) + " (expected 2)");
    const int h1 = hopf_invariant([](const S3Point& x) { return double_angle(hopf_map(x).v()); }).value;
    c.expect(h1 == 4, "H(g2 o hopf) = " + std::to_string(h1) + " (expected 4)");

    const Quaternion unit = S3Point(Vec4{0.3, -0.5, 0.7, 0.1}).q();
    const auto shift = [unit](const S3Point& x) { return S3Point(unit * x.q()); };
    const int d1 = degree_s3([&](const S3Point& x) { return shift(x).vec(); }).value;
    const int h2 = hopf_invariant([&](const S3Point& x) { return hopf_map(shift(x)).v(); }).value;
    c.expect(d1 == 1 && h2 == d1, "H(hopf o h) = " + std::to_string(h2) + " with deg(h) = " + std::to_string(d1));

    const int d2 = degree_s3([](const S3Point& x) { return (x.q() * x.q()).vec(); }).value;
    const int h3 = hopf_invariant([](const S3Point& x) { return hopf_map(S3Point(x.q() * x.q())).v(); }).value;
    c.expect(d2 == 2 && h3 == d2, "H(hopf o sq) = " + std::to_string(h3) + " with deg(sq) = " + std::to_string(d2));
}

void framing_formula(Checks& c) {
    const int d = framing_difference_degree(hopf_plus(), hopf_minus());
    c.expect(std::abs(d) == 2, "[tau(hopf+) - tau(hopf-)] = " + std::to_string(d) + " (expected +-2)");
    const int h = signed_h(hopf_plus(), hopf_minus());
    c.expect(2 * h == d, "signed H = " + std::to_string(h) + " = half of " + std::to_string(d));
    for (const auto& [x, y] : std::vector<std::pair<FieldSpec, FieldSpec>>{{seifert(2, 1), hopf_minus()},
                                                                        {hopf_minus(), seifert(-3, 1)},
                                                                        {hopf_plus(), morse_smale(3)},
                                                                        {hopf_plus(), tubular_twist(2)}}) {
        const std::string name = x.to_string() + ", " + y.to_string();
        c.guard(name, [&] {
            const int f = framing_difference_degree(x, y);
            const int s = signed_h(x, y);
            c.expect(f % 2 == 0 && f == 2 * s,
                     "[" + name + "]: framing degree " + std::to_string(f) + ", signed H " + std::to_string(s));
        });
    }
}

void gauss_vs_crossings(Checks& c) {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int agree = 0;
    for (int trial = 0; trial < 20; ++trial) {
        const int w = int(rng() % 7) - 3;
        const double rho_ = 0.2 + 0.3 * u(rng);
        const double a0 = 2 * kPi * u(rng), b0 = 2 * kPi * u(rng);
        const double scale = 0.4 + 0.4 * u(rng);
        const std::size_t na = 40 + rng() % 160, nb = 60 + rng() % 200;
        const double wob = 0.05 * u(rng);
        std::vector<Vec3> a, b;
        for (std::size_t k = 0; k < na; ++k) {
            const double t = 2 * kPi * double(k) / double(na);
            const double r = 1.0 + wob * std::sin(3 * t + a0);
            a.push_back(scale * rotate({r * std::cos(t), r * std::sin(t), wob * std::cos(2 * t)}, a0, b0));
        }
        for (std::size_t k = 0; k < nb; ++k) {
            const double t = 2 * kPi * double(k) / double(nb);
            const double r = 1.0 + rho_ * std::cos(w * t);
            b.push_back(scale * rotate({r * std::cos(t), r * std::sin(t), rho_ * std::sin(w * t)}, a0, b0));
        }
        const auto la = lift_curve(a), lb = lift_curve(b);
        if (gauss_linking(la, lb).rounded == crossing_linking(la, lb)) ++agree;
    }
    c.expect(agree == 20, "Gauss and crossing counts agree on " + std::to_string(agree) + "/20 random links");
}

void rho_identities(Checks& c) {
    std::mt19937_64 rng(99);
    std::normal_distribution<double> g;
    double hom = 0.0, ker = 0.0, det = 0.0;
    for (int k = 0; k < 10000; ++k) {
        const S3Point s = random_s3(rng), t = random_s3(rng);
        const Vec3 v{g(rng), g(rng), g(rng)};
        hom = std::max(hom, norm(rho(S3Point(s.q() * t.q()), v) - rho(s, rho(t, v))) / std::max(1.0, norm(v)));
        ker = std::max(ker, norm(rho(S3Point(-s.q()), v) - rho(s, v)) / std::max(1.0, norm(v)));
        const auto m = rho_matrix(s);
        det = std::max(det, std::abs(det3(m[0], m[1], m[2]) - 1.0));
    }
    c.expect(hom < 1e-9, "rho homomorphism error " + fmt(hom));
    c.expect(ker < 1e-12, "rho(-s) = rho(s) error " + fmt(ker));
    c.expect(det < 1e-9, "det rho(s) - 1 error " + fmt(det));
}

void signed_h_laws(Checks& c) {
    const int ab = signed_h(hopf_plus(), hopf_minus());
    const int ba = signed_h(hopf_minus(), hopf_plus());
    c.expect(ab == -ba, "antisymmetry: " + std::to_string(ab) + " vs " + std::to_string(ba));
    const int xy = signed_h(hopf_plus(), tubular_twist(2));
    const int yz = signed_h(tubular_twist(2), morse_smale(4));
    const int xz = signed_h(hopf_plus(), morse_smale(4));
    c.expect(xy + yz == xz, "additivity: " + std::to_string(xy) + " + " + std::to_string(yz) + " = " +
                                std::to_string(xz));
}

void orientation_laws(Checks& c) {
    const auto a = collinearity_links(hopf_plus(), hopf_minus());
    const auto b = collinearity_links(hopf_minus(), hopf_plus());
    const OrientedLoop& loop = a.negative.loops.at(0);
    const OrientedLoop again = orient_loop(loop.reversed(), hopf_plus(), hopf_minus());
    c.expect(chord_cosine(again, loop) > 0.9, "orient_loop ignores input direction");
    c.expect(chord_cosine(b.positive.loops.at(0), a.positive.loops.at(0)) > 0.9, "swap keeps C+ orientation");
    c.expect(chord_cosine(b.negative.loops.at(0), a.negative.loops.at(0)) < -0.9, "swap reverses C- orientation");
}

void regular_value_independence(Checks& c) {
    const std::vector<std::pair<std::string, SphereValued>> maps{
        {"hopf", [](const S3Point& x) { return hopf_map(x).v(); }},
        {"seifert:2,3", [](const S3Point& x) { return seifert_map(2, 3, x).v(); }},
        {"right frame of xn:2", [](const S3Point& x) { return express_in_right_frame(tubular_twist(2), x).v(); }}};
    for (const auto& [name, m] : maps) {
        const HopfInvariantResult r = hopf_invariant(m);
        c.expect(r.value == r.check, "H(" + name + ") = " + std::to_string(r.value) + " from both value pairs (" +
                                         std::to_string(r.check) + ")");
    }
}

void property_suites(Checks& c) {
    c.guard("gauss vs crossings", [&] { gauss_vs_crossings(c); });
    c.guard("rho identities", [&] { rho_identities(c); });
    c.guard("signed H laws", [&] { signed_h_laws(c); });
    c.guard("orientation laws", [&] { orientation_laws(c); });
    c.guard("regular values", [&] { regular_value_independence(c); });
}

struct Criterion {
    const char* title;
    void (*run)(Checks&);
};

const Criterion kCriteria[] = {
    {"Hopf fiber linking", hopf_fiber_linking},
    {"D(hopf+, hopf-) by extraction", hopf_pair_distance},
    {"Seifert fiber linking", seifert_fiber_linking},
    {"Seifert classification", seifert_classification},
    {"tubular twist fields", twist_fields},
    {"Morse-Smale fields", morse_smale_fields},
    {"Hopf invariant composition laws", composition_laws},
    {"framing degree formula", framing_formula},
    {"property suites", property_suites},
};

}  // namespace

Suite parse_suite(const std::string& name) {
    if (name == "paper") return Suite::Paper;
    if (name == "oracles") return Suite::Oracles;
    if (name == "quick") return Suite::Quick;
    if (name == "all") return Suite::All;
    throw std::invalid_argument("unknown suite '" + name + "' (expected paper, oracles, quick or all)");
}

std::vector<int> suite_criteria(Suite suite) {
    switch (suite) {
        case Suite::Paper:
            return {1, 2, 3, 4, 5, 6, 7, 8};
        case Suite::Oracles:
            return {1, 3, 7, 9};
        case Suite::Quick:
            return {1, 2, 3, 7};
        case Suite::All:
            break;
    }
    return {1, 2, 3, 4, 5, 6, 7, 8, 9};
}

CriterionResult run_criterion(int id) {
    if (id < 1 || id > int(std::size(kCriteria))) throw std::out_of_range("no criterion " + std::to_string(id));
    const Criterion& k = kCriteria[id - 1];
    const auto t0 = std::chrono::steady_clock::now();
    Checks c;
    c.guard(k.title, [&] { k.run(c); });
    CriterionResult r;
    r.id = id;
    r.title = k.title;
    r.passed = c.passed;
    r.details = std::move(c.lines);
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

std::vector<CriterionResult> run_suite(Suite suite) {
    std::vector<CriterionResult> out;
    for (int id : suite_criteria(suite)) out.push_back(run_criterion(id));
    return out;
}

}  // namespace combing
