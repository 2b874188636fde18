#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "combing/linkdeg.hpp"
#include "test_support.hpp"

using namespace combing;

namespace {

constexpr double kPi = std::numbers::pi;

OrientedLoop hopf_circle(const S2Point& y, std::size_t m) {
    OrientedLoop l;
    for (std::size_t k = 0; k < m; ++k) l.points.push_back(hopf_fiber(y, 2 * kPi * double(k) / double(m)));
    return l;
}

OrientedLoop lift_curve(const std::vector<Vec3>& pts) {
    const Chart chart;
    OrientedLoop l;
    for (const auto& p : pts) l.points.push_back(chart.unproject(p));
    return l;
}

Vec3 rotate(const Vec3& v, double a, double b) {
    const Vec3 r1{std::cos(a) * v[0] - std::sin(a) * v[1], std::sin(a) * v[0] + std::cos(a) * v[1], v[2]};
    return {r1[0], std::cos(b) * r1[1] - std::sin(b) * r1[2], std::sin(b) * r1[1] + std::cos(b) * r1[2]};
}

SphereValued right_of(const FieldSpec& f) {
    return [f](const S3Point& q) { return express_in_right_frame(f, q).v(); };
}

// (φ, θ) ↦ (φ, 2θ).
Vec3 double_angle(const Vec3& v) {
    const double r = std::hypot(v[0], v[1]);
    if (r < 1e-15) return v;
    const double c = v[0] / r, s = v[1] / r;
    return {r * (c * c - s * s), r * 2 * c * s, v[2]};
}

TEST(GaussLinking, HopfFibersLinkOnce) {
    const auto a = hopf_circle(S2Point(Vec3{1, 0.2, 0.3}), 300);
    const auto b = hopf_circle(S2Point(Vec3{-0.3, 1, 0.5}), 300);
    const LinkingResult r = gauss_linking(a, b);
    EXPECT_EQ(r.rounded, 1);
    EXPECT_LT(r.residual, 0.01);
    EXPECT_EQ(crossing_linking(a, b), 1);
    EXPECT_EQ(gauss_linking(b, a).rounded, 1);
    EXPECT_EQ(gauss_linking(a.reversed(), b).rounded, -1);
    EXPECT_EQ(crossing_linking(a, b.reversed()), -1);
}

TEST(GaussLinking, SplitCirclesDoNotLink) {
    std::vector<Vec3> a, b;
    for (int k = 0; k < 100; ++k) {
        const double t = 2 * kPi * k / 100;
        a.push_back({0.2 * std::cos(t) + 0.5, 0.2 * std::sin(t), 0.0});
        b.push_back({0.2 * std::cos(t) - 0.5, 0.0, 0.2 * std::sin(t)});
    }
    EXPECT_EQ(gauss_linking(lift_curve(a), lift_curve(b)).rounded, 0);
    EXPECT_EQ(crossing_linking(lift_curve(a), lift_curve(b)), 0);
}

TEST(GaussLinking, SeifertTwoThreeFibersLinkSixTimes) {
    const S3Point x0 = seifert_fiber_point(2, 3, S2Point(Vec3{0.3, 0.1, 0.2}));
    const S3Point x1 = seifert_fiber_point(2, 3, S2Point(Vec3{-0.5, 0.4, -0.6}));
    const auto a = seifert_regular_fiber(2, 3, x0, 800);
    const auto b = seifert_regular_fiber(2, 3, x1, 800);
    const int g = gauss_linking(a, b).rounded;
    EXPECT_EQ(g, crossing_linking(a, b));
    EXPECT_EQ(g, 6);
}

TEST(GaussLinking, LoopsTooCloseAreRejected) {
    const auto a = hopf_circle(S2Point(Vec3{1, 0, 0}), 100);
    try {
        gauss_linking(a, a);
        FAIL();
    } catch (const ComputationError& e) {
        EXPECT_EQ(e.kind(), ErrorKind::LoopsTooClose);
    }
}

// Oracle equivalence: Gauss integral vs crossing count on random links in
// which the second loop winds w times around the core of the first.
TEST(GaussLinking, AgreesWithCrossingsOnRandomPolygons) {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        const int w = int(rng() % 7) - 3;
        const double rho = 0.2 + 0.3 * u(rng);
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
            const double r = 1.0 + rho * std::cos(w * t);
            b.push_back(scale * rotate({r * std::cos(t), r * std::sin(t), rho * std::sin(w * t)}, a0, b0));
        }
        const auto la = lift_curve(a), lb = lift_curve(b);
        const int g = gauss_linking(la, lb).rounded;
        EXPECT_EQ(g, crossing_linking(la, lb)) << "trial " << trial;
        EXPECT_EQ(std::abs(g), std::abs(w)) << "trial " << trial;
    }
}

TEST(GaussLinking, ResidualShrinksWithSampling) {
    const auto a = hopf_circle(S2Point(Vec3{1, 0.2, 0.3}), 40);
    const auto b = hopf_circle(S2Point(Vec3{-0.3, 1, 0.5}), 40);
    const double coarse = gauss_linking(a, b).residual;
    const double fine = gauss_linking(a.refined(), b.refined()).residual;
    EXPECT_LT(fine, 0.5 * coarse);
}

TEST(DegreeS2, Examples) {
    EXPECT_EQ(degree_s2([](const S2Point& y) { return y.v(); }).value, 1);
    EXPECT_EQ(degree_s2([](const S2Point& y) { return -1.0 * y.v(); }).value, -1);
    const DegreeResult d = degree_s2([](const S2Point& y) { return double_angle(y.v()); });
    EXPECT_EQ(d.value, 2);
    EXPECT_EQ(d.signs.size(), 2u);
}

TEST(DegreeS3, Examples) {
    EXPECT_EQ(degree_s3([](const S3Point& q) { return q.vec(); }).value, 1);
    const Quaternion c = S3Point(Vec4{0.3, -0.5, 0.7, 0.1}).q();
    EXPECT_EQ(degree_s3([c](const S3Point& q) { return (q.q() * c).vec(); }).value, 1);
    const DegreeResult sq = degree_s3([](const S3Point& q) { return (q.q() * q.q()).vec(); });
    EXPECT_EQ(sq.value, 2);
    EXPECT_EQ(sq.preimages.size(), 2u);
    EXPECT_EQ(degree_s3([](const S3Point& q) { return q.q().conj().vec(); }).value, -1);
}

TEST(HopfInvariant, HopfMapIsOne) {
    const auto r = hopf_invariant([](const S3Point& x) { return hopf_map(x).v(); });
    EXPECT_EQ(r.value, 1);
    EXPECT_EQ(r.check, 1);
}

TEST(HopfInvariant, ConstantMapIsZero) {
    EXPECT_EQ(hopf_invariant([](const S3Point&) { return Vec3{0, 0, 1}; }).value, 0);
    EXPECT_EQ(hopf_invariant(right_of(hopf_plus())).value, 0);
}

TEST(HopfInvariant, CompositionLaws) {
    // H(g∘f) = deg²(g)·H(f)
    EXPECT_EQ(hopf_invariant([](const S3Point& x) { return double_angle(hopf_map(x).v()); }).value, 4);
    // H(f∘h) = deg(h)·H(f)
    EXPECT_EQ(hopf_invariant([](const S3Point& x) { return hopf_map(S3Point(x.q() * x.q())).v(); }).value, 2);
}

TEST(HopfInvariant, SeifertMapIsProductOfIndices) {
    EXPECT_EQ(hopf_invariant([](const S3Point& x) { return seifert_map(2, 3, x).v(); }).value, 6);
    EXPECT_EQ(hopf_invariant([](const S3Point& x) { return seifert_map(3, 1, x).v(); }).value, 3);
}

TEST(FramingDegree, IdenticalFieldsGiveZero) {
    EXPECT_EQ(framing_difference_degree(hopf_plus(), hopf_plus()), 0);
    EXPECT_EQ(framing_difference_degree(seifert(3, 2), seifert(3, 2)), 0);
}

TEST(FramingDegree, HopfPairIsTwiceTheSignedCriterion) {
    const int d = framing_difference_degree(hopf_plus(), hopf_minus());
    EXPECT_EQ(std::abs(d), 2);
    const auto links = collinearity_links(hopf_plus(), hopf_minus());
    EXPECT_EQ(d, 2 * total_linking(links.positive, links.negative));
    EXPECT_EQ(framing_difference_degree(hopf_minus(), hopf_plus()), -d);
}

TEST(FramingDegree, LiftAndHopfInvariantRoutesAgree) {
    for (const auto& [x, y] : std::vector<std::pair<FieldSpec, FieldSpec>>{
             {hopf_plus(), hopf_minus()}, {seifert(2, 1), hopf_minus()}, {hopf_minus(), seifert(-3, 1)}}) {
        const int lift = framing_difference_degree(x, y);
        const int hopf = 2 * (hopf_invariant(right_of(y)).value - hopf_invariant(right_of(x)).value);
        EXPECT_EQ(lift, hopf) << x.to_string() << " / " << y.to_string();
        EXPECT_EQ(lift % 2, 0);
    }
}

TEST(FramingDegree, LiftRotatesFramesConsistently) {
    const auto lift = framing_rotation_lift(seifert(2, 1), hopf_minus());
    std::mt19937_64 rng(77);
    for (int n = 0; n < 200; ++n) {
        const S3Point q = combing::testing::random_s3(rng);
        const S3Point s(lift(q));
        const auto fx = framing(seifert(2, 1), q), fy = framing(hopf_minus(), q);
        for (int k = 0; k < 3; ++k)
            EXPECT_LT(combing::testing::max_abs_diff(rho(s, to_right_coords(q, fy[k])), to_right_coords(q, fx[k])),
                      1e-10);
    }
}

}  // namespace
