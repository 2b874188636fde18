#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "combing/fields.hpp"
#include "test_support.hpp"

using namespace combing;
using combing::testing::max_abs_diff;
using combing::testing::random_s3;

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<FieldSpec> catalog() {
    return {hopf_plus(),      hopf_minus(),       seifert(1, 1),           seifert(2, 1),
            seifert(3, 2),    seifert(-2, 1),     seifert(-1, 3),          tubular_twist(1),
            tubular_twist(2), tubular_twist(3),   morse_smale(1),          morse_smale(2),
            morse_smale(3),   morse_smale(4),     morse_smale(5),          morse_smale(6),
            push_forward_R(morse_smale(3)),       perturbed(hopf_plus(), 7, 0.05),
            perturbed(push_forward_R(tubular_twist(2)), 1, 1e-3)};
}

TEST(Fields, UnitAndTangentEverywhere) {
    std::mt19937_64 rng(3);
    for (const auto& f : catalog()) {
        for (int n = 0; n < 2000; ++n) {
            const S3Point x = random_s3(rng);
            const Vec4 v = eval_vec(f, x);
            ASSERT_NEAR(norm(v), 1.0, 1e-12) << f.to_string();
            ASSERT_NEAR(dot(v, x.vec()), 0.0, 1e-12) << f.to_string();
        }
    }
}

TEST(Fields, SeifertOneOneIsHopfPlus) {
    std::mt19937_64 rng(5);
    for (int n = 0; n < 1000; ++n) {
        const S3Point x = random_s3(rng);
        EXPECT_LT(max_abs_diff(eval_vec(seifert(1, 1), x), eval_vec(hopf_plus(), x)), 1e-14);
        EXPECT_LT(max_abs_diff(eval_vec(seifert(-1, 1), x), eval_vec(hopf_minus(), x)), 1e-14);
    }
}

TEST(Fields, HopfMinusIsPushForwardOfHopfPlus) {
    std::mt19937_64 rng(6);
    for (int n = 0; n < 1000; ++n) {
        const S3Point x = random_s3(rng);
        EXPECT_LT(max_abs_diff(eval_vec(push_forward_R(hopf_plus()), x), eval_vec(hopf_minus(), x)), 1e-14);
    }
}

TEST(Fields, PushForwardIsInvolution) {
    std::mt19937_64 rng(8);
    for (const auto& f : {morse_smale(4), tubular_twist(2), seifert(3, 2)}) {
        const FieldSpec rr = push_forward_R(push_forward_R(f));
        for (int n = 0; n < 300; ++n) {
            const S3Point x = random_s3(rng);
            EXPECT_LT(max_abs_diff(eval_vec(rr, x), eval_vec(f, x)), 1e-14);
        }
    }
}

TEST(Fields, RightFrameExamples) {
    const S3Point one(quat::one), j(quat::j);
    EXPECT_LT(max_abs_diff(express_in_right_frame(hopf_plus(), one).v(), Vec3{1, 0, 0}), 1e-15);
    EXPECT_LT(max_abs_diff(express_in_right_frame(hopf_plus(), j).v(), Vec3{1, 0, 0}), 1e-15);
    EXPECT_LT(max_abs_diff(express_in_right_frame(hopf_minus(), one).v(), Vec3{1, 0, 0}), 1e-15);
    EXPECT_LT(max_abs_diff(express_in_right_frame(hopf_minus(), j).v(), Vec3{-1, 0, 0}), 1e-15);

    std::mt19937_64 rng(9);
    for (int n = 0; n < 500; ++n) {
        const S3Point x = random_s3(rng);
        EXPECT_LT(max_abs_diff(express_in_right_frame(hopf_plus(), x).v(), Vec3{1, 0, 0}), 1e-14);
    }
}

TEST(SeifertMap, OneOneIsIsometricToHopfMap) {
    std::mt19937_64 rng(12);
    for (int n = 0; n < 1000; ++n) {
        const S3Point a = random_s3(rng), b = random_s3(rng);
        const double ds = distance(seifert_map(1, 1, a).v(), seifert_map(1, 1, b).v());
        const double dh = distance(hopf_map(a).v(), hopf_map(b).v());
        EXPECT_NEAR(ds, dh, 1e-12);
    }
}

TEST(SeifertMap, SingularFibersOverPoles) {
    for (const auto& [p, q] : std::vector<std::pair<int, int>>{{1, 1}, {2, 1}, {3, 2}, {-2, 3}}) {
        for (const auto& x : seifert_north_fiber(p, q, 16).points)
            EXPECT_LT(max_abs_diff(seifert_map(p, q, x).v(), Vec3{0, 0, 1}), 1e-14);
        for (const auto& x : seifert_south_fiber(p, q, 16).points)
            EXPECT_LT(max_abs_diff(seifert_map(p, q, x).v(), Vec3{0, 0, -1}), 1e-14);
    }
}

TEST(SeifertMap, ConstantAlongFibersAndFiberPointIsPreimage) {
    std::mt19937_64 rng(13);
    for (const auto& [p, q] : std::vector<std::pair<int, int>>{{1, 1}, {2, 1}, {3, 2}, {-2, 3}, {5, 1}}) {
        for (int n = 0; n < 50; ++n) {
            const S2Point y = combing::testing::random_s2(rng);
            const S3Point x0 = seifert_fiber_point(p, q, y);
            EXPECT_LT(max_abs_diff(seifert_map(p, q, x0).v(), y.v()), 1e-10);
            for (const auto& x : seifert_regular_fiber(p, q, x0, 37).points)
                EXPECT_LT(max_abs_diff(seifert_map(p, q, x).v(), y.v()), 1e-10);
        }
    }
}

TEST(SeifertMap, FiberIsAnOrbit) {
    const S3Point x0 = seifert_fiber_point(3, 2, S2Point(Vec3{0.2, -0.5, 0.3}));
    const OrientedLoop loop = seifert_regular_fiber(3, 2, x0, 400);
    for (std::size_t k = 0; k < loop.size(); ++k) {
        const Vec4 chord = loop.points[(k + 1) % loop.size()].vec() - loop.points[(k + loop.size() - 1) % loop.size()].vec();
        const Vec4 f = eval_vec(seifert(3, 2), loop.points[k]);
        EXPECT_GT(dot(chord, f) / norm(chord), 1.0 - 1e-4);
    }
}

TEST(SphereFields, X1PolesAreSourcesAndEquatorHasSaddleAndSink) {
    for (const Vec3& z : {Vec3{1, 0, 0}, Vec3{-1, 0, 0}, Vec3{0, 0, 1}, Vec3{0, 0, -1}})
        EXPECT_LT(norm(sphere_field_eval(Sphere2Field::X1, S2Point(z))), 1e-15);
    auto e_phi = [](double phi, double theta) {
        return Vec3{std::cos(phi) * std::cos(theta), std::cos(phi) * std::sin(theta), -std::sin(phi)};
    };
    auto at = [](double phi, double theta) {
        return S2Point(Vec3{std::sin(phi) * std::cos(theta), std::sin(phi) * std::sin(theta), std::cos(phi)});
    };
    for (double theta : {0.4, 1.7, 3.0, -2.2}) {
        EXPECT_GT(dot(sphere_field_eval(Sphere2Field::X1, at(0.3, theta)), e_phi(0.3, theta)), 0.0);
        EXPECT_LT(dot(sphere_field_eval(Sphere2Field::X1, at(kPi - 0.3, theta)), e_phi(kPi - 0.3, theta)), 0.0);
    }
    // Along the equator the flow runs from the saddle at θ = 0 to the sink at θ = π.
    const Vec3 v = sphere_field_eval(Sphere2Field::X1, at(kPi / 2, 1.0));
    EXPECT_GT(dot(v, Vec3{-std::sin(1.0), std::cos(1.0), 0.0}), 0.0);
}

// Oracle: central finite-difference pushforward of the lift by seifert_map.
TEST(OrthogonalLift, PushesForwardToSphereField) {
    std::mt19937_64 rng(21);
    const double h = 1e-5;
    for (const auto& [p, q] : std::vector<std::pair<int, int>>{{1, 1}, {2, 1}, {4, 1}, {3, 2}, {-2, 1}}) {
        for (auto f : {Sphere2Field::X0, Sphere2Field::X1}) {
            for (int n = 0; n < 200; ++n) {
                const S3Point x = random_s3(rng);
                const Vec4 a = orthogonal_lift(p, q, f, x).vec;
                const Vec3 plus = seifert_map(p, q, S3Point(x.vec() + h * a)).v();
                const Vec3 minus = seifert_map(p, q, S3Point(x.vec() - h * a)).v();
                const Vec3 fd = (1.0 / (2 * h)) * (plus - minus);
                const Vec3 expected = sphere_field_eval(f, seifert_map(p, q, x));
                ASSERT_LT(max_abs_diff(fd, expected), 1e-7) << p << "," << q;
            }
        }
    }
}

TEST(OrthogonalLift, OrthogonalToFibersAndZeroOnSingularFibers) {
    std::mt19937_64 rng(22);
    for (const auto& [p, q] : std::vector<std::pair<int, int>>{{1, 1}, {3, 1}, {3, 2}, {-2, 1}}) {
        for (int n = 0; n < 300; ++n) {
            const S3Point x = random_s3(rng);
            const Vec4 a = orthogonal_lift(p, q, Sphere2Field::X1, x).vec;
            EXPECT_NEAR(dot(a, eval_vec(seifert(p, q), x)), 0.0, 1e-13);
            EXPECT_NEAR(dot(a, x.vec()), 0.0, 1e-13);
        }
        for (const auto& x : seifert_north_fiber(p, q, 8).points)
            EXPECT_LT(norm(orthogonal_lift(p, q, Sphere2Field::X0, x).vec), 1e-15);
        for (const auto& x : seifert_south_fiber(p, q, 8).points)
            EXPECT_LT(norm(orthogonal_lift(p, q, Sphere2Field::X1, x).vec), 1e-15);
    }
}

TEST(Framing, OrthonormalPositiveAndLedByField) {
    std::mt19937_64 rng(31);
    for (const auto& f : catalog()) {
        if (!has_framing(f)) continue;
        for (int n = 0; n < 500; ++n) {
            const S3Point x = random_s3(rng);
            const auto fr = framing(f, x);
            ASSERT_LT(max_abs_diff(fr[0], eval_vec(f, x)), 1e-12) << f.to_string();
            for (int a = 0; a < 3; ++a) {
                ASSERT_NEAR(dot(fr[a], x.vec()), 0.0, 1e-12);
                for (int b = 0; b < 3; ++b) ASSERT_NEAR(dot(fr[a], fr[b]), a == b ? 1.0 : 0.0, 1e-12);
            }
            ASSERT_NEAR(det4(x.vec(), fr[0], fr[1], fr[2]), 1.0, 1e-12) << f.to_string();
        }
    }
}

TEST(Framing, MorseSmaleBeyondOneHasNone) {
    EXPECT_FALSE(has_framing(morse_smale(2)));
    EXPECT_FALSE(has_framing(push_forward_R(morse_smale(5))));
    try {
        framing(morse_smale(3), S3Point(quat::one));
        FAIL();
    } catch (const ComputationError& e) {
        EXPECT_EQ(e.kind(), ErrorKind::NoGlobalFraming);
    }
}

// Periodic orbits are traversed in the direction of the field.
TEST(MorseSmale, OrbitsFollowTheField) {
    for (int n = 2; n <= 7; ++n) {
        const MorseSmaleOrbits o = morse_smale_orbits(n, 600);
        for (const OrientedLoop* loop : {&o.north, &o.south, &o.saddle, &o.attractor}) {
            const std::size_t m = loop->size();
            for (std::size_t k = 0; k < m; ++k) {
                const Vec4 chord = loop->points[(k + 1) % m].vec() - loop->points[(k + m - 1) % m].vec();
                const Vec4 f = eval_vec(morse_smale(n), loop->points[k]);
                ASSERT_GT(dot(chord, f) / norm(chord), 1.0 - 1e-4) << "ms:" << n;
            }
        }
    }
}

TEST(TubularTwist, CollinearWithSeifertFieldOnTwoFibers) {
    for (int n = 1; n <= 4; ++n) {
        const auto fibers = twist_fibers(n, 64);
        for (const auto& x : fibers[0].points)
            EXPECT_LT(max_abs_diff(eval_vec(tubular_twist(n), x), eval_vec(seifert(n, 1), x)), 1e-12);
        for (const auto& x : fibers[1].points)
            EXPECT_LT(max_abs_diff(eval_vec(tubular_twist(n), x), -eval_vec(seifert(n, 1), x)), 1e-12);
    }
}

TEST(Perturbed, SmallAndDeterministic) {
    std::mt19937_64 rng(41);
    const FieldSpec a = perturbed(morse_smale(3), 4, 1e-3);
    const FieldSpec b = FieldSpec::parse(a.to_string());
    for (int n = 0; n < 500; ++n) {
        const S3Point x = random_s3(rng);
        EXPECT_EQ(eval_vec(a, x), eval_vec(b, x));
        EXPECT_LT(norm(eval_vec(a, x) - eval_vec(morse_smale(3), x)), 1e-2);
    }
}

TEST(SpecText, RoundTrip) {
    for (const auto& f : catalog()) EXPECT_EQ(FieldSpec::parse(f.to_string()).to_string(), f.to_string());
    EXPECT_EQ(FieldSpec::parse(" seifert: -3 , 2 ").to_string(), "seifert:-3,2");
    EXPECT_EQ(FieldSpec::parse("perturb(ms:4;seed=3;amp=0.01)").to_string(), "perturb(ms:4;seed=3;amp=0.01)");
    EXPECT_EQ(FieldSpec::parse("perturb(hopf-)").to_string(), "perturb(hopf-;seed=0;amp=0.001)");
}

TEST(SpecText, RejectsMalformed) {
    for (const char* bad : {"", "hopf", "seifert:2,2", "seifert:0,1", "ms:0", "R(hopf+", "xn:2x",
                            "perturb(hopf+;amp=-1)", "perturb(hopf+;foo=1)"}) {
        try {
            FieldSpec::parse(bad);
            ADD_FAILURE() << bad;
        } catch (const ComputationError& e) {
            EXPECT_EQ(e.kind(), ErrorKind::ParseError) << bad;
        }
    }
}

}  // namespace
