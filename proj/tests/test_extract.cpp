#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <numbers>

#include "combing/extract.hpp"
#include "combing/fields.hpp"
#include "test_support.hpp"

using namespace combing;

namespace {

constexpr double kPi = std::numbers::pi;

double collinearity_residual(const FieldSpec& x, const FieldSpec& y, const S3Point& p) {
    const Vec4 a = eval_vec(x, p), b = eval_vec(y, p);
    return norm(b - dot(a, b) * a);
}

void expect_on_constraint(const LinkSet& set, const FieldSpec& x, const FieldSpec& y, double eps) {
    for (const auto& loop : set.loops)
        for (const auto& p : loop.points) {
            ASSERT_LT(collinearity_residual(x, y, p), eps);
            const double s = dot(eval_vec(x, p), eval_vec(y, p));
            ASSERT_EQ(s > 0.0, set.sign_class == SignClass::Positive);
        }
}

// Cosine between a loop's chord direction and a reference loop's direction
// at the nearest reference vertex.
double direction_agreement(const OrientedLoop& loop, const OrientedLoop& ref) {
    const std::size_t m = ref.size();
    const Vec4 chord = loop.points[1].vec() - loop.points[0].vec();
    std::size_t best = 0;
    for (std::size_t k = 1; k < m; ++k)
        if (distance(ref.points[k].vec(), loop.points[0].vec()) < distance(ref.points[best].vec(), loop.points[0].vec()))
            best = k;
    const Vec4 rc = ref.points[(best + 1) % m].vec() - ref.points[(best + m - 1) % m].vec();
    return dot(chord, rc) / (norm(chord) * norm(rc));
}

TEST(Collinearity, HopfPlusMinusIsTwoGreatCircles) {
    const auto r = collinearity_links(hopf_plus(), hopf_minus());
    ASSERT_EQ(r.positive.size(), 1u);
    ASSERT_EQ(r.negative.size(), 1u);
    EXPECT_LT(hausdorff_distance(r.positive.loops[0], seifert_south_fiber(1, 1, 400)), 0.05);
    EXPECT_LT(hausdorff_distance(r.negative.loops[0], seifert_north_fiber(1, 1, 400)), 0.05);
    expect_on_constraint(r.positive, hopf_plus(), hopf_minus(), 1e-8);
    expect_on_constraint(r.negative, hopf_plus(), hopf_minus(), 1e-8);
    EXPECT_NEAR(r.positive.loops[0].length(), 2 * kPi, 2 * kPi * 0.01);
    for (const auto* set : {&r.positive, &r.negative})
        for (const auto& loop : set->loops) {
            EXPECT_LT(loop.max_gap(), 0.05);
            EXPECT_GT(min_self_distance(loop), 1e-3);
        }
}

TEST(Collinearity, IdenticalFieldsAreRejected) {
    for (const auto& f : {hopf_plus(), morse_smale(3)}) {
        try {
            collinearity_links(f, f);
            FAIL() << f.to_string();
        } catch (const ComputationError& e) {
            EXPECT_EQ(e.kind(), ErrorKind::TransversalityFailure);
        }
    }
}

TEST(Collinearity, SeifertNeverNegativelyTangentToHopfPlus) {
    for (const auto& f : {seifert(2, 1), seifert(3, 2)}) {
        const auto r = collinearity_links(f, hopf_plus());
        EXPECT_TRUE(r.negative.empty()) << f.to_string();
        // The positive set is the pair of singular fibers.
        ASSERT_EQ(r.positive.size(), 2u);
        expect_on_constraint(r.positive, f, hopf_plus(), 1e-8);
    }
}

TEST(Collinearity, TwistFieldMeetsSeifertFieldOnTwoFibers) {
    for (int n : {2, 3}) {
        const auto r = collinearity_links(tubular_twist(n), seifert(n, 1));
        ASSERT_EQ(r.positive.size(), 1u);
        ASSERT_EQ(r.negative.size(), 1u);
        const auto fibers = twist_fibers(n, 600);
        EXPECT_LT(hausdorff_distance(r.positive.loops[0], fibers[0]), 0.05);
        EXPECT_LT(hausdorff_distance(r.negative.loops[0], fibers[1]), 0.05);
    }
}

TEST(Collinearity, MorseSmaleOrbitsAreFound) {
    for (int n : {3, 4}) {
        const int p = morse_smale_layout(n).p;
        const auto r = collinearity_links(morse_smale(n), seifert(p, 1));
        const auto o = morse_smale_orbits(n, 600);
        std::vector<OrientedLoop> all = r.positive.loops;
        all.insert(all.end(), r.negative.loops.begin(), r.negative.loops.end());
        ASSERT_EQ(all.size(), 4u);
        for (const OrientedLoop* orbit : {&o.north, &o.south, &o.saddle, &o.attractor}) {
            double best = 1e9;
            for (const auto& l : all) best = std::min(best, hausdorff_distance(l, *orbit));
            EXPECT_LT(best, 0.05) << "ms:" << n;
        }
    }
}

TEST(Collinearity, SwappingFieldsReversesOnlyNegativeComponents) {
    const auto a = collinearity_links(hopf_plus(), hopf_minus());
    const auto b = collinearity_links(hopf_minus(), hopf_plus());
    ASSERT_EQ(b.positive.size(), 1u);
    ASSERT_EQ(b.negative.size(), 1u);
    EXPECT_GT(direction_agreement(b.positive.loops[0], a.positive.loops[0]), 0.9);
    EXPECT_LT(direction_agreement(b.negative.loops[0], a.negative.loops[0]), -0.9);

    const auto c = collinearity_links(morse_smale(3), hopf_plus());
    const auto d = collinearity_links(hopf_plus(), morse_smale(3));
    ASSERT_EQ(c.positive.size(), d.positive.size());
    ASSERT_EQ(c.negative.size(), d.negative.size());
    for (const auto& l : d.positive.loops) {
        const OrientedLoop* match = &c.positive.loops[0];
        for (const auto& m : c.positive.loops)
            if (hausdorff_distance(l, m) < hausdorff_distance(l, *match)) match = &m;
        EXPECT_GT(direction_agreement(l, *match), 0.9);
    }
    for (const auto& l : d.negative.loops) {
        const OrientedLoop* match = &c.negative.loops[0];
        for (const auto& m : c.negative.loops)
            if (hausdorff_distance(l, m) < hausdorff_distance(l, *match)) match = &m;
        EXPECT_LT(direction_agreement(l, *match), -0.9);
    }
}

TEST(Collinearity, DeterministicAcrossThreadCounts) {
    const char* old = std::getenv("COMBING_THREADS");
    const std::string saved = old ? old : "";
    setenv("COMBING_THREADS", "1", 1);
    const auto a = collinearity_links(morse_smale(4), seifert(1, 1));
    setenv("COMBING_THREADS", "3", 1);
    const auto b = collinearity_links(morse_smale(4), seifert(1, 1));
    if (old)
        setenv("COMBING_THREADS", saved.c_str(), 1);
    else
        unsetenv("COMBING_THREADS");
    ASSERT_EQ(a.positive.size(), b.positive.size());
    for (std::size_t k = 0; k < a.positive.size(); ++k) {
        ASSERT_EQ(a.positive.loops[k].size(), b.positive.loops[k].size());
        for (std::size_t i = 0; i < a.positive.loops[k].size(); ++i)
            ASSERT_EQ(a.positive.loops[k].points[i].vec(), b.positive.loops[k].points[i].vec());
    }
}

TEST(OrientLoop, IndependentOfInputDirection) {
    const auto r = collinearity_links(hopf_plus(), hopf_minus());
    const OrientedLoop& loop = r.negative.loops[0];
    const OrientedLoop again = orient_loop(loop.reversed(), hopf_plus(), hopf_minus());
    EXPECT_GT(direction_agreement(again, loop), 0.9);
    const OrientedLoop same = orient_loop(loop, hopf_plus(), hopf_minus());
    EXPECT_EQ(same.points[1].vec(), loop.points[1].vec());
}

TEST(TraceCurve, LinearConstraintRecoversCircle) {
    // target ∥ e1 exactly on {x3 = x4 = 0}.
    const AlignmentProblem p{[](const S3Point&) { return Vec3{1, 0, 0}; },
                             [](const S3Point& x) {
                                 const Vec4 v = x.vec();
                                 const Vec3 t{1.0, v[2], v[3]};
                                 return (1.0 / norm(t)) * t;
                             }};
    const OrientedLoop loop = trace_curve(p, S3Point(Vec4{0.6, 0.8, 0.01, -0.02}), ExtractionParams{});
    double dev = 0.0;
    for (const auto& q : loop.points) dev = std::max({dev, std::abs(q.vec()[2]), std::abs(q.vec()[3])});
    EXPECT_LT(dev, 1e-8);
    EXPECT_NEAR(loop.length(), 2 * kPi, 2 * kPi * 0.01);
}

TEST(TraceCurve, HopfFiberClosesAfterOneRevolution) {
    const S2Point y(Vec3{0.3, -0.4, 0.8});
    const AlignmentProblem p{[y](const S3Point&) { return y.v(); },
                             [](const S3Point& x) { return hopf_map(x).v(); }};
    const OrientedLoop loop = trace_curve(p, hopf_fiber(y, 0.3), ExtractionParams{});
    EXPECT_NEAR(loop.length(), 2 * kPi, 2 * kPi * 0.01);
    EXPECT_LT(loop.max_gap(), 0.05);
}

TEST(TraceCurve, SeifertTwoThreeFiberStaysOnConstraint) {
    const S2Point y(Vec3{0.2, 0.5, -0.3});
    const AlignmentProblem p{[y](const S3Point&) { return y.v(); },
                             [](const S3Point& x) { return seifert_map(2, 3, x).v(); }};
    const S3Point x0 = seifert_fiber_point(2, 3, y);
    const OrientedLoop loop = trace_curve(p, x0, ExtractionParams{});
    for (const auto& q : loop.points) {
        const Vec3 v = seifert_map(2, 3, q).v();
        ASSERT_LT(norm(v - dot(v, y.v()) * y.v()), 1e-8);
    }
    const OrientedLoop analytic = seifert_regular_fiber(2, 3, x0, 4000);
    EXPECT_NEAR(loop.length(), analytic.length(), 0.01 * analytic.length());
    EXPECT_LT(hausdorff_distance(loop, analytic), 0.01);
}

TEST(Preimage, HopfMapFiberIsTheCircleGroup) {
    const LinkSet s = preimage_link([](const S3Point& x) { return hopf_map(x).v(); }, S2Point(Vec3{1, 0, 0}));
    ASSERT_EQ(s.size(), 1u);
    for (const auto& q : s.loops[0].points) EXPECT_LT(std::abs(q.z2()), 1e-8);
    // oriented along u ↦ c_u
    const Vec4 chord = s.loops[0].points[1].vec() - s.loops[0].points[0].vec();
    const Vec4 flow = (quat::i * s.loops[0].points[0].q()).vec();
    EXPECT_GT(dot(chord, flow) / norm(chord), 0.9);
}

TEST(Preimage, ConstantMapHasNoRegularValue) {
    try {
        preimage_link([](const S3Point& x) { return express_in_right_frame(hopf_plus(), x).v(); },
                      S2Point(Vec3{1, 0, 0}));
        FAIL();
    } catch (const ComputationError& e) {
        EXPECT_EQ(e.kind(), ErrorKind::IrregularValue);
    }
}

TEST(Preimage, HopfMinusRightFrameFiber) {
    // The first right-frame component of hopf- is |z1|² − |z2|², so F = i exactly on z2 = 0.
    const LinkSet s = preimage_link([](const S3Point& x) { return express_in_right_frame(hopf_minus(), x).v(); },
                                    S2Point(Vec3{1, 0, 0}));
    ASSERT_EQ(s.size(), 1u);
    EXPECT_LT(hausdorff_distance(s.loops[0], seifert_south_fiber(1, 1, 400)), 0.05);
}

TEST(Preimage, EmptyForValuesNotAttained) {
    const LinkSet s = preimage_link([](const S3Point& x) { return express_in_right_frame(hopf_plus(), x).v(); },
                                    S2Point(Vec3{0, 1, 0}));
    EXPECT_TRUE(s.empty());
}

}  // namespace
