#include <gtest/gtest.h>

#include <cstdlib>

#include "combing/invar.hpp"
#include "combing/linkdeg.hpp"

using namespace combing;

namespace {

// Hopf invariant of the right-frame expression; an independent route to the
// homotopy class (no collinearity extraction involved).
int frame_hopf(const FieldSpec& f) {
    return hopf_invariant([f](const S3Point& q) { return express_in_right_frame(f, q).v(); }).value;
}

TEST(Distance, Examples) {
    const InvariantReport same = distance(hopf_plus(), perturbed(hopf_plus(), 5, 1e-3));
    EXPECT_EQ(*same.D, 0);
    EXPECT_TRUE(same.homotopic());

    const InvariantReport pm = distance(hopf_plus(), hopf_minus());
    EXPECT_EQ(*pm.D, 1);
    EXPECT_FALSE(pm.homotopic());
    EXPECT_EQ(pm.positive_components, 1u);
    EXPECT_EQ(pm.negative_components, 1u);
    ASSERT_EQ(pm.audit.size(), 1u);
    EXPECT_LT(pm.audit[0].residual, 0.1);

    EXPECT_EQ(*distance(tubular_twist(3), hopf_plus()).D, 3);
}

TEST(Distance, SeifertFieldsFollowTheSignOfP) {
    EXPECT_EQ(*distance(hopf_plus(), seifert(3, 2)).D, 0);
    EXPECT_EQ(*distance(seifert(-2, 1), hopf_minus()).D, 0);
    EXPECT_EQ(*distance(seifert(-2, 1), hopf_plus()).D, 1);
}

TEST(Distance, AbsoluteValueOfSignedCriterion) {
    for (const auto& [x, y] : std::vector<std::pair<FieldSpec, FieldSpec>>{
             {hopf_plus(), hopf_minus()}, {tubular_twist(2), hopf_minus()}, {morse_smale(2), hopf_plus()}}) {
        const InvariantReport r = distance(x, y);
        EXPECT_EQ(*r.D, std::abs(*r.H_signed));
        EXPECT_EQ(r.homotopic(), *r.D == 0);
    }
}

TEST(Distance, IdenticalFieldsNeedPerturbation) {
    InvariantOptions strict;
    strict.auto_perturb = false;
    try {
        distance(hopf_plus(), hopf_plus(), strict);
        FAIL();
    } catch (const ComputationError& e) {
        EXPECT_EQ(e.kind(), ErrorKind::TransversalityFailure);
    }
    const InvariantReport r = distance(hopf_plus(), hopf_plus());
    ASSERT_TRUE(r.perturbation.has_value());
    EXPECT_EQ(*r.perturbation, "perturb(hopf+;seed=1;amp=0.001)");
    EXPECT_EQ(*r.D, 0);
}

TEST(SignedH, Antisymmetry) {
    EXPECT_EQ(signed_h(hopf_plus(), hopf_minus()), -signed_h(hopf_minus(), hopf_plus()));
    EXPECT_EQ(signed_h(hopf_plus(), tubular_twist(2)), -signed_h(tubular_twist(2), hopf_plus()));
    EXPECT_EQ(signed_h(hopf_minus(), perturbed(hopf_minus(), 3, 1e-3)), 0);
}

TEST(SignedH, AdditivityOnTriple) {
    const int xy = signed_h(hopf_plus(), tubular_twist(2));
    const int yz = signed_h(tubular_twist(2), morse_smale(4));
    const int xz = signed_h(hopf_plus(), morse_smale(4));
    EXPECT_EQ(xy + yz, xz);
}

TEST(SignedH, MatchesFrameHopfInvariants) {
    for (const auto& f : {hopf_minus(), tubular_twist(2), morse_smale(3), morse_smale(4)})
        EXPECT_EQ(signed_h(hopf_plus(), f), frame_hopf(f) - frame_hopf(hopf_plus())) << f.to_string();
}

TEST(SignedH, HalfTheFramingDegree) {
    EXPECT_EQ(2 * signed_h(hopf_plus(), hopf_minus()), framing_difference_degree(hopf_plus(), hopf_minus()));
    EXPECT_EQ(2 * signed_h(hopf_plus(), morse_smale(3)), framing_difference_degree(hopf_plus(), morse_smale(3)));
}

TEST(HomotopyNumber, HopfFieldsAreZero) {
    EXPECT_EQ(*homotopy_number(hopf_plus()).I, 0);
    EXPECT_EQ(*homotopy_number(hopf_minus()).I, 0);
}

TEST(HomotopyNumber, TwistFields) {
    for (int n : {2, 3}) {
        const InvariantReport r = homotopy_number(tubular_twist(n));
        EXPECT_EQ(*r.I, n - 1);
        ASSERT_EQ(r.parts.size(), 2u);
        EXPECT_EQ(*r.parts[0].D, n);
        EXPECT_EQ(*r.parts[1].D, n - 1);
    }
}

TEST(HomotopyNumber, MorseSmaleTwo) { EXPECT_EQ(*homotopy_number(morse_smale(2)).I, 1); }

// I = h if h ≥ 0, −h − 1 otherwise, with h the frame Hopf invariant
// relative to hopf+.
TEST(HomotopyNumber, MorseSmaleAgreesWithFrameOracle) {
    for (int n = 3; n <= 5; ++n) {
        const int h = frame_hopf(morse_smale(n));
        const int expected = h >= 0 ? h : -h - 1;
        EXPECT_EQ(*homotopy_number(morse_smale(n)).I, expected) << "ms:" << n;
    }
}

TEST(DiffeoInvariance, Identities) {
    const DiffeoInvarianceReport h = check_diffeo_invariance(hopf_plus());
    EXPECT_EQ(*h.d_x_rx.D, 1);
    EXPECT_TRUE(h.same_homotopy_number);
    EXPECT_TRUE(h.distance_identity);

    const DiffeoInvarianceReport x = check_diffeo_invariance(tubular_twist(2));
    EXPECT_EQ(*x.i_rx.I, 1);
    EXPECT_TRUE(x.same_homotopy_number);
    EXPECT_TRUE(x.distance_identity);

    const DiffeoInvarianceReport m = check_diffeo_invariance(morse_smale(3));
    EXPECT_TRUE(m.same_homotopy_number);
    EXPECT_TRUE(m.distance_identity);
    EXPECT_EQ(*m.d_x_rx.D, 2 * *m.i_x.I + 1);
}

TEST(Json, DistanceReport) {
    const nlohmann::json j = to_json(distance(hopf_plus(), hopf_minus()));
    EXPECT_EQ(j["D"], 1);
    EXPECT_EQ(j["verdict"], "not_homotopic");
    EXPECT_EQ(j["fields"], nlohmann::json({"hopf+", "hopf-"}));
    EXPECT_EQ(j["components"]["positive"], 1);
    EXPECT_EQ(j["linking_audit"].size(), 1u);
    EXPECT_EQ(j["extraction"]["resolution"], 48);
    EXPECT_TRUE(j["perturbation"].is_null());
    EXPECT_EQ(j.dump(), to_json(distance(hopf_plus(), hopf_minus())).dump());
}

TEST(Json, HomotopyNumberReport) {
    const nlohmann::json j = to_json(homotopy_number(tubular_twist(2)));
    EXPECT_EQ(j["I"], 1);
    ASSERT_EQ(j["parts"].size(), 2u);
    EXPECT_EQ(j["parts"][1]["fields"][1], "R(hopf+)");
}

}  // namespace
