#pragma once

// Linking numbers, degrees of sphere maps, Hopf invariants and the degree
// of the difference of two framings.

#include <functional>
#include <vector>

#include "combing/extract.hpp"
#include "combing/fields.hpp"
#include "combing/loops.hpp"
#include "combing/quat_core.hpp"

namespace combing {

struct LinkingResult {
    double raw = 0.0;
    int rounded = 0;
    double residual = 0.0;
};

/// Gauss double integral over stereographic images, from a pole at chord
/// distance > 0.2 from both loops. Samples are doubled once if the residual
/// is 0.1 or more; UnreliableLinking if that does not help.
LinkingResult gauss_linking(const OrientedLoop& a, const OrientedLoop& b);

/// Sum of link(a, b) over all pairs, each certified by gauss_linking.
int total_linking(const LinkSet& a, const LinkSet& b);

/// Signed crossings of a over b in the projection of the stereographic
/// images along `direction` (pointing at the viewer); retries with a jittered
/// direction on near-degenerate crossings.
int crossing_linking(const OrientedLoop& a, const OrientedLoop& b, const Vec3& direction = {0.3, 0.5, 0.81});

/// The stereographic pole used for a set of loops (farthest of 64 fixed
/// candidates). Throws NoPoleFound if none is farther than 0.2.
S3Point projection_pole(const std::vector<const OrientedLoop*>& loops);

struct DegreeResult {
    int value = 0;
    std::vector<Vec4> preimages;  ///< S² preimages use the first three entries
    std::vector<int> signs;
    Vec4 regular_value{};
};

using S2Map = std::function<Vec3(const S2Point&)>;
using S3Map = std::function<Vec4(const S3Point&)>;

/// Signed preimage count at the first regular value among 26 fixed
/// directions.
DegreeResult degree_s2(const S2Map& m, int resolution = 32);
/// Same for maps S³ → S³, over 80 fixed directions.
DegreeResult degree_s3(const S3Map& h, int resolution = 24);

struct HopfInvariantResult {
    int value = 0;
    int check = 0;  ///< the same invariant from a second pair of values
    Vec3 y{}, z{};
};

/// link(m⁻¹(y), m⁻¹(z)) for regular values y, z, cross-checked with a
/// second pair. Throws UnreliableLinking if the two pairs disagree.
HopfInvariantResult hopf_invariant(const SphereValued& m, const ExtractionParams& params = {});

struct FramingDegreeOptions {
    int lift_resolution = 32;
    int degree_resolution = 24;
    ExtractionParams extraction{};
};

/// [τ_X − τ_Y]: twice the degree of the S³-lift of the rotation taking the
/// frame of Y to the frame of X. When either field has no closed-form frame
/// the value comes from 2(H(F_Y) − H(F_X)), F the right-frame expression.
int framing_difference_degree(const FieldSpec& x, const FieldSpec& y, const FramingDegreeOptions& options = {});

/// The continuous S³-lift used by framing_difference_degree; exposed for
/// testing. Throws LiftInconsistent.
S3Map framing_rotation_lift(const FieldSpec& x, const FieldSpec& y, int resolution = 32);

}  // namespace combing
