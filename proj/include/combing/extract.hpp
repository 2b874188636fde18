#pragma once

// Extraction of codimension-two curves on S³.
//
// Both collinearity links and preimage links are zero sets of the same kind
// of problem: find x where target(x) is parallel to base(x), two unit vectors
// in ℝ³. For fields these are the right-frame expressions F_X and F_Y; for a
// map m: S³ → S² and a value y they are y (constant) and m(x).
//
// Orientation conventions:
//   * S³ is oriented as the boundary of the unit ball (outward normal first);
//     the right frame (iq, jq, kq) is positively oriented.
//   * h(x) = (target·e1, target·e2), with (base, e1, e2) a positive frame of ℝ³.
//   * A curve on which target = +base is oriented by t = g1 × g2, where g1, g2
//     are the gradients of h in right-frame coordinates; a curve on which
//     target = −base by t = −g1 × g2.
//
// For preimages this is the usual pull-back orientation: (t, u, v) positive
// in T_xS³ when dm(u), dm(v) is positive in T_yS².

#include <array>
#include <cstddef>
#include <functional>
#include <optional>
#include <utility>

#include "combing/fields.hpp"
#include "combing/loops.hpp"
#include "combing/quat_core.hpp"

namespace combing {

struct ExtractionParams {
    int resolution = 48;            ///< grid cells per axis, per chart
    double epsilon = 1e-8;          ///< constraint residual after Newton
    double step = 0.01;             ///< continuation step
    std::size_t max_steps = 100000;
    double dedup_distance = 0.02;
    double transversality = 1e-6;   ///< minimum singular value of dh
    double grid_extent = 1.1;       ///< chart grid covers [−extent, extent]³
};

using SphereValued = std::function<Vec3(const S3Point&)>;

struct AlignmentProblem {
    SphereValued base;
    SphereValued target;
};

/// F_X and F_Y as an alignment problem.
AlignmentProblem collinearity_problem(const FieldSpec& x, const FieldSpec& y);

/// Oriented basis (e1, e2) of base^⊥ built against the coordinate axis least
/// aligned with base.
struct Gauge {
    Vec3 axis;
};
Gauge gauge_for(const Vec3& base);
std::array<double, 2> constraint_value(const AlignmentProblem& p, const S3Point& x, const Gauge& g);

/// Gradients of the two constraint components in right-frame coordinates.
std::array<Vec3, 2> constraint_gradients(const AlignmentProblem& p, const S3Point& x, const Gauge& g);

/// Smallest singular value of the 2×3 matrix with rows g1, g2.
double smallest_singular_value(const std::array<Vec3, 2>& g);

/// Newton refinement onto the zero set with minimum-norm steps. Returns
/// nothing if it does not reach the residual tolerance.
std::optional<S3Point> newton_refine(const AlignmentProblem& p, const S3Point& x0, const ExtractionParams& params);

/// +1 where target ≈ +base, −1 where target ≈ −base.
double alignment_sign(const AlignmentProblem& p, const S3Point& x);

/// Traces the closed component through a point of the zero set, in the
/// direction fixed by the orientation convention. Throws MaxStepsExceeded or
/// TransversalityFailure.
OrientedLoop trace_curve(const AlignmentProblem& p, const S3Point& seed, const ExtractionParams& params);

/// Re-orients a component according to the convention, checking agreement
/// at three well-separated points (OrientationAmbiguous otherwise).
OrientedLoop orient_loop(const AlignmentProblem& p, const OrientedLoop& loop);
OrientedLoop orient_loop(const OrientedLoop& loop, const FieldSpec& x, const FieldSpec& y);

struct ExtractionStats {
    std::size_t candidate_cells = 0;
    std::size_t traced = 0;
    double max_residual = 0.0;
    double min_singular_value = 0.0;
};

struct CollinearityLinks {
    LinkSet positive;  ///< C₊: Y = λX with λ > 0
    LinkSet negative;  ///< C₋: Y = λX with λ < 0
    ExtractionStats stats;
};

/// C₊ and C₋ of X and Y. Throws TransversalityFailure for degenerate pairs
/// and ResolutionTooCoarse if traced loops are not embedded and disjoint.
CollinearityLinks collinearity_links(const FieldSpec& x, const FieldSpec& y, const ExtractionParams& params = {});

/// Oriented preimage m⁻¹(value). Throws IrregularValue when dm has a
/// singular value below 1e-4 at a preimage.
LinkSet preimage_link(const SphereValued& m, const S2Point& value, const ExtractionParams& params = {});

inline constexpr double kRegularValueThreshold = 1e-4;

}  // namespace combing
