#pragma once

// Homotopy invariants of non-singular fields on S³: the distance D(X, Y),
// the signed value H_X(Y) and the homotopy number I(X).
//
// With the orientation conventions of extract.hpp,
//   H_X(Y) = Σ link(a, b) over a ∈ C₊(X, Y), b ∈ C₋(X, Y),
//   D(X, Y) = |H_X(Y)|,
//   I(X)    = (D(X, hopf+) + D(X, R(hopf+)) − 1) / 2.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "combing/extract.hpp"
#include "combing/fields.hpp"

namespace combing {

struct InvariantOptions {
    ExtractionParams extraction{};
    /// Retry with perturb(Y) when extraction is not transverse. A perturbed
    /// pair that still fails numerically is retried with the next seed, up
    /// to perturb_attempts seeds in total.
    bool auto_perturb = true;
    std::uint64_t perturb_seed = 1;
    double perturb_amplitude = 1e-3;
    int perturb_attempts = 3;
};

struct LinkAudit {
    std::size_t positive = 0;  ///< index into C₊
    std::size_t negative = 0;  ///< index into C₋
    double raw = 0.0;
    int rounded = 0;
    double residual = 0.0;
};

struct InvariantReport {
    std::vector<std::string> fields;
    std::optional<int> D;
    std::optional<int> H_signed;
    std::optional<int> I;
    std::size_t positive_components = 0;
    std::size_t negative_components = 0;
    std::vector<LinkAudit> audit;
    ExtractionParams params{};
    ExtractionStats stats{};
    /// Canonical form of the perturbed second field, when one was used.
    std::optional<std::string> perturbation;
    /// Component distances behind I.
    std::vector<InvariantReport> parts;

    bool homotopic() const { return D && *D == 0; }
};

struct DistanceComputation {
    InvariantReport report;
    CollinearityLinks links;
    FieldSpec y_used;
};

/// Full computation, keeping the extracted links.
DistanceComputation compute_distance(const FieldSpec& x, const FieldSpec& y, const InvariantOptions& options = {});

InvariantReport distance(const FieldSpec& x, const FieldSpec& y, const InvariantOptions& options = {});
int signed_h(const FieldSpec& x, const FieldSpec& y, const InvariantOptions& options = {});

/// Throws InconsistentDistances if D(X, hopf+) + D(X, R(hopf+)) is even.
InvariantReport homotopy_number(const FieldSpec& x, const InvariantOptions& options = {});

struct DiffeoInvarianceReport {
    InvariantReport i_x;
    InvariantReport i_rx;
    InvariantReport d_x_rx;
    bool same_homotopy_number = false;  ///< I(X) = I(R_*X)
    bool distance_identity = false;     ///< D(X, R_*X) = 2·I(X) + 1
};

DiffeoInvarianceReport check_diffeo_invariance(const FieldSpec& x, const InvariantOptions& options = {});

nlohmann::json to_json(const ExtractionParams& p);
nlohmann::json to_json(const InvariantReport& r);
nlohmann::json to_json(const DiffeoInvarianceReport& r);

}  // namespace combing
