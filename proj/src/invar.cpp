#include "combing/invar.hpp"

#include <cstdlib>

#include "combing/linkdeg.hpp"

namespace combing {

namespace {

bool retryable(ErrorKind k) {
    return k == ErrorKind::TransversalityFailure || k == ErrorKind::ResolutionTooCoarse ||
           k == ErrorKind::LoopsTooClose || k == ErrorKind::UnreliableLinking;
}

CollinearityLinks extract_with_retry(const FieldSpec& x, const FieldSpec& y, const InvariantOptions& options,
                                     FieldSpec& y_used, std::optional<std::string>& perturbation) {
    y_used = y;
    try {
        return collinearity_links(x, y, options.extraction);
    } catch (const ComputationError& e) {
        if (e.kind() != ErrorKind::TransversalityFailure || !options.auto_perturb) throw;
    }
    for (int attempt = 0;; ++attempt) {
        y_used = perturbed(y, options.perturb_seed + std::uint64_t(attempt), options.perturb_amplitude);
        perturbation = y_used.to_string();
        try {
            return collinearity_links(x, y_used, options.extraction);
        } catch (const ComputationError& e) {
            if (attempt + 1 >= options.perturb_attempts || !retryable(e.kind())) throw;
        }
    }
}

}  // namespace

DistanceComputation compute_distance(const FieldSpec& x, const FieldSpec& y, const InvariantOptions& options) {
    DistanceComputation out;
    InvariantReport& r = out.report;
    r.fields = {x.to_string(), y.to_string()};
    r.params = options.extraction;
    out.links = extract_with_retry(x, y, options, out.y_used, r.perturbation);
    const auto& pos = out.links.positive.loops;
    const auto& neg = out.links.negative.loops;
    r.positive_components = pos.size();
    r.negative_components = neg.size();
    r.stats = out.links.stats;
    int h = 0;
    for (std::size_t a = 0; a < pos.size(); ++a)
        for (std::size_t b = 0; b < neg.size(); ++b) {
            const LinkingResult l = gauss_linking(pos[a], neg[b]);
            r.audit.push_back({a, b, l.raw, l.rounded, l.residual});
            h += l.rounded;
        }
    r.H_signed = h;
    r.D = std::abs(h);
    return out;
}

InvariantReport distance(const FieldSpec& x, const FieldSpec& y, const InvariantOptions& options) {
    return compute_distance(x, y, options).report;
}

int signed_h(const FieldSpec& x, const FieldSpec& y, const InvariantOptions& options) {
    return *distance(x, y, options).H_signed;
}

InvariantReport homotopy_number(const FieldSpec& x, const InvariantOptions& options) {
    InvariantReport r;
    r.fields = {x.to_string()};
    r.params = options.extraction;
    r.parts.push_back(distance(x, hopf_plus(), options));
    r.parts.push_back(distance(x, push_forward_R(hopf_plus()), options));
    const int sum = *r.parts[0].D + *r.parts[1].D;
    if (sum % 2 == 0)
        throw ComputationError(ErrorKind::InconsistentDistances,
                               "D(X,hopf+) + D(X,R(hopf+)) = " + std::to_string(sum) + " is even");
    r.I = (sum - 1) / 2;
    return r;
}

DiffeoInvarianceReport check_diffeo_invariance(const FieldSpec& x, const InvariantOptions& options) {
    DiffeoInvarianceReport r;
    const FieldSpec rx = push_forward_R(x);
    r.i_x = homotopy_number(x, options);
    r.i_rx = homotopy_number(rx, options);
    r.d_x_rx = distance(x, rx, options);
    r.same_homotopy_number = *r.i_x.I == *r.i_rx.I;
    r.distance_identity = *r.d_x_rx.D == 2 * *r.i_x.I + 1;
    return r;
}

nlohmann::json to_json(const ExtractionParams& p) {
    return {{"resolution", p.resolution},
            {"epsilon", p.epsilon},
            {"step", p.step},
            {"max_steps", p.max_steps},
            {"dedup_distance", p.dedup_distance},
            {"transversality", p.transversality},
            {"grid_extent", p.grid_extent}};
}

nlohmann::json to_json(const InvariantReport& r) {
    nlohmann::json j;
    j["fields"] = r.fields;
    if (r.D) {
        j["D"] = *r.D;
        j["verdict"] = r.homotopic() ? "homotopic" : "not_homotopic";
    }
    if (r.H_signed) j["H_signed"] = *r.H_signed;
    if (r.I) j["I"] = *r.I;
    if (!r.parts.empty()) {
        j["parts"] = nlohmann::json::array();
        for (const auto& p : r.parts) j["parts"].push_back(to_json(p));
        return j;
    }
    j["components"] = {{"positive", r.positive_components}, {"negative", r.negative_components}};
    j["linking_audit"] = nlohmann::json::array();
    for (const auto& a : r.audit)
        j["linking_audit"].push_back(
            {{"positive", a.positive}, {"negative", a.negative}, {"raw", a.raw}, {"rounded", a.rounded},
             {"residual", a.residual}});
    j["extraction"] = to_json(r.params);
    j["residuals"] = {{"max_constraint", r.stats.max_residual},
                      {"min_singular_value", r.stats.min_singular_value},
                      {"candidate_cells", r.stats.candidate_cells},
                      {"traced", r.stats.traced}};
    j["perturbation"] = r.perturbation ? nlohmann::json(*r.perturbation) : nlohmann::json(nullptr);
    return j;
}

nlohmann::json to_json(const DiffeoInvarianceReport& r) {
    return {{"I", to_json(r.i_x)},
            {"I_pushforward", to_json(r.i_rx)},
            {"D_pushforward", to_json(r.d_x_rx)},
            {"same_homotopy_number", r.same_homotopy_number},
            {"distance_identity", r.distance_identity}};
}

}  // namespace combing
