// combing: homotopy invariants of non-singular vector fields on S³.
//
// Exit codes: 0 success, 1 usage error, 2 numerical failure.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "combing/acceptance.hpp"
#include "combing/cli.hpp"
#include "combing/fields.hpp"
#include "combing/invar.hpp"

using namespace combing;

namespace {

constexpr int kUsage = 1;
constexpr int kNumerical = 2;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Flags {
    std::string x, y, out, obj, config, suite;
    int resolution = 0;
    double eps = 0.0, perturb = 0.0;
    std::uint64_t seed = 1;
    bool verbose = false;
};

struct Options {
    CLI::Option *x = nullptr, *y = nullptr, *out = nullptr, *obj = nullptr, *config = nullptr;
    CLI::Option *resolution = nullptr, *eps = nullptr, *perturb = nullptr, *seed = nullptr, *suite = nullptr;
};

void add_common(CLI::App* cmd, Flags& f, Options& o, bool needs_y) {
    o.x = cmd->add_option("--x", f.x, "first field, e.g. hopf+, seifert:3,2, xn:4, ms:5, R(ms:5)");
    if (needs_y) o.y = cmd->add_option("--y", f.y, "second field");
    o.resolution = cmd->add_option("--resolution", f.resolution, "seeding grid cells per axis and chart")
                       ->check(CLI::PositiveNumber);
    o.eps = cmd->add_option("--eps", f.eps, "Newton residual tolerance")->check(CLI::PositiveNumber);
    o.perturb = cmd->add_option("--perturb", f.perturb, "perturbation amplitude")->check(CLI::NonNegativeNumber);
    o.seed = cmd->add_option("--seed", f.seed, "perturbation seed");
    o.out = cmd->add_option("--out", f.out, "output JSON path");
    o.config = cmd->add_option("--config", f.config, "JSON config file; flags override its values");
}

RunConfig build_config(const std::string& command, const Flags& f, const Options& o) {
    RunConfig cfg;
    cfg.command = command;
    if (o.config && o.config->count()) {
        std::ifstream in(f.config);
        if (!in) throw UsageError("cannot read config file " + f.config);
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(in);
        } catch (const nlohmann::json::exception& e) {
            throw UsageError("config file is not valid JSON: " + std::string(e.what()));
        }
        try {
            apply_config_json(cfg, j);
        } catch (const std::invalid_argument& e) {
            throw UsageError(e.what());
        }
    }
    auto given = [](const CLI::Option* opt) { return opt && opt->count() > 0; };
    if (given(o.x)) cfg.x = f.x;
    if (given(o.y)) cfg.y = f.y;
    if (given(o.resolution)) cfg.extraction.resolution = f.resolution;
    if (given(o.eps)) cfg.extraction.epsilon = f.eps;
    if (given(o.perturb)) cfg.perturb = f.perturb;
    if (given(o.seed)) cfg.seed = f.seed;
    if (given(o.out)) cfg.out = f.out;
    if (given(o.obj)) cfg.obj = f.obj;
    if (given(o.suite)) cfg.suite = f.suite;
    return cfg;
}

FieldSpec parse_field(const std::string& text, const char* flag) {
    if (text.empty()) throw UsageError(std::string("missing ") + flag);
    try {
        return FieldSpec::parse(text);
    } catch (const ComputationError& e) {
        if (e.kind() != ErrorKind::ParseError) throw;
        throw UsageError(std::string(flag) + ": " + e.what());
    } catch (const std::invalid_argument& e) {
        throw UsageError(std::string(flag) + ": " + e.what());
    }
}

void write_json(const std::string& path, const nlohmann::json& j) {
    if (path.empty()) return;
    std::ofstream out(path);
    if (!out) throw UsageError("cannot write " + path);
    out << j.dump(2) << "\n";
}

FieldSpec second_field(const RunConfig& cfg) {
    const FieldSpec y = parse_field(cfg.y, "--y");
    return cfg.perturb ? perturbed(y, cfg.seed, *cfg.perturb) : y;
}

int cmd_distance(const RunConfig& cfg) {
    const FieldSpec x = parse_field(cfg.x, "--x");
    const FieldSpec y = second_field(cfg);
    InvariantOptions options;
    options.extraction = cfg.extraction;
    options.auto_perturb = false;
    InvariantReport r = distance(x, y, options);
    if (cfg.perturb) r.perturbation = y.to_string();
    std::printf("D(%s,%s) = %d - homotopic: %s\n", x.to_string().c_str(), y.to_string().c_str(), *r.D,
                r.homotopic() ? "yes" : "no");
    nlohmann::json j = to_json(r);
    j["schema"] = kSchemaVersion;
    write_json(cfg.out, j);
    return 0;
}

int cmd_invariant(const RunConfig& cfg) {
    const FieldSpec x = parse_field(cfg.x, "--x");
    InvariantOptions options;
    options.extraction = cfg.extraction;
    options.perturb_seed = cfg.seed;
    if (cfg.perturb) options.perturb_amplitude = *cfg.perturb;
    const DiffeoInvarianceReport r = check_diffeo_invariance(x, options);
    const std::string name = x.to_string();
    std::printf("I(%s) = %d\n", name.c_str(), *r.i_x.I);
    std::printf("I(R(%s)) = %d\n", name.c_str(), *r.i_rx.I);
    std::printf("D(%s,R(%s)) = %d (2I+1 = %d)\n", name.c_str(), name.c_str(), *r.d_x_rx.D, 2 * *r.i_x.I + 1);
    nlohmann::json j = to_json(r);
    j["schema"] = kSchemaVersion;
    write_json(cfg.out, j);
    if (!r.same_homotopy_number || !r.distance_identity) {
        std::fprintf(stderr, "reflection identities do not hold; the linking counts are inconsistent\n");
        return kNumerical;
    }
    return 0;
}

int cmd_extract(const RunConfig& cfg) {
    const FieldSpec x = parse_field(cfg.x, "--x");
    const FieldSpec y = second_field(cfg);
    const CollinearityLinks links = collinearity_links(x, y, cfg.extraction);
    const nlohmann::json j = curves_to_json(x.to_string(), y.to_string(), links);
    if (cfg.out.empty()) {
        std::cout << j.dump(2) << "\n";
    } else {
        write_json(cfg.out, j);
        std::printf("C+: %zu loops, C-: %zu loops\n", links.positive.size(), links.negative.size());
    }
    if (!cfg.obj.empty()) {
        std::ofstream obj(cfg.obj);
        if (!obj) throw UsageError("cannot write " + cfg.obj);
        write_obj(obj, curves_from_json(j));
    }
    return 0;
}

int cmd_verify(const RunConfig& cfg, bool verbose) {
    Suite suite;
    try {
        suite = parse_suite(cfg.suite);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    bool all = true;
    for (int id : suite_criteria(suite)) {
        const CriterionResult r = run_criterion(id);
        all = all && r.passed;
        std::printf("[%s] %d. %s (%.1f s)\n", r.passed ? "PASS" : "FAIL", r.id, r.title.c_str(), r.seconds);
        for (const auto& line : r.details)
            if (verbose || line.rfind("FAIL", 0) == 0) std::printf("        %s\n", line.c_str());
        std::fflush(stdout);
    }
    return all ? 0 : kNumerical;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Homotopy invariants of non-singular vector fields on the three-sphere"};
    app.require_subcommand(1);

    Flags f;
    Options od, oi, oe, ov;
    CLI::App* distance_cmd = app.add_subcommand("distance", "homotopy distance D(x,y)");
    add_common(distance_cmd, f, od, true);
    CLI::App* invariant_cmd = app.add_subcommand("invariant", "homotopy number I(x) and reflection checks");
    add_common(invariant_cmd, f, oi, false);
    CLI::App* extract_cmd = app.add_subcommand("extract", "collinearity loops as JSON (and OBJ)");
    add_common(extract_cmd, f, oe, true);
    oe.obj = extract_cmd->add_option("--obj", f.obj, "OBJ polyline export path");
    CLI::App* verify_cmd = app.add_subcommand("verify", "acceptance checks");
    ov.suite = verify_cmd->add_option("suite", f.suite, "paper, oracles, quick or all");
    ov.config = verify_cmd->add_option("--config", f.config, "JSON config file");
    verify_cmd->add_flag("-v,--verbose", f.verbose, "print every check");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kUsage;
    }

    try {
        if (*distance_cmd) return cmd_distance(build_config("distance", f, od));
        if (*invariant_cmd) return cmd_invariant(build_config("invariant", f, oi));
        if (*extract_cmd) return cmd_extract(build_config("extract", f, oe));
        return cmd_verify(build_config("verify", f, ov), f.verbose);
    } catch (const UsageError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kUsage;
    } catch (const ComputationError& e) {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        if (e.kind() == ErrorKind::TransversalityFailure)
            std::fprintf(stderr, "hint: the fields are not transverse; rerun with --perturb 1e-3\n");
        return kNumerical;
    }
}
