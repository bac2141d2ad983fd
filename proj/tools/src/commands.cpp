#include "newtonosc_cli/commands.hpp"

#include "newtonosc/errors.hpp"

namespace newtonosc::cli {

ResolvedPhase resolve_phase(const PhaseInput& in) {
    ResolvedPhase r;
    const BivarPoly parsed = parse_poly(in.text);
    if (in.mixed) {
        r.F = parsed;
        r.S = mixed_antiderivative(parsed);
    } else {
        r.S = parsed;
        r.F = mixed_derivative(parsed);
    }
    return r;
}

json input_json(const PhaseInput& in, const ResolvedPhase& r) {
    return json{{"phase", in.text}, {"mixed", in.mixed}, {"rho", in.rho}, {"S", render(r.S)}, {"F", render(r.F)}};
}

json run_analyze(const PhaseInput& in, const std::optional<std::string>& order, const Provenance& prov) {
    const ResolvedPhase r = resolve_phase(in);
    const Rational K = order ? parse_rational(*order) : default_truncation_order(r.F);
    const NewtonPolygon polygon = build_polygon(r.F);
    const BranchSet branches = expand_branches(r.F, K);
    const NewtonAnalysis na = analyze_newton(r.F, branches, K);

    json doc = document(prov);
    doc["input"] = input_json(in, r);
    doc["polygon"] = to_json(polygon);
    doc["t0"] = to_json(na.report.t0);
    doc["delta"] = to_json(na.report.delta);
    doc["crossing"] = to_string(na.report.crossing);
    json rates = json::array();
    for (const auto& e : na.report.per_edge) rates.push_back(to_json(e));
    doc["edge_rates"] = rates;
    doc["branches"] = to_json(branches);
    doc["degeneracy"] = to_json(na.report.degeneracy);
    return doc;
}

NormRun run_norm(const PhaseInput& in, const std::vector<double>& lambdas, const NormOptions& opts,
                 const Provenance& prov) {
    const ResolvedPhase r = resolve_phase(in);
    const PhaseSpec p{r.S, in.rho};
    NormRun out;
    for (double lambda : lambdas) out.samples.push_back(estimate_norm(p, lambda, opts));
    out.doc = document(prov);
    out.doc["input"] = input_json(in, r);
    json samples = json::array();
    for (const auto& s : out.samples) samples.push_back(to_json(s));
    out.doc["samples"] = samples;
    return out;
}

SweepRun run_sweep(const PhaseInput& in, const SweepConfig& cfg, const Provenance& prov) {
    const ResolvedPhase r = resolve_phase(in);
    SweepRun out;
    out.report = verify_theorem(PhaseSpec{r.S, in.rho}, cfg);
    out.doc = document(prov);
    json input = input_json(in, r);
    input["lambdas"] = cfg.lambdas;
    input["tol_slope"] = cfg.tol_slope;
    if (cfg.fit_window) input["fit_window"] = {cfg.fit_window->first, cfg.fit_window->second};
    out.doc["input"] = input;
    out.doc["report"] = to_json(out.report);
    return out;
}

BlocksRun run_blocks(const PhaseInput& in, double lambda, const BlockOptions& opts, const Provenance& prov) {
    const ResolvedPhase r = resolve_phase(in);
    const NewtonPolygon polygon = build_polygon(r.F);
    BlocksRun out;
    out.report = verify_blocks(PhaseSpec{r.S, in.rho}, lambda, polygon, opts);
    out.doc = document(prov);
    json input = input_json(in, r);
    input["lambda"] = lambda;
    input["D"] = opts.D;
    input["j_max"] = opts.j_max;
    input["ratio_cap"] = opts.ratio_cap;
    out.doc["input"] = input;
    out.doc["report"] = to_json(out.report);
    return out;
}

DyadpolRun run_dyadpol(const ExponentProfile& profile, int trials, int density, const Provenance& prov) {
    const LowerBoundSet e = lower_bound_set(profile);
    const std::vector<std::string> bad = check_structure(profile, e);
    const LowerBoundReport rep = verify_lower_bound(profile, e, trials, density, prov.seed);
    DyadpolRun out;
    out.pass = rep.pass && bad.empty();
    out.doc = document(prov);
    out.doc["profile"] = to_json(profile);
    out.doc["trials"] = trials;
    out.doc["density"] = density;
    out.doc["set"] = to_json(e);
    out.doc["structure_violations"] = bad;
    out.doc["result"] = to_json(rep);
    out.doc["pass"] = out.pass;
    return out;
}

int exit_code_for(const Error& e) {
    if (e.kind() == "SyntaxError" || e.kind() == "NegativeExponent") return 2;
    if (e.kind() == "EmptyPolygon") return 3;
    return 1;
}

json error_json(const Error& e) {
    json err{{"kind", e.kind()}, {"message", e.what()}};
    if (const auto* s = dynamic_cast<const SyntaxError*>(&e)) err["position"] = s->position();
    if (const auto* r = dynamic_cast<const ResolutionError*>(&e)) err["lambda"] = r->lambda();
    return json{{"schema", kSchema}, {"error", err}};
}

}  // namespace newtonosc::cli
