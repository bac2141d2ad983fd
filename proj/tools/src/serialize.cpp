#include "newtonosc_cli/serialize.hpp"

#include <charconv>
#include <cmath>

namespace newtonosc::cli {

namespace {

json monomial(const Monomial& m) { return json::array({m.x, m.y}); }

// Non-finite doubles have no JSON literal; they are written as strings.
json number(double v) {
    if (std::isfinite(v)) return v;
    return format_double(v);
}

}  // namespace

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

json provenance(const Provenance& p) {
    return json{{"threads", p.threads}, {"seed", p.seed}, {"version", "0.1.0"}};
}

json document(const Provenance& p) {
    return json{{"schema", kSchema}, {"command", p.command}, {"provenance", provenance(p)}};
}

json to_json(const Rational& q) { return to_string(q); }

json to_json(const NewtonPolygon& poly) {
    json verts = json::array();
    for (const auto& v : poly.vertices) verts.push_back(monomial(v));
    json edges = json::array();
    for (const auto& e : poly.edges) {
        edges.push_back({{"gamma", to_json(e.gamma)}, {"n", e.n}, {"upper", monomial(e.upper)},
                         {"lower", monomial(e.lower)}});
    }
    return json{{"A", poly.A}, {"B", poly.B}, {"vertices", verts}, {"edges", edges}};
}

json to_json(const EdgeRate& r) {
    return json{{"nu", r.nu},         {"gamma", to_json(r.gamma)},       {"n", r.n},
                {"A_nu", r.A_nu},     {"B_nu", r.B_nu},                  {"delta_nu", to_json(r.delta_nu)},
                {"t_nu", to_json(r.t_nu)}};
}

json to_json(const Degeneracy& d) {
    json out{{"kind", to_string(d.kind)}};
    if (d.kind == Degeneracy::Kind::CompletelyDegenerate) {
        out["N"] = d.N;
        out["c"] = number(d.c);
    }
    if (d.kind == Degeneracy::Kind::Undetermined) out["checked_order"] = to_json(d.checked_order);
    return out;
}

json to_json(const PuiseuxBranch& b) {
    json terms = json::array();
    for (const auto& t : b.terms) {
        terms.push_back({{"exponent", to_json(t.exponent)},
                         {"re", number(t.coefficient.real())},
                         {"im", number(t.coefficient.imag())}});
    }
    return json{{"ramification", b.ramification}, {"multiplicity", b.multiplicity},
                {"reality", to_string(b.reality)},  {"status", to_string(b.status)},
                {"order", to_json(b.order)},        {"terms", terms}};
}

json to_json(const BranchSet& b) {
    json branches = json::array();
    for (const auto& br : b.branches) branches.push_back(to_json(br));
    return json{{"order", to_json(b.order)},
                {"total_multiplicity", b.total_multiplicity},
                {"count_x_flat", b.count_x_flat},
                {"count_y_flat", b.count_y_flat},
                {"cluster_tolerance", number(b.cluster_tolerance)},
                {"branches", branches}};
}

json to_json(const NormSample& s) {
    return json{{"lambda", number(s.lambda)}, {"n", s.n},
                {"norm", number(s.value)},    {"conv_err", number(s.conv_err)},
                {"iterations", s.iterations}, {"converged", s.converged},
                {"valid", s.valid()}};
}

json to_json(const ScalingReport& r) {
    json samples = json::array();
    for (const auto& s : r.samples) samples.push_back(to_json(s));
    json out{{"delta", to_json(r.delta)},
             {"degeneracy", to_json(r.degeneracy)},
             {"predicted", to_json(r.predicted)},
             {"rho", number(r.rho)},
             {"fitted", r.fitted},
             {"slope", number(r.slope)},
             {"stderr", number(r.stderr_)},
             {"tol_slope", number(r.tol_slope)},
             {"verdict", to_string(r.verdict)},
             {"note", r.note},
             {"samples", samples}};
    if (!r.log_ratios.empty()) {
        json lr = json::array();
        for (double v : r.log_ratios) lr.push_back(number(v));
        out["log_ratios"] = lr;
    }
    if (r.log_exponent_fit) out["log_exponent_fit"] = number(*r.log_exponent_fit);
    if (r.half_rho_verdict) {
        out["half_rho"] = {{"verdict", to_string(*r.half_rho_verdict)},
                           {"slope", r.half_rho_slope ? number(*r.half_rho_slope) : json(nullptr)}};
    }
    return out;
}

json to_json(const BlockEstimate& b) {
    json out{{"j", b.j},
             {"k", b.k},
             {"region", to_string(b.region)},
             {"mu", number(b.mu)},
             {"measured", number(b.measured)},
             {"size_bound", number(b.size)},
             {"osc_bound", number(b.osc)},
             {"ratio", number(b.ratio)},
             {"n", b.n},
             {"min_abs_f", number(b.min_abs_f)},
             {"max_abs_f", number(b.max_abs_f)}};
    if (!b.error.empty()) out["error"] = b.error;
    return out;
}

json to_json(const BlockReport& r) {
    json blocks = json::array();
    for (const auto& b : r.blocks) blocks.push_back(to_json(b));
    json regions = json::array();
    for (const auto& s : r.regions) {
        regions.push_back({{"region", to_string(s.kind)}, {"blocks", s.blocks}, {"worst_ratio", number(s.worst_ratio)}});
    }
    return json{{"worst_gap_ratio", number(r.worst_gap_ratio)},
                {"errors", r.errors},
                {"pass", r.pass},
                {"regions", regions},
                {"blocks", blocks}};
}

json to_json(const ExponentProfile& p) { return json{{"r", p.r}, {"C", number(p.C)}}; }

json to_json(const LowerBoundSet& e) {
    json intervals = json::array();
    for (const auto& iv : e.intervals) {
        intervals.push_back({{"lo", iv.lo ? json(*iv.lo) : json(nullptr)}, {"hi", iv.hi}});
    }
    json corners = json::array();
    for (const auto& c : e.corners) corners.push_back(to_json(c));
    return json{{"B", number(e.B)}, {"margin", e.margin}, {"corners", corners}, {"intervals", intervals}};
}

json to_json(const LowerBoundReport& r) {
    return json{{"min_observed", number(r.min_observed)},
                {"worst_h", number(r.worst_h)},
                {"evaluations", r.evaluations},
                {"violations", r.violations},
                {"pass", r.pass}};
}

void write_csv_row(std::ostream& out, const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out << ',';
        out << fields[i];
    }
    out << '\n';
}

void write_csv_provenance(std::ostream& out, const Provenance& p) {
    out << "# " << kSchema << " command=" << p.command << " threads=" << p.threads << " seed=" << p.seed
        << '\n';
}

void write_norm_csv(std::ostream& out, const std::vector<NormSample>& samples) {
    write_csv_row(out, {"lambda", "n", "norm", "conv_err", "iterations"});
    for (const auto& s : samples) {
        write_csv_row(out, {format_double(s.lambda), std::to_string(s.n), format_double(s.value),
                            format_double(s.conv_err), std::to_string(s.iterations)});
    }
}

void write_blocks_csv(std::ostream& out, const std::vector<BlockEstimate>& blocks) {
    write_csv_row(out, {"j", "k", "region", "mu", "measured", "size_bound", "osc_bound", "ratio"});
    for (const auto& b : blocks) {
        write_csv_row(out, {std::to_string(b.j), std::to_string(b.k), to_string(b.region),
                            format_double(b.mu), format_double(b.measured), format_double(b.size),
                            format_double(b.osc), format_double(b.ratio)});
    }
}

void write_plot_csv(std::ostream& out, const std::vector<PlotPoint>& plot) {
    write_csv_row(out, {"log2_lambda", "log2_norm", "predicted"});
    for (const auto& p : plot) {
        write_csv_row(out, {format_double(p.log2_lambda), format_double(p.log2_norm), format_double(p.predicted)});
    }
}

}  // namespace newtonosc::cli
