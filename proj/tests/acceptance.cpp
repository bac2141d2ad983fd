// One PASS/FAIL line per acceptance criterion; exits nonzero if any fails.

#include "oracles.hpp"

#include "newtonosc/blocks.hpp"
#include "newtonosc/dyadpol.hpp"
#include "newtonosc/errors.hpp"
#include "newtonosc/newton.hpp"
#include "newtonosc/opnorm.hpp"
#include "newtonosc/puiseux.hpp"
#include "newtonosc/scaling.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <random>
#include <string>

using namespace newtonosc;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

// Samples from the three sweeps, rechecked by the hygiene criterion.
std::vector<NormSample> g_sweep_samples;

ScalingReport run_sweep(const char* phase, int lo, int hi, double tol) {
    SweepConfig cfg;
    cfg.lambdas = SweepConfig::powers_of_two(lo, hi);
    cfg.tol_slope = tol;
    ScalingReport r = verify_theorem(PhaseSpec{parse_poly(phase), 1.0}, cfg);
    g_sweep_samples.insert(g_sweep_samples.end(), r.samples.begin(), r.samples.end());
    return r;
}

Outcome hormander() {
    const ScalingReport r = run_sweep("x*y", 4, 10, 0.05);
    double lo = std::numeric_limits<double>::infinity(), hi = 0;
    for (const NormSample& s : r.samples) {
        const double v = s.value * std::sqrt(s.lambda);
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    const bool slope_ok = r.fitted && std::abs(r.slope + 0.5) <= 0.05;
    return {slope_ok && hi / lo <= 3.0,
            fmt("slope %.4f (target -0.5 +- 0.05), lambda^1/2 norm in [%.3f, %.3f]", r.slope, lo, hi)};
}

Outcome nondegenerate() {
    const ScalingReport r = run_sweep("x^2*y^2/4", 4, 11, 0.1);
    std::string d = fmt("delta %s, slope %.4f (target -0.25 +- 0.1), verdict %s", to_string(r.delta).c_str(),
                        r.slope, to_string(r.verdict));
    if (r.half_rho_slope) d += fmt(", at rho/2 slope %.4f", *r.half_rho_slope);
    return {r.fitted && std::abs(r.slope + 0.25) <= 0.1, d};
}

Outcome degenerate() {
    // lambda = 2^10 and above needs more than 4096 grid points per axis.
    const ScalingReport r = run_sweep("-(y-x)^4/12", 4, 9, 0.1);
    double lo = std::numeric_limits<double>::infinity(), hi = 0;
    for (double v : r.log_ratios) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    const bool degenerate = r.degeneracy.kind == Degeneracy::Kind::CompletelyDegenerate && r.degeneracy.N == 2;
    return {degenerate && r.verdict == Verdict::Pass,
            fmt("N=%d, norm lambda^1/4 / log lambda in [%.3f, %.3f], verdict %s, plain slope %.4f (informational)",
                r.degeneracy.N, lo, hi, to_string(r.verdict), r.slope)};
}

Outcome polygon_oracle() {
    std::mt19937_64 rng(2024);
    std::uniform_int_distribution<int> coord(0, 6), count(1, 10);
    int agree = 0;
    const int total = 500;
    for (int t = 0; t < total; ++t) {
        std::vector<Monomial> s;
        BivarPoly f;
        for (int i = count(rng); i > 0; --i) {
            const Monomial m{coord(rng), coord(rng)};
            s.push_back(m);
            f.add_term(m.x, m.y, 1);
        }
        if (build_polygon(f).vertices == oracle::newton_vertices(s)) ++agree;
    }
    return {agree == total, fmt("%d/%d supports agree", agree, total)};
}

Outcome puiseux_residuals() {
    const std::vector<double> xs{0.1, 0.05, 0.025, 0.0125};
    int branches = 0, ok = 0;
    double worst_margin = std::numeric_limits<double>::infinity();
    for (const char* text : {"y^2 - x^3", "(y-x)^2 - x^5", "y^2 - x^2*(1+x)", "x*(y-x)^2", "x^2 + y^2"}) {
        const BivarPoly f = parse_poly(text);
        const Rational K = default_truncation_order(f);
        const BranchSet set = expand_branches(f, K);
        const Rational gamma_min = build_polygon(f).edges.front().gamma;
        for (const PuiseuxBranch& b : set.branches) {
            ++branches;
            const double slope = branch_residual_order(f, b, xs);
            const double need = residual_threshold(b, gamma_min, 0.1);
            worst_margin = std::min(worst_margin, slope - need);
            if (slope >= need) ++ok;
        }
    }
    // y = x claimed through order 5 is not a root of (y-x)^2 - x^5.
    const BivarPoly f = parse_poly("(y-x)^2 - x^5");
    PuiseuxBranch wrong;
    wrong.terms = {{Rational(1), 1.0}};
    wrong.order = 5;
    const double slope = branch_residual_order(f, wrong, xs);
    const bool control_fails = slope < residual_threshold(wrong, Rational(1), 0.1);
    return {branches > 0 && ok == branches && control_fails,
            fmt("%d/%d branches reach their threshold (worst margin %g), wrong-branch slope %.3f %s", ok, branches,
                worst_margin, slope, control_fails ? "flagged" : "NOT flagged")};
}

Outcome lower_bounds() {
    const auto start = std::chrono::steady_clock::now();
    std::mt19937_64 rng(6);
    std::uniform_int_distribution<int> n(1, 4), rv(0, 12);
    std::size_t violations = 0, structural = 0;
    double worst = std::numeric_limits<double>::infinity();
    for (int t = 0; t < 200; ++t) {
        ExponentProfile p;
        p.r.resize(n(rng));
        for (int& v : p.r) v = rv(rng);
        p.C = std::array{1.0, 2.0, 4.0}[t % 3];
        const LowerBoundSet e = lower_bound_set(p);
        structural += check_structure(p, e).size();
        const LowerBoundReport rep = verify_lower_bound(p, e, 1000, 8, static_cast<std::uint64_t>(t));
        violations += rep.violations;
        worst = std::min(worst, rep.min_observed * e.B);
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return {violations == 0 && structural == 0 && secs < 180,
            fmt("%zu violations, %zu structural problems, min |P| B = %.3f, %.1f s", violations, structural, worst,
                secs)};
}

Outcome block_estimates() {
    const PhaseSpec p{parse_poly("x^2*y^2/4"), 1.0};
    const NewtonPolygon g = build_polygon(mixed_derivative(p.S));
    std::vector<double> worst;
    bool all_pass = true;
    for (double D : {3.0, 4.0, 5.0}) {
        BlockOptions o;
        o.D = D;
        const BlockReport r = verify_blocks(p, 256.0, g, o);
        all_pass = all_pass && r.pass;
        worst.push_back(r.worst_gap_ratio);
    }
    bool stable = true;
    for (double w : worst) stable = stable && std::abs(w / worst[0] - 1.0) <= 0.2;
    return {all_pass && stable, fmt("worst gap ratio %.4f / %.4f / %.4f for D = 3 / 4 / 5 (cap 10)", worst[0],
                                    worst[1], worst[2])};
}

Outcome hygiene() {
    std::mt19937_64 rng(8);
    std::uniform_int_distribution<int> size(16, 128), e(0, 3);
    std::uniform_real_distribution<double> lam(0.0, 60.0);
    double svd_err = 0, adj_err = 0;
    for (int t = 0; t < 50; ++t) {
        BivarPoly S;
        for (int i = 0; i < 4; ++i) S.add_term(e(rng), e(rng), make_rational(1 + i, 2));
        const int n = size(rng);
        const double lambda = lam(rng);
        const DiscreteOperator op = discretize_separable(
            S, lambda, GridSpec{n, Rect{0.0, 1.0, -0.5, 0.5}}, [](double x) { return 1 + x; },
            [](double y) { return std::cos(y); });
        const double dense = dense_spectral_norm(op);
        const double power = operator_norm(op, 1e-15, 50000, static_cast<std::uint64_t>(t)).value;
        svd_err = std::max(svd_err, std::abs(power - dense) / dense);

        std::normal_distribution<double> gauss;
        cvec f(n), h(n), tf, th;
        for (auto& z : f) z = {gauss(rng), gauss(rng)};
        for (auto& z : h) z = {gauss(rng), gauss(rng)};
        op.apply(f, tf);
        op.apply_adjoint(h, th);
        std::complex<double> a, b;
        for (int i = 0; i < n; ++i) {
            a += std::conj(h[i]) * tf[i];
            b += std::conj(th[i]) * f[i];
        }
        adj_err = std::max(adj_err, std::abs(a - b) / std::abs(a));
    }
    double conv = 0;
    bool converged = true;
    for (const NormSample& s : g_sweep_samples) {
        conv = std::max(conv, s.conv_err);
        converged = converged && s.converged;
    }
    return {svd_err <= 1e-8 && adj_err <= 1e-12 && converged && conv < 0.02 && !g_sweep_samples.empty(),
            fmt("power vs SVD %.2e, adjoint %.2e, max conv_err %.4f over %zu sweep samples", svd_err, adj_err,
                conv, g_sweep_samples.size())};
}

}  // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
        {"Hormander reference xy", hormander},
        {"nondegenerate rate x^2y^2/4", nondegenerate},
        {"completely degenerate -(y-x)^4/12", degenerate},
        {"polygon oracle equivalence", polygon_oracle},
        {"Puiseux residuals", puiseux_residuals},
        {"lower-bound set soundness", lower_bounds},
        {"block estimates", block_estimates},
        {"numerical hygiene", hygiene},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("threw: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("criterion %zu %s: %s (%s) [%.1f s]\n", i + 1, o.pass ? "PASS" : "FAIL", criteria[i].first,
                    o.detail.c_str(), secs);
        std::fflush(stdout);
        if (!o.pass) ++failed;
    }
    return failed == 0 ? 0 : 1;
}
