#include "newtonosc_cli/commands.hpp"

#include "newtonosc/errors.hpp"
#include "newtonosc/lemmas.hpp"

#include <cmath>
#include <complex>
#include <functional>
#include <random>
#include <sstream>

namespace newtonosc::cli {

namespace {

struct Case {
    std::string name;
    std::function<std::string()> run;  // empty string on success
};

std::string expect_close(double got, double want, double rel, const std::string& what) {
    const double err = std::abs(got - want) / std::max(std::abs(want), 1e-300);
    if (err <= rel) return {};
    std::ostringstream os;
    os.precision(17);
    os << what << ": got " << got << ", want " << want << " (rel err " << err << ")";
    return os.str();
}

cvec random_vector(std::size_t n, std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    cvec v(n);
    for (auto& z : v) {
        const double re = g(rng);
        z = {re, g(rng)};
    }
    return v;
}

std::complex<double> dot(const cvec& a, const cvec& b) {
    std::complex<double> s;
    for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
    return s;
}

std::vector<Case> cases(const SelftestOptions& opts) {
    ThetaShape shape;
    if (opts.mutate == "theta") shape.lo = 0.75;

    std::vector<Case> out;
    out.push_back({"analyze x*y has delta 1", [] {
                       const Rational d = decay_rate(build_polygon(mixed_derivative(parse_poly("x*y")))).delta;
                       return d == 1 ? std::string() : "delta = " + to_string(d);
                   }});
    out.push_back({"(y-x)^2 is completely degenerate", [] {
                       const BivarPoly F = parse_poly("(y-x)^2");
                       const Rational K = default_truncation_order(F);
                       const Degeneracy d = detect_degeneracy(F, expand_branches(F, K), K);
                       if (d.kind != Degeneracy::Kind::CompletelyDegenerate || d.N != 2) {
                           return std::string("got ") + to_string(d.kind);
                       }
                       return std::string();
                   }});
    out.push_back({"mixed antiderivative round trip", [] {
                       const BivarPoly F = parse_poly("3*x^2*y - y^4/7 + 5");
                       return mixed_derivative(mixed_antiderivative(F)) == F ? std::string() : "mismatch";
                   }});
    out.push_back({"rank-one bump norm at lambda 0", [] {
                       const double rho = 0.5;
                       const PhaseSpec p{parse_poly("x*y"), rho};
                       const DiscreteOperator op = discretize(p, 0.0, GridSpec{256, Rect::square(rho)});
                       // ||b(./rho)||_2^2 by a fine independent midpoint rule.
                       double sq = 0.0;
                       const int m = 200000;
                       for (int i = 0; i < m; ++i) {
                           const double t = -rho + (i + 0.5) * 2 * rho / m;
                           sq += std::pow(bump(t / rho), 2) * 2 * rho / m;
                       }
                       return expect_close(operator_norm(op, 1e-12, 100).value, sq, 1e-8, "norm");
                   }});
    out.push_back({"kernel one on the unit square", [] {
                       const DiscreteOperator op =
                           discretize_kernel(GridSpec{64, Rect{}}, [](double, double) { return std::complex<double>(1.0); });
                       return expect_close(operator_norm(op, 1e-12, 100).value, 1.0, 1e-12, "norm");
                   }});
    out.push_back({"product kernel norm", [] {
                       const int n = 128;
                       auto phi = [](double x) { return std::cos(3 * x) + 2; };
                       auto psi = [](double y) { return y * y; };
                       const GridSpec g{n, Rect{}};
                       const DiscreteOperator op = discretize_kernel(g, [&](double x, double y) {
                           return std::complex<double>(phi(x) * psi(y));
                       });
                       double a = 0.0, b = 0.0;
                       for (double x : g.x_nodes()) a += phi(x) * phi(x) * g.hx();
                       for (double y : g.y_nodes()) b += psi(y) * psi(y) * g.hy();
                       return expect_close(operator_norm(op, 1e-12, 100).value, std::sqrt(a * b), 1e-10, "norm");
                   }});
    out.push_back({"adjoint identity", [] {
                       const PhaseSpec p{parse_poly("x^2*y - y^3/3"), 1.0};
                       const DiscreteOperator op = discretize(p, 20.0, GridSpec{64, Rect::square(1.0)});
                       std::mt19937_64 rng(7);
                       const cvec f = random_vector(64, rng), g = random_vector(64, rng);
                       cvec tf, tg;
                       op.apply(f, tf);
                       op.apply_adjoint(g, tg);
                       const auto lhs = dot(g, tf), rhs = dot(tg, f);
                       const double err = std::abs(lhs - rhs) / std::abs(lhs);
                       return err <= 1e-12 ? std::string() : "relative mismatch " + std::to_string(err);
                   }});
    out.push_back({"power iteration matches dense SVD", [] {
                       std::mt19937_64 rng(11);
                       const std::size_t n = 64;
                       const DiscreteOperator op = DiscreteOperator::from_dense(n, n, random_vector(n * n, rng));
                       const double dense = dense_spectral_norm(op);
                       return expect_close(operator_norm(op, 1e-14, 5000, 3).value, dense, 1e-8, "norm");
                   }});
    out.push_back({"schur bound ignores oscillation", [] {
                       const DiscreteOperator op = discretize_kernel(GridSpec{64, Rect{}}, [](double x, double y) {
                           return std::polar(1.0, 200.0 * x * y);
                       });
                       return expect_close(schur_bound(op), 1.0, 1e-12, "schur bound");
                   }});
    out.push_back({"elementary bounds", [] {
                       std::string e = expect_close(size_bound(1, 1), 1.0, 0, "size bound");
                       if (e.empty()) e = expect_close(op_vdc_bound(256, 1), 1.0 / 16, 0, "van der Corput bound");
                       return e;
                   }});
    out.push_back({"theta plateau", [shape] {
                       for (int i = 0; i <= 100; ++i) {
                           const double t = i / 100.0;
                           if (theta(t, shape) != 1.0) return "theta(" + std::to_string(t) + ") != 1";
                       }
                       for (double t : {2.0, 2.5, 3.0, 10.0}) {
                           if (theta(t, shape) != 0.0) return "theta(" + std::to_string(t) + ") != 0";
                       }
                       return std::string();
                   }});
    out.push_back({"partition of unity", [shape] {
                       const DyadicPartition part(0, 8, shape);
                       for (int i = 0; i < 1000; ++i) {
                           const double t = std::exp2(-8.0 + 7.0 * i / 999.0);
                           if (std::abs(part.partial_sum(t) - 1.0) > 1e-12) return "sum at " + std::to_string(t);
                       }
                       return std::string();
                   }});
    out.push_back({"linear sublevel set", [] {
                       const BoundCheck c = sublevel_check([](double x) { return x; }, 0.1, 1, 1.0, {0.0, 1.0});
                       std::string e = expect_close(c.lhs, 0.1, 1e-5, "measure");
                       if (e.empty() && c.lhs > c.rhs) e = "measure exceeds bound";
                       return e;
                   }});
    out.push_back({"linear phase integral", [] {
                       const double lambda = 100.0;
                       VdcInput in;
                       in.phi = [](double t) { return t; };
                       in.phi_prime = [](double) { return 1.0; };
                       in.psi = [](double) { return 1.0; };
                       in.psi_prime = [](double) { return 0.0; };
                       in.interval = {0.0, 1.0};
                       const BoundCheck c = scalar_vdc_check(in, lambda);
                       const double exact = std::abs(std::polar(1.0, lambda) - 1.0) / lambda;
                       return expect_close(c.lhs, exact, 1e-10, "integral");
                   }});
    out.push_back({"exact power law fit", [] {
                       std::vector<NormSample> s;
                       for (int m = 4; m <= 11; ++m) {
                           NormSample x;
                           x.lambda = std::ldexp(1.0, m);
                           x.value = 1.0 / std::sqrt(x.lambda);
                           x.converged = true;
                           s.push_back(x);
                       }
                       return expect_close(fit_decay(s).slope, -0.5, 1e-12, "slope");
                   }});
    out.push_back({"lower bound set soundness", [] {
                       const ExponentProfile p{{0, 6}, 1.0};
                       const LowerBoundSet e = lower_bound_set(p);
                       if (!check_structure(p, e).empty()) return std::string("structure violated");
                       const LowerBoundReport r = verify_lower_bound(p, e, 200, 8, 42);
                       return r.pass ? std::string() : std::to_string(r.violations) + " violations";
                   }});
    out.push_back({"norm estimate is deterministic", [] {
                       const PhaseSpec p{parse_poly("x*y"), 1.0};
                       const NormSample a = estimate_norm(p, 64.0);
                       const NormSample b = estimate_norm(p, 64.0);
                       if (a.value != b.value || a.conv_err != b.conv_err || a.iterations != b.iterations) {
                           return std::string("two runs differ");
                       }
                       return a.valid() ? std::string() : "sample not converged";
                   }});
    return out;
}

}  // namespace

SelftestRun run_selftest(const SelftestOptions& opts, const Provenance& prov) {
    SelftestRun out;
    out.pass = true;
    json list = json::array();
    for (const Case& c : cases(opts)) {
        std::string detail;
        try {
            detail = c.run();
        } catch (const std::exception& e) {
            detail = std::string("threw: ") + e.what();
        }
        const bool ok = detail.empty();
        json entry{{"name", c.name}, {"pass", ok}};
        if (!ok) {
            entry["detail"] = detail;
            if (out.pass) out.first_failure = c.name;
            out.pass = false;
        }
        list.push_back(entry);
    }
    out.doc = document(prov);
    out.doc["cases"] = list;
    out.doc["pass"] = out.pass;
    if (!out.pass) out.doc["first_failure"] = out.first_failure;
    return out;
}

}  // namespace newtonosc::cli
