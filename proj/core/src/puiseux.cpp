#include "newtonosc/puiseux.hpp"

#include "newtonosc/errors.hpp"
#include "newtonosc/newton.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>

namespace newtonosc {

namespace {

using cplx = std::complex<double>;
constexpr double kEps = std::numeric_limits<double>::epsilon();

// Polynomial in (x^q, y) with rational x-exponents and complex coefficients.
// `scale` accumulates the magnitudes that were summed into each coefficient
// so cancellation can be told apart from a genuinely small term.
struct Accum {
    cplx sum{};
    double scale = 0.0;
};
using SeriesKey = std::pair<Rational, int>;
using SeriesPoly = std::map<SeriesKey, Accum>;

cplx eval_dense(std::span<const cplx> coeffs, cplx z) {
    cplx acc{};
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * z + *it;
    return acc;
}

std::vector<cplx> derivative(std::span<const cplx> coeffs) {
    std::vector<cplx> out;
    for (std::size_t i = 1; i < coeffs.size(); ++i) out.push_back(coeffs[i] * static_cast<double>(i));
    return out;
}

double eval_magnitude(std::span<const cplx> coeffs, double r) {
    double acc = 0.0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * r + std::abs(*it);
    return acc;
}

cplx newton_polish(std::span<const cplx> coeffs, cplx z, int iterations = 8) {
    const std::vector<cplx> d = derivative(coeffs);
    for (int i = 0; i < iterations; ++i) {
        const cplx fz = eval_dense(coeffs, z);
        const cplx dz = eval_dense(d, z);
        if (dz == cplx{}) break;
        const cplx next = z - fz / dz;
        if (!std::isfinite(next.real()) || !std::isfinite(next.imag())) break;
        if (std::abs(eval_dense(coeffs, next)) > std::abs(fz)) break;
        z = next;
    }
    return z;
}

std::vector<cplx> companion_roots(std::span<const cplx> coeffs) {
    const std::size_t n = coeffs.size() - 1;
    if (n == 1) return {-coeffs[0] / coeffs[1]};
    Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(n),
                                                        static_cast<Eigen::Index>(n));
    for (std::size_t i = 1; i < n; ++i) {
        companion(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i - 1)) = 1.0;
    }
    for (std::size_t i = 0; i < n; ++i) {
        companion(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(n - 1)) = -coeffs[i] / coeffs[n];
    }
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(companion, false);
    std::vector<cplx> roots(n);
    for (std::size_t i = 0; i < n; ++i) roots[i] = solver.eigenvalues()(static_cast<Eigen::Index>(i));
    return roots;
}

// Checks that r is an m-fold root: q^(j)(r) vanishes to rounding for j < m.
bool verify_multiplicity(std::span<const cplx> coeffs, cplx r, int m) {
    std::vector<cplx> d(coeffs.begin(), coeffs.end());
    for (int j = 0; j < m - 1; ++j) {
        const double scale = eval_magnitude(d, std::abs(r));
        if (std::abs(eval_dense(d, r)) > 1e-10 * scale) return false;
        d = derivative(d);
    }
    return true;
}

}  // namespace

std::vector<ClusteredRoot> clustered_roots(std::span<const cplx> coeffs, double cluster_tolerance) {
    if (coeffs.size() < 2 || coeffs.front() == cplx{} || coeffs.back() == cplx{}) {
        throw InvalidArgument("clustered_roots needs nonzero constant and leading coefficients");
    }
    const std::size_t n = coeffs.size() - 1;
    const std::vector<cplx> raw = companion_roots(coeffs);

    const double radius =
        std::max(cluster_tolerance, 16.0 * std::pow(static_cast<double>(n) * kEps, 1.0 / static_cast<double>(n)));

    // Single-linkage grouping.
    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), std::size_t{0});
    auto find = [&](std::size_t i) {
        while (parent[i] != i) i = parent[i] = parent[parent[i]];
        return i;
    };
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double scale = std::max(std::abs(raw[i]), std::abs(raw[j]));
            if (std::abs(raw[i] - raw[j]) <= radius * scale) parent[find(i)] = find(j);
        }
    }
    std::map<std::size_t, std::vector<cplx>> groups;
    for (std::size_t i = 0; i < n; ++i) groups[find(i)].push_back(raw[i]);

    std::vector<ClusteredRoot> out;
    for (const auto& [root, members] : groups) {
        const int m = static_cast<int>(members.size());
        if (m == 1) {
            out.push_back({newton_polish(coeffs, members.front()), 1});
            continue;
        }
        cplx mean{};
        for (const cplx& z : members) mean += z;
        mean /= static_cast<double>(m);
        // An m-fold root is a simple root of q^(m-1).
        std::vector<cplx> d(coeffs.begin(), coeffs.end());
        for (int j = 0; j < m - 1; ++j) d = derivative(d);
        const cplx refined = d.size() >= 2 ? newton_polish(d, mean) : mean;
        if (verify_multiplicity(coeffs, refined, m)) {
            out.push_back({refined, m});
        } else {
            for (const cplx& z : members) out.push_back({newton_polish(coeffs, z), 1});
        }
    }
    std::sort(out.begin(), out.end(), [](const ClusteredRoot& a, const ClusteredRoot& b) {
        if (a.value.real() != b.value.real()) return a.value.real() < b.value.real();
        return a.value.imag() < b.value.imag();
    });
    return out;
}

namespace {

class Expander {
public:
    Expander(const Rational& order, const PuiseuxOptions& options) : order_(order), opt_(options) {}

    void run(const SeriesPoly& p) { expand(p, {}, Rational(0), true, 0); }

    std::vector<PuiseuxBranch>& branches() { return out_; }

private:
    Rational order_;
    PuiseuxOptions opt_;
    std::vector<PuiseuxBranch> out_;

    void emit(const std::vector<PuiseuxTerm>& prefix, int multiplicity, BranchStatus status) {
        if (prefix.empty() || multiplicity <= 0) return;
        PuiseuxBranch b;
        const double lead = std::abs(prefix.front().coefficient);
        bool real = true;
        for (const auto& t : prefix) {
            if (&t != &prefix.front() && std::abs(t.coefficient) < opt_.drop_tolerance * lead) continue;
            b.terms.push_back(t);
            if (std::abs(t.coefficient.imag()) > opt_.cluster_tolerance * std::max(lead, std::abs(t.coefficient))) {
                real = false;
            }
        }
        if (real) {
            for (auto& t : b.terms) t.coefficient = {t.coefficient.real(), 0.0};
        }
        mpz_class ram = 1;
        for (const auto& t : b.terms) {
            mpz_lcm(ram.get_mpz_t(), ram.get_mpz_t(), t.exponent.get_den_mpz_t());
        }
        b.ramification = static_cast<int>(ram.get_si());
        b.multiplicity = multiplicity;
        b.reality = real ? Reality::Real : Reality::ComplexPair;
        b.status = status;
        b.order = order_;
        out_.push_back(std::move(b));
    }

    SeriesPoly substitute(const SeriesPoly& p, const Rational& gamma, cplx c, int multiplicity) const {
        Rational base;
        bool first = true;
        for (const auto& [key, acc] : p) {
            const Rational v = key.first + gamma * key.second;
            if (first || v < base) base = v;
            first = false;
        }
        SeriesPoly out;
        for (const auto& [key, acc] : p) {
            const Rational ex = key.first + gamma * key.second - base;
            const int ey = key.second;
            // (c + y)^ey = sum_j binom(ey, j) c^(ey - j) y^j
            double binom = 1.0;
            for (int j = 0; j <= ey; ++j) {
                const cplx term = acc.sum * binom * std::pow(c, ey - j);
                Accum& slot = out[{ex, j}];
                slot.sum += term;
                slot.scale += std::abs(term);
                binom = binom * static_cast<double>(ey - j) / static_cast<double>(j + 1);
            }
        }
        for (auto it = out.begin(); it != out.end();) {
            const bool forced = it->first.first == 0 && it->first.second < multiplicity;
            const bool cancelled = std::abs(it->second.sum) <= opt_.cancellation_tolerance * it->second.scale;
            if (forced || cancelled) {
                it = out.erase(it);
            } else {
                it->second.scale = std::abs(it->second.sum);
                ++it;
            }
        }
        return out;
    }

    void expand(const SeriesPoly& p, const std::vector<PuiseuxTerm>& prefix, const Rational& e_cur,
                bool top, int depth) {
        if (p.empty()) {
            // Everything cancelled: the prefix is an exact root of unknown
            // multiplicity, which cannot happen for a nonzero input.
            throw Error("InternalError", "Puiseux recursion reached the zero polynomial");
        }
        int low_y = std::numeric_limits<int>::max();
        for (const auto& [key, acc] : p) low_y = std::min(low_y, key.second);
        if (low_y > 0 && !top) emit(prefix, low_y, BranchStatus::Exact);

        std::vector<RationalPoint> pts;
        std::vector<const SeriesPoly::value_type*> entries;
        for (const auto& entry : p) {
            pts.push_back({entry.first.first, Rational(entry.first.second)});
            entries.push_back(&entry);
        }
        const std::vector<std::size_t> chain = lower_left_boundary(pts);

        int pending = 0;
        for (std::size_t i = 0; i + 1 < chain.size(); ++i) {
            const RationalPoint& up = pts[chain[i]];
            const RationalPoint& lo = pts[chain[i + 1]];
            const int n = static_cast<int>(mpz_class(up.b - lo.b).get_si());
            const Rational gamma = (lo.a - up.a) / (up.b - lo.b);
            const Rational e_new = e_cur + gamma;
            if ((!top && e_new > order_) || depth >= opt_.max_depth) {
                pending += n;
                continue;
            }
            const Rational level = lo.a + gamma * lo.b;
            const int low_b = static_cast<int>(mpz_class(lo.b).get_si());
            std::vector<cplx> q(static_cast<std::size_t>(n) + 1);
            bool real = true;
            for (const auto* entry : entries) {
                if (entry->first.first + gamma * entry->first.second == level) {
                    q[static_cast<std::size_t>(entry->first.second - low_b)] += entry->second.sum;
                    if (entry->second.sum.imag() != 0.0) real = false;
                }
            }
            for (const ClusteredRoot& root : clustered_roots(q, opt_.cluster_tolerance)) {
                cplx c = root.value;
                if (real && std::abs(c.imag()) <= opt_.cluster_tolerance * std::abs(c)) c = {c.real(), 0.0};
                std::vector<PuiseuxTerm> next = prefix;
                next.push_back({e_new, c});
                expand(substitute(p, gamma, c, root.multiplicity), next, e_new, false, depth + 1);
            }
        }
        if (pending > 0) {
            emit(prefix, pending, pending > 1 ? BranchStatus::UndeterminedSplit : BranchStatus::Truncated);
        }
    }
};

}  // namespace

BranchSet expand_branches(const BivarPoly& f, const Rational& order, const PuiseuxOptions& options) {
    const NewtonPolygon poly = build_polygon(f);
    BranchSet set;
    set.count_x_flat = poly.A;
    set.count_y_flat = poly.B;
    set.cluster_tolerance = options.cluster_tolerance;
    set.order = order;
    if (!poly.has_compact_edges()) return set;

    SeriesPoly p;
    for (const auto& [m, c] : f.terms()) {
        Accum& slot = p[{Rational(m.x - poly.A), m.y - poly.B}];
        slot.sum = c.get_d();
        slot.scale = std::abs(slot.sum);
    }
    Expander ex(order, options);
    ex.run(p);
    set.branches = std::move(ex.branches());
    for (const auto& b : set.branches) set.total_multiplicity += b.multiplicity;
    return set;
}

double branch_residual_order(const BivarPoly& f, const PuiseuxBranch& b, std::span<const double> x_samples) {
    if (x_samples.size() < 4) throw InvalidArgument("branch_residual_order needs at least 4 samples");
    for (double x : x_samples) {
        if (!(x > 0.0 && x <= 0.5)) throw InvalidArgument("x samples must lie in (0, 0.5]");
    }
    const PolyEvaluator eval(f);
    const double rounding = 8.0 * static_cast<double>(f.total_degree() + 1) * kEps;

    std::vector<double> lx, lr;
    for (double x : x_samples) {
        const cplx y = eval_branch(b, x);
        const double residual = std::abs(eval(x, y));
        const double floor = rounding * eval.magnitude(x, y);
        if (residual <= floor) {
            if (floor < 1e-300) throw NumericalUnderflow(x);
            continue;
        }
        if (residual < 1e-300) throw NumericalUnderflow(x);
        lx.push_back(std::log(x));
        lr.push_back(std::log(residual));
    }
    if (lx.size() < 2) return std::numeric_limits<double>::infinity();

    const double n = static_cast<double>(lx.size());
    const double mx = std::accumulate(lx.begin(), lx.end(), 0.0) / n;
    const double my = std::accumulate(lr.begin(), lr.end(), 0.0) / n;
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        sxy += (lx[i] - mx) * (lr[i] - my);
        sxx += (lx[i] - mx) * (lx[i] - mx);
    }
    return sxy / sxx;
}

double residual_threshold(const PuiseuxBranch& b, const Rational& gamma_min, double tolerance) {
    return Rational(b.order + gamma_min).get_d() - tolerance;
}

}  // namespace newtonosc
