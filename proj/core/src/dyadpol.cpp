#include "newtonosc/dyadpol.hpp"

#include "newtonosc/errors.hpp"
#include "newtonosc/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace newtonosc {

namespace {

// How many octaves below 2^{beta_1} the leading interval is sampled.
constexpr int kLeadingOctaves = 8;

long floor_of(const Rational& q) {
    mpz_class out;
    mpz_fdiv_q(out.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    return out.get_si();
}

long ceil_of(const Rational& q) {
    mpz_class out;
    mpz_cdiv_q(out.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    return out.get_si();
}

}  // namespace

void ExponentProfile::validate() const {
    if (r.empty()) throw InvalidArgument("profile needs N >= 1");
    for (int v : r) {
        if (v < 0) throw InvalidArgument("profile exponents must be >= 0");
    }
    if (!(C >= 1.0) || !std::isfinite(C)) throw InvalidArgument("profile constant C must be >= 1");
}

bool LowerBoundSet::contains(double h) const {
    if (h < 0.0) return false;
    for (const auto& iv : intervals) {
        const double upper = std::ldexp(1.0, iv.hi);
        const double lower = iv.lo ? std::ldexp(1.0, *iv.lo) : 0.0;
        if (h >= lower && h <= upper) return true;
    }
    return false;
}

std::vector<Rational> envelope_corners(const std::vector<int>& r) {
    // Line i: y = r_i + i x, with r_0 = 0. Slopes are already increasing.
    std::vector<int> offsets{0};
    offsets.insert(offsets.end(), r.begin(), r.end());
    auto meet = [&](int i, int k) {
        Rational x(offsets[static_cast<std::size_t>(i)] - offsets[static_cast<std::size_t>(k)], k - i);
        x.canonicalize();
        return x;
    };
    std::vector<int> hull;
    for (int i = 0; i < static_cast<int>(offsets.size()); ++i) {
        while (hull.size() >= 2) {
            const int l1 = hull[hull.size() - 2];
            const int l2 = hull.back();
            // l2 is redundant when l3 overtakes l1 no later than l2 does.
            if (meet(l1, i) <= meet(l1, l2)) {
                hull.pop_back();
            } else {
                break;
            }
        }
        hull.push_back(i);
    }
    std::vector<Rational> corners;
    for (std::size_t i = 0; i + 1 < hull.size(); ++i) corners.push_back(meet(hull[i], hull[i + 1]));
    return corners;
}

LowerBoundSet lower_bound_set(const ExponentProfile& p) {
    p.validate();
    const double n1 = static_cast<double>(p.N() + 1);
    LowerBoundSet e;
    e.margin = static_cast<int>(std::ceil(std::log2(4.0 * p.C * p.C * n1)));
    e.B = std::max(std::ldexp(1.0, p.N() * e.margin), 2.0 * p.C * p.C * n1);
    e.corners = envelope_corners(p.r);

    // Excised windows (x_j - B', x_j + B'), rounded outward to integers.
    std::vector<std::pair<long, long>> cuts;
    for (const auto& x : e.corners) cuts.emplace_back(floor_of(x - e.margin), ceil_of(x + e.margin));
    std::vector<std::pair<long, long>> merged;
    for (const auto& c : cuts) {
        if (!merged.empty() && c.first <= merged.back().second) {
            merged.back().second = std::max(merged.back().second, c.second);
        } else {
            merged.push_back(c);
        }
    }

    std::optional<long> cursor;
    for (const auto& [lo, hi] : merged) {
        const long top = std::min(lo, 0L);
        if (!cursor) {
            e.intervals.push_back({std::nullopt, static_cast<int>(top)});
        } else if (*cursor < top) {
            e.intervals.push_back({static_cast<int>(*cursor), static_cast<int>(top)});
        }
        cursor = hi;
        if (*cursor >= 0) break;
    }
    if (cursor && *cursor < 0) e.intervals.push_back({static_cast<int>(*cursor), 0});
    return e;
}

std::vector<std::string> check_structure(const ExponentProfile& p, const LowerBoundSet& e) {
    std::vector<std::string> bad;
    if (e.intervals.empty()) {
        bad.emplace_back("E has no intervals");
        return bad;
    }
    if (e.intervals.front().lo) bad.emplace_back("first interval must start at 0");
    for (std::size_t i = 0; i < e.intervals.size(); ++i) {
        const auto& iv = e.intervals[i];
        if (i > 0) {
            if (!iv.lo) {
                bad.emplace_back("interval " + std::to_string(i) + " has no lower endpoint");
                continue;
            }
            if (!(*iv.lo < iv.hi)) bad.emplace_back("alpha >= beta in interval " + std::to_string(i));
            if (!(e.intervals[i - 1].hi < *iv.lo)) {
                bad.emplace_back("beta_" + std::to_string(i) + " >= alpha_" + std::to_string(i + 1));
            }
        }
    }
    if (e.intervals.back().hi > 0) bad.emplace_back("beta_s > 0");
    const double s = static_cast<double>(e.intervals.size());
    if (s > e.B) bad.emplace_back("s > B");
    const int max_r = std::max(1, *std::max_element(p.r.begin(), p.r.end()));
    if (static_cast<double>(e.intervals.front().hi) < -e.B * max_r) bad.emplace_back("beta_1 < -B max r");
    double gaps = 1.0 - e.intervals.back().hi;
    for (std::size_t i = 0; i + 1 < e.intervals.size(); ++i) {
        gaps += static_cast<double>(*e.intervals[i + 1].lo - e.intervals[i].hi);
    }
    if (gaps > e.B) bad.emplace_back("gap sum > B");
    return bad;
}

std::vector<double> sample_points(const LowerBoundSet& e, int h_density) {
    std::vector<double> hs{0.0};
    const int d = std::max(1, h_density);
    for (const auto& iv : e.intervals) {
        const int lo = iv.lo ? *iv.lo : iv.hi - kLeadingOctaves;
        if (iv.lo) hs.push_back(std::ldexp(1.0, lo));
        hs.push_back(std::ldexp(1.0, iv.hi));
        for (int m = lo; m < iv.hi; ++m) {
            for (int t = 0; t < d; ++t) {
                hs.push_back(std::exp2(static_cast<double>(m) + (t + 0.5) / d));
            }
        }
    }
    std::sort(hs.begin(), hs.end());
    hs.erase(std::unique(hs.begin(), hs.end()), hs.end());
    return hs;
}

LowerBoundReport verify_lower_bound(const ExponentProfile& p, const LowerBoundSet& e, int trials,
                                    int h_density, std::uint64_t seed) {
    p.validate();
    if (trials < 1) throw InvalidArgument("trials must be >= 1");
    const std::vector<double> hs = sample_points(e, h_density);
    const double threshold = 1.0 / e.B;
    const double log_c = std::log2(p.C);
    const std::size_t n = static_cast<std::size_t>(p.N());

    struct Partial {
        double min = std::numeric_limits<double>::infinity();
        double worst_h = 0.0;
        std::size_t violations = 0;
    };
    const std::size_t count = static_cast<std::size_t>(trials);
    std::vector<Partial> partial(chunk_count(count));

    parallel_for(count, [&](std::size_t begin, std::size_t end, std::size_t chunk) {
        Partial acc;
        std::vector<double> a(n);
        for (std::size_t t = begin; t < end; ++t) {
            std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                              static_cast<std::uint32_t>(t), static_cast<std::uint32_t>(t >> 32)};
            std::mt19937_64 rng(seq);
            std::uniform_real_distribution<double> unit(0.0, 1.0);
            for (std::size_t i = 0; i < n; ++i) {
                const double sign = unit(rng) < 0.5 ? -1.0 : 1.0;
                const double mag = std::exp2(p.r[i] + (2.0 * unit(rng) - 1.0) * log_c);
                a[i] = sign * mag;
            }
            for (double h : hs) {
                double v = 0.0;
                for (std::size_t i = n; i-- > 0;) v = (v + a[i]) * h;
                v = std::abs(1.0 + v);
                if (v < acc.min) {
                    acc.min = v;
                    acc.worst_h = h;
                }
                if (v < threshold) ++acc.violations;
            }
        }
        partial[chunk] = acc;
    });

    LowerBoundReport report;
    report.min_observed = std::numeric_limits<double>::infinity();
    for (const auto& part : partial) {
        if (part.min < report.min_observed) {
            report.min_observed = part.min;
            report.worst_h = part.worst_h;
        }
        report.violations += part.violations;
    }
    report.evaluations = hs.size() * count;
    report.pass = report.violations == 0;
    return report;
}

}  // namespace newtonosc
