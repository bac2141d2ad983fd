#include <doctest.h>

#include "newtonosc/dyadpol.hpp"
#include "newtonosc/errors.hpp"

#include <array>
#include <cmath>
#include <random>
#include <set>

using namespace newtonosc;

namespace {

// Corners of max_i (r_i + i x) located on a fine grid: a corner lies between
// consecutive grid points whose maximizing index differs.
std::vector<double> brute_corners(const std::vector<int>& r, double lo, double hi, int steps) {
    auto argmax = [&](double x) {
        int best = 0;
        double v = 0.0;
        for (std::size_t i = 0; i < r.size(); ++i) {
            const double w = r[i] + (i + 1.0) * x;
            if (w > v + 1e-12) {
                v = w;
                best = static_cast<int>(i + 1);
            }
        }
        return best;
    };
    std::vector<double> out;
    int prev = argmax(lo);
    for (int s = 1; s <= steps; ++s) {
        const double x = lo + (hi - lo) * s / steps;
        const int cur = argmax(x);
        if (cur != prev) out.push_back(x);
        prev = cur;
    }
    return out;
}

bool excluded_near(const LowerBoundSet& e, double h) { return !e.contains(h); }

}  // namespace

TEST_CASE("profile validation") {
    CHECK_THROWS_AS((ExponentProfile{{}, 2.0}).validate(), InvalidArgument);
    CHECK_THROWS_AS((ExponentProfile{{-1}, 2.0}).validate(), InvalidArgument);
    CHECK_THROWS_AS((ExponentProfile{{1}, 0.5}).validate(), InvalidArgument);
}

TEST_CASE("N=1, r=(0), C=2") {
    const ExponentProfile p{{0}, 2.0};
    const LowerBoundSet e = lower_bound_set(p);
    REQUIRE(e.corners.size() == 1);
    CHECK(e.corners[0] == 0);
    REQUIRE(e.intervals.size() == 1);
    CHECK_FALSE(e.intervals[0].lo.has_value());
    CHECK(e.intervals[0].hi == -e.margin);
    CHECK(1.0 - p.C * std::exp2(-e.margin) >= 0.5);
    const LowerBoundReport r = verify_lower_bound(p, e, 1000, 8, 1);
    CHECK(r.pass);
    CHECK(r.min_observed >= 1.0 / e.B);
}

TEST_CASE("N=1, r=(5), C=2 excludes the cancelling point") {
    const ExponentProfile p{{5}, 2.0};
    const LowerBoundSet e = lower_bound_set(p);
    REQUIRE(e.corners.size() == 1);
    CHECK(e.corners[0] == -5);
    // 1 + a h vanishes at h = 2^-5 for a = -2^5.
    CHECK(excluded_near(e, std::exp2(-5)));
    // Brute force: every sampled h in E keeps |1 + a h| >= 1/B for a on a grid.
    for (int i = 0; i <= 200; ++i) {
        const double a = -std::exp2(4.0 + 2.0 * i / 200);
        for (int k = 1; k <= 10000; ++k) {
            const double h = static_cast<double>(k) / 10000;
            if (e.contains(h)) REQUIRE(std::abs(1 + a * h) >= 1.0 / e.B);
        }
    }
}

TEST_CASE("N=2, r=(0,6), C=1 has one corner at -3") {
    const std::vector<int> r{0, 6};
    const auto corners = envelope_corners(r);
    REQUIRE(corners.size() == 1);
    CHECK(corners[0] == -3);
    // Integer x scan: index 1 is never the unique maximizer.
    for (int x = -40; x <= 0; ++x) CHECK(std::max(0, 6 + 2 * x) >= x);
    const ExponentProfile p{r, 1.0};
    const LowerBoundSet e = lower_bound_set(p);
    CHECK(excluded_near(e, std::exp2(-3)));
    CHECK(verify_lower_bound(p, e, 1000, 8, 42).pass);
}

TEST_CASE("envelope corners match a grid scan") {
    std::mt19937_64 rng(8);
    std::uniform_int_distribution<int> n(1, 4), rv(0, 12);
    for (int t = 0; t < 100; ++t) {
        std::vector<int> r(n(rng));
        for (int& v : r) v = rv(rng);
        const auto exact = envelope_corners(r);
        const auto grid = brute_corners(r, -20.0, 20.0, 40 * 4096);
        REQUIRE(exact.size() == grid.size());
        for (std::size_t i = 0; i < exact.size(); ++i) CHECK(std::abs(exact[i].get_d() - grid[i]) < 1e-3);
    }
}

TEST_CASE("structure holds on random profiles") {
    std::mt19937_64 rng(9);
    std::uniform_int_distribution<int> n(1, 4), rv(0, 12);
    for (int t = 0; t < 200; ++t) {
        ExponentProfile p;
        p.r.resize(n(rng));
        for (int& v : p.r) v = rv(rng);
        p.C = std::array{1.0, 2.0, 4.0}[t % 3];
        const LowerBoundSet e = lower_bound_set(p);
        const auto problems = check_structure(p, e);
        CHECK_MESSAGE(problems.empty(), (problems.empty() ? "" : problems.front()));
        CHECK(static_cast<int>(e.corners.size()) <= p.N());
    }
}

TEST_CASE("larger C never shrinks the excised set") {
    std::mt19937_64 rng(10);
    std::uniform_int_distribution<int> rv(0, 12);
    for (int t = 0; t < 50; ++t) {
        std::vector<int> r{rv(rng), rv(rng), rv(rng)};
        const LowerBoundSet small = lower_bound_set({r, 1.0});
        const LowerBoundSet large = lower_bound_set({r, 4.0});
        for (double h : sample_points(large, 16)) {
            if (h > 0 && large.contains(h)) CHECK(small.contains(h));
        }
    }
}

TEST_CASE("small soundness run") {
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<int> n(1, 4), rv(0, 12);
    for (int t = 0; t < 20; ++t) {
        ExponentProfile p;
        p.r.resize(n(rng));
        for (int& v : p.r) v = rv(rng);
        const LowerBoundSet e = lower_bound_set(p);
        const LowerBoundReport rep = verify_lower_bound(p, e, 100, 8, t);
        CHECK(rep.violations == 0);
        CHECK(rep.pass);
    }
}

TEST_CASE("verifier is reproducible") {
    const ExponentProfile p{{3, 7}, 2.0};
    const LowerBoundSet e = lower_bound_set(p);
    const auto a = verify_lower_bound(p, e, 300, 8, 5), b = verify_lower_bound(p, e, 300, 8, 5);
    CHECK(a.min_observed == b.min_observed);
    CHECK(a.evaluations == b.evaluations);
}
