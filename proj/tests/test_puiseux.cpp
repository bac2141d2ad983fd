#include <doctest.h>

#include "newtonosc/errors.hpp"
#include "newtonosc/newton.hpp"
#include "newtonosc/puiseux.hpp"

#include <cmath>
#include <vector>

using namespace newtonosc;

namespace {

const std::vector<double> kSamples{0.1, 0.05, 0.025, 0.0125};

BranchSet expand(const char* text, const Rational& K) { return expand_branches(parse_poly(text), K); }

double coefficient_at(const PuiseuxBranch& b, const Rational& e) {
    for (const PuiseuxTerm& t : b.terms) {
        if (t.exponent == e) return t.coefficient.real();
    }
    return 0.0;
}

}  // namespace

TEST_CASE("y^2 - x^3") {
    const BranchSet s = expand("y^2 - x^3", 10);
    REQUIRE(s.branches.size() == 2);
    double sum = 0.0;
    for (const PuiseuxBranch& b : s.branches) {
        CHECK(b.ramification == 2);
        CHECK(b.multiplicity == 1);
        CHECK(b.reality == Reality::Real);
        CHECK(b.leading_exponent() == make_rational(3, 2));
        CHECK(std::abs(std::abs(b.leading_coefficient()) - 1.0) < 1e-12);
        sum += b.leading_coefficient().real();
        CHECK(branch_residual_order(parse_poly("y^2 - x^3"), b, kSamples) >= 30);
    }
    CHECK(std::abs(sum) < 1e-12);
}

TEST_CASE("(y-x)^2 - x^5 splits at order 5/2") {
    const BivarPoly f = parse_poly("(y-x)^2 - x^5");
    const BranchSet s = expand_branches(f, 5);
    REQUIRE(s.branches.size() == 2);
    for (const PuiseuxBranch& b : s.branches) {
        CHECK(b.status == BranchStatus::Exact);
        REQUIRE(b.terms.size() == 2);
        CHECK(b.terms[0].exponent == 1);
        CHECK(std::abs(b.terms[0].coefficient - 1.0) < 1e-12);
        CHECK(b.terms[1].exponent == make_rational(5, 2));
        CHECK(std::abs(std::abs(b.terms[1].coefficient) - 1.0) < 1e-12);
        CHECK(branch_residual_order(f, b, kSamples) >= 30);
    }
}

TEST_CASE("binomial series oracle for y^2 - x^2(1+x)") {
    const BranchSet s = expand("y^2 - x^2*(1+x)", 8);
    REQUIRE(s.branches.size() == 2);
    // sqrt(1+x) = sum binom(1/2, m) x^m.
    std::vector<double> binom{1.0};
    for (int m = 1; m <= 7; ++m) binom.push_back(binom.back() * (0.5 - (m - 1)) / m);
    for (const PuiseuxBranch& b : s.branches) {
        const double sign = b.leading_coefficient().real() > 0 ? 1.0 : -1.0;
        for (int m = 0; m <= 7; ++m) {
            CHECK(coefficient_at(b, Rational(1 + m)) == doctest::Approx(sign * binom[m]).epsilon(1e-12));
        }
    }
}

TEST_CASE("truncated branch residual slope follows the first dropped term") {
    const BivarPoly f = parse_poly("y^2 - x^2*(1+x)");
    const BranchSet s = expand_branches(f, 3);
    REQUIRE(s.branches.size() == 2);
    for (const PuiseuxBranch& b : s.branches) {
        PuiseuxBranch cut = b;
        std::erase_if(cut.terms, [](const PuiseuxTerm& t) { return t.exponent > 3; });
        // Dropped x^4 term: residual 2 y delta ~ x * x^4.
        CHECK(branch_residual_order(f, cut, kSamples) == doctest::Approx(5.0).epsilon(0.02));
    }
}

TEST_CASE("wrong branch is flagged") {
    const BivarPoly f = parse_poly("(y-x)^2 - x^5");
    PuiseuxBranch wrong;
    wrong.terms = {{Rational(1), 1.0}};
    wrong.order = 5;
    const double slope = branch_residual_order(f, wrong, kSamples);
    CHECK(slope == doctest::Approx(5.0).epsilon(0.01));
    CHECK(slope < residual_threshold(wrong, Rational(1), 0.1));
}

TEST_CASE("exact square is one double branch") {
    const BranchSet s = expand("(y-x)^2", 10);
    REQUIRE(s.branches.size() == 1);
    CHECK(s.branches[0].multiplicity == 2);
    CHECK(s.branches[0].reality == Reality::Real);
    CHECK(std::abs(s.branches[0].leading_coefficient() - 1.0) < 1e-12);
}

TEST_CASE("complex pair and root count") {
    const BranchSet s = expand("x^2 + y^2", 6);
    int mult = 0;
    for (const PuiseuxBranch& b : s.branches) {
        CHECK(b.reality == Reality::ComplexPair);
        mult += b.multiplicity;
    }
    CHECK(mult == 2);
    CHECK(s.total_multiplicity == 2);
}

TEST_CASE("leading data follow the polygon") {
    for (const char* text : {"y^3 - x^2*y + x^7", "x*(y-x)^2", "(y^2-x^3)*(y-2*x)", "y^2 - 2*x*y + x^2 - x^3"}) {
        const BivarPoly f = parse_poly(text);
        const NewtonPolygon g = build_polygon(f);
        const BranchSet s = expand_branches(f, 6);
        int total = 0;
        for (const EdgeData& e : g.edges) {
            int per_edge = 0;
            for (const PuiseuxBranch& b : s.branches) {
                if (b.leading_exponent() == e.gamma) per_edge += b.multiplicity;
            }
            CHECK(per_edge == e.n);
            total += per_edge;
        }
        CHECK(total == s.total_multiplicity);
        CHECK(s.count_x_flat == g.A);
        CHECK(s.count_y_flat == g.B);
        for (const PuiseuxBranch& b : s.branches) {
            for (const PuiseuxTerm& t : b.terms) CHECK(Rational(t.exponent * b.ramification).get_den() == 1);
        }
    }
}

TEST_CASE("no compact edges gives no branches") {
    CHECK(expand("x*y", 4).branches.empty());
}

TEST_CASE("residual input checks") {
    const BivarPoly f = parse_poly("y - x");
    PuiseuxBranch b;
    b.terms = {{Rational(1), 1.0}};
    CHECK_THROWS_AS(branch_residual_order(f, b, std::vector<double>{0.1, 0.05, 0.025}), InvalidArgument);
    CHECK_THROWS_AS(branch_residual_order(f, b, std::vector<double>{0.9, 0.1, 0.05, 0.025}), InvalidArgument);
}

TEST_CASE("clustered roots") {
    // (z - 1)^2 (z + 2) = z^3 - 3 z + 2
    const std::vector<std::complex<double>> c{2.0, -3.0, 0.0, 1.0};
    const auto r = clustered_roots(c, 1e-8);
    REQUIRE(r.size() == 2);
    int total = 0;
    for (const ClusteredRoot& x : r) {
        total += x.multiplicity;
        if (x.multiplicity == 2) CHECK(std::abs(x.value - 1.0) < 1e-6);
        else CHECK(std::abs(x.value + 2.0) < 1e-10);
    }
    CHECK(total == 3);
}
