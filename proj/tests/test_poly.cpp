#include <doctest.h>

#include "newtonosc/errors.hpp"
#include "newtonosc/poly.hpp"
#include "newtonosc/puiseux.hpp"

#include <cmath>
#include <random>

using namespace newtonosc;

namespace {

BivarPoly random_poly(std::mt19937_64& rng, int deg, int terms) {
    std::uniform_int_distribution<int> e(0, deg), c(-9, 9), d(1, 5);
    BivarPoly p;
    for (int i = 0; i < terms; ++i) p.add_term(e(rng), e(rng), make_rational(c(rng), d(rng)));
    return p;
}

}  // namespace

TEST_CASE("parse examples") {
    const BivarPoly a = parse_poly("x^2*y^2/4");
    CHECK(a.size() == 1);
    CHECK(a.coeff(2, 2) == make_rational(1, 4));

    const BivarPoly b = parse_poly("(y-x)^2");
    CHECK(b.size() == 3);
    CHECK(b.coeff(0, 2) == 1);
    CHECK(b.coeff(1, 1) == -2);
    CHECK(b.coeff(2, 0) == 1);

    CHECK(parse_poly("0").is_zero());
    CHECK(parse_poly("x - x").is_zero());
}

TEST_CASE("parse errors carry a position") {
    try {
        parse_poly("x + * y");
        FAIL("expected SyntaxError");
    } catch (const SyntaxError& e) {
        CHECK(e.position() == 4);
    }
    CHECK_THROWS_AS(parse_poly("x^-1"), NegativeExponent);
    CHECK_THROWS_AS(parse_poly("(x+y"), SyntaxError);
    CHECK_THROWS_AS(parse_poly("z"), SyntaxError);
    CHECK_THROWS_AS(parse_poly(""), SyntaxError);
}

TEST_CASE("render round trip") {
    std::mt19937_64 rng(1);
    for (int i = 0; i < 200; ++i) {
        const BivarPoly p = random_poly(rng, 6, 5);
        CHECK(parse_poly(render(p)) == p);
    }
}

TEST_CASE("mixed derivative examples") {
    CHECK(mixed_derivative(parse_poly("x*y")) == BivarPoly(1));
    CHECK(mixed_derivative(parse_poly("x^2*y^2/4")) == parse_poly("x*y"));
    CHECK(mixed_derivative(parse_poly("-(y-x)^4/12")) == parse_poly("(y-x)^2"));
}

TEST_CASE("mixed derivative is linear and kills pure powers") {
    std::mt19937_64 rng(2);
    for (int i = 0; i < 100; ++i) {
        const BivarPoly p = random_poly(rng, 5, 4), q = random_poly(rng, 5, 4);
        const Rational c = make_rational(3, 7);
        CHECK(mixed_derivative(p + c * q) == mixed_derivative(p) + c * mixed_derivative(q));
        const BivarPoly d = mixed_derivative(p);
        for (const auto& [m, coef] : d.terms()) {
            // Support shifts down by (1,1) from terms with a, b >= 1.
            CHECK(p.coeff(m.x + 1, m.y + 1) != 0);
        }
    }
    CHECK(mixed_derivative(parse_poly("x^5 + y^3 + 7")).is_zero());
}

TEST_CASE("mixed antiderivative inverts the mixed derivative") {
    std::mt19937_64 rng(3);
    for (int i = 0; i < 50; ++i) {
        const BivarPoly f = random_poly(rng, 6, 6);
        CHECK(mixed_derivative(mixed_antiderivative(f)) == f);
    }
}

TEST_CASE("evaluation examples") {
    CHECK(eval_poly(parse_poly("x*y"), 0.5, 0.25) == 0.125);
    CHECK(eval_poly(BivarPoly{}, 3.7, -1.2) == 0.0);
    CHECK(eval_poly(parse_poly("x^2+y^2"), 3, 4) == 25.0);
}

TEST_CASE("double and exact evaluation agree") {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(-1, 1);
    for (int i = 0; i < 100; ++i) {
        const BivarPoly p = random_poly(rng, 6, 6);
        const double x = u(rng), y = u(rng);
        const Rational q = eval_exact(p, Rational(x), Rational(y));
        const double exact = q.get_d();
        // Correct rounding: never farther from the rational value than the
        // truncated conversion, and within one ulp of it.
        const double got = eval_poly(p, x, y);
        CHECK(abs(q - Rational(got)) <= abs(q - Rational(exact)));
        CHECK(std::abs(got - exact) <= std::abs(std::nextafter(exact, 2 * exact + 1) - exact));
        const PolyEvaluator ev(p);
        CHECK(std::abs(ev(x, y) - exact) <= 1e-13 * std::max(1.0, ev.magnitude(x, y)));
    }
}

TEST_CASE("branch evaluation") {
    PuiseuxBranch b;
    b.terms = {{make_rational(3, 2), 1.0}};
    CHECK(std::abs(eval_branch(b, 4.0) - std::complex<double>(8.0)) < 1e-14);

    PuiseuxBranch c;
    c.terms = {{Rational(1), 1.0}, {make_rational(5, 2), 1.0}};
    CHECK(std::abs(eval_branch(c, 1.0) - std::complex<double>(2.0)) < 1e-14);

    CHECK_THROWS_AS(eval_branch(b, 0.0), DomainError);
    CHECK_THROWS_AS(eval_branch(b, -1.0), DomainError);
}

TEST_CASE("branches of y^2 - x^2(1+x) match x sqrt(1+x)") {
    const BranchSet set = expand_branches(parse_poly("y^2 - x^2*(1+x)"), Rational(12));
    REQUIRE(set.branches.size() == 2);
    const double x = 0.01, want = x * std::sqrt(1.0 + x);
    for (const PuiseuxBranch& b : set.branches) {
        const std::complex<double> v = eval_branch(b, x);
        CHECK(std::abs(v.imag()) < 1e-14);
        CHECK(std::abs(std::abs(v.real()) - want) < 1e-8);
    }
    CHECK(eval_branch(set.branches[0], x).real() * eval_branch(set.branches[1], x).real() < 0);
}
