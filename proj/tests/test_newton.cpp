#include <doctest.h>

#include "oracles.hpp"

#include "newtonosc/errors.hpp"
#include "newtonosc/newton.hpp"
#include "newtonosc/puiseux.hpp"

#include <random>

using namespace newtonosc;

namespace {

BivarPoly from_support(const std::vector<Monomial>& s) {
    BivarPoly p;
    for (const Monomial& m : s) p.add_term(m.x, m.y, 1);
    return p;
}

Degeneracy degeneracy_of(const std::string& text) {
    const BivarPoly f = parse_poly(text);
    const Rational K = default_truncation_order(f);
    return detect_degeneracy(f, expand_branches(f, K), K);
}

// Diagonal crossing of the boundary through the vertex list alone.
Rational oracle_t0(const std::vector<Monomial>& v) {
    if (v.front().x >= v.front().y) return v.front().x;
    if (v.back().y >= v.back().x) return v.back().y;
    for (std::size_t i = 0; i + 1 < v.size(); ++i) {
        const Monomial p = v[i], q = v[i + 1];
        if (p.x <= p.y && q.x >= q.y) {
            // Point p + s (q - p) with equal coordinates.
            const Rational s = Rational(p.y - p.x) / Rational((q.x - p.x) - (q.y - p.y));
            return p.x + s * (q.x - p.x);
        }
    }
    FAIL("no crossing");
    return 0;
}

}  // namespace

TEST_CASE("single monomials") {
    for (auto [a, b] : {std::pair{0, 0}, {1, 1}, {3, 0}, {0, 4}, {2, 5}}) {
        const NewtonPolygon g = build_polygon(BivarPoly::monomial(a, b));
        CHECK(g.vertices.size() == 1);
        CHECK(g.edges.empty());
        CHECK(g.A == a);
        CHECK(g.B == b);
        CHECK(decay_rate(g).delta == Rational(1) / (1 + std::max(a, b)));
    }
    CHECK(decay_rate(build_polygon(BivarPoly(1))).t0 == 0);
    CHECK(decay_rate(build_polygon(parse_poly("x*y"))).delta == make_rational(1, 2));
}

TEST_CASE("pure power crosses on an infinite edge") {
    const DecayReport r = decay_rate(build_polygon(parse_poly("x^3")));
    CHECK(r.t0 == 3);
    CHECK(r.crossing == BoundaryCrossing::InfiniteEdge);
}

TEST_CASE("x^2 + y^2") {
    const NewtonPolygon g = build_polygon(parse_poly("x^2+y^2"));
    REQUIRE(g.vertices.size() == 2);
    CHECK(g.vertices[0] == Monomial{0, 2});
    CHECK(g.vertices[1] == Monomial{2, 0});
    CHECK(g.A == 0);
    CHECK(g.B == 0);
    REQUIRE(g.edges.size() == 1);
    CHECK(g.edges[0].gamma == 1);
    CHECK(g.edges[0].n == 2);
    const std::vector<EdgeRate> e = edge_rates(g);
    CHECK(e[0].A_nu == 2);
    CHECK(e[0].B_nu == 0);
    CHECK(e[0].delta_nu == make_rational(1, 2));
    CHECK(1 / e[0].delta_nu == 1 + e[0].t_nu);
}

TEST_CASE("two compact edges") {
    const NewtonPolygon g = build_polygon(from_support({{0, 3}, {2, 1}, {5, 0}}));
    REQUIRE(g.edges.size() == 2);
    CHECK(g.edges[0].gamma == 1);
    CHECK(g.edges[0].n == 2);
    CHECK(g.edges[1].gamma == 3);
    CHECK(g.edges[1].n == 1);
    const DecayReport r = decay_rate(g);
    CHECK(r.t0 == make_rational(3, 2));
    CHECK(r.delta == make_rational(2, 5));
    CHECK(r.crossing == BoundaryCrossing::CompactEdge);
    const std::vector<EdgeRate> e = edge_rates(g);
    CHECK(e[0].delta_nu == make_rational(2, 5));
    CHECK(e[1].delta_nu == make_rational(4, 9));
    CHECK(e[0].t_nu == make_rational(3, 2));
    CHECK(e[1].t_nu == make_rational(5, 4));
}

TEST_CASE("errors") {
    CHECK_THROWS_AS(build_polygon(BivarPoly{}), EmptyPolygon);
    CHECK_THROWS_AS(edge_rates(build_polygon(parse_poly("x*y"))), NoCompactEdges);
}

TEST_CASE("(y-x)^2 has delta 1/2") {
    const NewtonPolygon g = build_polygon(parse_poly("(y-x)^2"));
    CHECK(decay_rate(g).delta == make_rational(1, 2));
    CHECK(edge_rates(g)[0].delta_nu == make_rational(1, 2));
}

TEST_CASE("random supports match the half-plane oracle") {
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<int> coord(0, 6), count(1, 8);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<Monomial> s;
        for (int i = count(rng); i > 0; --i) s.push_back({coord(rng), coord(rng)});
        const NewtonPolygon g = build_polygon(from_support(s));
        const std::vector<Monomial> want = oracle::newton_vertices(s);
        CHECK(g.vertices == want);
        CHECK(decay_rate(g).t0 == oracle_t0(want));
        CHECK(g.A == want.front().x);
        CHECK(g.B == want.back().y);
        for (const EdgeRate& e : g.edges.empty() ? std::vector<EdgeRate>{} : edge_rates(g)) {
            CHECK(e.delta_nu >= decay_rate(g).delta);
            CHECK(1 / e.delta_nu == 1 + e.t_nu);
        }
    }
}

TEST_CASE("unit multiples share the polygon") {
    std::mt19937_64 rng(6);
    std::uniform_int_distribution<int> e(0, 4), c(-9, 9), d(1, 4);
    for (int trial = 0; trial < 50; ++trial) {
        BivarPoly f, u(make_rational(1 + (trial % 5), 2));
        for (int i = 0; i < 4; ++i) f.add_term(e(rng), e(rng), make_rational(c(rng) | 1, d(rng)));
        for (int i = 0; i < 3; ++i) u.add_term(1 + e(rng), e(rng), make_rational(c(rng), d(rng)));
        if (f.is_zero()) continue;
        CHECK(build_polygon(u * f) == build_polygon(f));
    }
}

TEST_CASE("degeneracy examples") {
    const Degeneracy sq = degeneracy_of("(y-x)^2");
    CHECK(sq.kind == Degeneracy::Kind::CompletelyDegenerate);
    CHECK(sq.N == 2);
    CHECK(sq.c == doctest::Approx(1.0));
    CHECK(degeneracy_of("x*y").kind == Degeneracy::Kind::NonDegenerate);
    CHECK(degeneracy_of("(y-x)^2 - x^5").kind == Degeneracy::Kind::NonDegenerate);
    CHECK(degeneracy_of("(y-2*x)^3").N == 3);
}
