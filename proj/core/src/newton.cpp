#include "newtonosc/newton.hpp"

#include "newtonosc/errors.hpp"
#include "newtonosc/puiseux.hpp"

#include <algorithm>
#include <numeric>

namespace newtonosc {

namespace {

Rational cross(const RationalPoint& o, const RationalPoint& p, const RationalPoint& q) {
    return (p.a - o.a) * (q.b - o.b) - (p.b - o.b) * (q.a - o.a);
}

}  // namespace

std::vector<std::size_t> lower_left_boundary(const std::vector<RationalPoint>& points) {
    std::vector<std::size_t> order(points.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
        if (points[i].a != points[j].a) return points[i].a < points[j].a;
        return points[i].b < points[j].b;
    });

    // Pareto-minimal points: a increasing, b strictly decreasing.
    std::vector<std::size_t> front;
    for (std::size_t idx : order) {
        if (front.empty() || points[idx].b < points[front.back()].b) front.push_back(idx);
    }

    std::vector<std::size_t> chain;
    for (std::size_t idx : front) {
        while (chain.size() >= 2 &&
               cross(points[chain[chain.size() - 2]], points[chain.back()], points[idx]) <= 0) {
            chain.pop_back();
        }
        chain.push_back(idx);
    }
    return chain;
}

bool NewtonPolygon::contains(const Rational& a, const Rational& b) const {
    if (a < A || b < B) return false;
    for (const auto& e : edges) {
        if (a + e.gamma * b < Rational(e.lower.x) + e.gamma * e.lower.y) return false;
    }
    return true;
}

bool operator==(const NewtonPolygon& lhs, const NewtonPolygon& rhs) {
    if (lhs.A != rhs.A || lhs.B != rhs.B || lhs.vertices != rhs.vertices) return false;
    if (lhs.edges.size() != rhs.edges.size()) return false;
    for (std::size_t i = 0; i < lhs.edges.size(); ++i) {
        const auto& l = lhs.edges[i];
        const auto& r = rhs.edges[i];
        if (l.gamma != r.gamma || l.n != r.n || l.upper != r.upper || l.lower != r.lower) return false;
    }
    return true;
}

NewtonPolygon build_polygon(const BivarPoly& f) {
    if (f.is_zero()) throw EmptyPolygon();
    std::vector<RationalPoint> pts;
    std::vector<Monomial> support = f.support();
    pts.reserve(support.size());
    for (const auto& m : support) pts.push_back({Rational(m.x), Rational(m.y)});

    NewtonPolygon poly;
    for (std::size_t idx : lower_left_boundary(pts)) poly.vertices.push_back(support[idx]);
    poly.A = poly.vertices.front().x;
    poly.B = poly.vertices.back().y;
    for (std::size_t i = 0; i + 1 < poly.vertices.size(); ++i) {
        EdgeData e;
        e.upper = poly.vertices[i];
        e.lower = poly.vertices[i + 1];
        e.n = e.upper.y - e.lower.y;
        e.gamma = Rational(e.lower.x - e.upper.x, e.n);
        e.gamma.canonicalize();
        poly.edges.push_back(e);
    }
    return poly;
}

const char* to_string(Degeneracy::Kind k) {
    switch (k) {
        case Degeneracy::Kind::NonDegenerate: return "NonDegenerate";
        case Degeneracy::Kind::CompletelyDegenerate: return "CompletelyDegenerate";
        case Degeneracy::Kind::Undetermined: return "Undetermined";
    }
    return "?";
}

const char* to_string(BoundaryCrossing c) {
    switch (c) {
        case BoundaryCrossing::Vertex: return "vertex";
        case BoundaryCrossing::CompactEdge: return "compact_edge";
        case BoundaryCrossing::InfiniteEdge: return "infinite_edge";
    }
    return "?";
}

DecayReport decay_rate(const NewtonPolygon& polygon) {
    // x - y increases strictly along the boundary from the top of the
    // vertical ray to the end of the horizontal ray, so the diagonal meets it
    // exactly once.
    DecayReport r;
    const auto& v = polygon.vertices;
    const Monomial& first = v.front();
    const Monomial& last = v.back();
    if (first.x - first.y >= 0) {
        r.t0 = first.x;
        r.crossing = first.x == first.y ? BoundaryCrossing::Vertex : BoundaryCrossing::InfiniteEdge;
    } else if (last.x - last.y <= 0) {
        r.t0 = last.y;
        r.crossing = last.x == last.y ? BoundaryCrossing::Vertex : BoundaryCrossing::InfiniteEdge;
    } else {
        for (std::size_t i = 0; i + 1 < v.size(); ++i) {
            const int d0 = v[i].x - v[i].y;
            const int d1 = v[i + 1].x - v[i + 1].y;
            if (d0 == 0) {
                r.t0 = v[i].x;
                r.crossing = BoundaryCrossing::Vertex;
                break;
            }
            if (d1 == 0) {
                r.t0 = v[i + 1].x;
                r.crossing = BoundaryCrossing::Vertex;
                break;
            }
            if (d0 < 0 && d1 > 0) {
                // Solve v_i + s (v_{i+1} - v_i) on the diagonal.
                const Rational s(-d0, d1 - d0);
                r.t0 = Rational(v[i].x) + s * (v[i + 1].x - v[i].x);
                r.t0.canonicalize();
                r.crossing = BoundaryCrossing::CompactEdge;
                break;
            }
        }
    }
    r.delta = Rational(1) / (1 + r.t0);
    return r;
}

std::vector<EdgeRate> edge_rates(const NewtonPolygon& polygon) {
    if (!polygon.has_compact_edges()) throw NoCompactEdges();
    std::vector<EdgeRate> out;
    Rational a_acc = polygon.A;
    int n_total = 0;
    for (const auto& e : polygon.edges) n_total += e.n;
    int b_acc = polygon.B + n_total;
    for (std::size_t i = 0; i < polygon.edges.size(); ++i) {
        const auto& e = polygon.edges[i];
        a_acc += e.gamma * e.n;
        b_acc -= e.n;
        EdgeRate r;
        r.nu = static_cast<int>(i) + 1;
        r.gamma = e.gamma;
        r.n = e.n;
        // The running sums land on the lower endpoint of edge nu.
        if (a_acc != e.lower.x || b_acc != e.lower.y) {
            throw Error("InternalError", "edge vertex bookkeeping mismatch");
        }
        r.A_nu = e.lower.x;
        r.B_nu = e.lower.y;
        r.delta_nu = (1 + e.gamma) / (1 + r.A_nu + (1 + r.B_nu) * e.gamma);
        r.t_nu = (r.A_nu + e.gamma * r.B_nu) / (1 + e.gamma);
        if (Rational(1) / r.delta_nu != 1 + r.t_nu) {
            throw Error("InternalError", "edge rate identity 1/delta_nu = 1 + t_nu failed");
        }
        out.push_back(r);
    }
    return out;
}

Rational default_truncation_order(const BivarPoly& f) { return 4 * f.total_degree() + 8; }

Degeneracy detect_degeneracy(const BivarPoly& f, const BranchSet& branches, const Rational& order) {
    const NewtonPolygon poly = build_polygon(f);
    if (poly.A != 0 || poly.B != 0 || poly.edges.size() != 1) return Degeneracy::non_degenerate();
    const EdgeData& e = poly.edges.front();
    if (e.gamma != 1 || e.n < 2) return Degeneracy::non_degenerate();

    // All n roots must form one branch.
    std::vector<const PuiseuxBranch*> on_edge;
    for (const auto& b : branches.branches) {
        if (!b.terms.empty() && b.leading_exponent() == e.gamma) on_edge.push_back(&b);
    }
    if (on_edge.size() != 1 || on_edge.front()->multiplicity != e.n) {
        return Degeneracy::non_degenerate();
    }
    const PuiseuxBranch& b = *on_edge.front();
    if (b.reality != Reality::Real) return Degeneracy::non_degenerate();
    const double c = b.leading_coefficient().real();
    if (c == 0.0) return Degeneracy::non_degenerate();

    Degeneracy d;
    if (b.status == BranchStatus::Exact) {
        d.kind = Degeneracy::Kind::CompletelyDegenerate;
        d.N = e.n;
        d.c = c;
    } else {
        d.kind = Degeneracy::Kind::Undetermined;
        d.checked_order = order;
    }
    return d;
}

NewtonAnalysis analyze_newton(const BivarPoly& f, const BranchSet& branches, const Rational& order) {
    NewtonAnalysis out;
    out.polygon = build_polygon(f);
    out.report = decay_rate(out.polygon);
    if (out.polygon.has_compact_edges()) out.report.per_edge = edge_rates(out.polygon);
    out.report.degeneracy = detect_degeneracy(f, branches, order);
    return out;
}

}  // namespace newtonosc
