#pragma once

#include "newtonosc/poly.hpp"

#include <optional>
#include <vector>

namespace newtonosc {

struct BranchSet;

/// A compact edge of the Newton polygon. `upper` and `lower` are its integer
/// endpoints with upper.y > lower.y; gamma = (lower.x - upper.x) / n.
struct EdgeData {
    Rational gamma;
    int n = 0;
    Monomial upper;
    Monomial lower;
};

/// Lower-left boundary of the Newton polygon. vertices[0] lies on the
/// vertical infinite edge x = A, vertices.back() on the horizontal infinite
/// edge y = B, and edges[i] joins vertices[i] to vertices[i + 1], ordered by
/// strictly increasing gamma.
struct NewtonPolygon {
    std::vector<Monomial> vertices;
    std::vector<EdgeData> edges;
    int A = 0;
    int B = 0;

    bool has_compact_edges() const noexcept { return !edges.empty(); }
    /// True when the exponent pair lies in the closed polygon.
    bool contains(const Rational& a, const Rational& b) const;

    friend bool operator==(const NewtonPolygon& lhs, const NewtonPolygon& rhs);
};

/// Vertex indices (into `points`) of the lower-left convex boundary of the
/// union of the quadrants p + R_+^2. Coordinates are exact rationals; the
/// result is ordered from the top-left vertex to the bottom-right one and
/// contains no collinear interior points.
struct RationalPoint {
    Rational a;
    Rational b;
};
std::vector<std::size_t> lower_left_boundary(const std::vector<RationalPoint>& points);

/// Throws EmptyPolygon for the zero polynomial.
NewtonPolygon build_polygon(const BivarPoly& f);

enum class BoundaryCrossing { Vertex, CompactEdge, InfiniteEdge };

struct EdgeRate {
    int nu = 0;  // 1-based edge index
    Rational gamma;
    int n = 0;
    int A_nu = 0;
    int B_nu = 0;
    Rational delta_nu;
    /// Diagonal crossing of the edge's supporting line; 1/delta_nu = 1 + t_nu.
    Rational t_nu;
};

struct Degeneracy {
    enum class Kind { NonDegenerate, CompletelyDegenerate, Undetermined };
    Kind kind = Kind::NonDegenerate;
    int N = 0;            // CompletelyDegenerate only
    double c = 0.0;       // CompletelyDegenerate only
    Rational checked_order;  // Undetermined only

    static Degeneracy non_degenerate() { return {}; }
};

const char* to_string(Degeneracy::Kind k);
const char* to_string(BoundaryCrossing c);

struct DecayReport {
    Rational t0;
    Rational delta;
    BoundaryCrossing crossing = BoundaryCrossing::Vertex;
    std::vector<EdgeRate> per_edge;
    Degeneracy degeneracy;
};

/// t0 (the diagonal crossing of the boundary) and delta = 1 / (1 + t0).
/// per_edge and degeneracy are left empty.
DecayReport decay_rate(const NewtonPolygon& polygon);

/// Per-edge vertex data and decay rates. Throws NoCompactEdges.
std::vector<EdgeRate> edge_rates(const NewtonPolygon& polygon);

/// Default Puiseux truncation order for degeneracy checks: 4 * deg F + 8.
Rational default_truncation_order(const BivarPoly& f);

/// Complete-degeneracy test from the polygon and the Puiseux branches of F.
Degeneracy detect_degeneracy(const BivarPoly& f, const BranchSet& branches,
                             const Rational& order);

/// Everything above in one pass: polygon, t0/delta, edge rates (when there
/// are compact edges) and degeneracy using the default truncation order.
struct NewtonAnalysis {
    NewtonPolygon polygon;
    DecayReport report;
};
NewtonAnalysis analyze_newton(const BivarPoly& f, const BranchSet& branches,
                              const Rational& order);

}  // namespace newtonosc
