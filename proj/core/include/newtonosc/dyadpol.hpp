#pragma once

// Lower bounds for polynomials P(h) = 1 + sum a_i h^i whose coefficients are
// pinned to dyadic scales |a_i| ~ 2^{r_i}: the set E of dyadic intervals in
// [0, 1] on which every such P satisfies |P(h)| >= 1/B.

#include "newtonosc/poly.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace newtonosc {

struct ExponentProfile {
    std::vector<int> r;  // r_1 .. r_N, all >= 0
    double C = 2.0;      // coefficient slack, >= 1

    int N() const noexcept { return static_cast<int>(r.size()); }
    /// Throws InvalidArgument unless N >= 1, r_i >= 0 and C >= 1.
    void validate() const;
};

/// [2^lo, 2^hi]; lo is empty for the leading interval [0, 2^hi].
struct DyadicInterval {
    std::optional<int> lo;
    int hi = 0;
};

struct LowerBoundSet {
    std::vector<DyadicInterval> intervals;
    double B = 1.0;
    int margin = 0;  // B', the excised half-width in log2 h
    /// x-coordinates of the corners of the upper envelope of y = r_i + i x.
    std::vector<Rational> corners;

    bool contains(double h) const;
};

/// Corner x-coordinates of the upper envelope of the lines y = r_i + i x,
/// i = 0..N with r_0 = 0, in increasing order; coincident corners appear once.
std::vector<Rational> envelope_corners(const std::vector<int>& r);

LowerBoundSet lower_bound_set(const ExponentProfile& p);

/// Violations of the structural conditions on E (integer endpoints in
/// increasing order ending at or below 0, s <= B, beta_1 >= -B max(1, max r),
/// gap-sum <= B). Empty when E is well formed.
std::vector<std::string> check_structure(const ExponentProfile& p, const LowerBoundSet& e);

struct LowerBoundReport {
    double min_observed = 0.0;
    double worst_h = 0.0;
    std::size_t evaluations = 0;
    std::size_t violations = 0;
    bool pass = false;
};

/// Samples `trials` random members of the class (random signs, log-uniform
/// magnitudes in [2^{r_i}/C, C 2^{r_i}]; trial t draws from a stream seeded by
/// (seed, t)) and evaluates them on a log-uniform grid with h_density points
/// per octave of E, plus the interval endpoints and h = 0.
LowerBoundReport verify_lower_bound(const ExponentProfile& p, const LowerBoundSet& e, int trials,
                                    int h_density, std::uint64_t seed);

/// The h grid used by verify_lower_bound.
std::vector<double> sample_points(const LowerBoundSet& e, int h_density);

}  // namespace newtonosc
