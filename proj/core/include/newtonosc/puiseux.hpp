#pragma once

#include "newtonosc/poly.hpp"

#include <span>
#include <vector>

namespace newtonosc {

/// Roots y = Y(x) -> 0 of F(x, y) = 0 as x -> 0+, grouped into branches.
/// The y^B factor and the x^A factor of F are recorded as counts only.
struct BranchSet {
    std::vector<PuiseuxBranch> branches;
    int total_multiplicity = 0;
    int count_x_flat = 0;  // A
    int count_y_flat = 0;  // B
    double cluster_tolerance = 0.0;
    Rational order;
};

struct PuiseuxOptions {
    /// Base relative tolerance for grouping numerically computed roots of an
    /// edge polynomial. Widened for higher-degree edge polynomials, where an
    /// m-fold root splits by about eps^(1/m).
    double cluster_tolerance = 1e-8;
    /// Terms whose magnitude falls below this fraction of the magnitudes that
    /// cancelled into them are treated as exact zeros.
    double cancellation_tolerance = 1e-10;
    /// Series coefficients below this fraction of the leading one are dropped.
    double drop_tolerance = 1e-12;
    int max_depth = 512;
};

/// Newton-Puiseux expansion of the roots of F through order K. Every branch
/// starts c x^gamma with gamma a compact-edge slope of Gamma(F). Returns an
/// empty set when Gamma(F) has no compact edges.
BranchSet expand_branches(const BivarPoly& f, const Rational& order,
                          const PuiseuxOptions& options = {});

/// Roots of sum coeffs[i] z^i grouped by multiplicity (root, multiplicity).
/// coeffs.front() and coeffs.back() must be nonzero.
struct ClusteredRoot {
    std::complex<double> value;
    int multiplicity = 1;
};
std::vector<ClusteredRoot> clustered_roots(std::span<const std::complex<double>> coeffs,
                                           double cluster_tolerance);

/// Least-squares slope of log|F(x, Y(x))| against log x over the samples.
/// Returns +infinity when every residual is at rounding level (the branch is
/// an exact root to machine precision). Throws NumericalUnderflow when a
/// residual cannot be resolved above 1e-300, InvalidArgument when the samples
/// are not at least 4 points in (0, 0.5].
double branch_residual_order(const BivarPoly& f, const PuiseuxBranch& b,
                             std::span<const double> x_samples);

/// The residual slope a branch known through `b.order` must reach:
/// order + gamma_min - tolerance.
double residual_threshold(const PuiseuxBranch& b, const Rational& gamma_min, double tolerance);

}  // namespace newtonosc
