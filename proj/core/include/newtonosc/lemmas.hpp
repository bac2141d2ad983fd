#pragma once

// One-dimensional oscillatory integral and sublevel-set estimates, as
// numerical checks: each returns the measured quantity next to its bound.

#include <functional>

namespace newtonosc {

using Fn1 = std::function<double(double)>;

struct Interval {
    double a = 0.0;
    double b = 1.0;
};

struct BoundCheck {
    double lhs = 0.0;  // measured
    double rhs = 0.0;  // bound

    double ratio() const noexcept { return rhs > 0.0 ? lhs / rhs : 0.0; }
};

struct VdcInput {
    Fn1 phi;
    Fn1 phi_prime;  // used to size the quadrature
    Fn1 psi;
    Fn1 psi_prime;
    /// Optional k-th derivative of phi; when given, phi^(k) >= mu is
    /// spot-checked at 257 points and InvalidArgument is thrown otherwise.
    Fn1 phi_k;
    int k = 1;
    double mu = 1.0;
    Interval interval;
};

/// lhs = |integral_a^b e^{i lambda phi} psi|, rhs = (lambda mu)^{-1/k} (|psi(b)| + integral |psi'|).
/// Composite 8-point Gauss-Legendre with at least 8 panels per oscillation;
/// throws ResolutionError past 2^22 panels.
BoundCheck scalar_vdc_check(const VdcInput& in, double lambda);

/// A_k = 2k 2^{1/k}.
double christ_constant(int k);

/// lhs = |{x in I : |f(x)| <= gamma}| by midpoint counting on `samples`
/// points, rhs = A_k (gamma / mu)^{1/k}.
BoundCheck sublevel_check(const Fn1& f, double gamma, int k, double mu, Interval interval,
                          int samples = 1'000'000);

}  // namespace newtonosc
