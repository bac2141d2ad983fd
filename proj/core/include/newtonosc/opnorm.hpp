#pragma once

// Discretized oscillatory integral operators
//   (T f)(x) = integral e^{i lambda S(x,y)} chi(x,y) f(y) dy
// on midpoint grids, their L2 operator norms, and the elementary bounds
// they are compared against.

#include "newtonosc/poly.hpp"

#include <complex>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <vector>

namespace newtonosc {

using cvec = std::vector<std::complex<double>>;

enum class CutoffKind { TensorBump };

/// b(t) = exp(1 - 1/(1 - t^2)) on |t| < 1, zero elsewhere. b(0) = 1.
double bump(double t);

struct PhaseSpec {
    BivarPoly S;
    double rho = 1.0;
    CutoffKind cutoff = CutoffKind::TensorBump;

    /// chi(x, y) = b(x / rho) b(y / rho).
    double cutoff_at(double x, double y) const;
    void validate() const;
};

struct Rect {
    double x0 = 0.0, x1 = 1.0, y0 = 0.0, y1 = 1.0;

    double width() const noexcept { return x1 - x0; }
    double height() const noexcept { return y1 - y0; }
    double side() const noexcept { return width() > height() ? width() : height(); }
    static Rect square(double rho) { return {-rho, rho, -rho, rho}; }
};

/// n midpoint nodes per dimension on `domain`.
struct GridSpec {
    int n = 64;
    Rect domain;

    double hx() const noexcept { return domain.width() / n; }
    double hy() const noexcept { return domain.height() / n; }
    std::vector<double> x_nodes() const;
    std::vector<double> y_nodes() const;
};

/// Sampled max of |dS/dx| + |dS/dy| over a 64 x 64 probe grid including the
/// corners of `domain`.
double gradient_bound(const BivarPoly& S, const Rect& domain);

struct SizingRule {
    int n_cap = 4096;
    int n_min = 16;
    double safety = 2.0;
};

/// Smallest power of two n >= side lambda G (2/pi) safety, clamped to
/// [n_min, n_cap]. Throws ResolutionError when lambda G side / n > pi/2 at
/// the clamped n.
int grid_size(double lambda, double G, double side, const SizingRule& rule = {});

/// True when lambda G h <= pi/2 for h = side / n.
bool resolves(double lambda, double G, double side, int n);

/// Opaque matrix-free handle. Entries are pre-weighted by sqrt(hx hy), so the
/// discrete spectral norm approximates the L2 operator norm.
class DiscreteOperator {
public:
    /// Writes the weighted entries of one row.
    using RowFiller = std::function<void(std::size_t row, std::span<std::complex<double>> out)>;

    /// Kernels up to this many bytes are materialized once and reused.
    static constexpr std::size_t kDefaultCacheBudget = std::size_t{768} << 20;

    DiscreteOperator(std::size_t rows, std::size_t cols, RowFiller filler,
                     std::size_t cache_budget = kDefaultCacheBudget);
    /// Row-major dense matrix, already weighted.
    static DiscreteOperator from_dense(std::size_t rows, std::size_t cols, cvec entries);

    DiscreteOperator(DiscreteOperator&&) noexcept;
    DiscreteOperator& operator=(DiscreteOperator&&) noexcept;
    ~DiscreteOperator();

    std::size_t rows() const noexcept;
    std::size_t cols() const noexcept;
    bool cached() const noexcept;

    /// out = T in; in has cols() entries, out gets rows().
    void apply(std::span<const std::complex<double>> in, cvec& out) const;
    /// out = T* in.
    void apply_adjoint(std::span<const std::complex<double>> in, cvec& out) const;

    /// Row-major copy of all entries.
    cvec dense() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

/// T_lambda for the phase and tensor-bump cutoff of p on grid g.
DiscreteOperator discretize(const PhaseSpec& p, double lambda, const GridSpec& g);

/// Kernel e^{i lambda S(x,y)} ax(x) ay(y) on grid g, for separable amplitudes.
DiscreteOperator discretize_separable(const BivarPoly& S, double lambda, const GridSpec& g,
                                      const std::function<double(double)>& ax,
                                      const std::function<double(double)>& ay);

/// Arbitrary kernel K(x, y) sampled on grid g.
DiscreteOperator discretize_kernel(const GridSpec& g,
                                   const std::function<std::complex<double>(double, double)>& k);

struct PowerResult {
    double value = 0.0;
    int iterations = 0;
    bool converged = false;
    double previous_rq = 0.0;
    double last_rq = 0.0;
    cvec vector;  // right singular vector estimate, unit norm
};

/// Power iteration on T*T. Starts from `start` when it has cols() entries,
/// otherwise from a seeded random complex vector. Stops when successive
/// Rayleigh quotients differ relatively by < tol or after max_iter steps.
PowerResult power_iterate(const DiscreteOperator& op, double tol, int max_iter, std::uint64_t seed,
                          std::span<const std::complex<double>> start = {});

struct NormValue {
    double value = 0.0;
    int iterations = 0;
};

/// power_iterate from a random start; throws NoConvergence at max_iter.
NormValue operator_norm(const DiscreteOperator& op, double tol = 1e-6, int max_iter = 500,
                        std::uint64_t seed = 0);

/// Largest singular value of the materialized matrix (Eigen SVD).
double dense_spectral_norm(const DiscreteOperator& op);

/// sqrt(max column sum * max row sum) of |K| with quadrature weights.
double schur_bound(const DiscreteOperator& op);

double size_bound(double dx, double dy);
double op_vdc_bound(double lambda, double mu);

struct NormSample {
    double lambda = 0.0;
    int n = 0;
    double value = 0.0;
    double conv_err = 0.0;
    int iterations = 0;
    bool converged = false;

    bool valid() const noexcept { return converged && conv_err < 0.02; }
};

struct NormOptions {
    double tol = 1e-6;
    int max_iter = 500;
    std::uint64_t seed = 0;
    /// Full-support grids start at 64 points so the bump itself is resolved
    /// even when lambda is small.
    SizingRule sizing{4096, 64, 2.0};
};

/// Sizes the grid, estimates the norm at n and ceil(1.5 n) (the finer run
/// warm-started from the coarse singular vector) and reports the finer value.
NormSample estimate_norm(const PhaseSpec& p, double lambda, const NormOptions& opts = {});

/// Linear interpolation of a grid function sampled at n midpoints of [lo, hi]
/// onto m midpoints, with constant extension past the outer nodes.
cvec resample_midpoints(std::span<const std::complex<double>> v, std::size_t m);

}  // namespace newtonosc
