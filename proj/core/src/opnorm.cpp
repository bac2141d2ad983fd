#include "newtonosc/opnorm.hpp"

#include "newtonosc/errors.hpp"
#include "newtonosc/parallel.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

namespace newtonosc {

namespace {

using RowMatrix = Eigen::Matrix<std::complex<double>, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using CMap = Eigen::Map<const Eigen::VectorXcd>;
using MMap = Eigen::Map<Eigen::VectorXcd>;

std::vector<double> midpoints(double lo, double hi, int n) {
    std::vector<double> out(static_cast<std::size_t>(n));
    const double h = (hi - lo) / n;
    for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = lo + (i + 0.5) * h;
    return out;
}

// Fills rows of e^{i lambda S(x_a, y_b)} ax[a] ay[b] w using one Horner pass
// in x per y-power and one in y per entry.
DiscreteOperator phase_operator(const BivarPoly& S, double lambda, const GridSpec& g,
                                std::vector<double> ax, std::vector<double> ay) {
    const std::size_t n = static_cast<std::size_t>(g.n);
    const double w = std::sqrt(g.hx() * g.hy());
    auto eval = std::make_shared<PolyEvaluator>(S);
    auto xs = std::make_shared<std::vector<double>>(g.x_nodes());
    auto ys = std::make_shared<std::vector<double>>(g.y_nodes());
    auto axp = std::make_shared<std::vector<double>>(std::move(ax));
    auto ayp = std::make_shared<std::vector<double>>(std::move(ay));
    auto filler = [=](std::size_t row, std::span<std::complex<double>> out) {
        const double a = (*axp)[row] * w;
        if (a == 0.0) {
            std::fill(out.begin(), out.end(), std::complex<double>{});
            return;
        }
        thread_local std::vector<double> q;
        eval->row_coefficients((*xs)[row], q);
        for (std::size_t b = 0; b < n; ++b) {
            const double amp = a * (*ayp)[b];
            if (amp == 0.0) {
                out[b] = {};
                continue;
            }
            const double y = (*ys)[b];
            double s = 0.0;
            for (std::size_t i = q.size(); i-- > 0;) s = s * y + q[i];
            out[b] = std::polar(amp, lambda * s);
        }
    };
    return DiscreteOperator(n, n, filler);
}

}  // namespace

double bump(double t) {
    if (!(std::abs(t) < 1.0)) return 0.0;
    return std::exp(1.0 - 1.0 / (1.0 - t * t));
}

double PhaseSpec::cutoff_at(double x, double y) const { return bump(x / rho) * bump(y / rho); }

void PhaseSpec::validate() const {
    if (!(rho > 0.0) || rho > 1.0) throw InvalidArgument("cutoff radius must lie in (0, 1]");
}

std::vector<double> GridSpec::x_nodes() const { return midpoints(domain.x0, domain.x1, n); }
std::vector<double> GridSpec::y_nodes() const { return midpoints(domain.y0, domain.y1, n); }

double gradient_bound(const BivarPoly& S, const Rect& domain) {
    constexpr int kProbe = 64;
    const PolyEvaluator sx(derivative_x(S));
    const PolyEvaluator sy(derivative_y(S));
    double g = 0.0;
    for (int i = 0; i < kProbe; ++i) {
        const double x = domain.x0 + domain.width() * i / (kProbe - 1);
        for (int j = 0; j < kProbe; ++j) {
            const double y = domain.y0 + domain.height() * j / (kProbe - 1);
            g = std::max(g, std::abs(sx(x, y)) + std::abs(sy(x, y)));
        }
    }
    return g;
}

bool resolves(double lambda, double G, double side, int n) {
    return lambda * G * side / n <= std::numbers::pi / 2;
}

int grid_size(double lambda, double G, double side, const SizingRule& rule) {
    const double want = side * lambda * G * (2.0 / std::numbers::pi) * rule.safety;
    int n = rule.n_min;
    while (n < rule.n_cap && n < want) n *= 2;
    n = std::min(n, rule.n_cap);
    if (!resolves(lambda, G, side, n)) {
        throw ResolutionError(lambda, "lambda = " + std::to_string(lambda) +
                                          " needs more than " + std::to_string(rule.n_cap) +
                                          " grid points per dimension");
    }
    return n;
}

// --- DiscreteOperator ------------------------------------------------------

struct DiscreteOperator::Impl {
    std::size_t rows = 0;
    std::size_t cols = 0;
    RowFiller filler;
    RowMatrix matrix;  // empty unless cached
    bool cached = false;

    void fill_all() {
        matrix.resize(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
        parallel_for(rows, [&](std::size_t begin, std::size_t end, std::size_t) {
            for (std::size_t r = begin; r < end; ++r) {
                filler(r, {matrix.data() + r * cols, cols});
            }
        });
        cached = true;
    }
};

DiscreteOperator::DiscreteOperator(std::size_t rows, std::size_t cols, RowFiller filler,
                                   std::size_t cache_budget)
    : impl_(std::make_unique<Impl>()) {
    impl_->rows = rows;
    impl_->cols = cols;
    impl_->filler = std::move(filler);
    if (rows * cols * sizeof(std::complex<double>) <= cache_budget) impl_->fill_all();
}

DiscreteOperator DiscreteOperator::from_dense(std::size_t rows, std::size_t cols, cvec entries) {
    if (entries.size() != rows * cols) throw InvalidArgument("dense operator has the wrong size");
    auto data = std::make_shared<cvec>(std::move(entries));
    return DiscreteOperator(rows, cols, [data, cols](std::size_t r, std::span<std::complex<double>> out) {
        std::copy_n(data->begin() + static_cast<std::ptrdiff_t>(r * cols), cols, out.begin());
    });
}

DiscreteOperator::DiscreteOperator(DiscreteOperator&&) noexcept = default;
DiscreteOperator& DiscreteOperator::operator=(DiscreteOperator&&) noexcept = default;
DiscreteOperator::~DiscreteOperator() = default;

std::size_t DiscreteOperator::rows() const noexcept { return impl_->rows; }
std::size_t DiscreteOperator::cols() const noexcept { return impl_->cols; }
bool DiscreteOperator::cached() const noexcept { return impl_->cached; }

void DiscreteOperator::apply(std::span<const std::complex<double>> in, cvec& out) const {
    if (in.size() != cols()) throw InvalidArgument("apply: input length mismatch");
    out.assign(rows(), {});
    const CMap x(in.data(), static_cast<Eigen::Index>(in.size()));
    if (impl_->cached) {
        parallel_for(rows(), [&](std::size_t begin, std::size_t end, std::size_t) {
            const auto r0 = static_cast<Eigen::Index>(begin);
            const auto len = static_cast<Eigen::Index>(end - begin);
            MMap(out.data() + begin, len).noalias() = impl_->matrix.middleRows(r0, len) * x;
        });
        return;
    }
    parallel_for(rows(), [&](std::size_t begin, std::size_t end, std::size_t) {
        Eigen::VectorXcd row(static_cast<Eigen::Index>(cols()));
        for (std::size_t r = begin; r < end; ++r) {
            impl_->filler(r, {row.data(), cols()});
            out[r] = row.transpose() * x;
        }
    });
}

void DiscreteOperator::apply_adjoint(std::span<const std::complex<double>> in, cvec& out) const {
    if (in.size() != rows()) throw InvalidArgument("apply_adjoint: input length mismatch");
    out.assign(cols(), {});
    const CMap x(in.data(), static_cast<Eigen::Index>(in.size()));
    if (impl_->cached) {
        // Split over output columns so every entry has a single writer.
        parallel_for(cols(), [&](std::size_t begin, std::size_t end, std::size_t) {
            const auto c0 = static_cast<Eigen::Index>(begin);
            const auto len = static_cast<Eigen::Index>(end - begin);
            MMap(out.data() + begin, len).noalias() = impl_->matrix.middleCols(c0, len).adjoint() * x;
        });
        return;
    }
    const std::size_t chunks = chunk_count(rows());
    std::vector<Eigen::VectorXcd> partial(chunks, Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(cols())));
    parallel_for(rows(), [&](std::size_t begin, std::size_t end, std::size_t chunk) {
        Eigen::VectorXcd row(static_cast<Eigen::Index>(cols()));
        for (std::size_t r = begin; r < end; ++r) {
            impl_->filler(r, {row.data(), cols()});
            partial[chunk] += row.conjugate() * in[r];
        }
    });
    MMap acc(out.data(), static_cast<Eigen::Index>(cols()));
    for (const auto& p : partial) acc += p;
}

cvec DiscreteOperator::dense() const {
    cvec out(rows() * cols());
    if (impl_->cached) {
        std::copy_n(impl_->matrix.data(), out.size(), out.begin());
        return out;
    }
    for (std::size_t r = 0; r < rows(); ++r) impl_->filler(r, {out.data() + r * cols(), cols()});
    return out;
}

DiscreteOperator discretize(const PhaseSpec& p, double lambda, const GridSpec& g) {
    p.validate();
    const double G = gradient_bound(p.S, g.domain);
    if (!resolves(lambda, G, g.domain.side(), g.n)) {
        throw ResolutionError(lambda, "grid of " + std::to_string(g.n) +
                                          " points does not resolve the oscillation");
    }
    const double rho = p.rho;
    auto b = [rho](double t) { return bump(t / rho); };
    return discretize_separable(p.S, lambda, g, b, b);
}

DiscreteOperator discretize_separable(const BivarPoly& S, double lambda, const GridSpec& g,
                                      const std::function<double(double)>& ax,
                                      const std::function<double(double)>& ay) {
    if (g.n < 1) throw InvalidArgument("grid needs at least one point");
    std::vector<double> wx = g.x_nodes();
    std::vector<double> wy = g.y_nodes();
    for (double& v : wx) v = ax(v);
    for (double& v : wy) v = ay(v);
    return phase_operator(S, lambda, g, std::move(wx), std::move(wy));
}

DiscreteOperator discretize_kernel(const GridSpec& g,
                                   const std::function<std::complex<double>(double, double)>& k) {
    const std::size_t n = static_cast<std::size_t>(g.n);
    const double w = std::sqrt(g.hx() * g.hy());
    auto xs = std::make_shared<std::vector<double>>(g.x_nodes());
    auto ys = std::make_shared<std::vector<double>>(g.y_nodes());
    return DiscreteOperator(n, n, [=](std::size_t r, std::span<std::complex<double>> out) {
        for (std::size_t c = 0; c < n; ++c) out[c] = k((*xs)[r], (*ys)[c]) * w;
    });
}

// --- norms -----------------------------------------------------------------

PowerResult power_iterate(const DiscreteOperator& op, double tol, int max_iter, std::uint64_t seed,
                          std::span<const std::complex<double>> start) {
    if (!(tol > 0.0)) throw InvalidArgument("tolerance must be positive");
    if (max_iter < 1) throw InvalidArgument("max_iter must be >= 1");
    const std::size_t n = op.cols();
    PowerResult res;
    cvec v;
    if (start.size() == n) {
        v.assign(start.begin(), start.end());
    } else {
        std::mt19937_64 rng(seed);
        std::normal_distribution<double> normal;
        v.resize(n);
        for (auto& z : v) {
            const double re = normal(rng);
            z = {re, normal(rng)};
        }
    }
    MMap vm(v.data(), static_cast<Eigen::Index>(n));
    double nv = vm.norm();
    if (nv == 0.0) throw InvalidArgument("power iteration start vector is zero");
    vm /= nv;

    cvec w, u;
    double rq = 0.0;
    for (int it = 1; it <= max_iter; ++it) {
        op.apply(v, w);
        const double next = CMap(w.data(), static_cast<Eigen::Index>(w.size())).squaredNorm();
        res.iterations = it;
        res.previous_rq = rq;
        res.last_rq = next;
        const bool done = it > 1 && std::abs(next - rq) <= tol * std::abs(next);
        rq = next;
        if (next == 0.0) {
            res.converged = true;
            break;
        }
        op.apply_adjoint(w, u);
        MMap um(u.data(), static_cast<Eigen::Index>(u.size()));
        nv = um.norm();
        if (nv == 0.0) {
            res.converged = true;
            break;
        }
        if (done) {
            res.converged = true;
            break;
        }
        um /= nv;
        v.swap(u);
    }
    res.value = std::sqrt(rq);
    res.vector = std::move(v);
    return res;
}

NormValue operator_norm(const DiscreteOperator& op, double tol, int max_iter, std::uint64_t seed) {
    const PowerResult r = power_iterate(op, tol, max_iter, seed);
    if (!r.converged) throw NoConvergence(r.previous_rq, r.last_rq);
    return {r.value, r.iterations};
}

double dense_spectral_norm(const DiscreteOperator& op) {
    const cvec d = op.dense();
    const Eigen::Map<const RowMatrix> m(d.data(), static_cast<Eigen::Index>(op.rows()),
                                        static_cast<Eigen::Index>(op.cols()));
    Eigen::BDCSVD<Eigen::MatrixXcd> svd(m);
    return svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
}

double schur_bound(const DiscreteOperator& op) {
    // With entries weighted by sqrt(hx hy) the weights cancel between the
    // row and column masses.
    const std::size_t r = op.rows(), c = op.cols();
    std::vector<double> col(c, 0.0);
    double row_max = 0.0;
    const cvec d = op.dense();
    for (std::size_t i = 0; i < r; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < c; ++j) {
            const double a = std::abs(d[i * c + j]);
            s += a;
            col[j] += a;
        }
        row_max = std::max(row_max, s);
    }
    const double col_max = c ? *std::max_element(col.begin(), col.end()) : 0.0;
    return std::sqrt(row_max * col_max);
}

double size_bound(double dx, double dy) {
    if (!(dx > 0.0) || !(dy > 0.0)) throw InvalidArgument("size bound needs positive dimensions");
    return std::sqrt(dx * dy);
}

double op_vdc_bound(double lambda, double mu) {
    if (!(lambda > 0.0) || !(mu > 0.0)) throw InvalidArgument("van der Corput bound needs lambda, mu > 0");
    return 1.0 / std::sqrt(lambda * mu);
}

cvec resample_midpoints(std::span<const std::complex<double>> v, std::size_t m) {
    const std::size_t n = v.size();
    cvec out(m);
    if (n == 0) return out;
    for (std::size_t i = 0; i < m; ++i) {
        // Position of the i-th target midpoint in source index units.
        const double s = (static_cast<double>(i) + 0.5) * static_cast<double>(n) / static_cast<double>(m) - 0.5;
        if (s <= 0.0) {
            out[i] = v.front();
        } else if (s >= static_cast<double>(n - 1)) {
            out[i] = v.back();
        } else {
            const auto k = static_cast<std::size_t>(s);
            const double t = s - static_cast<double>(k);
            out[i] = (1.0 - t) * v[k] + t * v[k + 1];
        }
    }
    return out;
}

NormSample estimate_norm(const PhaseSpec& p, double lambda, const NormOptions& opts) {
    p.validate();
    if (!(lambda >= 0.0)) throw InvalidArgument("lambda must be >= 0");
    const Rect dom = Rect::square(p.rho);
    const double G = gradient_bound(p.S, dom);
    NormSample s;
    s.lambda = lambda;
    s.n = grid_size(lambda, G, dom.side(), opts.sizing);

    PowerResult coarse;
    {
        const DiscreteOperator op = discretize(p, lambda, GridSpec{s.n, dom});
        coarse = power_iterate(op, opts.tol, opts.max_iter, opts.seed);
    }
    const int m = static_cast<int>(std::ceil(1.5 * s.n));
    const cvec start = resample_midpoints(coarse.vector, static_cast<std::size_t>(m));
    const DiscreteOperator fine_op = discretize(p, lambda, GridSpec{m, dom});
    const PowerResult fine = power_iterate(fine_op, opts.tol, opts.max_iter, opts.seed, start);

    s.value = fine.value;
    s.iterations = coarse.iterations + fine.iterations;
    s.converged = coarse.converged && fine.converged;
    s.conv_err = fine.value > 0.0 ? std::abs(fine.value - coarse.value) / fine.value
                                  : (coarse.value == 0.0 ? 0.0 : 1.0);
    return s;
}

}  // namespace newtonosc
