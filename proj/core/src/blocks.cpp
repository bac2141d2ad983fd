#include "newtonosc/blocks.hpp"

#include "newtonosc/errors.hpp"
#include "newtonosc/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace newtonosc {

namespace {

double w(double s) { return s > 0.0 ? std::exp(-1.0 / s) : 0.0; }

constexpr int kDenseLimit = 256;

}  // namespace

double theta(double t, const ThetaShape& shape) {
    const double a = w(shape.hi - t);
    const double b = w(t - shape.lo);
    return a / (a + b);
}

DyadicPartition::DyadicPartition(int j_min, int j_max, ThetaShape shape)
    : j_min_(j_min), j_max_(j_max), shape_(shape) {
    if (j_min > j_max) throw InvalidArgument("partition needs j_min <= j_max");
}

double DyadicPartition::chi(int j, double t) const {
    return theta(std::ldexp(t, j)) - theta(std::ldexp(t, j + 1));
}

double DyadicPartition::partial_sum(double t) const {
    double s = 0.0;
    for (int j = j_min_; j <= j_max_; ++j) s += chi(j, t);
    return s;
}

double DyadicPartition::telescoped(double t) const {
    return theta(std::ldexp(t, j_min_)) - theta(std::ldexp(t, j_max_ + 1));
}

int first_block_index(double rho) {
    if (!(rho > 0.0)) throw InvalidArgument("rho must be positive");
    return static_cast<int>(std::floor(-std::log2(rho)));
}

const char* to_string(Region::Kind k) {
    switch (k) {
        case Region::Kind::Gap: return "gap";
        case Region::Kind::NearEdge: return "near_edge";
        case Region::Kind::AxisX: return "axis_x";
        case Region::Kind::AxisY: return "axis_y";
    }
    return "?";
}

std::string to_string(const Region& r) {
    switch (r.kind) {
        case Region::Kind::Gap:
        case Region::Kind::NearEdge: return std::string(to_string(r.kind)) + "(" + std::to_string(r.nu) + ")";
        default: return to_string(r.kind);
    }
}

Region classify_block(int j, int k, const NewtonPolygon& polygon, double D) {
    const auto& edges = polygon.edges;
    if (edges.empty()) return {Region::Kind::Gap, 0};
    for (std::size_t i = 0; i < edges.size(); ++i) {
        if (std::abs(k - j * edges[i].gamma.get_d()) < D) return {Region::Kind::NearEdge, static_cast<int>(i) + 1};
    }
    if (polygon.A > 0) {
        const double g1 = edges.front().gamma.get_d() / 2.0;
        if (k < j * g1 + D) return {Region::Kind::AxisY, 0};
    }
    if (polygon.B > 0) {
        const double g2 = 2.0 * edges.back().gamma.get_d();
        if (k > j * g2 - D) return {Region::Kind::AxisX, 0};
    }
    int nu = 0;
    for (const auto& e : edges) {
        if (j * e.gamma.get_d() + D <= k) ++nu;
    }
    return {Region::Kind::Gap, nu};
}

double mu_for_block(int j, int k, const Region& region, const NewtonPolygon& polygon) {
    if (region.kind != Region::Kind::Gap) throw WrongRegion();
    const Monomial& v = polygon.vertices.at(static_cast<std::size_t>(region.nu));
    return std::ldexp(1.0, -(j * v.x + k * v.y));
}

Rect block_rect(int j, int k, double rho) {
    Rect r;
    r.x0 = std::ldexp(1.0, -j - 1);
    r.x1 = std::min(std::ldexp(1.0, -j + 1), rho);
    r.y0 = std::ldexp(1.0, -k - 1);
    r.y1 = std::min(std::ldexp(1.0, -k + 1), rho);
    return r;
}

DiscreteOperator block_operator(const PhaseSpec& p, double lambda, int j, int k,
                                const DyadicPartition& partition, int n) {
    const double rho = p.rho;
    auto ax = [&, rho](double x) { return bump(x / rho) * partition.chi(j, x); };
    auto ay = [&, rho](double y) { return bump(y / rho) * partition.chi(k, y); };
    return discretize_separable(p.S, lambda, GridSpec{n, block_rect(j, k, rho)}, ax, ay);
}

BlockReport verify_blocks(const PhaseSpec& p, double lambda, const NewtonPolygon& polygon,
                          const BlockOptions& options) {
    p.validate();
    const int j_min = first_block_index(p.rho);
    if (options.j_max < j_min) throw InvalidArgument("j_max is below the first block index");
    const DyadicPartition partition(j_min, options.j_max, options.shape);
    const BivarPoly F = mixed_derivative(p.S);
    const PolyEvaluator f_eval(F);

    const int span = options.j_max - j_min + 1;
    const std::size_t count = static_cast<std::size_t>(span) * static_cast<std::size_t>(span);
    BlockReport report;
    report.blocks.resize(count);

    parallel_for(count, [&](std::size_t begin, std::size_t end, std::size_t) {
        for (std::size_t idx = begin; idx < end; ++idx) {
            BlockEstimate& b = report.blocks[idx];
            b.j = j_min + static_cast<int>(idx / static_cast<std::size_t>(span));
            b.k = j_min + static_cast<int>(idx % static_cast<std::size_t>(span));
            b.region = classify_block(b.j, b.k, polygon, options.D);
            const Rect r = block_rect(b.j, b.k, p.rho);

            constexpr int kSample = 16;
            b.min_abs_f = std::numeric_limits<double>::infinity();
            for (int a = 0; a < kSample; ++a) {
                const double x = r.x0 + r.width() * a / (kSample - 1);
                for (int c = 0; c < kSample; ++c) {
                    const double y = r.y0 + r.height() * c / (kSample - 1);
                    const double v = std::abs(f_eval(x, y));
                    b.min_abs_f = std::min(b.min_abs_f, v);
                    b.max_abs_f = std::max(b.max_abs_f, v);
                }
            }
            b.mu = b.region.kind == Region::Kind::Gap ? mu_for_block(b.j, b.k, b.region, polygon)
                                                      : b.min_abs_f;
            b.size = size_bound(r.width(), r.height());
            b.osc = lambda * b.mu > 0.0 ? op_vdc_bound(lambda, b.mu)
                                        : std::numeric_limits<double>::infinity();
            try {
                const double G = gradient_bound(p.S, r);
                b.n = grid_size(lambda, G, r.side(), SizingRule{4096, 32, 2.0});
                const DiscreteOperator op = block_operator(p, lambda, b.j, b.k, partition, b.n);
                if (b.n < kDenseLimit) {
                    b.measured = dense_spectral_norm(op);
                } else {
                    b.measured = operator_norm(op, options.tol, options.max_iter, options.seed).value;
                }
                b.ratio = b.measured / std::min(b.size, b.osc);
            } catch (const Error& e) {
                b.error = e.kind() + ": " + e.what();
                b.measured = std::numeric_limits<double>::quiet_NaN();
                b.ratio = std::numeric_limits<double>::quiet_NaN();
            }
        }
    });

    for (auto kind : {Region::Kind::Gap, Region::Kind::NearEdge, Region::Kind::AxisX, Region::Kind::AxisY}) {
        RegionSummary s;
        s.kind = kind;
        for (const auto& b : report.blocks) {
            if (b.region.kind != kind || !b.error.empty()) continue;
            ++s.blocks;
            s.worst_ratio = std::max(s.worst_ratio, b.ratio);
        }
        if (s.blocks > 0) report.regions.push_back(s);
        if (kind == Region::Kind::Gap) report.worst_gap_ratio = s.worst_ratio;
    }
    for (const auto& b : report.blocks) {
        if (!b.error.empty()) ++report.errors;
    }
    report.pass = report.errors == 0 && report.worst_gap_ratio <= options.ratio_cap;
    return report;
}

}  // namespace newtonosc
