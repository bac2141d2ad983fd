#pragma once

#include "newtonosc/newton.hpp"
#include "newtonosc/opnorm.hpp"

#include <string>
#include <vector>

namespace newtonosc {

/// Transition points of the cutoff theta: 1 on t <= lo, 0 on t >= hi.
struct ThetaShape {
    double lo = 1.0;
    double hi = 2.0;
};

/// theta(t) = w(hi - t) / (w(hi - t) + w(t - lo)), w(s) = e^{-1/s} for s > 0.
double theta(double t, const ThetaShape& shape = {});

class DyadicPartition {
public:
    DyadicPartition(int j_min, int j_max, ThetaShape shape = {});

    int j_min() const noexcept { return j_min_; }
    int j_max() const noexcept { return j_max_; }
    const ThetaShape& shape() const noexcept { return shape_; }

    double theta(double t) const { return newtonosc::theta(t, shape_); }
    /// chi_j(t) = theta(2^j t) - theta(2^{j+1} t).
    double chi(int j, double t) const;
    /// Sum of chi_j(t) over j_min..j_max.
    double partial_sum(double t) const;
    /// theta(2^{j_min} t) - theta(2^{j_max + 1} t), what partial_sum telescopes to.
    double telescoped(double t) const;

private:
    int j_min_;
    int j_max_;
    ThetaShape shape_;
};

/// Smallest j whose block [2^{-j-1}, 2^{-j+1}] meets (0, rho).
int first_block_index(double rho);

struct Region {
    enum class Kind { Gap, NearEdge, AxisX, AxisY };
    Kind kind = Kind::Gap;
    int nu = 0;  // vertex index for Gap, 1-based edge index for NearEdge

    friend bool operator==(const Region&, const Region&) = default;
};

/// "gap(nu)", "near_edge(nu)", "axis_x" or "axis_y".
std::string to_string(const Region& r);

/// Block (j, k) covers x ~ 2^{-j}, y ~ 2^{-k}. In order of precedence:
/// NearEdge(nu) when |k - j gamma_nu| < D; AxisY when A > 0 and
/// k < j gamma' + D with gamma' = gamma_1 / 2; AxisX when B > 0 and
/// k > j gamma'' - D with gamma'' = 2 gamma_last; otherwise Gap(nu) with
/// nu = #{edges alpha : j gamma_alpha + D <= k}, whose dominant vertex is
/// vertices[nu]. Without compact edges every block is Gap(0).
Region classify_block(int j, int k, const NewtonPolygon& polygon, double D);

/// 2^{-j A_nu - k B_nu} for the dominant vertex of a gap block; throws
/// WrongRegion for other regions.
double mu_for_block(int j, int k, const Region& region, const NewtonPolygon& polygon);

/// R_jk = [2^{-j-1}, 2^{-j+1}] x [2^{-k-1}, 2^{-k+1}] clipped to [0, rho]^2.
Rect block_rect(int j, int k, double rho);

struct BlockEstimate {
    int j = 0;
    int k = 0;
    Region region;
    double mu = 0.0;
    double measured = 0.0;
    double size = 0.0;
    double osc = 0.0;  // (lambda mu)^{-1/2}, infinite when lambda mu = 0
    double ratio = 0.0;  // measured / min(size, osc)
    int n = 0;
    double min_abs_f = 0.0;  // over a 16 x 16 sample of the block
    double max_abs_f = 0.0;
    std::string error;  // set when the block could not be measured
};

struct BlockOptions {
    double D = 3.0;
    int j_max = 6;
    double ratio_cap = 10.0;
    double tol = 1e-8;
    int max_iter = 2000;
    std::uint64_t seed = 0;
    ThetaShape shape;
};

struct RegionSummary {
    Region::Kind kind = Region::Kind::Gap;
    int blocks = 0;
    double worst_ratio = 0.0;
};

struct BlockReport {
    std::vector<BlockEstimate> blocks;  // ordered by (j, k)
    std::vector<RegionSummary> regions;
    double worst_gap_ratio = 0.0;
    int errors = 0;
    bool pass = false;  // every gap block within ratio_cap and no errors
};

/// Measures every block T_jk of the ++ quadrant with j_min <= j, k <= j_max
/// (j_min from rho) and compares it with the size and oscillatory bounds.
BlockReport verify_blocks(const PhaseSpec& p, double lambda, const NewtonPolygon& polygon,
                          const BlockOptions& options = {});

/// The block operator T_jk on its own grid.
DiscreteOperator block_operator(const PhaseSpec& p, double lambda, int j, int k,
                                const DyadicPartition& partition, int n);

const char* to_string(Region::Kind k);

}  // namespace newtonosc
