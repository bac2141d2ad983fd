#pragma once

#include "newtonosc/newton.hpp"
#include "newtonosc/opnorm.hpp"
#include "newtonosc/puiseux.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace newtonosc {

struct SweepConfig {
    std::vector<double> lambdas = default_lambdas();
    double tol_slope = 0.1;
    /// Inclusive [lo, hi] lambda range used by the fit; all samples when empty.
    std::optional<std::pair<double, double>> fit_window;
    std::uint64_t seed = 0;
    NormOptions norm;

    /// 2^4 .. 2^11.
    static std::vector<double> default_lambdas();
    static std::vector<double> powers_of_two(int lo, int hi);
    void validate() const;
};

/// One NormSample per lambda, in order. Runs lambdas one after another so
/// only one pair of kernels is resident; each norm estimate is parallel.
std::vector<NormSample> sweep(const PhaseSpec& p, const SweepConfig& cfg,
                              const std::function<void(const NormSample&)>& on_sample = {});

struct Fit {
    double slope = 0.0;
    double intercept = 0.0;
    double stderr_ = 0.0;
    std::size_t used = 0;
};

/// OLS of log2(norm) on log2(lambda) over the valid samples. Throws
/// InsufficientSamples below 4.
Fit fit_decay(const std::vector<NormSample>& samples);
/// OLS of ys on xs; needs at least 2 points, stderr is 0 for exactly 2.
Fit fit_line(const std::vector<double>& xs, const std::vector<double>& ys);

enum class Verdict { Pass, Fail, Inconclusive };
const char* to_string(Verdict v);

struct PlotPoint {
    double log2_lambda = 0.0;
    double log2_norm = 0.0;
    double predicted = 0.0;  // predicted line through the centroid of the fit
};

struct ScalingReport {
    std::vector<NormSample> samples;
    Rational delta;
    Degeneracy degeneracy;
    Rational predicted;  // -delta/2, or -1/(N+2) when completely degenerate
    double slope = 0.0;
    double stderr_ = 0.0;
    double tol_slope = 0.0;
    bool fitted = false;
    /// Degenerate case: norm lambda^{1/(N+2)} / (log lambda)^{2N/(N+2)}.
    std::vector<double> log_ratios;
    /// Degenerate case: slope of log2(norm lambda^{1/(N+2)}) on log2(log lambda).
    std::optional<double> log_exponent_fit;
    Verdict verdict = Verdict::Inconclusive;
    std::string note;
    double rho = 0.0;
    /// Verdict at rho / 2, produced when the first verdict is Fail.
    std::optional<double> half_rho_slope;
    std::optional<Verdict> half_rho_verdict;
    std::vector<PlotPoint> plot;
};

/// mixed_derivative -> polygon -> decay rate -> branches -> degeneracy ->
/// sweep -> fit, with the verdict for the relevant case of the decay theorem.
ScalingReport verify_theorem(const PhaseSpec& p, const SweepConfig& cfg,
                             const std::function<void(const NormSample&)>& on_sample = {});

}  // namespace newtonosc
