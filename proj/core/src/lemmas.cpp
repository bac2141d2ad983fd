#include "newtonosc/lemmas.hpp"

#include "newtonosc/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <numbers>

namespace newtonosc {

namespace {

constexpr std::array<double, 8> kNodes{-0.9602898564975362, -0.7966664774136267, -0.525532409916329,
                                       -0.18343464249564978, 0.18343464249564978, 0.525532409916329,
                                       0.7966664774136267,  0.9602898564975362};
constexpr std::array<double, 8> kWeights{0.10122853629037669, 0.22238103445337434, 0.31370664587788705,
                                         0.36268378337836177, 0.36268378337836177, 0.31370664587788705,
                                         0.22238103445337434, 0.10122853629037669};
constexpr long kMaxPanels = 1L << 22;

template <class F>
auto gauss(F&& f, Interval iv, long panels) {
    using R = decltype(f(0.0));
    R total{};
    const double h = (iv.b - iv.a) / static_cast<double>(panels);
    for (long p = 0; p < panels; ++p) {
        const double mid = iv.a + (static_cast<double>(p) + 0.5) * h;
        R acc{};
        for (std::size_t i = 0; i < kNodes.size(); ++i) acc += kWeights[i] * f(mid + 0.5 * h * kNodes[i]);
        total += acc * (0.5 * h);
    }
    return total;
}

}  // namespace

BoundCheck scalar_vdc_check(const VdcInput& in, double lambda) {
    if (in.k < 1) throw InvalidArgument("k must be >= 1");
    if (!(in.mu > 0.0) || !(lambda > 0.0)) throw InvalidArgument("lambda and mu must be positive");
    const Interval iv = in.interval;
    if (!(iv.b > iv.a)) throw InvalidArgument("empty interval");

    double slope = 0.0;
    constexpr int kSpot = 257;
    for (int i = 0; i < kSpot; ++i) {
        const double t = iv.a + (iv.b - iv.a) * i / (kSpot - 1);
        slope = std::max(slope, std::abs(in.phi_prime(t)));
        if (in.phi_k && in.phi_k(t) < in.mu * (1.0 - 1e-9)) {
            throw InvalidArgument("phase derivative of order k drops below mu");
        }
    }
    const double waves = lambda * slope * (iv.b - iv.a) / (2.0 * std::numbers::pi);
    const long panels = std::max(64L, static_cast<long>(std::ceil(8.0 * waves)));
    if (panels > kMaxPanels) throw ResolutionError(lambda, "oscillatory integral needs too many panels");

    const std::complex<double> integral = gauss(
        [&](double t) { return std::polar(in.psi(t), lambda * in.phi(t)); }, iv, panels);
    const double variation = gauss([&](double t) { return std::abs(in.psi_prime(t)); }, iv, 4096);

    BoundCheck out;
    out.lhs = std::abs(integral);
    out.rhs = std::pow(lambda * in.mu, -1.0 / in.k) * (std::abs(in.psi(iv.b)) + variation);
    return out;
}

double christ_constant(int k) { return 2.0 * k * std::pow(2.0, 1.0 / k); }

BoundCheck sublevel_check(const Fn1& f, double gamma, int k, double mu, Interval interval,
                          int samples) {
    if (k < 1 || !(mu > 0.0) || !(gamma >= 0.0)) throw InvalidArgument("sublevel check needs k >= 1, mu > 0, gamma >= 0");
    if (samples < 1 || !(interval.b > interval.a)) throw InvalidArgument("sublevel check needs samples and a nonempty interval");
    const double h = (interval.b - interval.a) / samples;
    long hits = 0;
    for (int i = 0; i < samples; ++i) {
        if (std::abs(f(interval.a + (i + 0.5) * h)) <= gamma) ++hits;
    }
    BoundCheck out;
    out.lhs = static_cast<double>(hits) * h;
    out.rhs = christ_constant(k) * std::pow(gamma / mu, 1.0 / k);
    return out;
}

}  // namespace newtonosc
