#pragma once

// Exact sparse bivariate polynomials over Q and the truncated fractional
// power series used to describe Puiseux branches.

#include <gmpxx.h>

#include <complex>
#include <compare>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace newtonosc {

/// Arbitrary-precision rational, always kept in lowest terms with a
/// positive denominator (GMP canonicalizes after every arithmetic op).
using Rational = mpq_class;

Rational make_rational(long num, long den = 1);

/// "p/q", or "p" when the denominator is one.
std::string to_string(const Rational& q);

/// Parses "p" or "p/q" (optional leading '-'); throws InvalidArgument.
Rational parse_rational(std::string_view text);

struct Monomial {
    int x = 0;
    int y = 0;

    friend auto operator<=>(const Monomial&, const Monomial&) = default;
};

/// Sparse polynomial sum c_{ab} x^a y^b with no stored zero coefficients.
/// Iteration order is the lexicographic order of (a, b).
class BivarPoly {
public:
    using TermMap = std::map<Monomial, Rational>;

    BivarPoly() = default;
    explicit BivarPoly(const Rational& constant);
    static BivarPoly monomial(int a, int b, const Rational& c = 1);
    static BivarPoly x() { return monomial(1, 0); }
    static BivarPoly y() { return monomial(0, 1); }

    const TermMap& terms() const noexcept { return terms_; }
    bool is_zero() const noexcept { return terms_.empty(); }
    std::size_t size() const noexcept { return terms_.size(); }

    /// Coefficient of x^a y^b (zero when absent).
    Rational coeff(int a, int b) const;
    /// Adds c to the coefficient of x^a y^b, erasing it if the sum vanishes.
    void add_term(int a, int b, const Rational& c);

    std::vector<Monomial> support() const;
    int total_degree() const;
    int degree_x() const;
    int degree_y() const;

    BivarPoly& operator+=(const BivarPoly& rhs);
    BivarPoly& operator-=(const BivarPoly& rhs);
    BivarPoly& operator*=(const BivarPoly& rhs);
    BivarPoly& operator*=(const Rational& c);

    friend BivarPoly operator+(BivarPoly lhs, const BivarPoly& rhs) { return lhs += rhs; }
    friend BivarPoly operator-(BivarPoly lhs, const BivarPoly& rhs) { return lhs -= rhs; }
    friend BivarPoly operator*(BivarPoly lhs, const BivarPoly& rhs) { return lhs *= rhs; }
    friend BivarPoly operator*(BivarPoly lhs, const Rational& c) { return lhs *= c; }
    friend BivarPoly operator*(const Rational& c, BivarPoly rhs) { return rhs *= c; }
    BivarPoly operator-() const;

    BivarPoly pow(unsigned exponent) const;

    friend bool operator==(const BivarPoly&, const BivarPoly&) = default;

private:
    TermMap terms_;
};

/// Parses the polynomial grammar (x, y, rational literals, + - * / ^, parens).
/// Throws SyntaxError (with position) or NegativeExponent.
BivarPoly parse_poly(std::string_view text);

/// Canonical text form; parse_poly(render(p)) == p.
std::string render(const BivarPoly& p);

/// d^2 P / dx dy, exact.
BivarPoly mixed_derivative(const BivarPoly& p);

/// Partial derivatives, exact.
BivarPoly derivative_x(const BivarPoly& p);
BivarPoly derivative_y(const BivarPoly& p);

/// The antiderivative sum c_ab x^{a+1} y^{b+1} / ((a+1)(b+1)), whose mixed
/// derivative is exactly F.
BivarPoly mixed_antiderivative(const BivarPoly& f);

/// Exact rational evaluation at the (exactly representable) doubles x, y,
/// rounded once at the end.
double eval_poly(const BivarPoly& p, double x, double y);

/// Exact rational evaluation at rational points.
Rational eval_exact(const BivarPoly& p, const Rational& x, const Rational& y);

/// Fast double-precision evaluator. Stores the coefficients grouped by
/// y-power so a row x = const costs one Horner pass per y.
class PolyEvaluator {
public:
    PolyEvaluator() = default;
    explicit PolyEvaluator(const BivarPoly& p);

    double operator()(double x, double y) const;
    std::complex<double> operator()(double x, std::complex<double> y) const;
    std::complex<double> operator()(std::complex<double> x, std::complex<double> y) const;

    /// Sum of |c_ab| |x|^a |y|^b, the scale against which rounding error
    /// in operator() is measured.
    double magnitude(double x, double y) const;
    double magnitude(double x, std::complex<double> y) const;

    /// Coefficients q_b(x) of y^b at a fixed x, b = 0..degree_y.
    void row_coefficients(double x, std::vector<double>& out) const;

    int degree_y() const noexcept { return static_cast<int>(by_y_.size()) - 1; }
    bool is_zero() const noexcept { return by_y_.empty(); }

private:
    // by_y_[b] holds dense x-coefficients of the y^b slice.
    std::vector<std::vector<double>> by_y_;
};

// --- Puiseux series --------------------------------------------------------

struct PuiseuxTerm {
    Rational exponent;
    std::complex<double> coefficient;
};

enum class Reality { Real, ComplexPair };

/// How far a branch is known. Exact: the series terminates and the stored
/// terms are the whole root. Truncated: a simple root known through the
/// requested order. UndeterminedSplit: several roots agree through the
/// requested order and are reported together.
enum class BranchStatus { Exact, Truncated, UndeterminedSplit };

struct PuiseuxBranch {
    int ramification = 1;
    std::vector<PuiseuxTerm> terms;
    int multiplicity = 1;
    Reality reality = Reality::Real;
    BranchStatus status = BranchStatus::Truncated;
    /// Every exponent <= order is determined by the stored terms.
    Rational order;

    const Rational& leading_exponent() const { return terms.front().exponent; }
    std::complex<double> leading_coefficient() const { return terms.front().coefficient; }
};

/// Sum of coefficient * x^exponent over the stored terms; throws DomainError
/// for x <= 0.
std::complex<double> eval_branch(const PuiseuxBranch& b, double x);

const char* to_string(Reality r);
const char* to_string(BranchStatus s);

}  // namespace newtonosc
