#include "newtonosc/poly.hpp"

#include "newtonosc/errors.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>

namespace newtonosc {

Rational make_rational(long num, long den) {
    if (den == 0) throw InvalidArgument("zero denominator");
    Rational q(num, den);
    q.canonicalize();
    return q;
}

std::string to_string(const Rational& q) { return q.get_str(); }

Rational parse_rational(std::string_view text) {
    std::string s(text);
    auto valid = [](const std::string& part, bool allow_sign) {
        std::size_t i = 0;
        if (allow_sign && i < part.size() && part[i] == '-') ++i;
        if (i == part.size()) return false;
        return std::all_of(part.begin() + static_cast<long>(i), part.end(),
                           [](unsigned char c) { return std::isdigit(c) != 0; });
    };
    const auto slash = s.find('/');
    const std::string num = s.substr(0, slash);
    const std::string den = slash == std::string::npos ? "1" : s.substr(slash + 1);
    if (!valid(num, true) || !valid(den, false)) {
        throw InvalidArgument("not a rational: '" + s + "'");
    }
    Rational q{mpz_class(num), mpz_class(den)};
    if (q.get_den() == 0) throw InvalidArgument("zero denominator: '" + s + "'");
    q.canonicalize();
    return q;
}

// --- BivarPoly -------------------------------------------------------------

BivarPoly::BivarPoly(const Rational& constant) {
    if (constant != 0) terms_.emplace(Monomial{0, 0}, constant);
}

BivarPoly BivarPoly::monomial(int a, int b, const Rational& c) {
    BivarPoly p;
    p.add_term(a, b, c);
    return p;
}

Rational BivarPoly::coeff(int a, int b) const {
    auto it = terms_.find(Monomial{a, b});
    return it == terms_.end() ? Rational(0) : it->second;
}

void BivarPoly::add_term(int a, int b, const Rational& c) {
    if (a < 0 || b < 0) throw InvalidArgument("negative exponent in add_term");
    if (c == 0) return;
    auto [it, inserted] = terms_.try_emplace(Monomial{a, b}, c);
    if (!inserted) {
        it->second += c;
        if (it->second == 0) terms_.erase(it);
    }
}

std::vector<Monomial> BivarPoly::support() const {
    std::vector<Monomial> out;
    out.reserve(terms_.size());
    for (const auto& [m, c] : terms_) out.push_back(m);
    return out;
}

int BivarPoly::total_degree() const {
    int d = 0;
    for (const auto& [m, c] : terms_) d = std::max(d, m.x + m.y);
    return d;
}

int BivarPoly::degree_x() const {
    int d = 0;
    for (const auto& [m, c] : terms_) d = std::max(d, m.x);
    return d;
}

int BivarPoly::degree_y() const {
    int d = 0;
    for (const auto& [m, c] : terms_) d = std::max(d, m.y);
    return d;
}

BivarPoly& BivarPoly::operator+=(const BivarPoly& rhs) {
    for (const auto& [m, c] : rhs.terms_) add_term(m.x, m.y, c);
    return *this;
}

BivarPoly& BivarPoly::operator-=(const BivarPoly& rhs) {
    for (const auto& [m, c] : rhs.terms_) add_term(m.x, m.y, -c);
    return *this;
}

BivarPoly& BivarPoly::operator*=(const BivarPoly& rhs) {
    BivarPoly out;
    for (const auto& [m1, c1] : terms_) {
        for (const auto& [m2, c2] : rhs.terms_) {
            out.add_term(m1.x + m2.x, m1.y + m2.y, c1 * c2);
        }
    }
    *this = std::move(out);
    return *this;
}

BivarPoly& BivarPoly::operator*=(const Rational& c) {
    if (c == 0) {
        terms_.clear();
        return *this;
    }
    for (auto& [m, coeff] : terms_) coeff *= c;
    return *this;
}

BivarPoly BivarPoly::operator-() const {
    BivarPoly out = *this;
    for (auto& [m, c] : out.terms_) c = -c;
    return out;
}

BivarPoly BivarPoly::pow(unsigned exponent) const {
    BivarPoly result(Rational(1));
    BivarPoly base = *this;
    while (exponent != 0) {
        if (exponent & 1U) result *= base;
        exponent >>= 1U;
        if (exponent != 0) base *= base;
    }
    return result;
}

// --- parsing ---------------------------------------------------------------

namespace {

constexpr unsigned kMaxExponent = 256;

class Parser {
public:
    explicit Parser(std::string_view text) : text_(text) {}

    BivarPoly parse() {
        BivarPoly p = expr();
        skip_ws();
        if (pos_ != text_.size()) fail("unexpected character '" + std::string(1, text_[pos_]) + "'");
        return p;
    }

private:
    std::string_view text_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& what) const { throw SyntaxError(pos_, what); }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool accept(char c) {
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    // A term preceded by any number of unary signs.
    BivarPoly signed_term() {
        bool negate = false;
        for (;;) {
            if (accept('-')) {
                negate = !negate;
            } else if (accept('+')) {
                // unary plus is harmless
            } else {
                break;
            }
        }
        BivarPoly t = term();
        return negate ? -t : t;
    }

    BivarPoly expr() {
        BivarPoly acc = signed_term();
        for (;;) {
            if (accept('+')) {
                acc += signed_term();
            } else if (accept('-')) {
                acc -= signed_term();
            } else {
                return acc;
            }
        }
    }

    BivarPoly term() {
        BivarPoly acc = factor();
        for (;;) {
            if (accept('*')) {
                acc *= factor();
            } else if (accept('/')) {
                const std::size_t at = pos_;
                BivarPoly d = factor();
                if (d.is_zero()) throw SyntaxError(at, "division by zero");
                if (d.size() != 1 || d.terms().begin()->first != Monomial{0, 0}) {
                    throw SyntaxError(at, "division by a non-constant");
                }
                acc *= Rational(1) / d.terms().begin()->second;
            } else {
                return acc;
            }
        }
    }

    BivarPoly factor() {
        BivarPoly b = base();
        if (accept('^')) b = b.pow(exponent());
        return b;
    }

    unsigned exponent() {
        const bool paren = accept('(');
        skip_ws();
        const std::size_t at = pos_;
        if (accept('-')) throw NegativeExponent(at);
        skip_ws();
        if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
            fail("expected exponent");
        }
        unsigned long value = 0;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
            value = value * 10 + static_cast<unsigned long>(text_[pos_] - '0');
            if (value > kMaxExponent) throw SyntaxError(at, "exponent too large");
            ++pos_;
        }
        if (paren && !accept(')')) fail("expected ')'");
        return static_cast<unsigned>(value);
    }

    BivarPoly base() {
        skip_ws();
        if (pos_ >= text_.size()) fail("unexpected end of input");
        const char c = text_[pos_];
        if (c == 'x') {
            ++pos_;
            return BivarPoly::x();
        }
        if (c == 'y') {
            ++pos_;
            return BivarPoly::y();
        }
        if (c == '(') {
            ++pos_;
            BivarPoly inner = expr();
            if (!accept(')')) fail("expected ')'");
            return inner;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            const std::size_t start = pos_;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
            mpz_class value(std::string(text_.substr(start, pos_ - start)));
            return BivarPoly(Rational(value));
        }
        fail("unexpected character '" + std::string(1, c) + "'");
    }
};

}  // namespace

BivarPoly parse_poly(std::string_view text) { return Parser(text).parse(); }

std::string render(const BivarPoly& p) {
    if (p.is_zero()) return "0";
    std::string out;
    bool first = true;
    for (const auto& [m, c] : p.terms()) {
        const bool negative = c < 0;
        if (first) {
            if (negative) out += "-";
        } else {
            out += negative ? " - " : " + ";
        }
        first = false;
        const Rational mag = abs(c);
        std::string body;
        auto append = [&body](const std::string& piece) {
            if (!body.empty()) body += "*";
            body += piece;
        };
        const bool constant = m.x == 0 && m.y == 0;
        if (mag != 1 || constant) append(to_string(mag));
        if (m.x == 1) append("x");
        if (m.x > 1) append("x^" + std::to_string(m.x));
        if (m.y == 1) append("y");
        if (m.y > 1) append("y^" + std::to_string(m.y));
        out += body;
    }
    return out;
}

// --- calculus --------------------------------------------------------------

BivarPoly mixed_derivative(const BivarPoly& p) {
    BivarPoly out;
    for (const auto& [m, c] : p.terms()) {
        if (m.x >= 1 && m.y >= 1) out.add_term(m.x - 1, m.y - 1, c * m.x * m.y);
    }
    return out;
}

BivarPoly derivative_x(const BivarPoly& p) {
    BivarPoly out;
    for (const auto& [m, c] : p.terms()) {
        if (m.x >= 1) out.add_term(m.x - 1, m.y, c * m.x);
    }
    return out;
}

BivarPoly derivative_y(const BivarPoly& p) {
    BivarPoly out;
    for (const auto& [m, c] : p.terms()) {
        if (m.y >= 1) out.add_term(m.x, m.y - 1, c * m.y);
    }
    return out;
}

BivarPoly mixed_antiderivative(const BivarPoly& f) {
    BivarPoly out;
    for (const auto& [m, c] : f.terms()) {
        out.add_term(m.x + 1, m.y + 1, c / Rational((m.x + 1) * (m.y + 1)));
    }
    return out;
}

// --- evaluation ------------------------------------------------------------

Rational eval_exact(const BivarPoly& p, const Rational& x, const Rational& y) {
    if (p.is_zero()) return 0;
    // Horner in y over slices; each slice is Horner in x.
    const int dy = p.degree_y();
    std::vector<std::vector<std::pair<int, Rational>>> slices(static_cast<std::size_t>(dy) + 1);
    for (const auto& [m, c] : p.terms()) slices[static_cast<std::size_t>(m.y)].emplace_back(m.x, c);

    Rational acc = 0;
    for (int b = dy; b >= 0; --b) {
        Rational slice = 0;
        const auto& s = slices[static_cast<std::size_t>(b)];
        int top = 0;
        for (const auto& [a, c] : s) top = std::max(top, a);
        std::vector<Rational> dense(static_cast<std::size_t>(top) + 1, Rational(0));
        for (const auto& [a, c] : s) dense[static_cast<std::size_t>(a)] = c;
        for (int a = top; a >= 0; --a) slice = slice * x + dense[static_cast<std::size_t>(a)];
        acc = acc * y + slice;
    }
    return acc;
}

double eval_poly(const BivarPoly& p, double x, double y) {
    if (p.is_zero()) return 0.0;
    const Rational value = eval_exact(p, Rational(x), Rational(y));
    // mpq_get_d truncates; round to nearest by comparing the two neighbours.
    const double t = value.get_d();
    const double up = std::nextafter(t, value > 0 ? HUGE_VAL : -HUGE_VAL);
    const Rational err_t = abs(value - Rational(t));
    if (!std::isfinite(up)) return t;
    const Rational err_up = abs(value - Rational(up));
    return err_up < err_t ? up : t;
}

PolyEvaluator::PolyEvaluator(const BivarPoly& p) {
    if (p.is_zero()) return;
    by_y_.resize(static_cast<std::size_t>(p.degree_y()) + 1);
    for (const auto& [m, c] : p.terms()) {
        auto& slice = by_y_[static_cast<std::size_t>(m.y)];
        if (slice.size() <= static_cast<std::size_t>(m.x)) slice.resize(static_cast<std::size_t>(m.x) + 1, 0.0);
        slice[static_cast<std::size_t>(m.x)] = c.get_d();
    }
}

namespace {

template <class X>
X horner(const std::vector<double>& coeffs, X x) {
    X acc{};
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * x + *it;
    return acc;
}

template <class X, class Y>
auto eval_slices(const std::vector<std::vector<double>>& by_y, X x, Y y) {
    using R = decltype(X{} * Y{});
    R acc{};
    for (auto it = by_y.rbegin(); it != by_y.rend(); ++it) acc = acc * y + R(horner(*it, x));
    return acc;
}

}  // namespace

double PolyEvaluator::operator()(double x, double y) const { return eval_slices(by_y_, x, y); }

std::complex<double> PolyEvaluator::operator()(double x, std::complex<double> y) const {
    return eval_slices(by_y_, x, y);
}

std::complex<double> PolyEvaluator::operator()(std::complex<double> x, std::complex<double> y) const {
    std::complex<double> acc{};
    for (auto it = by_y_.rbegin(); it != by_y_.rend(); ++it) {
        std::complex<double> slice{};
        for (auto c = it->rbegin(); c != it->rend(); ++c) slice = slice * x + *c;
        acc = acc * y + slice;
    }
    return acc;
}

double PolyEvaluator::magnitude(double x, double y) const {
    double acc = 0.0;
    const double ax = std::abs(x);
    const double ay = std::abs(y);
    for (auto it = by_y_.rbegin(); it != by_y_.rend(); ++it) {
        double slice = 0.0;
        for (auto c = it->rbegin(); c != it->rend(); ++c) slice = slice * ax + std::abs(*c);
        acc = acc * ay + slice;
    }
    return acc;
}

double PolyEvaluator::magnitude(double x, std::complex<double> y) const {
    return magnitude(x, std::abs(y));
}

void PolyEvaluator::row_coefficients(double x, std::vector<double>& out) const {
    out.resize(by_y_.size());
    for (std::size_t b = 0; b < by_y_.size(); ++b) out[b] = horner(by_y_[b], x);
}

// --- Puiseux series --------------------------------------------------------

std::complex<double> eval_branch(const PuiseuxBranch& b, double x) {
    if (!(x > 0.0)) throw DomainError("eval_branch requires x > 0");
    std::complex<double> acc{};
    const double lx = std::log(x);
    for (const auto& t : b.terms) acc += t.coefficient * std::exp(t.exponent.get_d() * lx);
    return acc;
}

const char* to_string(Reality r) {
    switch (r) {
        case Reality::Real: return "Real";
        case Reality::ComplexPair: return "ComplexPair";
    }
    return "?";
}

const char* to_string(BranchStatus s) {
    switch (s) {
        case BranchStatus::Exact: return "Exact";
        case BranchStatus::Truncated: return "Truncated";
        case BranchStatus::UndeterminedSplit: return "UndeterminedSplit";
    }
    return "?";
}

}  // namespace newtonosc
