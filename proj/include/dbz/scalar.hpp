#pragma once

// Exact rational / complex-rational arithmetic, the MPFR-backed float mode,
// and the tagged Scalar that every series coefficient is stored as.

#include <compare>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>

#include <gmpxx.h>
#include <mpfr.h>

#include "dbz/error.hpp"

namespace dbz {

enum class Mode { Exact, Float };

std::string_view mode_name(Mode m) noexcept;
Mode parse_mode(std::string_view text);

inline constexpr long kDefaultPrecision = 128;
inline constexpr long kMinPrecision = 53;

// ---------------------------------------------------------------------------
// Rational

/// Normalized fraction over arbitrary-precision integers. Division is partial:
/// dividing by zero throws DivisionByZero. Totalized division lives in
/// dbz/yamada.hpp.
class Rational {
public:
    Rational() = default;
    Rational(long value) : q_(value) {}  // NOLINT(google-explicit-constructor)
    Rational(long num, long den);
    Rational(const mpz_class& num, const mpz_class& den);
    explicit Rational(mpq_class q);

    /// Accepts "p", "p/q", and decimal fractions such as "-0.25".
    static Rational parse(std::string_view text);

    mpz_class numerator() const { return q_.get_num(); }
    mpz_class denominator() const { return q_.get_den(); }
    const mpq_class& raw() const noexcept { return q_; }

    bool is_zero() const noexcept { return sgn(q_) == 0; }
    bool is_integer() const { return q_.get_den() == 1; }
    int sign() const noexcept { return sgn(q_); }

    Rational operator-() const { return Rational(mpq_class(-q_)); }
    friend Rational operator+(const Rational& a, const Rational& b) { return Rational(mpq_class(a.q_ + b.q_)); }
    friend Rational operator-(const Rational& a, const Rational& b) { return Rational(mpq_class(a.q_ - b.q_)); }
    friend Rational operator*(const Rational& a, const Rational& b) { return Rational(mpq_class(a.q_ * b.q_)); }
    friend Rational operator/(const Rational& a, const Rational& b);
    Rational& operator+=(const Rational& o) { q_ += o.q_; return *this; }
    Rational& operator-=(const Rational& o) { q_ -= o.q_; return *this; }
    Rational& operator*=(const Rational& o) { q_ *= o.q_; return *this; }
    Rational& operator/=(const Rational& o) { return *this = *this / o; }

    friend bool operator==(const Rational& a, const Rational& b) { return a.q_ == b.q_; }
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
        int c = cmp(a.q_, b.q_);
        return c < 0 ? std::strong_ordering::less
                     : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
    }

    Rational abs() const { return Rational(mpq_class(::abs(q_))); }
    /// Integer power; negative exponents invert (DivisionByZero on 0).
    Rational pow(long exponent) const;

    /// "p" or "p/q".
    std::string str() const;

private:
    mpq_class q_;
};

enum class ArithOp { Add, Sub, Mul, Div };
Rational rat_arith(const Rational& a, const Rational& b, ArithOp op);

/// Exact q-th root, or nullopt when it is irrational.
/// Throws NegativeEvenRoot for x < 0 with even q.
std::optional<Rational> nth_root_exact(const Rational& x, long q);

// ---------------------------------------------------------------------------
// ComplexRational

struct ComplexRational {
    Rational re;
    Rational im;

    ComplexRational() = default;
    ComplexRational(Rational r) : re(std::move(r)) {}  // NOLINT(google-explicit-constructor)
    ComplexRational(long r) : re(r) {}                 // NOLINT(google-explicit-constructor)
    ComplexRational(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {}

    bool is_zero() const noexcept { return re.is_zero() && im.is_zero(); }
    bool is_real() const noexcept { return im.is_zero(); }
    ComplexRational conj() const { return {re, -im}; }
    Rational norm() const { return re * re + im * im; }

    ComplexRational operator-() const { return {-re, -im}; }
    friend ComplexRational operator+(const ComplexRational& a, const ComplexRational& b) {
        return {a.re + b.re, a.im + b.im};
    }
    friend ComplexRational operator-(const ComplexRational& a, const ComplexRational& b) {
        return {a.re - b.re, a.im - b.im};
    }
    friend ComplexRational operator*(const ComplexRational& a, const ComplexRational& b) {
        return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
    }
    friend ComplexRational operator/(const ComplexRational& a, const ComplexRational& b);
    friend bool operator==(const ComplexRational&, const ComplexRational&) = default;

    std::string str() const;
};

// ---------------------------------------------------------------------------
// Float mode

/// RAII handle on an mpfr_t. Results of binary operations carry the larger
/// of the two operand precisions; rounding is to nearest.
class BigFloat {
public:
    explicit BigFloat(long precision = kDefaultPrecision);
    BigFloat(const Rational& value, long precision);
    BigFloat(double value, long precision);
    BigFloat(const BigFloat& other);
    BigFloat(BigFloat&& other) noexcept;
    BigFloat& operator=(const BigFloat& other);
    BigFloat& operator=(BigFloat&& other) noexcept;
    ~BigFloat();

    static BigFloat pi(long precision);
    /// Parses a decimal or hex-float string at the given precision.
    static BigFloat parse(std::string_view text, long precision);

    long precision() const noexcept { return static_cast<long>(mpfr_get_prec(v_)); }
    mpfr_srcptr get() const noexcept { return v_; }
    mpfr_ptr get() noexcept { return v_; }

    bool is_zero() const noexcept { return mpfr_zero_p(v_) != 0; }
    int sign() const noexcept { return mpfr_sgn(v_); }
    double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }

    BigFloat operator-() const;
    friend BigFloat operator+(const BigFloat& a, const BigFloat& b);
    friend BigFloat operator-(const BigFloat& a, const BigFloat& b);
    friend BigFloat operator*(const BigFloat& a, const BigFloat& b);
    friend BigFloat operator/(const BigFloat& a, const BigFloat& b);
    friend bool operator==(const BigFloat& a, const BigFloat& b) { return mpfr_equal_p(a.v_, b.v_) != 0; }
    friend bool operator<(const BigFloat& a, const BigFloat& b) { return mpfr_less_p(a.v_, b.v_) != 0; }

    BigFloat abs() const;
    BigFloat sqrt() const;
    BigFloat sin() const;
    BigFloat cos() const;
    BigFloat sinh() const;
    BigFloat cosh() const;
    BigFloat exp() const;
    BigFloat log() const;
    static BigFloat atan2(const BigFloat& y, const BigFloat& x);
    static BigFloat hypot(const BigFloat& a, const BigFloat& b);

    /// Shortest decimal string that reads back to the same value at this
    /// precision.
    std::string str() const;
    /// C99-style hex float, e.g. "0x1.8p+1".
    std::string hex() const;

private:
    mpfr_t v_;
};

struct BigFloatComplex {
    BigFloat re;
    BigFloat im;

    explicit BigFloatComplex(long precision = kDefaultPrecision) : re(precision), im(precision) {}
    BigFloatComplex(BigFloat r, BigFloat i);
    BigFloatComplex(const ComplexRational& value, long precision)
        : re(value.re, precision), im(value.im, precision) {}

    long precision() const noexcept { return re.precision(); }
    bool is_zero() const noexcept { return re.is_zero() && im.is_zero(); }
    BigFloatComplex conj() const { return {re, -im}; }
    BigFloat abs() const { return BigFloat::hypot(re, im); }
    BigFloat arg() const { return BigFloat::atan2(im, re); }

    BigFloatComplex operator-() const { return {-re, -im}; }
    friend BigFloatComplex operator+(const BigFloatComplex& a, const BigFloatComplex& b);
    friend BigFloatComplex operator-(const BigFloatComplex& a, const BigFloatComplex& b);
    friend BigFloatComplex operator*(const BigFloatComplex& a, const BigFloatComplex& b);
    /// Throws DivisionByZero on a zero divisor.
    friend BigFloatComplex operator/(const BigFloatComplex& a, const BigFloatComplex& b);
    friend bool operator==(const BigFloatComplex& a, const BigFloatComplex& b) {
        return a.re == b.re && a.im == b.im;
    }

    // Principal branches throughout.
    BigFloatComplex exp() const;
    BigFloatComplex log() const;
    BigFloatComplex sqrt() const;
    BigFloatComplex sin() const;
    BigFloatComplex cos() const;
    BigFloatComplex pow(const Rational& exponent) const;

    std::string str() const;
};

// ---------------------------------------------------------------------------
// Scalar

/// Either an exact complex rational or a float complex. Binary operations
/// require both operands in the same mode (ModeMismatch otherwise); moving
/// from exact to float is always an explicit `to_float` call.
class Scalar {
public:
    Scalar() : v_(ComplexRational{}) {}
    Scalar(long value) : v_(ComplexRational(value)) {}            // NOLINT(google-explicit-constructor)
    Scalar(Rational value) : v_(ComplexRational(std::move(value))) {}  // NOLINT(google-explicit-constructor)
    Scalar(ComplexRational value) : v_(std::move(value)) {}       // NOLINT(google-explicit-constructor)
    Scalar(BigFloatComplex value) : v_(std::move(value)) {}       // NOLINT(google-explicit-constructor)

    /// The zero of the given mode.
    static Scalar zero(Mode mode, long precision = kDefaultPrecision);
    static Scalar one(Mode mode, long precision = kDefaultPrecision);
    /// `value` lifted into `mode`.
    static Scalar from(const ComplexRational& value, Mode mode, long precision = kDefaultPrecision);

    Mode mode() const noexcept { return is_exact() ? Mode::Exact : Mode::Float; }
    bool is_exact() const noexcept { return std::holds_alternative<ComplexRational>(v_); }
    long precision() const noexcept;

    const ComplexRational& exact() const;
    const BigFloatComplex& floating() const;

    bool is_zero() const noexcept;
    bool is_real() const;
    /// Real rational value, if this is exact with zero imaginary part.
    std::optional<Rational> as_rational() const;

    Scalar to_float(long precision) const;
    Scalar conj() const;
    Scalar real() const;
    Scalar imag() const;
    /// |z|^2
    Scalar norm() const;
    static Scalar i(Mode mode, long precision = kDefaultPrecision);

    Scalar operator-() const;
    friend Scalar operator+(const Scalar& a, const Scalar& b);
    friend Scalar operator-(const Scalar& a, const Scalar& b);
    friend Scalar operator*(const Scalar& a, const Scalar& b);
    /// Partial: throws DivisionByZero.
    friend Scalar operator/(const Scalar& a, const Scalar& b);
    Scalar& operator+=(const Scalar& o) { return *this = *this + o; }
    Scalar& operator-=(const Scalar& o) { return *this = *this - o; }
    Scalar& operator*=(const Scalar& o) { return *this = *this * o; }

    /// Same mode and identical value.
    friend bool operator==(const Scalar& a, const Scalar& b);

    std::string str() const;
    /// Inverse of `str` for the given mode.
    static Scalar parse(std::string_view text, Mode mode, long precision = kDefaultPrecision);

private:
    std::variant<ComplexRational, BigFloatComplex> v_;
};

/// Exact (sin rπ, cos rπ) when both are rational, i.e. when r mod 2 is a
/// multiple of 1/2. Everything else declines (nullopt), prompting float mode.
std::optional<std::pair<Rational, Rational>> sincos_exact(const Rational& r);

/// Single-value tables: sin(rπ) is rational for r mod 2 with denominator in
/// {1,2,6}; cos(rπ) for denominator in {1,2,3}.
std::optional<Rational> sin_pi_exact(const Rational& r);
std::optional<Rational> cos_pi_exact(const Rational& r);

/// sin(rπ), cos(rπ) in float mode, using the exact table when it applies.
std::pair<BigFloat, BigFloat> sincos_pi(const Rational& r, long precision);

}  // namespace dbz
