#include "dbz/scalar.hpp"

#include <algorithm>
#include <cctype>
#include <memory>
#include <vector>

namespace dbz {

std::string_view mode_name(Mode m) noexcept { return m == Mode::Exact ? "exact" : "float"; }

Mode parse_mode(std::string_view text) {
    if (text == "exact") return Mode::Exact;
    if (text == "float") return Mode::Float;
    throw Error(ErrorCode::InvalidArgument, "unknown mode '" + std::string(text) + "'");
}

// ---------------------------------------------------------------------------
// Rational

Rational::Rational(long num, long den) : Rational(mpz_class(num), mpz_class(den)) {}

Rational::Rational(const mpz_class& num, const mpz_class& den) {
    if (den == 0) throw Error(ErrorCode::DivisionByZero, "rational with zero denominator");
    q_ = mpq_class(num, den);
    q_.canonicalize();
}

Rational::Rational(mpq_class q) : q_(std::move(q)) { q_.canonicalize(); }

namespace {

bool all_digits(std::string_view s) {
    return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c) != 0; });
}

[[noreturn]] void bad_rational(std::string_view text) {
    throw Error(ErrorCode::InvalidArgument, "malformed rational '" + std::string(text) + "'");
}

}  // namespace

Rational Rational::parse(std::string_view text) {
    std::string_view body = text;
    bool negative = false;
    if (!body.empty() && (body.front() == '-' || body.front() == '+')) {
        negative = body.front() == '-';
        body.remove_prefix(1);
    }
    Rational value;
    if (auto slash = body.find('/'); slash != std::string_view::npos) {
        auto num = body.substr(0, slash);
        auto den = body.substr(slash + 1);
        if (!all_digits(num) || !all_digits(den)) bad_rational(text);
        mpz_class d(std::string(den), 10);
        if (d == 0) throw Error(ErrorCode::DivisionByZero, "rational with zero denominator");
        value = Rational(mpz_class(std::string(num), 10), d);
    } else if (auto dot = body.find('.'); dot != std::string_view::npos) {
        auto whole = body.substr(0, dot);
        auto frac = body.substr(dot + 1);
        if (!all_digits(whole) || !all_digits(frac)) bad_rational(text);
        mpz_class scale;
        mpz_ui_pow_ui(scale.get_mpz_t(), 10, frac.size());
        value = Rational(mpz_class(std::string(whole) + std::string(frac), 10), scale);
    } else {
        if (!all_digits(body)) bad_rational(text);
        value = Rational(mpz_class(std::string(body), 10), mpz_class(1));
    }
    return negative ? -value : value;
}

Rational operator/(const Rational& a, const Rational& b) {
    if (b.is_zero()) throw Error(ErrorCode::DivisionByZero, "rational division by zero");
    return Rational(mpq_class(a.q_ / b.q_));
}

Rational Rational::pow(long exponent) const {
    if (exponent < 0) return Rational(1) / pow(-exponent);
    mpz_class num, den;
    mpz_pow_ui(num.get_mpz_t(), q_.get_num_mpz_t(), static_cast<unsigned long>(exponent));
    mpz_pow_ui(den.get_mpz_t(), q_.get_den_mpz_t(), static_cast<unsigned long>(exponent));
    return Rational(num, den);
}

std::string Rational::str() const {
    if (q_.get_den() == 1) return q_.get_num().get_str();
    return q_.get_num().get_str() + "/" + q_.get_den().get_str();
}

Rational rat_arith(const Rational& a, const Rational& b, ArithOp op) {
    switch (op) {
        case ArithOp::Add: return a + b;
        case ArithOp::Sub: return a - b;
        case ArithOp::Mul: return a * b;
        case ArithOp::Div: return a / b;
    }
    return {};
}

std::optional<Rational> nth_root_exact(const Rational& x, long q) {
    if (q < 1) throw Error(ErrorCode::InvalidArgument, "root index must be positive");
    if (x.sign() < 0 && q % 2 == 0) throw Error(ErrorCode::NegativeEvenRoot, "even root of " + x.str());
    if (q == 1) return x;
    auto exact_root = [q](const mpz_class& n) -> std::optional<mpz_class> {
        mpz_class r;
        if (mpz_root(r.get_mpz_t(), n.get_mpz_t(), static_cast<unsigned long>(q)) == 0) return std::nullopt;
        return r;
    };
    mpz_class num = abs(x.numerator());
    auto rn = exact_root(num);
    auto rd = exact_root(x.denominator());
    if (!rn || !rd) return std::nullopt;
    Rational root(*rn, *rd);
    return x.sign() < 0 ? -root : root;
}

// ---------------------------------------------------------------------------
// ComplexRational

ComplexRational operator/(const ComplexRational& a, const ComplexRational& b) {
    if (b.is_zero()) throw Error(ErrorCode::DivisionByZero, "complex division by zero");
    if (b.is_real()) return {a.re / b.re, a.im / b.re};
    Rational n = b.norm();
    return {(a.re * b.re + a.im * b.im) / n, (a.im * b.re - a.re * b.im) / n};
}

namespace {

template <class T>
std::string complex_str(const T& re, const T& im, bool re_zero, bool im_zero, int im_sign) {
    if (im_zero) return re.str();
    if (re_zero) return im.str() + "i";
    std::string out = re.str();
    out += im_sign < 0 ? "-" : "+";
    out += im.abs().str();
    out += "i";
    return out;
}

}  // namespace

std::string ComplexRational::str() const {
    return complex_str(re, im, re.is_zero(), im.is_zero(), im.sign());
}

// ---------------------------------------------------------------------------
// BigFloat

namespace {

constexpr mpfr_rnd_t kRnd = MPFR_RNDN;

long checked_precision(long precision) {
    if (precision < kMinPrecision || precision > MPFR_PREC_MAX)
        throw Error(ErrorCode::InvalidArgument, "precision must be at least 53 bits");
    return precision;
}

}  // namespace

BigFloat::BigFloat(long precision) {
    mpfr_init2(v_, checked_precision(precision));
    mpfr_set_zero(v_, 1);
}

BigFloat::BigFloat(const Rational& value, long precision) {
    mpfr_init2(v_, checked_precision(precision));
    mpfr_set_q(v_, value.raw().get_mpq_t(), kRnd);
}

BigFloat::BigFloat(double value, long precision) {
    mpfr_init2(v_, checked_precision(precision));
    mpfr_set_d(v_, value, kRnd);
}

BigFloat::BigFloat(const BigFloat& other) {
    mpfr_init2(v_, mpfr_get_prec(other.v_));
    mpfr_set(v_, other.v_, kRnd);
}

BigFloat::BigFloat(BigFloat&& other) noexcept {
    mpfr_init2(v_, mpfr_get_prec(other.v_));
    mpfr_swap(v_, other.v_);
}

BigFloat& BigFloat::operator=(const BigFloat& other) {
    if (this != &other) {
        mpfr_set_prec(v_, mpfr_get_prec(other.v_));
        mpfr_set(v_, other.v_, kRnd);
    }
    return *this;
}

BigFloat& BigFloat::operator=(BigFloat&& other) noexcept {
    mpfr_swap(v_, other.v_);
    return *this;
}

BigFloat::~BigFloat() { mpfr_clear(v_); }

BigFloat BigFloat::pi(long precision) {
    BigFloat out(precision);
    mpfr_const_pi(out.v_, kRnd);
    return out;
}

BigFloat BigFloat::parse(std::string_view text, long precision) {
    BigFloat out(precision);
    std::string s(text);
    if (s.empty() || mpfr_set_str(out.v_, s.c_str(), 0, kRnd) != 0)
        throw Error(ErrorCode::InvalidArgument, "malformed float '" + s + "'");
    return out;
}

namespace {

using UnaryFn = int (*)(mpfr_ptr, mpfr_srcptr, mpfr_rnd_t);
using BinaryFn = int (*)(mpfr_ptr, mpfr_srcptr, mpfr_srcptr, mpfr_rnd_t);

BigFloat apply(const BigFloat& a, UnaryFn fn) {
    BigFloat out(a.precision());
    fn(out.get(), a.get(), kRnd);
    return out;
}

BigFloat apply(const BigFloat& a, const BigFloat& b, BinaryFn fn) {
    BigFloat out(std::max(a.precision(), b.precision()));
    fn(out.get(), a.get(), b.get(), kRnd);
    return out;
}

}  // namespace

BigFloat BigFloat::operator-() const { return apply(*this, mpfr_neg); }
BigFloat operator+(const BigFloat& a, const BigFloat& b) { return apply(a, b, mpfr_add); }
BigFloat operator-(const BigFloat& a, const BigFloat& b) { return apply(a, b, mpfr_sub); }
BigFloat operator*(const BigFloat& a, const BigFloat& b) { return apply(a, b, mpfr_mul); }
BigFloat operator/(const BigFloat& a, const BigFloat& b) {
    if (b.is_zero()) throw Error(ErrorCode::DivisionByZero, "float division by zero");
    return apply(a, b, mpfr_div);
}
BigFloat BigFloat::abs() const { return apply(*this, mpfr_abs); }
BigFloat BigFloat::sqrt() const { return apply(*this, mpfr_sqrt); }
BigFloat BigFloat::sin() const { return apply(*this, mpfr_sin); }
BigFloat BigFloat::cos() const { return apply(*this, mpfr_cos); }
BigFloat BigFloat::sinh() const { return apply(*this, mpfr_sinh); }
BigFloat BigFloat::cosh() const { return apply(*this, mpfr_cosh); }
BigFloat BigFloat::exp() const { return apply(*this, mpfr_exp); }
BigFloat BigFloat::log() const { return apply(*this, mpfr_log); }
BigFloat BigFloat::atan2(const BigFloat& y, const BigFloat& x) { return apply(y, x, mpfr_atan2); }
BigFloat BigFloat::hypot(const BigFloat& a, const BigFloat& b) { return apply(a, b, mpfr_hypot); }

std::string BigFloat::str() const {
    if (mpfr_nan_p(v_)) return "nan";
    if (mpfr_inf_p(v_)) return mpfr_sgn(v_) < 0 ? "-inf" : "inf";
    if (mpfr_zero_p(v_)) return "0";

    const auto max_digits = mpfr_get_str_ndigits(10, mpfr_get_prec(v_));
    std::string digits;
    mpfr_exp_t exp10 = 0;
    BigFloat probe(precision());
    for (std::size_t n = 1; n <= max_digits; ++n) {
        char* raw = mpfr_get_str(nullptr, &exp10, 10, n, v_, kRnd);
        digits = raw;
        mpfr_free_str(raw);
        std::string sci = digits + "e" + std::to_string(static_cast<long>(exp10) - static_cast<long>(n));
        mpfr_set_str(probe.v_, sci.c_str(), 10, kRnd);
        if (mpfr_equal_p(probe.v_, v_)) break;
    }

    bool negative = digits.front() == '-';
    if (negative) digits.erase(0, 1);
    while (digits.size() > 1 && digits.back() == '0') digits.pop_back();
    // value = 0.d1d2d3... * 10^exp10
    const long e = static_cast<long>(exp10);
    const long n = static_cast<long>(digits.size());
    std::string out;
    if (e > 0 && e <= 21) {
        if (n <= e) {
            out = digits + std::string(static_cast<std::size_t>(e - n), '0');
        } else {
            out = digits.substr(0, static_cast<std::size_t>(e)) + "." + digits.substr(static_cast<std::size_t>(e));
        }
    } else if (e <= 0 && e > -6) {
        out = "0." + std::string(static_cast<std::size_t>(-e), '0') + digits;
    } else {
        out = digits.substr(0, 1);
        if (n > 1) out += "." + digits.substr(1);
        out += "e" + std::to_string(e - 1);
    }
    return negative ? "-" + out : out;
}

std::string BigFloat::hex() const {
    if (mpfr_nan_p(v_) || mpfr_inf_p(v_)) throw Error(ErrorCode::InvalidArgument, "hex formatting of a non-finite value");
    if (is_zero()) return mpfr_signbit(v_) ? "-0x0p+0" : "0x0p+0";
    mpz_class m;
    long e = mpfr_get_z_2exp(m.get_mpz_t(), v_);
    std::string out = m < 0 ? "-0x1" : "0x1";
    if (m < 0) m = -m;
    const long bits = static_cast<long>(mpz_sizeinbase(m.get_mpz_t(), 2));
    e += bits - 1;
    long frac_bits = bits - 1;
    if (frac_bits > 0) {
        mpz_class frac = m - (mpz_class(1) << frac_bits);
        const long pad = (4 - frac_bits % 4) % 4;
        frac <<= pad;
        std::string digits = frac.get_str(16);
        digits.insert(0, static_cast<std::size_t>((frac_bits + pad) / 4) - digits.size(), '0');
        while (!digits.empty() && digits.back() == '0') digits.pop_back();
        if (!digits.empty()) out += "." + digits;
    }
    return out + "p" + (e >= 0 ? "+" : "") + std::to_string(e);
}

// ---------------------------------------------------------------------------
// BigFloatComplex

BigFloatComplex::BigFloatComplex(BigFloat r, BigFloat i) : re(std::move(r)), im(std::move(i)) {
    if (re.precision() != im.precision()) {
        long p = std::max(re.precision(), im.precision());
        BigFloat r2(p), i2(p);
        mpfr_set(r2.get(), re.get(), kRnd);
        mpfr_set(i2.get(), im.get(), kRnd);
        re = std::move(r2);
        im = std::move(i2);
    }
}

BigFloatComplex operator+(const BigFloatComplex& a, const BigFloatComplex& b) { return {a.re + b.re, a.im + b.im}; }
BigFloatComplex operator-(const BigFloatComplex& a, const BigFloatComplex& b) { return {a.re - b.re, a.im - b.im}; }
BigFloatComplex operator*(const BigFloatComplex& a, const BigFloatComplex& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}
BigFloatComplex operator/(const BigFloatComplex& a, const BigFloatComplex& b) {
    if (b.is_zero()) throw Error(ErrorCode::DivisionByZero, "complex division by zero");
    if (b.im.is_zero()) return {a.re / b.re, a.im / b.re};
    BigFloat n = b.re * b.re + b.im * b.im;
    return {(a.re * b.re + a.im * b.im) / n, (a.im * b.re - a.re * b.im) / n};
}

BigFloatComplex BigFloatComplex::exp() const {
    BigFloat m = re.exp();
    return {m * im.cos(), m * im.sin()};
}

BigFloatComplex BigFloatComplex::log() const {
    if (is_zero()) throw Error(ErrorCode::BranchPoint, "log of zero");
    return {abs().log(), arg()};
}

BigFloatComplex BigFloatComplex::sqrt() const {
    if (is_zero()) return BigFloatComplex(precision());
    BigFloat r = abs();
    BigFloat two(2.0, precision());
    if (re.sign() >= 0) {
        BigFloat t = ((r + re) / two).sqrt();
        return {t, im / (two * t)};
    }
    BigFloat t = ((r - re) / two).sqrt();
    return {im.abs() / (two * t), im.sign() < 0 ? -t : t};
}

BigFloatComplex BigFloatComplex::sin() const {
    return {re.sin() * im.cosh(), re.cos() * im.sinh()};
}

BigFloatComplex BigFloatComplex::cos() const {
    return {re.cos() * im.cosh(), -(re.sin() * im.sinh())};
}

BigFloatComplex BigFloatComplex::pow(const Rational& exponent) const {
    const long p = precision();
    if (exponent.is_zero()) return {BigFloat(1.0, p), BigFloat(p)};
    if (is_zero()) {
        if (exponent.sign() < 0) throw Error(ErrorCode::DivisionByZero, "zero to a negative power");
        return BigFloatComplex(p);
    }
    if (exponent.is_integer() && exponent.abs() <= Rational(1L << 20)) {
        long n = exponent.abs().numerator().get_si();
        BigFloatComplex base = *this;
        BigFloatComplex acc{BigFloat(1.0, p), BigFloat(p)};
        while (n > 0) {
            if (n & 1) acc = acc * base;
            base = base * base;
            n >>= 1;
        }
        if (exponent.sign() < 0) return BigFloatComplex{BigFloat(1.0, p), BigFloat(p)} / acc;
        return acc;
    }
    BigFloatComplex l = log();
    BigFloat a(exponent, p);
    return BigFloatComplex{l.re * a, l.im * a}.exp();
}

std::string BigFloatComplex::str() const {
    return complex_str(re, im, re.is_zero(), im.is_zero(), im.sign());
}

// ---------------------------------------------------------------------------
// Scalar

Scalar Scalar::zero(Mode mode, long precision) {
    if (mode == Mode::Exact) return Scalar(ComplexRational{});
    return Scalar(BigFloatComplex(precision));
}

Scalar Scalar::one(Mode mode, long precision) { return from(ComplexRational(1), mode, precision); }

Scalar Scalar::from(const ComplexRational& value, Mode mode, long precision) {
    if (mode == Mode::Exact) return Scalar(value);
    return Scalar(BigFloatComplex(value, precision));
}

long Scalar::precision() const noexcept {
    if (auto* f = std::get_if<BigFloatComplex>(&v_)) return f->precision();
    return 0;
}

const ComplexRational& Scalar::exact() const {
    if (auto* e = std::get_if<ComplexRational>(&v_)) return *e;
    throw Error(ErrorCode::ModeMismatch, "float scalar where an exact one is required");
}

const BigFloatComplex& Scalar::floating() const {
    if (auto* f = std::get_if<BigFloatComplex>(&v_)) return *f;
    throw Error(ErrorCode::ModeMismatch, "exact scalar where a float one is required");
}

bool Scalar::is_zero() const noexcept {
    return std::visit([](const auto& v) { return v.is_zero(); }, v_);
}

bool Scalar::is_real() const {
    if (is_exact()) return exact().is_real();
    return floating().im.is_zero();
}

std::optional<Rational> Scalar::as_rational() const {
    if (auto* e = std::get_if<ComplexRational>(&v_); e && e->is_real()) return e->re;
    return std::nullopt;
}

Scalar Scalar::to_float(long precision) const {
    if (is_exact()) return Scalar(BigFloatComplex(exact(), precision));
    return *this;
}

Scalar Scalar::conj() const {
    return std::visit([](const auto& v) { return Scalar(v.conj()); }, v_);
}

Scalar Scalar::real() const {
    if (is_exact()) return Scalar(exact().re);
    return Scalar(BigFloatComplex(floating().re, BigFloat(precision())));
}

Scalar Scalar::imag() const {
    if (is_exact()) return Scalar(exact().im);
    return Scalar(BigFloatComplex(floating().im, BigFloat(precision())));
}

Scalar Scalar::norm() const {
    Scalar r = real(), m = imag();
    return r * r + m * m;
}

Scalar Scalar::i(Mode mode, long precision) { return from(ComplexRational(0, 1), mode, precision); }

Scalar Scalar::operator-() const {
    return std::visit([](const auto& v) { return Scalar(-v); }, v_);
}

namespace {

template <class Fn>
Scalar binary(const Scalar& a, const Scalar& b, Fn fn) {
    if (a.is_exact() != b.is_exact())
        throw Error(ErrorCode::ModeMismatch, "exact and float scalars mixed without promotion");
    if (a.is_exact()) return Scalar(fn(a.exact(), b.exact()));
    return Scalar(fn(a.floating(), b.floating()));
}

}  // namespace

Scalar operator+(const Scalar& a, const Scalar& b) {
    return binary(a, b, [](const auto& x, const auto& y) { return x + y; });
}
Scalar operator-(const Scalar& a, const Scalar& b) {
    return binary(a, b, [](const auto& x, const auto& y) { return x - y; });
}
Scalar operator*(const Scalar& a, const Scalar& b) {
    return binary(a, b, [](const auto& x, const auto& y) { return x * y; });
}
Scalar operator/(const Scalar& a, const Scalar& b) {
    return binary(a, b, [](const auto& x, const auto& y) { return x / y; });
}

bool operator==(const Scalar& a, const Scalar& b) {
    if (a.is_exact() != b.is_exact()) return false;
    if (a.is_exact()) return a.exact() == b.exact();
    return a.floating() == b.floating();
}

std::string Scalar::str() const {
    return std::visit([](const auto& v) { return v.str(); }, v_);
}

namespace {

// Index of the sign that separates the real and imaginary parts of "a+bi",
// skipping a leading sign and exponent signs ("1e-5", "0x1p-3").
std::size_t complex_split(std::string_view s) {
    for (std::size_t k = s.size() - 1; k > 0; --k) {
        if (s[k] != '+' && s[k] != '-') continue;
        char prev = s[k - 1];
        bool hex = s.find("0x") != std::string_view::npos || s.find("0X") != std::string_view::npos;
        if (prev == 'e' || prev == 'E' || ((prev == 'p' || prev == 'P') && hex)) continue;
        return k;
    }
    return std::string_view::npos;
}

}  // namespace

Scalar Scalar::parse(std::string_view text, Mode mode, long precision) {
    if (text.empty()) throw Error(ErrorCode::InvalidArgument, "empty scalar");
    auto real_part = [&](std::string_view t) -> Scalar {
        if (mode == Mode::Exact) return Scalar(Rational::parse(t));
        if (t.find('/') != std::string_view::npos)
            return Scalar(BigFloatComplex(BigFloat(Rational::parse(t), precision), BigFloat(precision)));
        return Scalar(BigFloatComplex(BigFloat::parse(t, precision), BigFloat(precision)));
    };
    if (text.back() != 'i') return real_part(text);
    std::string_view body = text.substr(0, text.size() - 1);
    std::size_t split = body.empty() ? std::string_view::npos : complex_split(body);
    std::string_view re_text = split == std::string_view::npos ? std::string_view{} : body.substr(0, split);
    std::string im_text(split == std::string_view::npos ? body : body.substr(split));
    if (im_text.empty() || im_text == "+" || im_text == "-") im_text += "1";
    if (im_text.front() == '+') im_text.erase(0, 1);
    Scalar re = re_text.empty() ? Scalar::zero(mode, precision) : real_part(re_text);
    Scalar im = real_part(im_text);
    Scalar unit = mode == Mode::Exact ? Scalar(ComplexRational(0, 1))
                                      : Scalar(BigFloatComplex(BigFloat(precision), BigFloat(1.0, precision)));
    return re + im * unit;
}

// ---------------------------------------------------------------------------
// Trig tables

namespace {

// r reduced into [0, 2).
Rational reduce_mod2(const Rational& r) {
    mpz_class two_den = r.denominator() * 2;
    mpz_class num = r.numerator() % two_den;
    if (num < 0) num += two_den;
    return Rational(num, r.denominator());
}

}  // namespace

std::optional<Rational> sin_pi_exact(const Rational& r) {
    Rational m = reduce_mod2(r);
    const mpz_class den = m.denominator();
    if (den == 1) return Rational(0);
    if (den == 2) return m == Rational(1, 2) ? Rational(1) : Rational(-1);
    if (den == 6) return m < Rational(1) ? Rational(1, 2) : Rational(-1, 2);
    return std::nullopt;
}

std::optional<Rational> cos_pi_exact(const Rational& r) {
    Rational m = reduce_mod2(r);
    const mpz_class den = m.denominator();
    if (den == 1) return m.is_zero() ? Rational(1) : Rational(-1);
    if (den == 2) return Rational(0);
    if (den == 3) {
        bool first_or_fourth = m == Rational(1, 3) || m == Rational(5, 3);
        return first_or_fourth ? Rational(1, 2) : Rational(-1, 2);
    }
    return std::nullopt;
}

std::optional<std::pair<Rational, Rational>> sincos_exact(const Rational& r) {
    auto s = sin_pi_exact(r);
    auto c = cos_pi_exact(r);
    if (!s || !c) return std::nullopt;
    return std::pair{*s, *c};
}

std::pair<BigFloat, BigFloat> sincos_pi(const Rational& r, long precision) {
    BigFloat angle = BigFloat::pi(precision) * BigFloat(reduce_mod2(r), precision);
    auto s = sin_pi_exact(r);
    auto c = cos_pi_exact(r);
    return {s ? BigFloat(*s, precision) : angle.sin(), c ? BigFloat(*c, precision) : angle.cos()};
}

}  // namespace dbz
