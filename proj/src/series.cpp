#include "dbz/series.hpp"

#include <algorithm>
#include <climits>
#include <optional>

#include "json.hpp"

namespace dbz {

namespace {

constexpr long kUnbounded = LONG_MAX / 4;

}  // namespace

ExpansionPoint::ExpansionPoint(Rational r, Rational pi, Rational im)
    : rat(std::move(r)), pi_mult(std::move(pi)), imag(std::move(im)) {
    if (!pi_mult.is_zero() && !imag.is_zero())
        throw Error(ErrorCode::InvalidArgument, "expansion points with a pi part must be real");
}

std::string ExpansionPoint::str() const {
    std::string out;
    if (!rat.is_zero() || (pi_mult.is_zero() && imag.is_zero())) out = rat.str();
    if (!pi_mult.is_zero()) {
        if (!out.empty() && pi_mult.sign() > 0) out += "+";
        out += pi_mult.str() + "*pi";
    }
    if (!imag.is_zero()) {
        if (!out.empty() && imag.sign() > 0) out += "+";
        out += imag.str() + "*i";
    }
    return out;
}

// ---------------------------------------------------------------------------
// LaurentSeries

LaurentSeries::LaurentSeries(ExpansionPoint anchor, long lead, std::vector<Scalar> coeffs, long trunc,
                             bool exact_tail, Mode mode, long precision)
    : anchor_(std::move(anchor)),
      lead_(lead),
      coeffs_(std::move(coeffs)),
      trunc_(trunc),
      exact_tail_(exact_tail),
      mode_(mode),
      precision_(mode == Mode::Exact ? 0 : precision) {
    for (const auto& c : coeffs_)
        if (c.mode() != mode_) throw Error(ErrorCode::ModeMismatch, "series coefficient in the wrong mode");
    if (lead_ + static_cast<long>(coeffs_.size()) - 1 > trunc_)
        throw Error(ErrorCode::InvalidArgument, "series coefficients extend past the truncation order");
    normalize();
}

void LaurentSeries::normalize() {
    auto first = std::find_if(coeffs_.begin(), coeffs_.end(), [](const Scalar& c) { return !c.is_zero(); });
    lead_ += static_cast<long>(first - coeffs_.begin());
    coeffs_.erase(coeffs_.begin(), first);
    while (!coeffs_.empty() && coeffs_.back().is_zero()) coeffs_.pop_back();
    if (coeffs_.empty()) lead_ = exact_tail_ ? 0 : trunc_ + 1;
}

LaurentSeries LaurentSeries::zero(const ExpansionPoint& anchor, long trunc, Mode mode, long precision) {
    return {anchor, 0, {}, trunc, true, mode, precision};
}

LaurentSeries LaurentSeries::constant(const ExpansionPoint& anchor, const Scalar& value, long trunc, long precision) {
    return {anchor, 0, {value}, std::max(trunc, 0L), true, value.mode(), precision};
}

LaurentSeries LaurentSeries::variable(const ExpansionPoint& anchor, const Scalar& value, long trunc, long precision) {
    return {anchor, 0, {value, Scalar::one(value.mode(), precision)}, std::max(trunc, 1L), true, value.mode(),
            precision};
}

LaurentSeries LaurentSeries::monomial(const ExpansionPoint& anchor, const Scalar& c, long n, long trunc,
                                      long precision) {
    return {anchor, n, {c}, std::max(trunc, n), true, c.mode(), precision};
}

long LaurentSeries::known_through() const noexcept { return exact_tail_ ? kUnbounded : trunc_; }

long LaurentSeries::valuation_bound() const noexcept {
    if (is_zero()) return kUnbounded;
    return lead_;
}

Scalar LaurentSeries::coeff(long n) const {
    if (n > trunc_ && !exact_tail_)
        throw Error(ErrorCode::InsufficientOrder,
                    "coefficient " + std::to_string(n) + " is past truncation order " + std::to_string(trunc_));
    long idx = n - lead_;
    if (coeffs_.empty() || idx < 0 || idx >= static_cast<long>(coeffs_.size())) return zero_scalar();
    return coeffs_[static_cast<std::size_t>(idx)];
}

std::string LaurentSeries::to_json() const {
    nlohmann::ordered_json j;
    j["anchor"] = {{"rat", anchor_.rat.str()}, {"pi", anchor_.pi_mult.str()}, {"imag", anchor_.imag.str()}};
    j["lead"] = lead_;
    auto arr = nlohmann::ordered_json::array();
    for (const auto& c : coeffs_) arr.push_back(c.str());
    j["coeffs"] = arr;
    j["trunc"] = trunc_;
    j["exact_tail"] = exact_tail_;
    j["mode"] = std::string(mode_name(mode_));
    if (mode_ == Mode::Float) j["precision"] = precision_;
    return j.dump();
}

LaurentSeries LaurentSeries::from_json(std::string_view text) {
    try {
        auto j = nlohmann::json::parse(text);
        const auto& a = j.at("anchor");
        ExpansionPoint anchor(Rational::parse(a.at("rat").get<std::string>()),
                              Rational::parse(a.at("pi").get<std::string>()),
                              Rational::parse(a.at("imag").get<std::string>()));
        Mode mode = parse_mode(j.at("mode").get<std::string>());
        long precision = mode == Mode::Float ? j.at("precision").get<long>() : kDefaultPrecision;
        std::vector<Scalar> coeffs;
        for (const auto& c : j.at("coeffs")) coeffs.push_back(Scalar::parse(c.get<std::string>(), mode, precision));
        return {anchor,        j.at("lead").get<long>(), std::move(coeffs), j.at("trunc").get<long>(),
                j.at("exact_tail").get<bool>(), mode, precision};
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::InvalidArgument, std::string("malformed series JSON: ") + e.what());
    }
}

// ---------------------------------------------------------------------------
// Arithmetic

namespace {

void check_compatible(const LaurentSeries& x, const LaurentSeries& y) {
    if (!(x.anchor() == y.anchor()))
        throw Error(ErrorCode::AnchorMismatch, "series anchored at " + x.anchor().str() + " and " + y.anchor().str());
    if (x.mode() != y.mode()) throw Error(ErrorCode::ModeMismatch, "exact and float series mixed");
}

// Coefficients of x for exponents from..to inclusive.
std::vector<Scalar> dense(const LaurentSeries& x, long from, long to) {
    std::vector<Scalar> out;
    if (to < from) return out;
    out.reserve(static_cast<std::size_t>(to - from + 1));
    const auto& c = x.coeffs();
    const long n = static_cast<long>(c.size());
    for (long e = from; e <= to; ++e) {
        long idx = e - x.lead();
        out.push_back(idx >= 0 && idx < n ? c[static_cast<std::size_t>(idx)] : x.zero_scalar());
    }
    return out;
}

long last_exponent(const LaurentSeries& x) { return x.lead() + static_cast<long>(x.coeffs().size()) - 1; }

LaurentSeries make(const LaurentSeries& like, long lead, std::vector<Scalar> coeffs, long trunc, bool exact) {
    return {like.anchor(), lead, std::move(coeffs), trunc, exact, like.mode(), like.precision()};
}

Scalar rational_scalar(const Rational& r, const LaurentSeries& like) {
    return Scalar::from(ComplexRational(r), like.mode(), like.precision());
}

// Float sums that cancel to within rounding of the summands' magnitude are zero.
void flush_residue(std::vector<Scalar>& v, const std::vector<BigFloat>& magnitude, long precision) {
    for (std::size_t k = 0; k < v.size(); ++k) {
        if (v[k].is_zero()) continue;
        BigFloat limit = magnitude[k];
        mpfr_mul_2si(limit.get(), limit.get(), -(precision - 8), MPFR_RNDN);
        if (!(limit < v[k].floating().abs())) v[k] = Scalar::zero(Mode::Float, precision);
    }
}

// Plain Cauchy product of two dense runs.
std::vector<Scalar> convolve(const std::vector<Scalar>& a, const std::vector<Scalar>& b, std::size_t keep,
                             const Scalar& zero) {
    const bool floating = !zero.is_exact();
    const long precision = floating ? zero.precision() : 0;
    std::vector<Scalar> out(keep, zero);
    std::vector<BigFloat> magnitude(floating ? keep : 0, BigFloat(0.0, floating ? precision : 53));
    for (std::size_t i = 0; i < a.size() && i < keep; ++i) {
        if (a[i].is_zero()) continue;
        for (std::size_t j = 0; j < b.size() && i + j < keep; ++j) {
            if (b[j].is_zero()) continue;
            Scalar term = a[i] * b[j];
            if (floating) magnitude[i + j] = magnitude[i + j] + term.floating().abs();
            out[i + j] += term;
        }
    }
    if (floating) flush_residue(out, magnitude, precision);
    return out;
}

// Unit-normalized tail: x = c0 * t^lead * (1 + h_1 t + ...), returns
// h_0..h_len with h_0 = 1.
std::vector<Scalar> unit_tail(const LaurentSeries& x, long len) {
    std::vector<Scalar> h = dense(x, x.lead(), x.lead() + len);
    const Scalar c0 = h.front();
    for (auto& v : h) v = v / c0;
    return h;
}

}  // namespace

LaurentSeries ls_neg(const LaurentSeries& x) {
    std::vector<Scalar> c;
    c.reserve(x.coeffs().size());
    for (const auto& v : x.coeffs()) c.push_back(-v);
    return make(x, x.lead(), std::move(c), x.trunc(), x.exact_tail());
}

LaurentSeries ls_add(const LaurentSeries& x, const LaurentSeries& y) {
    check_compatible(x, y);
    const bool exact = x.exact_tail() && y.exact_tail();
    const long top = exact ? std::max(x.trunc(), y.trunc()) : std::min(x.known_through(), y.known_through());
    const long lo = std::min(x.valuation_bound(), y.valuation_bound());
    if (lo > top) return make(x, top + 1, {}, top, exact);
    auto a = dense(x, lo, top);
    auto b = dense(y, lo, top);
    std::vector<BigFloat> magnitude;
    if (x.mode() == Mode::Float)
        for (std::size_t k = 0; k < a.size(); ++k) magnitude.push_back(a[k].floating().abs() + b[k].floating().abs());
    for (std::size_t k = 0; k < a.size(); ++k) a[k] += b[k];
    if (x.mode() == Mode::Float) flush_residue(a, magnitude, x.precision());
    return make(x, lo, std::move(a), top, exact);
}

LaurentSeries ls_sub(const LaurentSeries& x, const LaurentSeries& y) { return ls_add(x, ls_neg(y)); }

LaurentSeries ls_mul(const LaurentSeries& x, const LaurentSeries& y) {
    check_compatible(x, y);
    if (x.is_zero() || y.is_zero()) return LaurentSeries::zero(x.anchor(), std::max(x.trunc(), y.trunc()), x.mode(), x.precision());
    const long lo = x.valuation_bound() + y.valuation_bound();
    if (x.exact_tail() && y.exact_tail()) {
        const long hi = last_exponent(x) + last_exponent(y);
        auto c = convolve(x.coeffs(), y.coeffs(), static_cast<std::size_t>(hi - lo + 1), x.zero_scalar());
        return make(x, lo, std::move(c), std::max({x.trunc(), y.trunc(), hi}), true);
    }
    long top = kUnbounded;
    if (!x.exact_tail()) top = std::min(top, x.trunc() + y.valuation_bound());
    if (!y.exact_tail()) top = std::min(top, y.trunc() + x.valuation_bound());
    if (top < lo) return make(x, top + 1, {}, top, false);
    const auto keep = static_cast<std::size_t>(top - lo + 1);
    auto c = convolve(dense(x, x.valuation_bound(), x.valuation_bound() + static_cast<long>(keep) - 1),
                      dense(y, y.valuation_bound(), y.valuation_bound() + static_cast<long>(keep) - 1), keep,
                      x.zero_scalar());
    return make(x, lo, std::move(c), top, false);
}

LaurentSeries ls_reciprocal(const LaurentSeries& y) {
    if (y.is_zero()) return y;  // 1/0 = 0
    if (y.is_undetermined())
        throw Error(ErrorCode::UndeterminedValuation,
                    "divisor vanishes through order " + std::to_string(y.trunc()) + "; its valuation is unknown");
    const long l = y.lead();
    const Scalar c0 = y.coeffs().front();
    const Scalar inv0 = Scalar::one(y.mode(), y.precision()) / c0;
    if (y.is_monomial()) return LaurentSeries::monomial(y.anchor(), inv0, -l, std::max(y.trunc(), -l), y.precision());

    // 1/(1 + h) by g_n = -sum_{k=1..n} h_k g_{n-k}, relative order `rel`.
    const long rel = y.trunc() - l;
    auto h = unit_tail(y, rel);
    std::vector<Scalar> g(h.size(), y.zero_scalar());
    g[0] = Scalar::one(y.mode(), y.precision());
    for (std::size_t n = 1; n < g.size(); ++n) {
        Scalar acc = y.zero_scalar();
        for (std::size_t k = 1; k <= n; ++k)
            if (!h[k].is_zero()) acc += h[k] * g[n - k];
        g[n] = -acc;
    }
    for (auto& v : g) v = v * inv0;
    return make(y, -l, std::move(g), -l + rel, false);
}

LaurentSeries ls_div(const LaurentSeries& x, const LaurentSeries& y) {
    check_compatible(x, y);
    if (y.is_zero()) return LaurentSeries::zero(x.anchor(), std::max(x.trunc(), y.trunc()), x.mode(), x.precision());
    return ls_mul(x, ls_reciprocal(y));
}

namespace {

// Principal value of c^exponent for the leading coefficient.
Scalar leading_power(const Scalar& c, const Rational& exponent, long precision) {
    if (!c.is_exact()) return Scalar(c.floating().pow(exponent));
    const long p = exponent.numerator().get_si();
    const long q = exponent.denominator().get_si();
    auto r = c.as_rational();
    if (!r) {
        if (q == 1) {
            ComplexRational acc(1), base = c.exact();
            for (long n = std::labs(p); n > 0; n >>= 1) {
                if (n & 1) acc = acc * base;
                base = base * base;
            }
            return Scalar(p < 0 ? ComplexRational(1) / acc : acc);
        }
        throw Error(ErrorCode::RootNotRepresentable,
                    "no exact root of complex coefficient " + c.str() + "; use float mode");
    }
    // Negative reals: |c|^a * e^{i pi a}, exact when a has denominator 1 or 2.
    ComplexRational phase(1);
    if (r->sign() < 0) {
        auto sc = sincos_exact(exponent);
        if (!sc) throw Error(ErrorCode::RootNotRepresentable, "no exact branch of (" + r->str() + ")^" + exponent.str());
        phase = ComplexRational(sc->second, sc->first);
    }
    auto root = nth_root_exact(r->abs(), q);
    if (!root)
        throw Error(ErrorCode::RootNotRepresentable,
                    r->abs().str() + " has no exact root of index " + std::to_string(q) + "; use float mode");
    (void)precision;
    return Scalar(ComplexRational(root->pow(p)) * phase);
}

}  // namespace

LaurentSeries ls_pow_rat(const LaurentSeries& x, const Rational& exponent, Branch sign) {
    auto signed_result = [sign](LaurentSeries s) { return sign == Branch::Minus ? ls_neg(s) : s; };
    if (exponent.is_zero())
        return signed_result(LaurentSeries::constant(x.anchor(), Scalar::one(x.mode(), x.precision()), x.trunc(),
                                                     x.precision()));
    if (x.is_zero()) return x;  // 0^a = 0 for a > 0, and 1/0 = 0 for a < 0
    if (x.is_undetermined())
        throw Error(ErrorCode::UndeterminedValuation, "base vanishes through order " + std::to_string(x.trunc()));

    if (exponent.is_integer() && !x.is_monomial()) {
        long n = std::labs(exponent.numerator().get_si());
        LaurentSeries base = x;
        LaurentSeries acc = LaurentSeries::constant(x.anchor(), Scalar::one(x.mode(), x.precision()), x.trunc(),
                                                    x.precision());
        for (; n > 0; n >>= 1) {
            if (n & 1) acc = ls_mul(acc, base);
            if (n > 1) base = ls_mul(base, base);
        }
        return signed_result(exponent.sign() < 0 ? ls_reciprocal(acc) : acc);
    }

    const long l = x.lead();
    const mpz_class q = exponent.denominator();
    if (mpz_class(l) % q != 0)
        throw Error(ErrorCode::LeadNotDivisible,
                    "valuation " + std::to_string(l) + " is not divisible by " + q.get_str());
    const Rational new_lead_r = Rational(l) * exponent;
    const long new_lead = new_lead_r.numerator().get_si();
    const Scalar c = leading_power(x.coeffs().front(), exponent, x.precision());

    if (x.is_monomial())
        return signed_result(LaurentSeries::monomial(x.anchor(), c, new_lead, std::max(x.trunc(), new_lead),
                                                     x.precision()));

    // g = h^a with h_0 = 1:  n g_n = sum_{k=1..n} ((a+1)k - n) h_k g_{n-k}.
    const long rel = x.trunc() - l;
    auto h = unit_tail(x, rel);
    std::vector<Scalar> g(h.size(), x.zero_scalar());
    g[0] = Scalar::one(x.mode(), x.precision());
    const Rational a1 = exponent + Rational(1);
    for (std::size_t n = 1; n < g.size(); ++n) {
        Scalar acc = x.zero_scalar();
        for (std::size_t k = 1; k <= n; ++k) {
            if (h[k].is_zero()) continue;
            Rational w = a1 * Rational(static_cast<long>(k)) - Rational(static_cast<long>(n));
            acc += rational_scalar(w, x) * h[k] * g[n - k];
        }
        g[n] = acc * rational_scalar(Rational(1, static_cast<long>(n)), x);
    }
    for (auto& v : g) v = v * c;
    return signed_result(make(x, new_lead, std::move(g), new_lead + rel, false));
}

namespace {

struct TrigPair {
    Scalar sin;
    Scalar cos;
};

// sin/cos of the constant term c0 + r*pi; `need` limits the exact table
// lookup when only one of the two values is used.
TrigPair trig_at(const Scalar& c0, const Rational& r, long precision, bool need_sin, bool need_cos) {
    if (c0.is_exact()) {
        if (!c0.is_zero())
            throw Error(ErrorCode::NotExact,
                        "sin/cos of " + c0.str() + " is not rational; use float mode");
        auto s = need_sin ? sin_pi_exact(r) : std::optional<Rational>(Rational(0));
        auto c = need_cos ? cos_pi_exact(r) : std::optional<Rational>(Rational(0));
        if (!s || !c)
            throw Error(ErrorCode::NotExact, "sin/cos of " + r.str() + "*pi is not rational; use float mode");
        return {Scalar(*s), Scalar(*c)};
    }
    const BigFloatComplex& z = c0.floating();
    auto [sp, cp] = sincos_pi(r, precision);
    BigFloatComplex spc(sp, BigFloat(precision)), cpc(cp, BigFloat(precision));
    if (z.is_zero()) return {Scalar(spc), Scalar(cpc)};
    BigFloatComplex sz = z.sin(), cz = z.cos();
    return {Scalar(sz * cpc + cz * spc), Scalar(cz * cpc - sz * spc)};
}

}  // namespace

LaurentSeries ls_fn(FnKind kind, const LaurentSeries& x, const Rational& pi_offset) {
    if (!x.is_zero() && !x.coeffs().empty() && x.lead() < 0)
        throw Error(ErrorCode::EssentialSingularity,
                    std::string(fn_name(kind)) + " of an argument with a pole of order " + std::to_string(-x.lead()));
    if (x.known_through() < 0)
        throw Error(ErrorCode::UndeterminedValuation, "argument is unknown at its constant term");

    if (kind == FnKind::Tan)
        return ls_div(ls_fn(FnKind::Sin, x, pi_offset), ls_fn(FnKind::Cos, x, pi_offset));

    const Mode mode = x.mode();
    const long prec = x.precision();
    const Scalar c0 = x.coeff(0);
    const Scalar one = Scalar::one(mode, prec);
    const bool constant = x.is_constant();
    const long top = x.trunc() < 0 ? 0 : x.trunc();
    std::vector<Scalar> u = dense(x, 0, top);
    u[0] = x.zero_scalar();
    auto weight = [&](std::size_t k) { return rational_scalar(Rational(static_cast<long>(k)), x); };
    auto inv = [&](std::size_t n) { return rational_scalar(Rational(1, static_cast<long>(n)), x); };
    auto finish = [&](std::vector<Scalar> c) { return make(x, 0, std::move(c), top, constant); };

    switch (kind) {
        case FnKind::Exp: {
            Scalar base = one;
            if (mode == Mode::Exact) {
                if (!c0.is_zero() || !pi_offset.is_zero())
                    throw Error(ErrorCode::NotExact, "exp of a nonzero constant; use float mode");
            } else {
                BigFloatComplex arg = c0.floating() +
                    BigFloatComplex(BigFloat::pi(prec) * BigFloat(pi_offset, prec), BigFloat(prec));
                base = Scalar(arg.exp());
            }
            std::vector<Scalar> g(u.size(), x.zero_scalar());
            g[0] = one;
            for (std::size_t n = 1; n < g.size(); ++n) {
                Scalar acc = x.zero_scalar();
                for (std::size_t k = 1; k <= n; ++k)
                    if (!u[k].is_zero()) acc += weight(k) * u[k] * g[n - k];
                g[n] = acc * inv(n);
            }
            for (auto& v : g) v = v * base;
            return finish(std::move(g));
        }
        case FnKind::Log: {
            if (c0.is_zero() && pi_offset.is_zero())
                throw Error(ErrorCode::BranchPoint, "log of an argument that vanishes at the expansion point");
            Scalar base = x.zero_scalar();
            Scalar lead = c0;
            if (mode == Mode::Exact) {
                if (!(c0 == one) || !pi_offset.is_zero())
                    throw Error(ErrorCode::NotExact, "log of " + c0.str() + " is not rational; use float mode");
            } else {
                BigFloatComplex arg = c0.floating() +
                    BigFloatComplex(BigFloat::pi(prec) * BigFloat(pi_offset, prec), BigFloat(prec));
                base = Scalar(arg.log());
                lead = Scalar(arg);
            }
            // L = log(1 + v), v = u / lead:  n L_n = n v_n - sum_{k=1..n-1} k L_k v_{n-k}.
            std::vector<Scalar> v(u.size(), x.zero_scalar());
            for (std::size_t k = 1; k < u.size(); ++k) v[k] = u[k] / lead;
            std::vector<Scalar> g(u.size(), x.zero_scalar());
            for (std::size_t n = 1; n < g.size(); ++n) {
                Scalar acc = weight(n) * v[n];
                for (std::size_t k = 1; k < n; ++k)
                    if (!v[n - k].is_zero()) acc -= weight(k) * g[k] * v[n - k];
                g[n] = acc * inv(n);
            }
            g[0] = base;
            return finish(std::move(g));
        }
        case FnKind::Sin:
        case FnKind::Cos: {
            const bool is_sin = kind == FnKind::Sin;
            // Only one table value matters when the argument is constant.
            TrigPair at = trig_at(c0, pi_offset, prec, !constant || is_sin, !constant || !is_sin);
            std::vector<Scalar> s(u.size(), x.zero_scalar()), c(u.size(), x.zero_scalar());
            c[0] = one;
            for (std::size_t n = 1; n < u.size(); ++n) {
                Scalar as = x.zero_scalar(), ac = x.zero_scalar();
                for (std::size_t k = 1; k <= n; ++k) {
                    if (u[k].is_zero()) continue;
                    Scalar ku = weight(k) * u[k];
                    as += ku * c[n - k];
                    ac -= ku * s[n - k];
                }
                s[n] = as * inv(n);
                c[n] = ac * inv(n);
            }
            std::vector<Scalar> out(u.size(), x.zero_scalar());
            for (std::size_t n = 0; n < u.size(); ++n) {
                out[n] = is_sin ? at.sin * c[n] + at.cos * s[n] : at.cos * c[n] - at.sin * s[n];
            }
            return finish(std::move(out));
        }
        case FnKind::Tan: break;
    }
    return x;
}

LaurentSeries ls_derive(const LaurentSeries& x) {
    if (x.coeffs().empty()) return make(x, x.lead() - 1, {}, x.trunc() - 1, x.exact_tail());
    std::vector<Scalar> c;
    c.reserve(x.coeffs().size());
    for (std::size_t k = 0; k < x.coeffs().size(); ++k) {
        long e = x.lead() + static_cast<long>(k);
        c.push_back(rational_scalar(Rational(e), x) * x.coeffs()[k]);
    }
    return make(x, x.lead() - 1, std::move(c), x.trunc() - 1, x.exact_tail());
}

LaurentSeries ls_truncate(const LaurentSeries& x, long order) {
    if (x.coeffs().empty()) {
        if (x.exact_tail()) return make(x, 0, {}, order, true);
        return make(x, 0, {}, std::min(order, x.trunc()), false);
    }
    if (!x.exact_tail() && order >= x.trunc()) return x;
    const long last = last_exponent(x);
    if (order >= last) return make(x, x.lead(), x.coeffs(), order, x.exact_tail());
    auto c = dense(x, x.lead(), order);
    return make(x, x.lead(), std::move(c), order, false);
}

// ---------------------------------------------------------------------------
// Expression compiler

namespace {

// A series plus a symbolic multiple of pi in its constant term, so that
// trigonometric arguments like theta at theta = pi/2 stay exact. `rational`
// is set while the term is a known rational constant, which lets pi survive
// scaling by constants in float mode too.
struct Term {
    LaurentSeries s;
    Rational pi;
    std::optional<Rational> rational;
};

class Compiler {
public:
    Compiler(std::string_view var, const ExpansionPoint& at, long work, const ExpandOptions& opt)
        : var_(var), at_(at), work_(work), opt_(opt) {}

    Term compile(const Expr& e) {
        const Node& n = e.node();
        switch (n.kind) {
            case NodeKind::Const: return {constant(n.value), {}, n.value.as_rational()};
            case NodeKind::Pi: return {zero(), Rational(1), std::nullopt};
            case NodeKind::Var: {
                if (n.name != var_) throw Error(ErrorCode::UnboundVariable, "variable '" + n.name + "' has no binding");
                Scalar base = Scalar::from(at_.finite_part(), opt_.mode, opt_.precision);
                return {LaurentSeries::variable(at_, base, work_, opt_.precision), at_.pi_mult, std::nullopt};
            }
            case NodeKind::Neg: {
                Term t = compile(n.args[0]);
                return {ls_neg(t.s), -t.pi, lift(t.rational, [](const Rational& r) { return -r; })};
            }
            case NodeKind::Add:
            case NodeKind::Sub: {
                Term a = compile(n.args[0]);
                Term b = compile(n.args[1]);
                std::optional<Rational> r;
                if (n.kind == NodeKind::Add) {
                    if (a.rational && b.rational) r = *a.rational + *b.rational;
                    return {ls_add(a.s, b.s), a.pi + b.pi, r};
                }
                if (a.rational && b.rational) r = *a.rational - *b.rational;
                return {ls_sub(a.s, b.s), a.pi - b.pi, r};
            }
            case NodeKind::Mul: {
                Term a = compile(n.args[0]);
                Term b = compile(n.args[1]);
                std::optional<Rational> r;
                if (a.rational && b.rational) r = *a.rational * *b.rational;
                if (b.rational && b.pi.is_zero()) return {ls_mul(a.s, b.s), a.pi * *b.rational, r};
                if (a.rational && a.pi.is_zero()) return {ls_mul(a.s, b.s), b.pi * *a.rational, r};
                return {ls_mul(materialize(a), materialize(b)), {}, std::nullopt};
            }
            case NodeKind::Div: {
                Term a = compile(n.args[0]);
                Term b = compile(n.args[1]);
                if (b.rational && b.pi.is_zero()) {
                    if (b.rational->is_zero()) return {zero(), {}, Rational(0)};  // z/0 = 0
                    std::optional<Rational> r;
                    if (a.rational) r = *a.rational / *b.rational;
                    return {ls_div(a.s, b.s), a.pi / *b.rational, r};
                }
                return {ls_div(materialize(a), materialize(b)), {}, std::nullopt};
            }
            case NodeKind::Pow: return {ls_pow_rat(materialize(compile(n.args[0])), n.exponent), {}, std::nullopt};
            case NodeKind::Fn: {
                Term t = compile(n.args[0]);
                return {ls_fn(n.fn, t.s, t.pi), {}, std::nullopt};
            }
        }
        throw Error(ErrorCode::InvalidArgument, "unknown expression node");
    }

    LaurentSeries materialize(const Term& t) const {
        if (t.pi.is_zero()) return t.s;
        if (opt_.mode == Mode::Exact)
            throw Error(ErrorCode::NotExact, "pi appears outside a trigonometric argument; use float mode");
        BigFloat v = BigFloat::pi(opt_.precision) * BigFloat(t.pi, opt_.precision);
        Scalar c(BigFloatComplex(v, BigFloat(opt_.precision)));
        return ls_add(t.s, LaurentSeries::constant(at_, c, work_, opt_.precision));
    }

private:
    template <class Fn>
    static std::optional<Rational> lift(const std::optional<Rational>& r, Fn fn) {
        if (!r) return std::nullopt;
        return fn(*r);
    }

    LaurentSeries zero() const { return LaurentSeries::zero(at_, work_, opt_.mode, opt_.precision); }

    LaurentSeries constant(const Scalar& v) const {
        if (opt_.mode == Mode::Exact && !v.is_exact())
            throw Error(ErrorCode::ModeMismatch, "float constant in an exact-mode expansion");
        Scalar c = opt_.mode == Mode::Float ? v.to_float(opt_.precision) : v;
        if (c.is_zero()) return zero();
        return LaurentSeries::constant(at_, c, work_, opt_.precision);
    }

    std::string_view var_;
    const ExpansionPoint& at_;
    long work_;
    const ExpandOptions& opt_;
};

}  // namespace

LaurentSeries expand(const Expr& e, std::string_view var, const ExpansionPoint& at, const ExpandOptions& options) {
    if (options.order < 0) throw Error(ErrorCode::InvalidArgument, "expansion order must be nonnegative");
    for (const auto& name : free_vars(e))
        if (name != var) throw Error(ErrorCode::UnboundVariable, "variable '" + name + "' has no binding");

    // Cancellation and poles in divisors eat precision; raise the working
    // order until the requested order is reached.
    long work = options.order;
    for (int attempt = 0;; ++attempt) {
        try {
            Compiler c(var, at, work, options);
            LaurentSeries s = c.materialize(c.compile(e));
            if (s.exact_tail() || s.trunc() >= options.order) return ls_truncate(s, options.order);
            work += options.order - s.trunc();
        } catch (const Error& err) {
            if (err.code() != ErrorCode::UndeterminedValuation || attempt >= 6) throw;
            work += std::max(work, 4L);
        }
        if (attempt >= 6)
            throw Error(ErrorCode::InsufficientOrder,
                        "could not reach order " + std::to_string(options.order) + " within the working-order limit");
    }
}

}  // namespace dbz
