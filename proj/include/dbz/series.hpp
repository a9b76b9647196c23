#pragma once

// Truncated Laurent series in the local variable t = z - a, and the
// compiler from expression trees to such series.

#include <string>
#include <string_view>
#include <vector>

#include "dbz/expr.hpp"
#include "dbz/scalar.hpp"

namespace dbz {

/// a = rat + pi_mult*pi + imag*i. Points with a pi part are real.
struct ExpansionPoint {
    Rational rat;
    Rational pi_mult;
    Rational imag;

    ExpansionPoint() = default;
    ExpansionPoint(Rational r) : rat(std::move(r)) {}  // NOLINT(google-explicit-constructor)
    ExpansionPoint(Rational r, Rational pi, Rational im = {});

    static ExpansionPoint pi_times(Rational r) { return {Rational(0), std::move(r)}; }

    /// rat + imag*i, i.e. the point without its pi part.
    ComplexRational finite_part() const { return {rat, imag}; }

    friend bool operator==(const ExpansionPoint&, const ExpansionPoint&) = default;
    std::string str() const;
};

inline constexpr long kDefaultOrder = 16;

/// Sum of c_n t^n for n = lead .. lead + coeffs.size() - 1, with every
/// coefficient up to exponent `trunc` known. When `exact_tail` holds, all
/// coefficients beyond `trunc` are zero as well.
///
/// Canonical forms: leading and trailing zero coefficients are stripped. The
/// exact zero series has lead 0, no coefficients and exact_tail. A series that
/// is zero up to its truncation but not known to vanish ("undetermined") has
/// no coefficients, exact_tail false, and lead trunc + 1.
class LaurentSeries {
public:
    LaurentSeries(ExpansionPoint anchor, long lead, std::vector<Scalar> coeffs, long trunc, bool exact_tail,
                  Mode mode, long precision = kDefaultPrecision);

    static LaurentSeries zero(const ExpansionPoint& anchor, long trunc, Mode mode, long precision = kDefaultPrecision);
    static LaurentSeries constant(const ExpansionPoint& anchor, const Scalar& value, long trunc,
                                  long precision = kDefaultPrecision);
    /// value + t
    static LaurentSeries variable(const ExpansionPoint& anchor, const Scalar& value, long trunc,
                                  long precision = kDefaultPrecision);
    /// c * t^n, exact.
    static LaurentSeries monomial(const ExpansionPoint& anchor, const Scalar& c, long n, long trunc,
                                  long precision = kDefaultPrecision);

    const ExpansionPoint& anchor() const noexcept { return anchor_; }
    long lead() const noexcept { return lead_; }
    const std::vector<Scalar>& coeffs() const noexcept { return coeffs_; }
    long trunc() const noexcept { return trunc_; }
    bool exact_tail() const noexcept { return exact_tail_; }
    Mode mode() const noexcept { return mode_; }
    long precision() const noexcept { return precision_; }

    bool is_zero() const noexcept { return coeffs_.empty() && exact_tail_; }
    bool is_undetermined() const noexcept { return coeffs_.empty() && !exact_tail_; }
    /// Single term, nothing after it.
    bool is_monomial() const noexcept { return coeffs_.size() == 1 && exact_tail_; }
    /// Exact constant series (possibly zero).
    bool is_constant() const noexcept { return exact_tail_ && (coeffs_.empty() || (coeffs_.size() == 1 && lead_ == 0)); }
    /// Highest exponent whose coefficient is known (huge when exact_tail).
    long known_through() const noexcept;
    /// Lower bound on the valuation.
    long valuation_bound() const noexcept;

    /// Coefficient of t^n; throws InsufficientOrder when n is past `trunc`
    /// and the tail is not exact.
    Scalar coeff(long n) const;

    Scalar zero_scalar() const { return Scalar::zero(mode_, precision_); }

    friend bool operator==(const LaurentSeries&, const LaurentSeries&) = default;

    /// Compact JSON in the schema
    /// {"anchor":{"rat":..,"pi":..,"imag":..},"lead":..,"coeffs":[..],"trunc":..,"exact_tail":..,"mode":..}
    /// with "precision" appended in float mode.
    std::string to_json() const;
    static LaurentSeries from_json(std::string_view text);

private:
    void normalize();

    ExpansionPoint anchor_;
    long lead_;
    std::vector<Scalar> coeffs_;
    long trunc_;
    bool exact_tail_;
    Mode mode_;
    long precision_;
};

LaurentSeries ls_neg(const LaurentSeries& x);
LaurentSeries ls_add(const LaurentSeries& x, const LaurentSeries& y);
LaurentSeries ls_sub(const LaurentSeries& x, const LaurentSeries& y);
LaurentSeries ls_mul(const LaurentSeries& x, const LaurentSeries& y);
/// Division by the exact zero series yields the exact zero series; division
/// by an undetermined series throws UndeterminedValuation.
LaurentSeries ls_reciprocal(const LaurentSeries& y);
LaurentSeries ls_div(const LaurentSeries& x, const LaurentSeries& y);

enum class Branch { Plus, Minus };
/// Principal branch of x^exponent, negated for Branch::Minus.
LaurentSeries ls_pow_rat(const LaurentSeries& x, const Rational& exponent, Branch sign = Branch::Plus);

/// kind(x + pi_offset*pi).
LaurentSeries ls_fn(FnKind kind, const LaurentSeries& x, const Rational& pi_offset = Rational(0));

LaurentSeries ls_derive(const LaurentSeries& x);

/// Drops coefficients past `order`; clears exact_tail if anything nonzero
/// was dropped.
LaurentSeries ls_truncate(const LaurentSeries& x, long order);

struct ExpandOptions {
    long order = kDefaultOrder;
    Mode mode = Mode::Exact;
    long precision = kDefaultPrecision;
};

/// Laurent expansion of `e` in `var` about `at`, correct through exponent
/// options.order. Every other variable must already be substituted.
LaurentSeries expand(const Expr& e, std::string_view var, const ExpansionPoint& at, const ExpandOptions& options = {});

}  // namespace dbz
