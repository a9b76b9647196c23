#pragma once

// Totalized complex arithmetic: z/0 = 0 for every z, including 0/0.

#include "dbz/expr.hpp"
#include "dbz/scalar.hpp"

namespace dbz {

class YamadaComplex {
public:
    YamadaComplex() = default;
    YamadaComplex(Scalar value) : value_(std::move(value)) {}  // NOLINT(google-explicit-constructor)
    YamadaComplex(long value) : value_(value) {}               // NOLINT(google-explicit-constructor)
    YamadaComplex(Rational value) : value_(std::move(value)) {}  // NOLINT(google-explicit-constructor)
    YamadaComplex(ComplexRational value) : value_(std::move(value)) {}  // NOLINT(google-explicit-constructor)

    const Scalar& value() const noexcept { return value_; }
    bool is_zero() const noexcept { return value_.is_zero(); }
    YamadaComplex conj() const { return value_.conj(); }

    YamadaComplex operator-() const { return -value_; }
    friend YamadaComplex operator+(const YamadaComplex& a, const YamadaComplex& b) { return a.value_ + b.value_; }
    friend YamadaComplex operator-(const YamadaComplex& a, const YamadaComplex& b) { return a.value_ - b.value_; }
    friend YamadaComplex operator*(const YamadaComplex& a, const YamadaComplex& b) { return a.value_ * b.value_; }
    /// Total: never throws for a zero divisor.
    friend YamadaComplex operator/(const YamadaComplex& a, const YamadaComplex& b);
    friend bool operator==(const YamadaComplex& a, const YamadaComplex& b) { return a.value_ == b.value_; }

    std::string str() const { return value_.str(); }

private:
    Scalar value_;
};

YamadaComplex y_div(const YamadaComplex& a, const YamadaComplex& b);

enum class FieldOp { Add, Sub, Mul, Div };
YamadaComplex y_field_ops(const YamadaComplex& a, const YamadaComplex& b, FieldOp op);

/// A value of the form `value + pi_mult*pi`; pi stays symbolic in exact mode
/// until it meets a trigonometric function.
struct PiValue {
    Scalar value;
    Rational pi_mult;
};

/// Evaluates `e` pointwise under totalized arithmetic. Every variable must
/// be bound. In exact mode transcendental functions only succeed at the
/// points where the result is rational (NotExact otherwise).
PiValue yamada_eval_pi(const Expr& e, const Bindings& bindings, Mode mode = Mode::Exact,
                       long precision = kDefaultPrecision);

/// As yamada_eval_pi, with any remaining pi multiple folded in (float mode)
/// or rejected (NotExact, exact mode).
YamadaComplex yamada_eval(const Expr& e, const Bindings& bindings, Mode mode = Mode::Exact,
                          long precision = kDefaultPrecision);

}  // namespace dbz
