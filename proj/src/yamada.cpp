#include "dbz/yamada.hpp"

namespace dbz {

YamadaComplex operator/(const YamadaComplex& a, const YamadaComplex& b) {
    if (b.is_zero()) {
        if (a.value_.mode() != b.value_.mode())
            throw Error(ErrorCode::ModeMismatch, "exact and float scalars mixed without promotion");
        return Scalar::zero(a.value_.mode(), a.value_.precision());
    }
    return a.value_ / b.value_;
}

YamadaComplex y_div(const YamadaComplex& a, const YamadaComplex& b) { return a / b; }

YamadaComplex y_field_ops(const YamadaComplex& a, const YamadaComplex& b, FieldOp op) {
    switch (op) {
        case FieldOp::Add: return a + b;
        case FieldOp::Sub: return a - b;
        case FieldOp::Mul: return a * b;
        case FieldOp::Div: return a / b;
    }
    return {};
}

namespace {

// Values stay exact for as long as their inputs are, even in float mode, so
// that tan(pi/2) or sin(pi) hit the exact tables. `fold` promotes at the end.
class Evaluator {
public:
    Evaluator(const Bindings& b, Mode mode, long precision) : bindings_(b), mode_(mode), precision_(precision) {}

    PiValue eval(const Expr& e) {
        const Node& n = e.node();
        switch (n.kind) {
            case NodeKind::Const: return {lift(n.value), {}};
            case NodeKind::Pi: return {Scalar(0), Rational(1)};
            case NodeKind::Var: {
                auto it = bindings_.find(n.name);
                if (it == bindings_.end())
                    throw Error(ErrorCode::UnboundVariable, "variable '" + n.name + "' has no binding");
                return {lift(it->second), {}};
            }
            case NodeKind::Neg: {
                PiValue v = eval(n.args[0]);
                return {-v.value, -v.pi_mult};
            }
            case NodeKind::Add: {
                PiValue a = eval(n.args[0]), b = eval(n.args[1]);
                unify(a.value, b.value);
                return {a.value + b.value, a.pi_mult + b.pi_mult};
            }
            case NodeKind::Sub: {
                PiValue a = eval(n.args[0]), b = eval(n.args[1]);
                unify(a.value, b.value);
                return {a.value - b.value, a.pi_mult - b.pi_mult};
            }
            case NodeKind::Mul: {
                PiValue a = eval(n.args[0]), b = eval(n.args[1]);
                if (b.pi_mult.is_zero() && b.value.as_rational()) {
                    Rational r = *b.value.as_rational();
                    unify(a.value, b.value);
                    return {a.value * b.value, a.pi_mult * r};
                }
                if (a.pi_mult.is_zero() && a.value.as_rational()) {
                    Rational r = *a.value.as_rational();
                    unify(a.value, b.value);
                    return {a.value * b.value, b.pi_mult * r};
                }
                Scalar x = fold(a).value(), y = fold(b).value();
                return {x * y, {}};
            }
            case NodeKind::Div: {
                PiValue a = eval(n.args[0]), b = eval(n.args[1]);
                if (b.pi_mult.is_zero() && b.value.as_rational()) {
                    Rational r = *b.value.as_rational();
                    if (r.is_zero()) return {Scalar(0), {}};  // z/0 = 0
                    unify(a.value, b.value);
                    return {a.value / b.value, a.pi_mult / r};
                }
                return {(fold(a) / fold(b)).value(), {}};
            }
            case NodeKind::Pow: return {power(fold_exact(eval(n.args[0])), n.exponent), {}};
            case NodeKind::Fn: return {function(n.fn, eval(n.args[0])), {}};
        }
        throw Error(ErrorCode::InvalidArgument, "unknown expression node");
    }

    /// Final value in the evaluator's mode.
    YamadaComplex fold(const PiValue& v) const {
        Scalar x = fold_exact(v);
        return mode_ == Mode::Float ? x.to_float(precision_) : x;
    }

private:
    // Folds the pi part, keeping exact values exact when there is none.
    Scalar fold_exact(const PiValue& v) const {
        if (v.pi_mult.is_zero()) return v.value;
        if (mode_ == Mode::Exact)
            throw Error(ErrorCode::NotExact, "pi appears outside a trigonometric argument; use float mode");
        return v.value.to_float(precision_) +
               Scalar(BigFloatComplex(BigFloat::pi(precision_) * BigFloat(v.pi_mult, precision_), BigFloat(precision_)));
    }

    void unify(Scalar& a, Scalar& b) const {
        if (a.is_exact() == b.is_exact()) return;
        a = a.to_float(precision_);
        b = b.to_float(precision_);
    }

    Scalar lift(const Scalar& v) const {
        if (mode_ == Mode::Exact && !v.is_exact())
            throw Error(ErrorCode::ModeMismatch, "float value in exact-mode evaluation");
        return v;
    }

    Scalar power(const Scalar& base, const Rational& exponent) const {
        if (exponent.is_zero()) return base.is_exact() ? Scalar(1) : Scalar::one(Mode::Float, precision_);
        if (base.is_zero()) return base;  // 0^a = 0, and 0^-a = 1/0 = 0
        if (!base.is_exact()) return Scalar(base.floating().pow(exponent));
        if (mode_ == Mode::Float) {
            try {
                return exact_power(base, exponent);
            } catch (const Error& e) {
                if (e.code() != ErrorCode::NotExact) throw;
                return Scalar(base.to_float(precision_).floating().pow(exponent));
            }
        }
        return exact_power(base, exponent);
    }

    static Scalar exact_power(const Scalar& base, const Rational& exponent) {
        const long p = exponent.numerator().get_si();
        const long q = exponent.denominator().get_si();
        if (q == 1) {
            ComplexRational acc(1);
            for (long k = 0; k < std::labs(p); ++k) acc = acc * base.exact();
            return Scalar(p < 0 ? ComplexRational(1) / acc : acc);
        }
        auto r = base.as_rational();
        if (!r) throw Error(ErrorCode::NotExact, "root of complex value " + base.str());
        auto root = nth_root_exact(r->abs(), q);
        if (!root) throw Error(ErrorCode::NotExact, "irrational root of " + r->str());
        ComplexRational value(root->pow(p));
        if (r->sign() < 0) {
            // principal branch: (-x)^a = x^a * e^{i pi a}
            auto sc = sincos_exact(exponent);
            if (!sc) throw Error(ErrorCode::NotExact, "irrational branch factor for (" + r->str() + ")^" + exponent.str());
            value = value * ComplexRational(sc->second, sc->first);
        }
        return Scalar(value);
    }

    Scalar function(FnKind kind, const PiValue& arg) const {
        if (arg.value.is_exact()) {
            try {
                return exact_function(kind, arg);
            } catch (const Error& e) {
                if (e.code() != ErrorCode::NotExact || mode_ == Mode::Exact) throw;
            }
        }
        const BigFloatComplex z = fold(arg).value().floating();
        switch (kind) {
            case FnKind::Sin:
            case FnKind::Cos:
            case FnKind::Tan: {
                // Reduce by the symbolic pi part first so sin(pi) is exactly 0.
                auto [sp, cp] = sincos_pi(arg.pi_mult, precision_);
                const BigFloatComplex c = arg.value.to_float(precision_).floating();
                BigFloatComplex s0(sp, BigFloat(precision_)), c0(cp, BigFloat(precision_));
                BigFloatComplex s = c.is_zero() ? s0 : c.sin() * c0 + c.cos() * s0;
                BigFloatComplex co = c.is_zero() ? c0 : c.cos() * c0 - c.sin() * s0;
                if (kind == FnKind::Sin) return Scalar(s);
                if (kind == FnKind::Cos) return Scalar(co);
                return (YamadaComplex(Scalar(s)) / YamadaComplex(Scalar(co))).value();
            }
            case FnKind::Exp: return Scalar(z.exp());
            case FnKind::Log:
                if (z.is_zero()) throw Error(ErrorCode::BranchPoint, "log(0)");
                return Scalar(z.log());
        }
        return z;
    }

    static Scalar exact_function(FnKind kind, const PiValue& arg) {
        const Scalar& c = arg.value;
        switch (kind) {
            case FnKind::Sin:
            case FnKind::Cos:
            case FnKind::Tan: {
                if (!c.is_zero()) throw Error(ErrorCode::NotExact, std::string(fn_name(kind)) + "(" + c.str() + ") is not rational");
                auto s = sin_pi_exact(arg.pi_mult);
                auto co = cos_pi_exact(arg.pi_mult);
                if (kind == FnKind::Sin && s) return Scalar(*s);
                if (kind == FnKind::Cos && co) return Scalar(*co);
                if (kind == FnKind::Tan && s && co) return (YamadaComplex(*s) / YamadaComplex(*co)).value();
                throw Error(ErrorCode::NotExact,
                            std::string(fn_name(kind)) + "(" + arg.pi_mult.str() + "*pi) is not rational");
            }
            case FnKind::Exp:
                if (c.is_zero() && arg.pi_mult.is_zero()) return Scalar(1);
                throw Error(ErrorCode::NotExact, "exp of a nonzero value is not rational");
            case FnKind::Log:
                if (arg.pi_mult.is_zero() && c.is_zero()) throw Error(ErrorCode::BranchPoint, "log(0)");
                if (arg.pi_mult.is_zero() && c == Scalar(1)) return Scalar(0);
                throw Error(ErrorCode::NotExact, "log of a value other than 1 is not rational");
        }
        return Scalar(0);
    }

    const Bindings& bindings_;
    Mode mode_;
    long precision_;
};

}  // namespace

PiValue yamada_eval_pi(const Expr& e, const Bindings& bindings, Mode mode, long precision) {
    return Evaluator(bindings, mode, precision).eval(e);
}

YamadaComplex yamada_eval(const Expr& e, const Bindings& bindings, Mode mode, long precision) {
    Evaluator ev(bindings, mode, precision);
    return ev.fold(ev.eval(e));
}

}  // namespace dbz
