#include "dbz/dbzcalc.hpp"

#include <cctype>

namespace dbz {

Scalar dbz_value(const LaurentSeries& s) { return s.coeff(0); }

LaurentSeries expand_bound(const Expr& e, std::string_view var, const ExpansionPoint& at, const Bindings& bindings,
                           const ExpandOptions& options) {
    if (bindings.find(var) != bindings.end())
        throw Error(ErrorCode::InvalidArgument, "expansion variable '" + std::string(var) + "' must not be bound");
    for (const auto& [name, value] : bindings) {
        if (options.mode == Mode::Exact && !value.is_exact())
            throw Error(ErrorCode::ModeMismatch, "float binding for '" + name + "' in exact mode");
    }
    return expand(substitute(e, bindings), var, at, options);
}

Scalar dbz_value(const Expr& e, std::string_view var, const ExpansionPoint& at, const Bindings& bindings,
                 const ExpandOptions& options) {
    return dbz_value(expand_bound(e, var, at, bindings, options));
}

Scalar dbz_derivative(const Expr& e, std::string_view var, const ExpansionPoint& at, long n,
                      const Bindings& bindings, const ExpandOptions& options) {
    if (n < 0) throw Error(ErrorCode::InvalidArgument, "derivative order must be nonnegative");
    ExpandOptions opt = options;
    opt.order = std::max(opt.order, n);
    const LaurentSeries s = expand_bound(e, var, at, bindings, opt);

    Rational factorial(1);
    for (long k = 2; k <= n; ++k) factorial *= Rational(k);
    const Scalar by_coefficient = Scalar::from(ComplexRational(factorial), s.mode(), s.precision()) * s.coeff(n);

    LaurentSeries d = s;
    for (long k = 0; k < n; ++k) d = ls_derive(d);
    const Scalar by_derivative = dbz_value(d);

    if (!(by_coefficient == by_derivative))
        throw Error(ErrorCode::RouteMismatch, "n!*C_n = " + by_coefficient.str() + " but C0 of the derived series = " +
                                                  by_derivative.str());
    return by_coefficient;
}

ExpansionPoint parse_point(std::string_view text, const Bindings& bindings) {
    try {
        ComplexRational c = Scalar::parse(text, Mode::Exact).exact();
        return ExpansionPoint(c.re, Rational(0), c.im);
    } catch (const Error&) {
    }
    PiValue v = yamada_eval_pi(parse(text), bindings, Mode::Exact);
    const ComplexRational& c = v.value.exact();
    return ExpansionPoint(c.re, v.pi_mult, c.im);
}

Bindings parse_bindings(std::string_view text, Mode mode, long precision) {
    Bindings out;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t end = text.find_first_of(",;", pos);
        if (end == std::string_view::npos) end = text.size();
        std::string_view item = text.substr(pos, end - pos);
        pos = end + 1;
        while (!item.empty() && std::isspace(static_cast<unsigned char>(item.front()))) item.remove_prefix(1);
        while (!item.empty() && std::isspace(static_cast<unsigned char>(item.back()))) item.remove_suffix(1);
        if (item.empty()) continue;
        auto eq = item.find('=');
        if (eq == std::string_view::npos)
            throw Error(ErrorCode::InvalidArgument, "binding '" + std::string(item) + "' is not name=value");
        std::string name(item.substr(0, eq));
        while (!name.empty() && std::isspace(static_cast<unsigned char>(name.back()))) name.pop_back();
        std::string_view value = item.substr(eq + 1);
        while (!value.empty() && std::isspace(static_cast<unsigned char>(value.front()))) value.remove_prefix(1);
        if (name.empty() || is_reserved_name(name))
            throw Error(ErrorCode::InvalidArgument, "cannot bind '" + name + "'");
        // Exact-looking values stay exact; anything else is read as a float.
        try {
            out[name] = Scalar::parse(value, Mode::Exact);
        } catch (const Error&) {
            if (mode == Mode::Exact) throw;
            out[name] = Scalar::parse(value, Mode::Float, precision);
        }
    }
    return out;
}

}  // namespace dbz
