#pragma once

// Values and derivatives at singular points: f(a) is the constant
// coefficient C0 of the Laurent expansion about a.

#include <string>
#include <string_view>

#include "dbz/expr.hpp"
#include "dbz/series.hpp"
#include "dbz/yamada.hpp"

namespace dbz {

/// C0 of an expansion (zero when the series starts above exponent 0).
Scalar dbz_value(const LaurentSeries& s);

/// Binds the parameters, expands `e` in `var` about `at` and returns C0.
Scalar dbz_value(const Expr& e, std::string_view var, const ExpansionPoint& at, const Bindings& bindings = {},
                 const ExpandOptions& options = {});

/// n-th derivative at `at`, computed as n! * C_n and again as C0 of the
/// n-times differentiated series. Throws RouteMismatch if the two disagree.
Scalar dbz_derivative(const Expr& e, std::string_view var, const ExpansionPoint& at, long n,
                      const Bindings& bindings = {}, const ExpandOptions& options = {});

/// The expansion `dbz_value` works from, with bindings applied.
LaurentSeries expand_bound(const Expr& e, std::string_view var, const ExpansionPoint& at, const Bindings& bindings,
                           const ExpandOptions& options);

/// Evaluates an exact point such as "pi/2", "2*a", "1+i" or "-3/4" under
/// the given bindings.
ExpansionPoint parse_point(std::string_view text, const Bindings& bindings = {});

/// "a=1/2,b=3" (also accepts ';' separators and decimals).
Bindings parse_bindings(std::string_view text, Mode mode = Mode::Exact, long precision = kDefaultPrecision);

}  // namespace dbz
