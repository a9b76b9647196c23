#pragma once

// Exterior conformal maps expanded at infinity:
//   f(z) = c1 z + c0 + c_{-1}/z + c_{-2}/z^2 + ...
// with the mapping radius 1/c1 and the mapping center c0.

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dbz/dbzcalc.hpp"

namespace dbz {

struct ExteriorMapSeries {
    Scalar c1;
    Scalar c0;
    std::vector<Scalar> tail;  // coefficients of z^-1, z^-2, ...
    long trunc = 0;            // highest n with the z^-n coefficient known
    bool exact_tail = true;
    Mode mode = Mode::Exact;
    long precision = kDefaultPrecision;

    /// c1 real and positive.
    bool is_normalized() const;

    /// The same data as a Laurent series in w = 1/z anchored at w = 0.
    LaurentSeries to_w_series() const;
    static ExteriorMapSeries from_w_series(const LaurentSeries& w);

    /// Series JSON with the anchor spelled {"anchor":"inf"}; coefficients are
    /// listed by powers of w = 1/z, so "lead":-1 is c1.
    std::string to_json() const;
};

/// Expands `e` at infinity by substituting var -> 1/w and expanding about
/// w = 0. Throws NotExteriorMap unless the w-expansion has lead exactly -1.
ExteriorMapSeries expand_at_infinity(const Expr& e, std::string_view var, const Bindings& bindings = {},
                                     const ExpandOptions& options = {});

/// 1/c1. Throws NotPaperNormalized unless c1 is real and positive.
Scalar mapping_radius(const ExteriorMapSeries& s);
Scalar mapping_center(const ExteriorMapSeries& s);

enum class Normalization { Radius, Center };
/// Radius: every coefficient divided by c1. Center: c0 replaced by 0.
ExteriorMapSeries normalize(const ExteriorMapSeries& s, Normalization kind);

/// The value at the point at infinity: c0, cross-checked against C0 of the
/// w-form series (RouteMismatch if they differ).
Scalar dbz_value_at_infinity(const ExteriorMapSeries& s);

// ---------------------------------------------------------------------------
// Closed-form exterior maps

/// Exterior of |z - center| <= radius: (z - center)/radius.
Expr disk_exterior_map(const ComplexRational& center, const Rational& radius);
/// Exterior of the segment [-a, a]: (z + z*sqrt(1 - a^2/z^2))/a.
Expr segment_exterior_map(const Rational& half_length);
/// Exterior of the ellipse with semi-axes p >= q > 0 on the real and
/// imaginary axes: (z + z*sqrt(1 - (p^2-q^2)/z^2))/(p+q).
Expr ellipse_exterior_map(const Rational& p, const Rational& q);

// ---------------------------------------------------------------------------
// Numeric coefficients by discrete contour integration

struct ContourSample {
    BigFloat theta;
    BigFloatComplex value;
};

/// Samples g(w) = f(1/w) at N equally spaced points of |w| = rho, where
/// f is `e` in `var` evaluated in float mode.
std::vector<ContourSample> sample_w_circle(const Expr& e, std::string_view var, const Rational& rho, long n,
                                           long precision = kDefaultPrecision, const Bindings& bindings = {});

/// Coefficients of w^n for n = n_lo..n_hi:
///   a_n ~ (1/N) sum_k g(rho e^{i theta_k}) rho^-n e^{-i n theta_k}.
/// Requires N >= 2 (n_hi - n_lo + 2) samples (InsufficientSamples).
/// The z-coefficient C_k is a_{-k}.
std::vector<BigFloatComplex> estimate_coeffs(const std::vector<ContourSample>& samples, const Rational& rho,
                                             long n_lo, long n_hi);

/// Rows of "theta,re,im"; a non-numeric first line is taken as a header.
std::vector<ContourSample> read_samples_csv(std::string_view text, long precision = kDefaultPrecision);

}  // namespace dbz
