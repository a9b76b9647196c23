#include "dbz/mapping.hpp"

#include <sstream>

#include "json.hpp"

namespace dbz {

namespace {

constexpr std::string_view kLocalVar = "_w";

}  // namespace

bool ExteriorMapSeries::is_normalized() const {
    if (!c1.is_real()) return false;
    if (c1.is_exact()) return c1.exact().re.sign() > 0;
    return c1.floating().re.sign() > 0;
}

LaurentSeries ExteriorMapSeries::to_w_series() const {
    std::vector<Scalar> coeffs{c1, c0};
    coeffs.insert(coeffs.end(), tail.begin(), tail.end());
    return {ExpansionPoint{}, -1, std::move(coeffs), trunc, exact_tail, mode, precision};
}

ExteriorMapSeries ExteriorMapSeries::from_w_series(const LaurentSeries& w) {
    if (w.is_zero() || w.is_undetermined() || w.lead() < -1)
        throw Error(ErrorCode::NotExteriorMap, w.is_zero() || w.is_undetermined()
                                                   ? "the map vanishes at infinity"
                                                   : "growth of order " + std::to_string(-w.lead()) + " at infinity");
    if (w.lead() > -1) throw Error(ErrorCode::NotExteriorMap, "the map is bounded at infinity (c1 = 0)");
    ExteriorMapSeries s;
    s.mode = w.mode();
    s.precision = w.mode() == Mode::Float ? w.precision() : kDefaultPrecision;
    s.c1 = w.coeff(-1);
    s.c0 = w.coeff(0);
    for (long n = 1; n <= w.trunc(); ++n) s.tail.push_back(w.coeff(n));
    while (!s.tail.empty() && s.tail.back().is_zero()) s.tail.pop_back();
    s.trunc = w.trunc();
    s.exact_tail = w.exact_tail();
    return s;
}

std::string ExteriorMapSeries::to_json() const {
    LaurentSeries w = to_w_series();
    nlohmann::ordered_json j;
    j["anchor"] = "inf";
    j["lead"] = w.lead();
    auto arr = nlohmann::ordered_json::array();
    for (const auto& c : w.coeffs()) arr.push_back(c.str());
    j["coeffs"] = arr;
    j["trunc"] = w.trunc();
    j["exact_tail"] = w.exact_tail();
    j["mode"] = std::string(mode_name(mode));
    if (mode == Mode::Float) j["precision"] = precision;
    return j.dump();
}

ExteriorMapSeries expand_at_infinity(const Expr& e, std::string_view var, const Bindings& bindings,
                                     const ExpandOptions& options) {
    Expr bound = substitute(e, bindings);
    Expr local = replace_var(bound, var, Expr::constant(Scalar(1)) / Expr::var(std::string(kLocalVar)));
    return ExteriorMapSeries::from_w_series(expand(local, kLocalVar, ExpansionPoint{}, options));
}

Scalar mapping_radius(const ExteriorMapSeries& s) {
    if (!s.is_normalized())
        throw Error(ErrorCode::NotPaperNormalized, "c1 = " + s.c1.str() + " is not real and positive");
    return Scalar::one(s.mode, s.precision) / s.c1;
}

Scalar mapping_center(const ExteriorMapSeries& s) { return s.c0; }

ExteriorMapSeries normalize(const ExteriorMapSeries& s, Normalization kind) {
    ExteriorMapSeries out = s;
    if (kind == Normalization::Center) {
        out.c0 = Scalar::zero(s.mode, s.precision);
        return out;
    }
    if (s.c1.is_zero()) throw Error(ErrorCode::NotExteriorMap, "c1 = 0");
    out.c1 = s.c1 / s.c1;
    out.c0 = s.c0 / s.c1;
    for (auto& c : out.tail) c = c / s.c1;
    return out;
}

Scalar dbz_value_at_infinity(const ExteriorMapSeries& s) {
    const Scalar via_series = dbz_value(s.to_w_series());
    if (!(via_series == s.c0))
        throw Error(ErrorCode::RouteMismatch, "C0 of the w-series is " + via_series.str() + ", c0 is " + s.c0.str());
    return s.c0;
}

// ---------------------------------------------------------------------------

Expr disk_exterior_map(const ComplexRational& center, const Rational& radius) {
    if (radius.sign() <= 0) throw Error(ErrorCode::InvalidArgument, "disk radius must be positive");
    return (Expr::var("z") - Expr::constant(Scalar(center))) / Expr::constant(Scalar(radius));
}

namespace {

Expr joukowski_inverse(const Rational& focal_sq, const Rational& scale) {
    // z * sqrt(1 - d^2/z^2) is the branch of sqrt(z^2 - d^2) that behaves like
    // z at infinity, analytic off the segment [-d, d].
    Expr z = Expr::var("z");
    Expr root = Expr::pow(Expr::constant(Scalar(1)) -
                              Expr::constant(Scalar(focal_sq)) / Expr::pow(z, Rational(2)),
                          Rational(1, 2));
    return (z + z * root) / Expr::constant(Scalar(scale));
}

}  // namespace

Expr segment_exterior_map(const Rational& half_length) {
    if (half_length.sign() <= 0) throw Error(ErrorCode::InvalidArgument, "segment half-length must be positive");
    return joukowski_inverse(half_length * half_length, half_length);
}

Expr ellipse_exterior_map(const Rational& p, const Rational& q) {
    if (q.sign() <= 0 || p < q) throw Error(ErrorCode::InvalidArgument, "ellipse needs p >= q > 0");
    return joukowski_inverse(p * p - q * q, p + q);
}

// ---------------------------------------------------------------------------

std::vector<ContourSample> sample_w_circle(const Expr& e, std::string_view var, const Rational& rho, long n,
                                           long precision, const Bindings& bindings) {
    if (n < 1) throw Error(ErrorCode::InsufficientSamples, "need at least one sample");
    if (rho.sign() <= 0) throw Error(ErrorCode::InvalidArgument, "sampling radius must be positive");
    std::vector<ContourSample> out;
    out.reserve(static_cast<std::size_t>(n));
    const BigFloat two_pi = BigFloat::pi(precision) * BigFloat(2.0, precision);
    const BigFloat r(rho, precision);
    const BigFloatComplex one(ComplexRational(1), precision);
    Bindings b = bindings;
    for (long k = 0; k < n; ++k) {
        BigFloat theta = two_pi * BigFloat(Rational(k, n), precision);
        BigFloatComplex w(r * theta.cos(), r * theta.sin());
        b[std::string(var)] = Scalar(one / w);
        YamadaComplex v = yamada_eval(e, b, Mode::Float, precision);
        out.push_back({theta, v.value().floating()});
    }
    return out;
}

std::vector<BigFloatComplex> estimate_coeffs(const std::vector<ContourSample>& samples, const Rational& rho,
                                             long n_lo, long n_hi) {
    if (n_hi < n_lo) throw Error(ErrorCode::InvalidArgument, "empty coefficient range");
    const long n = static_cast<long>(samples.size());
    if (n < 2 * (n_hi - n_lo + 2))
        throw Error(ErrorCode::InsufficientSamples, std::to_string(n) + " samples cannot resolve " +
                                                        std::to_string(n_hi - n_lo + 1) + " coefficients");
    const long prec = samples.front().value.precision();
    const BigFloat r(rho, prec);
    const BigFloat inv_n(Rational(1, n), prec);
    std::vector<BigFloatComplex> out;
    for (long m = n_lo; m <= n_hi; ++m) {
        // Summed in index order so results are bit-stable.
        BigFloatComplex acc(prec);
        for (const auto& s : samples) {
            BigFloat phase = -(s.theta * BigFloat(Rational(m), prec));
            acc = acc + s.value * BigFloatComplex(phase.cos(), phase.sin());
        }
        BigFloat scale = inv_n;
        BigFloat rm(1.0, prec);
        mpfr_pow_si(rm.get(), r.get(), -m, MPFR_RNDN);
        scale = scale * rm;
        out.push_back(BigFloatComplex(acc.re * scale, acc.im * scale));
    }
    return out;
}

std::vector<ContourSample> read_samples_csv(std::string_view text, long precision) {
    std::vector<ContourSample> out;
    std::istringstream in{std::string(text)};
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos) continue;
        std::vector<std::string> cells;
        std::stringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) {
            auto a = cell.find_first_not_of(" \t");
            auto b = cell.find_last_not_of(" \t");
            cells.push_back(a == std::string::npos ? std::string{} : cell.substr(a, b - a + 1));
        }
        if (cells.size() != 3) throw Error(ErrorCode::InvalidArgument, "expected theta,re,im in line '" + line + "'");
        try {
            out.push_back({BigFloat::parse(cells[0], precision),
                           BigFloatComplex(BigFloat::parse(cells[1], precision), BigFloat::parse(cells[2], precision))});
        } catch (const Error&) {
            if (!first) throw;
        }
        first = false;
    }
    return out;
}

}  // namespace dbz
