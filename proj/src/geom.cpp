#include "dbz/geom.hpp"

#include <vector>

namespace dbz {

std::string PlanePoint::str() const {
    const Scalar& v = z.value();
    return v.real().str() + "," + v.imag().str();
}

std::string SpherePoint::str() const { return xi.str() + "," + eta.str() + "," + zeta.str(); }

SpherePoint SpherePoint::north_pole(Mode mode, long precision) {
    return {Scalar::zero(mode, precision), Scalar::zero(mode, precision), Scalar::one(mode, precision)};
}

SpherePoint SpherePoint::south_pole(Mode mode, long precision) {
    return {Scalar::zero(mode, precision), Scalar::zero(mode, precision), -Scalar::one(mode, precision)};
}

Circle::Circle(YamadaComplex c, Scalar r) : center(std::move(c)), radius(std::move(r)) {
    if (!radius.is_real()) throw Error(ErrorCode::InvalidArgument, "circle radius must be real");
    const bool negative = radius.is_exact() ? radius.exact().re.sign() < 0 : radius.floating().re.sign() < 0;
    if (negative) throw Error(ErrorCode::InvalidArgument, "circle radius must be nonnegative");
}

PlanePoint invert(const Circle& c, const PlanePoint& p) {
    if (c.radius.is_zero()) throw Error(ErrorCode::ZeroRadiusCircle, "inversion in a radius-0 circle is not defined");
    YamadaComplex r2 = c.radius * c.radius;
    return {c.center + r2 * y_div(Scalar::one(c.radius.mode(), c.radius.precision()), (p.z - c.center).conj())};
}

SpherePoint to_sphere(const PlanePoint& p) {
    const Scalar& z = p.z.value();
    const Mode mode = z.mode();
    const long prec = z.precision() ? z.precision() : kDefaultPrecision;
    const Scalar one = Scalar::one(mode, prec);
    const Scalar two = one + one;
    const Scalar n = z.norm();
    const Scalar d = n + one;  // never zero
    return {two * z.real() / d, two * z.imag() / d, (n - one) / d};
}

PlanePoint to_plane(const SpherePoint& s) {
    const Mode mode = s.xi.mode();
    const long prec = s.xi.precision() ? s.xi.precision() : kDefaultPrecision;
    const Scalar one = Scalar::one(mode, prec);
    const Scalar norm = s.xi * s.xi + s.eta * s.eta + s.zeta * s.zeta;
    if (!s.xi.is_real() || !s.eta.is_real() || !s.zeta.is_real())
        throw Error(ErrorCode::OffSphere, "sphere coordinates must be real");
    if (mode == Mode::Exact) {
        if (!(norm == one)) throw Error(ErrorCode::OffSphere, s.str() + " is not on the unit sphere");
    } else {
        BigFloat tol(1.0, prec);
        mpfr_mul_2si(tol.get(), tol.get(), -(prec - 8), MPFR_RNDN);
        if (tol < (norm - one).floating().abs())
            throw Error(ErrorCode::OffSphere, s.str() + " is not on the unit sphere");
    }
    return {y_div(s.xi + s.eta * Scalar::i(mode, prec), one - s.zeta)};
}

namespace {

std::vector<Scalar> split_components(std::string_view text, std::size_t count, Mode mode, long precision) {
    std::vector<Scalar> out;
    std::size_t pos = 0;
    while (out.size() < count) {
        std::size_t end = text.find(',', pos);
        if (end == std::string_view::npos) end = text.size();
        std::string_view part = text.substr(pos, end - pos);
        while (!part.empty() && part.front() == ' ') part.remove_prefix(1);
        while (!part.empty() && part.back() == ' ') part.remove_suffix(1);
        if (part.empty()) break;
        if (mode == Mode::Exact) {
            out.push_back(Scalar(Rational::parse(part)));
        } else {
            out.push_back(Scalar(BigFloatComplex(BigFloat::parse(part, precision), BigFloat(precision))));
        }
        pos = end + 1;
        if (end == text.size()) break;
    }
    if (out.size() != count || pos < text.size())
        throw Error(ErrorCode::InvalidArgument,
                    "expected " + std::to_string(count) + " comma-separated components in '" + std::string(text) + "'");
    return out;
}

}  // namespace

PlanePoint parse_plane_point(std::string_view text, Mode mode, long precision) {
    auto c = split_components(text, 2, mode, precision);
    return {c[0] + c[1] * Scalar::i(mode, precision)};
}

SpherePoint parse_sphere_point(std::string_view text, Mode mode, long precision) {
    auto c = split_components(text, 3, mode, precision);
    return {c[0], c[1], c[2]};
}

}  // namespace dbz
