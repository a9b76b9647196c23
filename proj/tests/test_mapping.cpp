#include "doctest.h"

#include <functional>
#include <optional>

#include "dbz/mapping.hpp"

using namespace dbz;

namespace {

ExteriorMapSeries at_inf(const Expr& e, long order = 8) {
    return expand_at_infinity(e, "z", {}, {order, Mode::Exact, kDefaultPrecision});
}

ExteriorMapSeries at_inf(const std::string& e, long order = 8) { return at_inf(parse(e), order); }

Scalar q(long n, long d = 1) { return Scalar(Rational(n, d)); }

std::optional<ErrorCode> code_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    return std::nullopt;
}

BigFloat max_boundary_error(const Expr& map, const std::function<BigFloatComplex(const BigFloat&)>& boundary) {
    const long prec = 128;
    BigFloat worst(0.0, prec);
    const BigFloat two_pi = BigFloat::pi(prec) * BigFloat(2.0, prec);
    for (long k = 0; k < 97; ++k) {
        BigFloat theta = two_pi * BigFloat(Rational(2 * k + 1, 2 * 97), prec);
        Bindings b{{"z", Scalar(boundary(theta))}};
        BigFloat modulus = yamada_eval(map, b, Mode::Float, prec).value().floating().abs();
        BigFloat err = (modulus - BigFloat(1.0, prec)).abs();
        if (worst < err) worst = err;
    }
    return worst;
}

}  // namespace

TEST_CASE("expand_at_infinity") {
    ExteriorMapSeries disk = at_inf(disk_exterior_map(ComplexRational{1, 1}, 3));
    CHECK(disk.c1 == q(1, 3));
    CHECK(disk.c0 == Scalar(ComplexRational{Rational(-1, 3), Rational(-1, 3)}));
    CHECK(disk.tail.empty());

    ExteriorMapSeries id = at_inf("z");
    CHECK(id.c1 == q(1));
    CHECK(id.c0 == q(0));
    CHECK(id.tail.empty());

    ExteriorMapSeries zz = at_inf("z + 1/z");
    CHECK(zz.c1 == q(1));
    CHECK(zz.c0 == q(0));
    CHECK(zz.tail == std::vector<Scalar>{q(1)});

    ExteriorMapSeries psi = at_inf(segment_exterior_map(2));
    CHECK(psi.c1 == q(1));
    CHECK(psi.c0 == q(0));
    REQUIRE(psi.tail.size() >= 5);
    CHECK(psi.tail[0] == q(-1));
    CHECK(psi.tail[1] == q(0));
    CHECK(psi.tail[2] == q(-1));
    CHECK(psi.tail[3] == q(0));
    CHECK(psi.tail[4] == q(-2));

    CHECK(code_of([] { at_inf("z^2"); }) == ErrorCode::NotExteriorMap);
    CHECK(code_of([] { at_inf("1/z"); }) == ErrorCode::NotExteriorMap);
    CHECK(code_of([] { at_inf("0*z"); }) == ErrorCode::NotExteriorMap);
}

TEST_CASE("mapping_radius and mapping_center") {
    CHECK(mapping_radius(at_inf(disk_exterior_map(ComplexRational{1, 1}, 3))) == q(3));
    CHECK(mapping_radius(at_inf("z")) == q(1));
    CHECK(mapping_radius(at_inf(ellipse_exterior_map(2, 1))) == q(3, 2));
    CHECK(mapping_radius(at_inf(ellipse_exterior_map(5, 3))) == q(4));
    CHECK(mapping_radius(at_inf(segment_exterior_map(Rational(3)))) == q(3, 2));
    CHECK(mapping_center(at_inf(disk_exterior_map(ComplexRational{1, 1}, 3))) ==
          Scalar(ComplexRational{Rational(-1, 3), Rational(-1, 3)}));
    CHECK(mapping_center(at_inf(segment_exterior_map(2))) == q(0));
    CHECK(mapping_center(at_inf("2*z + 5 + 1/z")) == q(5));
    CHECK(code_of([] { mapping_radius(at_inf("-z")); }) == ErrorCode::NotPaperNormalized);
    CHECK(code_of([] { mapping_radius(at_inf("i*z")); }) == ErrorCode::NotPaperNormalized);
    CHECK_FALSE(at_inf("-z").is_normalized());
}

TEST_CASE("normalize") {
    ExteriorMapSeries disk = at_inf(disk_exterior_map(ComplexRational{1, 1}, 3));
    ExteriorMapSeries r = normalize(disk, Normalization::Radius);
    CHECK(r.c1 == q(1));
    CHECK(r.c0 == Scalar(ComplexRational{-1, -1}));
    ExteriorMapSeries c = normalize(disk, Normalization::Center);
    CHECK(c.c0 == q(0));
    CHECK(c.c1 == disk.c1);
    ExteriorMapSeries cc = normalize(c, Normalization::Center);
    CHECK(cc.c0 == c.c0);
    CHECK(cc.c1 == c.c1);
    CHECK(cc.tail == c.tail);
    for (const char* e : {"3*z - 2 + 1/z", "(z + z*sqrt(1 - 9/z^2))/5", "z/2 + i"}) {
        ExteriorMapSeries s = at_inf(e);
        CHECK(normalize(s, Normalization::Radius).c1 == q(1));
        CHECK(normalize(s, Normalization::Center).c0 == q(0));
    }
}

TEST_CASE("dbz_value_at_infinity") {
    CHECK(dbz_value_at_infinity(at_inf(segment_exterior_map(2))) == q(0));
    CHECK(dbz_value_at_infinity(at_inf(disk_exterior_map(ComplexRational{1, 1}, 3))) ==
          Scalar(ComplexRational{Rational(-1, 3), Rational(-1, 3)}));
    CHECK(dbz_value_at_infinity(at_inf("z")) == q(0));
    for (const char* e : {"3*z - 2 + 1/z", "z + 7/4 + 1/z^2", "(z + z*sqrt(1 - 3/z^2))/4 + 2"}) {
        ExteriorMapSeries s = at_inf(e);
        CHECK(dbz_value_at_infinity(s) == mapping_center(s));
    }
    ExteriorMapSeries s = at_inf("z + 1 + 1/z^3");
    ExteriorMapSeries back = ExteriorMapSeries::from_w_series(s.to_w_series());
    CHECK(back.c0 == s.c0);
    CHECK(back.tail == s.tail);
    CHECK(at_inf("z + 1/z").to_json() ==
          R"({"anchor":"inf","lead":-1,"coeffs":["1","0","1"],"trunc":8,"exact_tail":true,"mode":"exact"})");
}

TEST_CASE("float mode expansion at infinity") {
    ExteriorMapSeries s = expand_at_infinity(ellipse_exterior_map(2, 1), "z", {}, {6, Mode::Float, 128});
    CHECK_FALSE(s.c1.is_exact());
    BigFloat err = (mapping_radius(s).floating().re - BigFloat(1.5, 128)).abs();
    CHECK(err < BigFloat(1e-35, 128));
}

TEST_CASE("builtin maps send the boundary to the unit circle") {
    const long prec = 128;
    CHECK(max_boundary_error(disk_exterior_map(ComplexRational{1, 1}, 3), [&](const BigFloat& t) {
              return BigFloatComplex(BigFloat(1.0, prec) + BigFloat(3.0, prec) * t.cos(),
                                     BigFloat(1.0, prec) + BigFloat(3.0, prec) * t.sin());
          }) < BigFloat(1e-10, prec));
    CHECK(max_boundary_error(segment_exterior_map(2), [&](const BigFloat& t) {
              return BigFloatComplex(BigFloat(2.0, prec) * t.cos(), BigFloat(0.0, prec));
          }) < BigFloat(1e-10, prec));
    CHECK(max_boundary_error(ellipse_exterior_map(2, 1), [&](const BigFloat& t) {
              return BigFloatComplex(BigFloat(2.0, prec) * t.cos(), BigFloat(1.0, prec) * t.sin());
          }) < BigFloat(1e-10, prec));
    CHECK(max_boundary_error(ellipse_exterior_map(5, 4), [&](const BigFloat& t) {
              return BigFloatComplex(BigFloat(5.0, prec) * t.cos(), BigFloat(4.0, prec) * t.sin());
          }) < BigFloat(1e-10, prec));
}

TEST_CASE("estimate_coeffs") {
    auto zz = estimate_coeffs(sample_w_circle(parse("z + 1/z"), "z", Rational(1, 2), 64), Rational(1, 2), -1, 3);
    CHECK((zz[2] - BigFloatComplex(ComplexRational(1), 128)).abs() < BigFloat(1e-12, 128));
    CHECK((zz[0] - BigFloatComplex(ComplexRational(1), 128)).abs() < BigFloat(1e-12, 128));
    CHECK(zz[1].abs() < BigFloat(1e-12, 128));

    std::vector<ContourSample> constant;
    const BigFloat two_pi = BigFloat::pi(128) * BigFloat(2.0, 128);
    for (long k = 0; k < 16; ++k)
        constant.push_back({two_pi * BigFloat(Rational(k, 16), 128), BigFloatComplex(ComplexRational(5), 128)});
    auto c5 = estimate_coeffs(constant, Rational(1, 3), -2, 2);
    CHECK((c5[2] - BigFloatComplex(ComplexRational(5), 128)).abs() < BigFloat(1e-30, 128));
    for (std::size_t k : {0u, 1u, 3u, 4u}) CHECK(c5[k].abs() < BigFloat(1e-30, 128));

    CHECK(code_of([&] { estimate_coeffs(constant, Rational(1, 3), -4, 4); }) == ErrorCode::InsufficientSamples);
    CHECK_FALSE(code_of([&] { estimate_coeffs(constant, Rational(1, 3), 0, 6); }).has_value());
    CHECK(code_of([&] { estimate_coeffs(constant, Rational(1, 3), 2, 1); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("estimate_coeffs error decays geometrically") {
    const Expr psi = segment_exterior_map(2);
    auto error = [&](long n) {
        auto c = estimate_coeffs(sample_w_circle(psi, "z", Rational(1, 3), n), Rational(1, 3), -1, 5);
        const long want[] = {1, 0, -1, 0, -1, 0, -2};
        BigFloat worst(0.0, 128);
        for (std::size_t k = 0; k < 7; ++k) {
            BigFloat e = (c[k] - BigFloatComplex(ComplexRational(want[k]), 128)).abs();
            if (worst < e) worst = e;
        }
        return worst;
    };
    BigFloat e32 = error(32), e64 = error(64), e128 = error(128);
    CHECK(e64 * BigFloat(10.0, 128) < e32);
    CHECK(e128 * BigFloat(10.0, 128) < e64);
}

TEST_CASE("CSV samples") {
    auto s = read_samples_csv("theta,re,im\n0,1,0\n1.5, 2.25 ,-3\r\n\n3,0x1p-2,0\n");
    REQUIRE(s.size() == 3);
    CHECK(s[1].theta == BigFloat(1.5, 128));
    CHECK(s[1].value.re == BigFloat(2.25, 128));
    CHECK(s[1].value.im == BigFloat(-3.0, 128));
    CHECK(s[2].value.re == BigFloat(0.25, 128));
    CHECK(read_samples_csv("0,1,0\n").size() == 1);
    CHECK_THROWS_AS(read_samples_csv("0,1\n"), Error);
    CHECK_THROWS_AS(read_samples_csv("0,1,0\nx,1,0\n"), Error);
}
