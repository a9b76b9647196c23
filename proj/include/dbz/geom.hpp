#pragma once

// Stereographic projection and circle inversion with totalized division.
// Convention: unit sphere centred at the origin, the plane through its
// equator, projection from the north pole (0,0,1). The north pole maps to 0
// and the centre of a circle inverts to itself.

#include <string>
#include <string_view>

#include "dbz/yamada.hpp"

namespace dbz {

struct PlanePoint {
    YamadaComplex z;

    friend bool operator==(const PlanePoint&, const PlanePoint&) = default;
    /// "x,y"
    std::string str() const;
};

struct SpherePoint {
    Scalar xi;
    Scalar eta;
    Scalar zeta;

    friend bool operator==(const SpherePoint&, const SpherePoint&) = default;
    /// "xi,eta,zeta"
    std::string str() const;

    static SpherePoint north_pole(Mode mode = Mode::Exact, long precision = kDefaultPrecision);
    static SpherePoint south_pole(Mode mode = Mode::Exact, long precision = kDefaultPrecision);
};

/// Radius 0 with centre 0 stands for a line; it is representational only.
struct Circle {
    YamadaComplex center;
    Scalar radius;

    Circle(YamadaComplex c, Scalar r);
    bool is_line_representative() const { return radius.is_zero() && center.is_zero(); }
};

/// center + radius^2 / conj(p - center), with 1/0 = 0 at the centre.
/// Throws ZeroRadiusCircle for radius 0.
PlanePoint invert(const Circle& c, const PlanePoint& p);

SpherePoint to_sphere(const PlanePoint& p);

/// (xi + i eta) / (1 - zeta) under totalized division. Throws OffSphere when
/// the point is not on the unit sphere (exactly in exact mode, within
/// 2^-(precision-8) in float mode).
PlanePoint to_plane(const SpherePoint& s);

/// "x,y" with rational or float components.
PlanePoint parse_plane_point(std::string_view text, Mode mode = Mode::Exact, long precision = kDefaultPrecision);
SpherePoint parse_sphere_point(std::string_view text, Mode mode = Mode::Exact, long precision = kDefaultPrecision);

}  // namespace dbz
