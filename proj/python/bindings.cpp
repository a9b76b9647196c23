#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "dbz/corpus.hpp"
#include "dbz/dbzcalc.hpp"
#include "dbz/geom.hpp"
#include "dbz/mapping.hpp"
#include "dbz/yamada.hpp"

namespace py = pybind11;
using namespace dbz;

namespace {

Mode mode_of(const std::string& name) {
    if (name == "exact") return Mode::Exact;
    if (name == "float") return Mode::Float;
    throw Error(ErrorCode::InvalidArgument, "mode must be 'exact' or 'float'");
}

ExpandOptions options(long order, const std::string& mode, long precision) {
    if (precision < 53) throw Error(ErrorCode::InvalidArgument, "precision must be at least 53 bits");
    return {order, mode_of(mode), precision};
}

}  // namespace

PYBIND11_MODULE(_dbzcalc, m) {
    m.doc() = "Division-by-zero calculus on truncated Laurent series";

    static PyObject* dbz_error = py::exception<Error>(m, "DbzError", PyExc_ValueError).release().ptr();
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            py::object value = py::handle(dbz_error)(std::string(e.what()));
            value.attr("name") = std::string(e.name());
            PyErr_SetObject(dbz_error, value.ptr());
        }
    });

    m.attr("DEFAULT_PRECISION") = kDefaultPrecision;
    m.attr("DEFAULT_ORDER") = kDefaultOrder;

    m.def(
        "dbz_value",
        [](const std::string& expr, const std::string& var, const std::string& at, const std::string& params,
           const std::string& mode, long precision, long order) {
            ExpandOptions o = options(order, mode, precision);
            Bindings b = parse_bindings(params, o.mode, o.precision);
            return dbz_value(parse(expr), var, parse_point(at, b), b, o).str();
        },
        py::arg("expr"), py::arg("var") = "x", py::arg("at") = "0", py::arg("params") = "", py::arg("mode") = "exact",
        py::arg("precision") = kDefaultPrecision, py::arg("order") = kDefaultOrder);

    m.def(
        "expand_json",
        [](const std::string& expr, const std::string& var, const std::string& at, long order,
           const std::string& params, const std::string& mode, long precision) {
            ExpandOptions o = options(order, mode, precision);
            Bindings b = parse_bindings(params, o.mode, o.precision);
            return expand_bound(parse(expr), var, parse_point(at, b), b, o).to_json();
        },
        py::arg("expr"), py::arg("var") = "x", py::arg("at") = "0", py::arg("order") = kDefaultOrder,
        py::arg("params") = "", py::arg("mode") = "exact", py::arg("precision") = kDefaultPrecision);

    m.def(
        "yamada",
        [](const std::string& expr, const std::string& params, const std::string& mode, long precision) {
            Mode md = mode_of(mode);
            return yamada_eval(parse(expr), parse_bindings(params, md, precision), md, precision).str();
        },
        py::arg("expr"), py::arg("params") = "", py::arg("mode") = "exact", py::arg("precision") = kDefaultPrecision);

    m.def(
        "invert",
        [](const std::string& point, const std::string& center, const std::string& radius) {
            PlanePoint c = parse_plane_point(center);
            return invert(Circle(c.z, Scalar(Rational::parse(radius))), parse_plane_point(point)).str();
        },
        py::arg("point"), py::arg("center") = "0,0", py::arg("radius") = "1");

    m.def("to_sphere", [](const std::string& point) { return to_sphere(parse_plane_point(point)).str(); });
    m.def("to_plane", [](const std::string& point) { return to_plane(parse_sphere_point(point)).str(); });

    m.def(
        "map_radius_center",
        [](const std::string& expr, const std::string& var, const std::string& params, long order) {
            Bindings b = parse_bindings(params);
            ExteriorMapSeries s = expand_at_infinity(parse(expr), var, b, {order, Mode::Exact, kDefaultPrecision});
            return std::make_pair(mapping_radius(s).str(), dbz_value_at_infinity(s).str());
        },
        py::arg("expr"), py::arg("var") = "z", py::arg("params") = "", py::arg("order") = kDefaultOrder);

    m.def("disk_map", [](const std::string& c, const std::string& r) {
        PlanePoint centre = parse_plane_point(c);
        return render(disk_exterior_map(centre.z.value().exact(), Rational::parse(r)));
    });
    m.def("segment_map", [](const std::string& a) { return render(segment_exterior_map(Rational::parse(a))); });
    m.def("ellipse_map", [](const std::string& p, const std::string& q) {
        return render(ellipse_exterior_map(Rational::parse(p), Rational::parse(q)));
    });

    m.def(
        "estimate_coeffs",
        [](const std::string& expr, const std::string& var, const std::string& rho, long samples, long n_lo,
           long n_hi, const std::string& params, long precision) {
            Rational r = Rational::parse(rho);
            auto s = sample_w_circle(parse(expr), var, r, samples, precision,
                                     parse_bindings(params, Mode::Float, precision));
            std::vector<std::pair<long, std::string>> out;
            auto c = estimate_coeffs(s, r, n_lo, n_hi);
            for (long n = n_lo; n <= n_hi; ++n) out.emplace_back(n, c[static_cast<std::size_t>(n - n_lo)].str());
            return out;
        },
        py::arg("expr"), py::arg("var") = "z", py::arg("rho") = "1/2", py::arg("samples") = 64, py::arg("n_lo") = -1,
        py::arg("n_hi") = 5, py::arg("params") = "", py::arg("precision") = kDefaultPrecision);

    m.def(
        "corpus_json",
        [](const std::string& mode, long precision) {
            return corpus_run(builtin_corpus(), options(kDefaultOrder, mode, precision)).to_json();
        },
        py::arg("mode") = "exact", py::arg("precision") = kDefaultPrecision);
}
