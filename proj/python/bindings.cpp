#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "hypzero/curve.hpp"
#include "hypzero/errors.hpp"
#include "hypzero/experiments.hpp"
#include "hypzero/hyp_poly.hpp"
#include "hypzero/potential.hpp"
#include "hypzero/roots.hpp"

namespace py = pybind11;
using namespace hypzero;

namespace {

py::object from_json(const std::string& text) { return py::module_::import("json").attr("loads")(text); }

std::vector<std::string> as_strings(const std::vector<ComplexRational>& v) {
  std::vector<std::string> out;
  for (const auto& c : v) out.push_back(c.to_string());
  return out;
}

std::vector<ComplexRational> parse_all(const std::vector<std::string>& v) {
  std::vector<ComplexRational> out;
  for (const auto& s : v) out.push_back(ComplexRational::parse(s));
  return out;
}

std::vector<std::complex<double>> to_points(const std::vector<BigComplex>& v) {
  std::vector<std::complex<double>> out;
  for (const auto& z : v) out.push_back(z.to_complex());
  return out;
}

Box to_box(const std::tuple<double, double, double, double>& b) {
  return Box{std::get<0>(b), std::get<1>(b), std::get<2>(b), std::get<3>(b)};
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Zeros of hypergeometric polynomials with linear parameter schedules";

  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      switch (e.kind()) {
        case ErrorKind::NonConvergence:
        case ErrorKind::Reroute:
          PyErr_SetString(PyExc_ArithmeticError, e.what());
          break;
        case ErrorKind::MissingFile:
          PyErr_SetString(PyExc_FileNotFoundError, e.what());
          break;
        default:
          PyErr_SetString(PyExc_ValueError, e.what());
      }
    }
  });

  py::class_<ParameterSchedule>(m, "Schedule")
      .def(py::init([](const std::vector<std::string>& alphas, const std::vector<std::string>& cs,
                       const std::vector<std::string>& betas, const std::vector<std::string>& ds) {
             ParameterSchedule s{parse_all(alphas), parse_all(cs), parse_all(betas), parse_all(ds)};
             s.validate();
             return s;
           }),
           py::arg("alphas"), py::arg("cs"), py::arg("betas"), py::arg("ds"))
      .def_static("lemniscate", [](const std::string& k) { return ParameterSchedule::lemniscate_family(ComplexRational::parse(k)); })
      .def_static("shifted", [](const std::vector<std::string>& tail) { return ParameterSchedule::shifted_family(parse_all(tail)); })
      .def_static("parse", [](const std::string& text) { return ParameterSchedule::parse(text); })
      .def_property_readonly("alphas", [](const ParameterSchedule& s) { return as_strings(s.alphas); })
      .def_property_readonly("betas", [](const ParameterSchedule& s) { return as_strings(s.betas); })
      .def("is_degenerate", &ParameterSchedule::is_degenerate)
      .def("serialize", &ParameterSchedule::serialize)
      .def("hash", &ParameterSchedule::hash);

  py::class_<HypPolynomial>(m, "Polynomial")
      .def_readonly("n", &HypPolynomial::n)
      .def_property_readonly("degree", &HypPolynomial::degree)
      .def_property_readonly("coefficients", [](const HypPolynomial& p) { return as_strings(p.coeffs); })
      .def("satisfies_equation", [](const HypPolynomial& p) { return apply_hypergeometric_operator(p).coeffs.empty(); })
      .def("export", &export_polynomial);
  m.def("build_polynomial", &build_polynomial, py::arg("schedule"), py::arg("n"));

  py::class_<RootCountingMeasure>(m, "Roots")
      .def_property_readonly("roots", &RootCountingMeasure::as_complex)
      .def_readonly("precision_bits", &RootCountingMeasure::precision_bits)
      .def_property_readonly("residual_bounds",
                             [](const RootCountingMeasure& r) {
                               std::vector<double> out;
                               for (const auto& b : r.residual_bounds) out.push_back(b.to_double());
                               return out;
                             })
      .def("__len__", &RootCountingMeasure::size)
      .def("cauchy_transform",
           [](const RootCountingMeasure& r, std::complex<double> z) {
             return cauchy_transform_at(r, BigComplex(z, r.precision_bits)).to_complex();
           })
      .def("export", &export_roots, py::arg("schedule_hash"));
  m.def(
      "find_roots",
      [](const HypPolynomial& p, int precision_bits, bool auto_refine) {
        RootOptions o;
        o.precision_bits = precision_bits;
        o.auto_refine = auto_refine;
        return find_roots(p, o);
      },
      py::arg("polynomial"), py::arg("precision_bits") = 512, py::arg("auto_refine") = true);
  m.def(
      "vieta_deviation",
      [](const HypPolynomial& p, const RootCountingMeasure& r) { return vieta_check(p, r).max_deviation.to_double(); },
      "Largest relative deviation of the root sum and product from the coefficient values.");
  m.def("import_roots", [](const std::string& text) { return import_roots(text).measure; });

  py::class_<BivariateCurve>(m, "Curve")
      .def_property_readonly("w_degree", &BivariateCurve::w_degree)
      .def("export_terms", &BivariateCurve::export_terms)
      .def("evaluate", [](const BivariateCurve& c, const std::string& z, const std::string& w) {
        return c.evaluate(ComplexRational::parse(z), ComplexRational::parse(w)).to_string();
      });
  m.def("build_curve", &build_curve);
  m.def(
      "branches_at",
      [](const BivariateCurve& c, std::complex<double> z, int precision_bits) {
        return to_points(branches_at(c, BigComplex(z, precision_bits), precision_bits));
      },
      py::arg("curve"), py::arg("z"), py::arg("precision_bits") = 128);
  m.def(
      "branch_points",
      [](const ParameterSchedule& s, int precision_bits) {
        return to_points(branch_points(build_curve(s), s, precision_bits).points);
      },
      py::arg("schedule"), py::arg("precision_bits") = 256);
  m.def("discriminant", [](const ParameterSchedule& s) { return as_strings(w_discriminant(build_curve(s))); });
  m.def("rational_branches_vanish", [](const ParameterSchedule& s) { return verify_prop3(s).all_vanish; });

  py::class_<HarmonicSystem>(m, "HarmonicSystem")
      .def_readonly("basepoint", &HarmonicSystem::basepoint)
      .def_readonly("branch_points", &HarmonicSystem::branch_points)
      .def_readonly("offsets", &HarmonicSystem::offsets)
      .def_property_readonly("branch_count", &HarmonicSystem::branch_count)
      .def_property_readonly("closed_form", [](const HarmonicSystem& s) { return s.mode == HarmonicMode::ClosedForm; });
  m.def("harmonic_system", &make_harmonic_system, py::arg("schedule"), py::arg("basepoint") = std::nullopt);
  m.def("harmonic_value", &harmonic_value, py::arg("system"), py::arg("i"), py::arg("z"));
  m.def("shifted_value", &shifted_value, py::arg("system"), py::arg("i"), py::arg("z"));
  m.def("level_function", &level_function, py::arg("system"), py::arg("pair"), py::arg("z"));
  m.def(
      "psi",
      [](const HarmonicSystem& s, std::complex<double> z) {
        const auto v = psi_value(s, z);
        return py::make_tuple(v.value, v.index, v.tie);
      },
      "Returns (value, argmax branch index, tie flag).");

  py::class_<LevelCurve>(m, "LevelCurve")
      .def_readonly("pair", &LevelCurve::pair)
      .def_readonly("points", &LevelCurve::points)
      .def_readonly("residuals", &LevelCurve::residuals)
      .def_readonly("closed", &LevelCurve::closed)
      .def_readonly("stop_reasons", &LevelCurve::stop_reasons)
      .def_property_readonly("critical_points",
                             [](const LevelCurve& c) {
                               std::vector<std::complex<double>> out;
                               for (const auto& p : c.critical_points) out.push_back(p.z);
                               return out;
                             })
      .def("export", &export_level_curve);
  m.def(
      "trace_level_curve",
      [](const HarmonicSystem& s, LevelPair pair, std::complex<double> seed, double step) {
        TraceOptions o;
        o.step = step;
        return trace_level_curve(s, pair, seed, o);
      },
      py::arg("system"), py::arg("pair"), py::arg("seed"), py::arg("step") = 5e-3);
  m.def("seed_on_ray", &seed_on_ray, py::arg("system"), py::arg("pair"), py::arg("origin"), py::arg("direction"),
        py::arg("max_t") = 10.0);
  m.def("import_level_curve", &import_level_curve);

  py::class_<RegionGrid>(m, "RegionGrid")
      .def_readonly("resolution", &RegionGrid::resolution)
      .def_readonly("labels", &RegionGrid::labels)
      .def_property_readonly("distinct_labels", &RegionGrid::distinct_labels)
      .def_property_readonly("boundary_points", &RegionGrid::boundary_points)
      .def_property_readonly("cell_diagonal", &RegionGrid::cell_diagonal)
      .def("export_raster", &export_region_raster)
      .def("export_boundary", &export_boundary);
  m.def(
      "classify_regions",
      [](const HarmonicSystem& s, const std::tuple<double, double, double, double>& box, int resolution) {
        return classify_regions(s, to_box(box), resolution);
      },
      py::arg("system"), py::arg("box"), py::arg("resolution"));

  m.def(
      "zero_curve_distance",
      [](const std::vector<Point>& roots, const std::vector<Point>& curve, std::optional<double> right_of) {
        return from_json(
            zero_curve_distance(roots, curve, right_of ? Restriction::right_of(*right_of) : Restriction::none()).to_json());
      },
      py::arg("roots"), py::arg("curve"), py::arg("right_of") = std::nullopt);
  m.def("winding_number", &winding_number);
  m.def("cloud_box", [](const std::vector<Point>& pts, double margin) {
    const Box b = cloud_box(pts, margin);
    return py::make_tuple(b.xmin, b.xmax, b.ymin, b.ymax);
  }, py::arg("points"), py::arg("margin") = 0.25);
  m.def(
      "conjecture2_score",
      [](const std::vector<Point>& roots, const RegionGrid& grid, double epsilon) {
        return from_json(conjecture2_score(roots, grid, epsilon).to_json());
      },
      py::arg("roots"), py::arg("grid"), py::arg("epsilon") = 0.0);
  m.def(
      "uniform_null_score",
      [](const RegionGrid& grid, double epsilon, std::size_t samples, std::uint64_t seed) {
        const auto n = uniform_null_score(grid, epsilon, samples, seed);
        return py::make_tuple(n.fraction, n.sigma);
      },
      py::arg("grid"), py::arg("epsilon"), py::arg("samples") = 20000, py::arg("seed") = 1);
}
