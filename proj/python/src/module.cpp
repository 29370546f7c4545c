#include <optional>
#include <string>

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "drazinlab/corpus.hpp"
#include "drazinlab/engine.hpp"
#include "drazinlab/errors.hpp"
#include "drazinlab/operator_lab.hpp"
#include "drazinlab/report.hpp"
#include "drazinlab/structure.hpp"
#include "drazinlab/suites.hpp"

namespace py = pybind11;
using namespace drazin;

namespace {

// JSON crosses the boundary as text and comes back as Python objects.
py::object to_python(const nlohmann::json& j) {
  return py::module_::import("json").attr("loads")(j.dump());
}

py::dict residuals_dict(const AxiomResiduals& r) {
  py::dict d;
  d["weak_commute"] = r.r_weak_commute;
  d["inner"] = r.r_inner;
  d["index"] = r.r_index;
  return d;
}

} // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Drazin inverses, chain structure and banded operator checks";

  // Translators run newest first, so the base class goes in first.
  py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<InputError>(m, "InputError", PyExc_ValueError);
  py::register_exception<ShapeError>(m, "ShapeError", PyExc_ValueError);
  py::register_exception<PreconditionError>(m, "PreconditionError", PyExc_ValueError);
  py::register_exception<SpectralSplitError>(m, "SpectralSplitError", PyExc_ArithmeticError);
  py::register_exception<IoError>(m, "IoError", PyExc_OSError);

  py::class_<DrazinResult>(m, "DrazinResult")
      .def_readonly("inverse", &DrazinResult::inverse)
      .def_readonly("index", &DrazinResult::index)
      .def_readonly("idempotent", &DrazinResult::idempotent)
      .def_readonly("core_dim", &DrazinResult::core_dim)
      .def_property_readonly("residuals",
                             [](const DrazinResult& r) { return residuals_dict(r.residuals); });

  m.def(
      "drazin_inverse",
      [](const CMatrix& a, std::optional<double> tol, std::optional<double> theta) {
        DrazinOptions opts;
        opts.rank_tol = tol;
        opts.theta = theta;
        return drazin_inverse(a, opts);
      },
      py::arg("a"), py::arg("tol") = py::none(), py::arg("theta") = py::none());
  m.def("drazin_index", &drazin_index, py::arg("a"), py::arg("tol") = py::none());
  m.def("drazin_oracle", &drazin_oracle, py::arg("a"), py::arg("index"),
        py::arg("tol") = py::none());
  m.def("spectral_projector", &spectral_projector, py::arg("a"), py::arg("tol") = py::none());
  m.def(
      "check_left_drazin",
      [](const CMatrix& a, const CMatrix& x, int j) {
        return residuals_dict(check_left_drazin(a, x, j));
      },
      py::arg("a"), py::arg("x"), py::arg("index"));
  m.def(
      "check_right_drazin",
      [](const CMatrix& a, const CMatrix& x, int j) {
        return residuals_dict(check_right_drazin(a, x, j));
      },
      py::arg("a"), py::arg("x"), py::arg("index"));

  m.def(
      "chain_report",
      [](const CMatrix& a, std::optional<double> tol) {
        return to_python(chain_to_json(chain_report(a, tol)));
      },
      py::arg("a"), py::arg("tol") = py::none());
  m.def(
      "bf_index", [](const CMatrix& a, int n, std::optional<double> tol) { return bf_index(a, n, tol); },
      py::arg("a"), py::arg("n"), py::arg("tol") = py::none());
  m.def(
      "perturb_expand",
      [](const CMatrix& t, const CMatrix& f, int n, std::optional<double> tol) {
        return to_python(perturb_to_json(perturb_expand(t, f, n, tol)));
      },
      py::arg("t"), py::arg("f"), py::arg("n"), py::arg("tol") = py::none());

  m.def(
      "generate_corpus",
      [](std::uint64_t seed, int count) {
        py::list out;
        const auto corpus = generate_corpus(seed, count);
        for (std::size_t i = 0; i < corpus.size(); ++i) {
          py::dict d = to_python(corpus_metadata(corpus[i], seed, static_cast<int>(i)));
          d["a"] = corpus[i].a;
          out.append(d);
        }
        return out;
      },
      py::arg("seed"), py::arg("count"));

  m.def(
      "shift_bundle",
      [](int window) {
        const ShiftBundle b = make_shift_bundle(window);
        py::dict d;
        py::list assertions;
        for (const auto& a : b.assertions) {
          py::dict x;
          x["name"] = a.name;
          x["deviation"] = a.deviation;
          x["allowance"] = a.allowance;
          x["passed"] = a.passed;
          assertions.append(x);
        }
        d["assertions"] = assertions;
        d["qnil_root"] = b.tp_certificate.samples.back().root;
        d["qnil_verdict"] = b.tp_certificate.verdict;
        d["left_inverse_norm"] = b.left_inverse.norm;
        d["not_invertible"] = b.non_invertibility.proven;
        d["passed"] = b.passed();
        return d;
      },
      py::arg("window") = kDefaultWindow);

  m.def(
      "run_suite",
      [](const std::string& name, std::uint64_t seed, int corpus_size, int window,
         std::optional<double> tol) {
        RunConfig c;
        c.seed = seed;
        c.corpus_size = corpus_size;
        c.window = window;
        c.tol = tol;
        c.validate();
        SuiteReport r;
        {
          py::gil_scoped_release release;
          r = run_suite(name, c);
        }
        return to_python(r.to_json());
      },
      py::arg("name"), py::arg("seed") = 1, py::arg("corpus_size") = kDefaultCorpusSize,
      py::arg("window") = 128, py::arg("tol") = py::none());
  m.def("suite_names", &suite_names);
  m.def("strip_timing", [](py::object report) {
    const std::string text = py::module_::import("json").attr("dumps")(report).cast<std::string>();
    return to_python(strip_timing(nlohmann::json::parse(text)));
  });
}
