// JSON strings in, JSON strings out; the Python package converts to dicts.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "deforma/deformation.hpp"
#include "deforma/io.hpp"

namespace py = pybind11;
using namespace deforma;
using io::Json;

namespace {

Json dims_json(const std::map<int, std::size_t>& m) {
  Json j = Json::object();
  for (const auto& [k, v] : m) j[std::to_string(k)] = v;
  return j;
}

std::string check_linfty_json(const std::string& text, unsigned cutoff) {
  const LInftyStructure l = io::linfty_from(io::parse(text, "<input>"), "", cutoff);
  return io::report_to(check_linfty(l, cutoff)).dump();
}

std::string check_dgla_json(const std::string& text) {
  return io::report_to(check_dgla(io::dgla_from(io::parse(text, "<input>"), ""))).dump();
}

std::string cone_json(const std::string& text, unsigned cutoff) {
  const DGLAMorphism chi = io::morphism_from(io::parse(text, "<input>"), "");
  return io::linfty_to(build_cone(chi, cutoff).brackets).dump();
}

std::string certify_json(const std::string& text, unsigned cutoff) {
  const LInftyStructure l = io::linfty_from(io::parse(text, "<input>"), "", cutoff);
  return io::certificate_to(certify_quasi_abelian(l, cutoff)).dump();
}

std::string cohomology_json(const std::string& cover, const std::string& sheaf, int p, int box) {
  const ToricCover c = io::cover_from(io::parse(cover, "<cover>"), "");
  const CohomologyTable t = toric_cohomology(c, sheaf == "theta" ? SheafKind::Theta : SheafKind::Forms, p, box);
  return Json{{"dims", dims_json(t.dims)}, {"next", dims_json(t.next)}, {"stable", t.stable}}.dump();
}

std::string btt_json(const std::string& cover, int box) {
  const BttReport b = btt_pipeline(io::cover_from(io::parse(cover, "<cover>"), ""), box);
  return Json{{"ok", b.ok()},
              {"theta_cohomology", dims_json(b.theta.dims)},
              {"hodge_injective", b.hodge.ok()},
              {"contraction_kernel", b.contraction.kernel_labels},
              {"h0_bracket_nonzero", b.h0_bracket_nonzero},
              {"verdict", io::certificate_to(b.verdict)},
              {"unobstructed", b.unobstructed},
              {"notes", b.notes}}
      .dump();
}

std::string theorem52_json(const std::string& object, const std::string& ring, std::size_t samples,
                           std::uint64_t seed) {
  const SemicosimplicialObject g = io::semicosimplicial_from(io::parse(object, "<input>"), "");
  const Theorem52Report r = theorem52_compare(g, ArtinianAlgebra::parse(ring), samples, seed);
  return Json{{"samples", r.samples},
              {"cocycles", r.cocycles},
              {"mc", r.mc},
              {"disagreements", r.disagreements},
              {"witnesses", r.witnesses}}
      .dump();
}

}  // namespace

PYBIND11_MODULE(_deforma, m) {
  // later registrations are tried first
  py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<InputError>(m, "InputError", PyExc_ValueError);
  m.def("check_linfty", &check_linfty_json, py::arg("linfty"), py::arg("cutoff") = 4);
  m.def("check_dgla", &check_dgla_json, py::arg("dgla"));
  m.def("cone", &cone_json, py::arg("morphism"), py::arg("cutoff") = 4);
  m.def("certify_quasi_abelian", &certify_json, py::arg("linfty"), py::arg("cutoff") = 4);
  m.def("toric_cohomology", &cohomology_json, py::arg("cover"), py::arg("sheaf"), py::arg("p"), py::arg("box"));
  m.def("btt", &btt_json, py::arg("cover"), py::arg("box"));
  m.def("theorem52", &theorem52_json, py::arg("object"), py::arg("ring"), py::arg("samples"), py::arg("seed"));
}
