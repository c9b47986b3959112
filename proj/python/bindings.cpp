#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "norden/checks.hpp"
#include "norden/connections.hpp"
#include "norden/forge.hpp"
#include "norden/model_io.hpp"
#include "norden/report.hpp"

namespace py = pybind11;
using namespace norden;

namespace {

py::array_t<double> to_array(const DenseTensor& t) {
  std::vector<py::ssize_t> shape(static_cast<std::size_t>(t.rank()), t.dim());
  py::array_t<double> out(shape);
  const auto src = t.components();
  std::copy(src.begin(), src.end(), out.mutable_data());
  return out;
}

struct Local {
  PointData pd;
  ConnectionCoeffs lc;
  DenseTensor dJ;
};

Local local(const Model& m) {
  Local l{point_data(m), {}, {}};
  l.lc = levi_civita(l.pd);
  l.dJ = nabla_J(l.lc, l.pd);
  return l;
}

Model generate_model(const std::string& kind, int dim, std::uint64_t seed, int budget, const std::string& name) {
  if (dim < 2 || dim % 2 != 0) throw Error("dimension must be even and >= 2");
  InstanceRecipe r{name, instance_kind_from_string(kind), dim, seed, budget};
  if (r.name.empty()) r.name = kind + "_" + std::to_string(dim) + "_" + std::to_string(seed);
  SearchOutcome s = generate(r);
  if (!s.found()) throw Error(r.name + ": " + s.message);
  return *s.model;
}

}  // namespace

PYBIND11_MODULE(_norden, m) {
  m.doc() = "Norden structure verification toolkit";
  m.attr("__version__") = kToolkitVersion;

  auto base = py::register_exception<Error>(m, "NordenError", PyExc_RuntimeError);
  py::register_exception<ValidationError>(m, "ValidationError", base.ptr());
  py::register_exception<ModelFormatError>(m, "ModelFormatError", base.ptr());

  py::class_<Model>(m, "Model")
      .def_readonly("name", &Model::name)
      .def_property_readonly("dim", [](const Model& x) { return x.structure.dim(); })
      .def_property_readonly("is_chart", [](const Model& x) { return x.frame.kind == FrameKind::chart; })
      .def_property_readonly("metric", [](const Model& x) { return to_array(x.structure.g); })
      .def_property_readonly("J", [](const Model& x) { return to_array(x.structure.J); })
      .def_property_readonly("provenance", [](const Model& x) { return x.provenance; })
      .def("to_json", &emit_model)
      .def("__repr__", [](const Model& x) {
        return "<norden.Model " + x.name + " dim=" + std::to_string(x.structure.dim()) + ">";
      });

  m.def("parse_model", &parse_model, py::arg("text"), py::arg("fallback_name") = "model");
  m.def("load_model", &load_model, py::arg("path"));
  m.def("save_model", &save_model, py::arg("model"), py::arg("path"));
  m.def("generate", &generate_model, py::arg("kind"), py::arg("dim"), py::arg("seed"), py::arg("budget") = 0,
        py::arg("name") = "");
  m.def("instance_kinds", [] {
    std::vector<std::string> out;
    for (auto k : {InstanceKind::flat, InstanceKind::random_norden, InstanceKind::quasi_kahler_search,
                   InstanceKind::isotropic_search, InstanceKind::parallel_torsion_search, InstanceKind::chart_norden})
      out.push_back(to_string(k));
    return out;
  });

  m.def("validate", [](const Model& x) {
    const ValidationOutcome v = validate(x);
    py::list violations;
    for (const auto& e : v.violations) violations.append(py::make_tuple(e.message, e.residual));
    py::dict d;
    d["ok"] = v.ok();
    d["violations"] = violations;
    d["metric_signature"] = py::make_tuple(v.metric_signature.positive, v.metric_signature.negative);
    d["assoc_signature"] = py::make_tuple(v.assoc_signature.positive, v.assoc_signature.negative);
    d["j_squared_residual"] = v.j_squared_residual;
    d["anti_isometry_residual"] = v.anti_isometry_residual;
    d["jacobi_residual"] = v.jacobi_residual;
    return d;
  });

  m.def(
      "verify_json",
      [](const Model& x, const std::vector<std::string>& checks, double scale) {
        return report_to_json(verify(x, checks, scale));
      },
      py::arg("model"), py::arg("checks") = std::vector<std::string>{}, py::arg("tolerance_scale") = 1.0);
  m.def("report_text", [](const std::string& json) { return report_to_text(report_from_json(json)); });
  m.def(
      "run_corpus_json",
      [](const std::filesystem::path& dir, double scale) { return corpus_to_json(run_corpus(dir, scale)); },
      py::arg("directory"), py::arg("tolerance_scale") = 1.0);
  m.def("tolerance_scale_from_env", &tolerance_scale_from_env);

  m.def("check_catalog", [] {
    py::list out;
    for (const CheckInfo& c : check_catalog()) {
      py::dict d;
      d["id"] = c.id;
      d["paper_ref"] = c.paper_ref;
      d["description"] = c.description;
      d["base_tolerance"] = c.base_tolerance;
      d["uses_finite_differences"] = c.uses_finite_differences;
      out.append(d);
    }
    return out;
  });

  m.def("nabla_J", [](const Model& x) { return to_array(local(x).dJ); },
        "(k, a, b) = ((nabla_a J) e_b)^k for the Levi-Civita connection.");
  m.def("fundamental_tensor", [](const Model& x) {
    const Local l = local(x);
    return to_array(fundamental_F(l.dJ, l.pd.structure));
  });
  m.def("christoffels", [](const Model& x) { return to_array(local(x).lc.gamma); });
  m.def("square_norm", [](const Model& x) {
    const Local l = local(x);
    return square_norm(l.pd.structure, l.dJ);
  });
  m.def("canonical_connection", [](const Model& x) {
    const Local l = local(x);
    const DeformedConnection dc = canonical_connection(l.pd, l.lc, l.dJ);
    py::dict d;
    d["Q"] = to_array(dc.Q);
    d["T"] = to_array(dc.T);
    d["gamma"] = to_array(dc.prime.gamma);
    return d;
  });
}
