#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <vector>

#include "qlat/catalog.hpp"
#include "qlat/report.hpp"

namespace py = pybind11;

namespace {

qlat::ModelConfig resolve(const std::string& name, const std::vector<int>& shape) {
  qlat::ModelConfig cfg = qlat::catalog_config(name);
  if (!shape.empty()) cfg.volume = qlat::Volume(shape, cfg.volume.periodic);
  return cfg;
}

std::string config_json(const std::string& name) {
  return qlat::config_to_json(qlat::catalog_config(name)).dump(2);
}

std::string certify_json(const std::string& name, const std::vector<int>& shape) {
  return qlat::certify_config(resolve(name, shape)).dump(2);
}

std::string spectrum_json(const std::string& name) {
  return qlat::spectrum_config(qlat::catalog_config(name)).dump(2);
}

std::string verify_json(const std::string& name, const std::vector<int>& shape,
                        unsigned seed, const std::string& profile) {
  const qlat::ModelConfig cfg = resolve(name, shape);
  const double scale = qlat::tolerance_profile(profile).scale;
  const auto checks = qlat::verify_config(cfg, seed, scale);
  return qlat::run_report_json(qlat::certify_config(cfg), checks).dump(2);
}

std::string certify_from_config_json(const std::string& text) {
  const qlat::ModelConfig cfg = qlat::config_from_json(qlat::Json::parse(text));
  return qlat::certify_config(cfg).dump(2);
}

} // namespace

PYBIND11_MODULE(_qlat, m) {
  m.doc() = "ergodicity certificates for dissipative lattice models";
  m.def("catalog_names", &qlat::catalog_names, "names of the built-in models");
  m.def("config_json", &config_json, py::arg("name"),
        "default configuration of a built-in model as a JSON string");
  m.def("certify_json", &certify_json, py::arg("name"),
        py::arg("shape") = std::vector<int>{},
        "ergodicity certificate as a JSON string");
  m.def("spectrum_json", &spectrum_json, py::arg("name"),
        "single-site spectral data as a JSON string");
  m.def("verify_json", &verify_json, py::arg("name"),
        py::arg("shape") = std::vector<int>{}, py::arg("seed") = 1u,
        py::arg("profile") = std::string("default"),
        "full check battery report as a JSON string");
  m.def("certify_from_config_json", &certify_from_config_json, py::arg("config"),
        "certificate for a configuration given as a JSON string");
  m.attr("__version__") = "0.1.0";

  py::register_exception<qlat::SchemaError>(m, "SchemaError", PyExc_ValueError);
  py::register_exception<qlat::ErgodicityError>(m, "ErgodicityError",
                                                PyExc_RuntimeError);
}
