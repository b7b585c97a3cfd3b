#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "treeunif/analysis.hpp"
#include "treeunif/error.hpp"
#include "treeunif/generators.hpp"
#include "treeunif/io.hpp"
#include "treeunif/pipeline.hpp"

namespace py = pybind11;
using namespace treeunif;

namespace {

py::dict run_py(const std::string& generate, const std::string& input, std::optional<double> beta,
                std::optional<double> gamma, std::optional<double> delta, std::optional<std::string> eps0, int depth,
                std::vector<double> alphas, std::size_t samples, std::uint64_t seed, std::optional<std::string> out_dir,
                bool svg) {
  RunConfig cfg;
  cfg.generate = generate;
  cfg.input_path = input;
  cfg.beta = beta;
  cfg.gamma = gamma;
  cfg.delta = delta;
  if (eps0) cfg.eps0 = parse_rational(*eps0);
  cfg.depth = depth;
  cfg.alphas = std::move(alphas);
  cfg.samples = samples;
  cfg.seed = seed;
  cfg.svg = svg;
  RunResult res;
  {
    py::gil_scoped_release release;
    res = run(cfg);
    if (out_dir) {
      cfg.out_dir = *out_dir;
      write_artifacts(res, cfg);
    }
  }
  py::dict d;
  d["certified"] = res.certified();
  d["failed_checks"] = res.failed_checks;
  d["reports"] = dump(res.reports);
  d["decomposition"] = res.decomposition_json;
  d["skeleton"] = res.skeleton_json;
  d["skeleton_dot"] = res.skeleton_dot;
  d["svgs"] = res.svgs;
  d["summary"] = text_summary(res);
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Constructive uniformization of quasiconformal trees";

  // Released on purpose: the type lives as long as the module.
  static py::handle exc = py::exception<Error>(m, "TreeunifError").release();
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      PyErr_SetString(exc.ptr(), (std::string(to_string(e.code())) + ": " + e.what()).c_str());
    }
  });

  m.def("run", &run_py, py::arg("generate") = "", py::arg("input") = "", py::arg("beta") = py::none(),
        py::arg("gamma") = py::none(), py::arg("delta") = py::none(), py::arg("eps0") = py::none(),
        py::arg("depth") = 0, py::arg("alphas") = std::vector<double>{1.2, 1.5, 2.0}, py::arg("samples") = 500,
        py::arg("seed") = 1, py::arg("out_dir") = py::none(), py::arg("svg") = false,
        "Runs the full pipeline; JSON artifacts are returned as strings.");
  m.def(
      "generate_tree", [](const std::string& spec) { return dump(tree_to_json(generate_spec(parse_generator(spec)))); },
      py::arg("spec"), "Tree JSON for a generator spec such as 'csst:3'.");
  m.def(
      "hausdorff_L", [](double alpha, int K, const std::string& eps0) { return hausdorff_L(alpha, K, parse_rational(eps0)); },
      py::arg("alpha"), py::arg("K"), py::arg("eps0"));
  m.def(
      "dimension_upper_bound",
      [](int K, const std::string& eps0) { return dimension_upper_bound(K, parse_rational(eps0)); }, py::arg("K"),
      py::arg("eps0"));
}
