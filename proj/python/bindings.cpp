#include "rmtdec/cli.hpp"
#include "rmtdec/decimation.hpp"
#include "rmtdec/error.hpp"
#include "rmtdec/gap.hpp"
#include "rmtdec/verify.hpp"

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

namespace py = pybind11;
using namespace rmtdec;

namespace {

py::dict gap_dict(const GapPolynomial& g) {
  py::dict d;
  d["E"] = g.coeffs;
  d["n"] = g.n;
  d["interval"] = g.interval;
  return d;
}

EnsembleSpec make_spec(const std::string& kind, int n, const std::string& family, double a, int mu) {
  EnsembleSpec spec;
  spec.kind = parse_kind(kind);
  spec.n = n;
  spec.mu = mu;
  if (spec.kind == EnsembleKind::OE || spec.kind == EnsembleKind::UE || spec.kind == EnsembleKind::chUE)
    spec.weight = AdmissibleWeight::make(parse_family(family), a);
  spec.validate();
  return spec;
}

py::array_t<double> as_array(const SampleBatch& b) {
  py::array_t<double> out({static_cast<py::ssize_t>(b.size()), static_cast<py::ssize_t>(b.width)});
  std::copy(b.values.begin(), b.values.end(), out.mutable_data());
  return out;
}

}  // namespace

PYBIND11_MODULE(_rmtdec, m) {
  m.doc() = "rmtdec core bindings";
  static py::exception<Error> exc(m, "Error");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::set_error(exc, e.what());
    }
  });

  py::class_<AdmissibleWeight>(m, "Weight")
      .def_static("gauss", &AdmissibleWeight::gauss)
      .def_static("jacobi", &AdmissibleWeight::jacobi, py::arg("a"))
      .def_static("cauchy", &AdmissibleWeight::cauchy, py::arg("a"))
      .def_static("make", [](const std::string& family, double a) { return AdmissibleWeight::make(parse_family(family), a); },
                  py::arg("family"), py::arg("a") = 0.0)
      .def_property_readonly("family", [](const AdmissibleWeight& w) { return std::string(to_string(w.family())); })
      .def_property_readonly("a", &AdmissibleWeight::a)
      .def_property_readonly("omega", &AdmissibleWeight::omega)
      .def("theta", &AdmissibleWeight::theta)
      .def("theta1", &AdmissibleWeight::theta1)
      .def("w1", &AdmissibleWeight::w1)
      .def("w2", &AdmissibleWeight::w2)
      .def("companion", &AdmissibleWeight::companion)
      .def("alpha", &AdmissibleWeight::alpha)
      .def("beta", &AdmissibleWeight::beta)
      .def("__repr__", &AdmissibleWeight::label);

  m.def("cauchy_a0", &cauchy_a0, py::arg("n"), "Cauchy weight whose OE_n is the image of COE_n.");

  m.def(
      "sample",
      [](const std::string& kind, int n, std::size_t count, std::uint64_t seed, const std::string& family, double a,
         int mu) {
        const EnsembleSpec spec = make_spec(kind, n, family, a, mu);
        SampleBatch b;
        {
          py::gil_scoped_release release;
          b = sample_ensemble(spec, count, seed);
        }
        return as_array(b);
      },
      py::arg("kind"), py::arg("n"), py::arg("count"), py::arg("seed") = 1, py::arg("family") = "gauss",
      py::arg("a") = 0.0, py::arg("mu") = 0, "Draws as a (count, width) array, rows ascending.");

  m.def("singular_values", [](std::vector<double> x) { return singular_values(x); });
  m.def("decimate", [](std::vector<double> sv) {
    const DecimationResult d = decimate(sv);
    return py::make_tuple(d.even, d.odd);
  }, "Returns (even, odd) location sets of the singular values.");
  m.def("superpose", [](std::vector<double> a, std::vector<double> b) { return superpose(a, b); });

  m.def("gap_ue", [](const AdmissibleWeight& w, int n, double lo, double hi) {
    return gap_dict(gap_ue_exact(w, n, Interval{lo, hi}));
  }, py::arg("w"), py::arg("n"), py::arg("lo"), py::arg("hi"));
  m.def("gap_chue", [](const AdmissibleWeight& w, int mu, int m_, double s) {
    return gap_dict(gap_chue_exact(w, mu, m_, s));
  }, py::arg("w"), py::arg("mu"), py::arg("m"), py::arg("s"));
  m.def("gap_cue", [](int n, double theta) { return gap_dict(gap_cue_exact(n, theta)); }, py::arg("n"),
        py::arg("theta"));
  m.def("gap_orthogonal", [](int sign, int n, double theta) { return gap_dict(gap_orthogonal_exact(sign, n, theta)); },
        py::arg("sign"), py::arg("n"), py::arg("theta"));
  m.def("gap_oe_odd", [](const AdmissibleWeight& w, int n, double s) { return gap_dict(gap_oe_odd_exact(w, n, s)); },
        py::arg("w"), py::arg("n"), py::arg("s"));
  m.def(
      "gap_mc",
      [](const std::string& kind, int n, double lo, double hi, std::size_t count, std::uint64_t seed,
         const std::string& family, double a, int mu) {
        const EnsembleSpec spec = make_spec(kind, n, family, a, mu);
        GapEstimate g;
        {
          py::gil_scoped_release release;
          g = gap_mc(spec, Interval{lo, hi}, -1, count, seed);
        }
        std::vector<double> se;
        for (int k = 0; k < static_cast<int>(g.e.size()); ++k) se.push_back(g.stderr_of(k));
        py::dict d;
        d["E"] = g.e;
        d["stderr"] = se;
        d["count"] = g.count;
        return d;
      },
      py::arg("kind"), py::arg("n"), py::arg("lo"), py::arg("hi"), py::arg("count") = 100000, py::arg("seed") = 1,
      py::arg("family") = "gauss", py::arg("a") = 0.0, py::arg("mu") = 0);

  m.def("identity_names", &identity_names);
  m.def(
      "run_identity",
      [](const std::string& name, bool quick, std::uint64_t seed, std::size_t count) {
        SuiteOptions o;
        o.quick = quick;
        o.seed = seed;
        o.count = count;
        std::vector<VerificationReport> reps;
        {
          py::gil_scoped_release release;
          reps = run_identity(name, o);
        }
        return to_json(reps);
      },
      py::arg("name"), py::arg("quick") = true, py::arg("seed") = 1, py::arg("count") = 0,
      "Runs one identity sweep and returns the JSON report text.");

  m.def(
      "run_cli",
      [](std::vector<std::string> args) {
        args.insert(args.begin(), "rmtdec");
        std::vector<const char*> argv;
        for (const auto& s : args) argv.push_back(s.c_str());
        std::ostringstream out, err;
        const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), "Runs the command line in-process; returns (exit_code, stdout, stderr).");
}
