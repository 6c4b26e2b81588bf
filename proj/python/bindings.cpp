#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

#include "wnv/classify.hpp"
#include "wnv/cli_io.hpp"
#include "wnv/error.hpp"
#include "wnv/fb_sim.hpp"
#include "wnv/nonlocal_eigen.hpp"
#include "wnv/ode_eigen.hpp"
#include "wnv/periodic_solver.hpp"

namespace py = pybind11;
using namespace wnv;

namespace {

py::array_t<double> array(const std::vector<double>& v) {
  return py::array_t<double>(static_cast<py::ssize_t>(v.size()), v.data());
}

py::dict outcome_dict(const Outcome& o) {
  std::vector<double> periods, lam;
  for (const auto& r : o.lambda_F) {
    periods.push_back(static_cast<double>(r.period));
    lam.push_back(r.lambda_F);
  }
  py::dict d;
  d["verdict"] = to_string(o.verdict);
  d["rule"] = to_string(o.rule);
  d["t_max"] = o.t_max;
  d["lambda_O"] = o.lambda_O;
  d["lambda_P_h0"] = o.lambda_P_h0;
  d["periods"] = o.periods;
  d["final_length"] = o.final_length;
  d["final_sup_u1"] = o.final_sup_u1;
  d["final_sup_u2"] = o.final_sup_u2;
  d["lambda_F_period"] = array(periods);
  d["lambda_F"] = array(lam);
  return d;
}

InitialData init_from(const ModelParams& p, const py::object& u1, const py::object& u2,
                      double scale) {
  InitialData init = default_init(p);
  if (!u1.is_none()) init.u1 = u1.cast<std::function<double(double)>>();
  if (!u2.is_none()) init.u2 = u2.cast<std::function<double(double)>>();
  return scale == 1.0 ? init : scaled(init, scale);
}

}  // namespace

PYBIND11_MODULE(_wnv, m) {
  m.doc() = "Seasonal West Nile virus nonlocal free-boundary model";

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<ParamError>(m, "ParamError", base.ptr());
  auto kernel_error = py::register_exception<KernelError>(m, "KernelError", base.ptr());
  py::register_exception<KernelMismatchError>(m, "KernelMismatchError", kernel_error.ptr());
  py::register_exception<NumericalError>(m, "NumericalError", base.ptr());
  py::register_exception<StepSizeError>(m, "StepSizeError", base.ptr());
  py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
  py::register_exception<IoError>(m, "IoError", base.ptr());

  py::class_<ModelParams> params(m, "ModelParams");
  params.def(py::init<>())
      .def(py::init([](const py::kwargs& kw) {
        ModelParams p;
        for (const auto& [key, value] : kw) {
          const std::string name = key.cast<std::string>();
          double* field = model_param_field(p, name);
          if (!field) throw py::type_error("unknown parameter " + name);
          *field = value.cast<double>();
        }
        return p;
      }))
      .def("validate", &validate_params)
      .def("as_dict",
           [](const ModelParams& p) {
             py::dict d;
             for (const auto& name : model_param_names()) d[name.c_str()] = model_param_value(p, name);
             return d;
           })
      .def("__eq__", [](const ModelParams& a, const ModelParams& b) { return a == b; })
      .def("__repr__", [](const ModelParams& p) {
        std::string s = "ModelParams(";
        for (const auto& name : model_param_names()) {
          s += name + "=" + format_number(model_param_value(p, name)) + (name == "h0" ? ")" : ", ");
        }
        return s;
      });
  for (const auto& name : model_param_names()) {
    params.def_property(
        name.c_str(), [name](const ModelParams& p) { return model_param_value(p, name); },
        [name](ModelParams& p, double v) { *model_param_field(p, name) = v; });
  }

  py::class_<Kernel>(m, "Kernel")
      .def_static("tent", &Kernel::tent, py::arg("radius"))
      .def_static("truncated_gaussian", &Kernel::truncated_gaussian, py::arg("sigma"))
      .def("density", &Kernel::density)
      .def("tail", &Kernel::tail)
      .def_property_readonly("support_radius", &Kernel::support_radius)
      .def_property_readonly("name", &Kernel::name)
      .def("same_as", &Kernel::same_as);

  m.def("basic_reproduction_number", &basic_reproduction_number);
  m.def("positivity_dt_bound", &positivity_dt_bound, py::arg("p"), py::arg("theta") = 0.9);

  m.def(
      "lambda1_O",
      [](const ModelParams& p, int samples) {
        const EigenResultODE r = lambda1_O(p, samples);
        py::dict d;
        d["lambda"] = r.lambda();
        d["lower"] = r.lower();
        d["principal"] = r.is_principal();
        d["case"] = to_string(r.case_tag);
        d["m"] = r.m;
        d["Lambda"] = r.Lambda;
        d["t"] = array(r.t);
        d["phi"] = array(r.phi);
        d["psi"] = array(r.psi);
        return d;
      },
      py::arg("p"), py::arg("samples") = 201);
  m.def("lambda1_O_oracle", &lambda1_O_oracle);

  m.def(
      "lambda1_star",
      [](const Kernel& k, double L1, double L2, double dx) {
        const NonlocalEigen r = lambda1_star(k, L1, L2, dx);
        py::dict d;
        d["lambda_star"] = r.lambda_star;
        d["x"] = array(r.x);
        d["eigvec"] = array(r.eigvec);
        d["residual"] = r.residual;
        return d;
      },
      py::arg("kernel"), py::arg("L1"), py::arg("L2"), py::arg("dx"));
  m.def(
      "lambda1_P",
      [](const ModelParams& p, const Kernel& k1, const Kernel& k2, double L1, double L2, double dx) {
        return lambda1_P(p, k1, k2, L1, L2, dx).lambda();
      },
      py::arg("p"), py::arg("kernel1"), py::arg("kernel2"), py::arg("L1"), py::arg("L2"),
      py::arg("dx"));
  m.def(
      "lambda1_F",
      [](const ModelParams& p, const Kernel& k, double g, double h, double dx) {
        return lambda1_F(p, k, g, h, dx);
      },
      py::arg("p"), py::arg("kernel"), py::arg("g"), py::arg("h"), py::arg("dx"));

  m.def(
      "ode_periodic",
      [](const ModelParams& p, double dt, double period_tol) {
        SolverSettings s;
        s.dt = dt;
        s.period_tol = period_tol;
        const PeriodicSolution sol = ode_periodic(p, s);
        std::vector<double> u1, u2;
        for (const auto& f : sol.samples) {
          u1.push_back(f.u1[0]);
          u2.push_back(f.u2[0]);
        }
        py::dict d;
        d["t"] = array(sol.t);
        d["U1"] = array(u1);
        d["U2"] = array(u2);
        d["periods"] = sol.periods;
        d["trivial"] = sol.trivial;
        return d;
      },
      py::arg("p"), py::arg("dt") = 0.0, py::arg("period_tol") = 1e-10);

  m.def(
      "periodic",
      [](const ModelParams& p, const Kernel& k, double L1, double L2, const std::string& from,
         double dx, double eps, double period_tol) {
        SolverSettings s;
        s.dx = dx;
        s.period_tol = period_tol;
        if (from != "above" && from != "below") throw ConfigError("from must be above or below");
        const PeriodicSolution sol = from == "above" ? periodic_from_above(p, k, L1, L2, s)
                                                     : periodic_from_below(p, k, L1, L2, eps, s);
        py::dict d;
        d["x"] = array(sol.x);
        d["U1"] = array(sol.at_start().u1);
        d["U2"] = array(sol.at_start().u2);
        d["periods"] = sol.periods;
        d["residual"] = sol.residual;
        d["trivial"] = sol.trivial;
        return d;
      },
      py::arg("p"), py::arg("kernel"), py::arg("L1"), py::arg("L2"), py::arg("from_") = "above",
      py::arg("dx") = 0.05, py::arg("eps") = 0.01, py::arg("period_tol") = 1e-8);

  m.def(
      "simulate",
      [](const ModelParams& p, const Kernel& k1, const Kernel& k2, int periods, double dx,
         const py::object& u1, const py::object& u2, double scale) {
        SimSettings s;
        s.dx = dx;
        const InitialData init = init_from(p, u1, u2, scale);
        Trajectory tr;
        {
          // Python initial data is sampled once, before the GIL is released.
          const Simulator sim(p, k1, k2, s);
          FieldState start = sim.initial_state(init);
          py::gil_scoped_release release;
          tr = sim.run(std::move(start), periods);
        }
        std::vector<double> t, g, h, s1, s2, lp, lf;
        for (std::size_t i = 0; i < tr.boundaries.size(); ++i) {
          t.push_back(tr.boundaries[i].t);
          g.push_back(tr.boundaries[i].g);
          h.push_back(tr.boundaries[i].h);
          s1.push_back(tr.norms[i].sup_u1);
          s2.push_back(tr.norms[i].sup_u2);
        }
        for (const auto& r : tr.lambda_F) {
          lp.push_back(static_cast<double>(r.period));
          lf.push_back(r.lambda_F);
        }
        const FieldState& f = tr.final_state;
        std::vector<double> x;
        for (std::size_t j = 0; j < f.size(); ++j) x.push_back(f.x(j));
        py::dict d;
        d["t"] = array(t);
        d["g"] = array(g);
        d["h"] = array(h);
        d["sup_u1"] = array(s1);
        d["sup_u2"] = array(s2);
        d["lambda_F_period"] = array(lp);
        d["lambda_F"] = array(lf);
        d["x"] = array(x);
        d["u1"] = array(f.u1);
        d["u2"] = array(f.u2);
        return d;
      },
      py::arg("p"), py::arg("kernel1"), py::arg("kernel2"), py::arg("periods"),
      py::arg("dx") = 0.02, py::arg("u1") = py::none(), py::arg("u2") = py::none(),
      py::arg("scale") = 1.0);

  m.def(
      "classify",
      [](const ModelParams& p, const Kernel& k1, const Kernel& k2, double dx, int max_periods,
         double scale) {
        ClassifySettings s;
        s.sim.dx = dx;
        s.max_periods = max_periods;
        const InitialData init = scaled(default_init(p), scale);
        Outcome o;
        {
          py::gil_scoped_release release;
          o = classify(p, k1, k2, init, s);
        }
        return outcome_dict(o);
      },
      py::arg("p"), py::arg("kernel1"), py::arg("kernel2"), py::arg("dx") = 0.02,
      py::arg("max_periods") = 2000, py::arg("scale") = 1.0);

  m.def("parse_config_echo", [](const std::string& text) { return emit_config(parse_config(text)); },
        "Resolved configuration text for an INI config.");
  m.def(
      "run_command",
      [](const std::string& command, const std::string& config_text, const std::string& out_dir) {
        const RunConfig c = parse_config(config_text);
        std::ostringstream out;
        run_command(command, c, out_dir, out);
        return out.str();
      },
      py::arg("command"), py::arg("config_text"), py::arg("out_dir"));
  m.attr("commands") = command_names();
}
