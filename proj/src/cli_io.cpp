#include "wnv/cli_io.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <charconv>
#include <fmt/format.h>
#include <fstream>
#include <functional>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "wnv/error.hpp"
#include "wnv/nonlocal_eigen.hpp"
#include "wnv/ode_eigen.hpp"

namespace wnv {

namespace {

using Setter = std::function<void(RunConfig&, const std::string&)>;
using Getter = std::function<std::string(const RunConfig&)>;

struct Field {
  std::string key;
  Setter set;
  Getter get;
};

struct Section {
  std::string name;
  std::vector<Field> fields;
};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& text) {
  const std::string t = trim(text);
  double v = 0.0;
  const char* end = t.data() + t.size();
  const auto [ptr, ec] = std::from_chars(t.data(), end, v);
  if (t.empty() || ec != std::errc() || ptr != end) {
    throw ConfigError(fmt::format("malformed number '{}'", text));
  }
  return v;
}

int parse_int(const std::string& text) {
  const std::string t = trim(text);
  int v = 0;
  const char* end = t.data() + t.size();
  const auto [ptr, ec] = std::from_chars(t.data(), end, v);
  if (t.empty() || ec != std::errc() || ptr != end) {
    throw ConfigError(fmt::format("malformed integer '{}'", text));
  }
  return v;
}

bool parse_bool(const std::string& text) {
  const std::string t = trim(text);
  if (t == "true") return true;
  if (t == "false") return false;
  throw ConfigError(fmt::format("expected true or false, got '{}'", text));
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_double(item));
  if (out.empty()) throw ConfigError("empty list");
  return out;
}

std::string emit_list(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + format_number(v[i]);
  return s;
}

std::string choice(const std::string& text,
                   std::initializer_list<const char*> allowed) {
  const std::string t = trim(text);
  for (const char* a : allowed)
    if (t == a) return t;
  std::string list;
  for (const char* a : allowed) list += std::string(list.empty() ? "" : ", ") + a;
  throw ConfigError(fmt::format("'{}' is not one of {}", text, list));
}

const char* kernel_kind_name(KernelKind k) {
  switch (k) {
    case KernelKind::Tent: return "tent";
    case KernelKind::TruncatedGaussian: return "gaussian";
    case KernelKind::Custom: return "custom";
  }
  return "?";
}

template <typename T>
Field num(const std::string& key, T RunConfig::*section, double T::*member) {
  return {key,
          [=](RunConfig& c, const std::string& v) { (c.*section).*member = parse_double(v); },
          [=](const RunConfig& c) { return format_number((c.*section).*member); }};
}

template <typename T>
Field integer(const std::string& key, T RunConfig::*section, int T::*member) {
  return {key,
          [=](RunConfig& c, const std::string& v) { (c.*section).*member = parse_int(v); },
          [=](const RunConfig& c) { return std::to_string((c.*section).*member); }};
}

template <typename T>
Field list(const std::string& key, T RunConfig::*section, std::vector<double> T::*member) {
  return {key,
          [=](RunConfig& c, const std::string& v) { (c.*section).*member = parse_list(v); },
          [=](const RunConfig& c) { return emit_list((c.*section).*member); }};
}

std::vector<Field> kernel_fields(KernelSpec RunConfig::*spec) {
  return {{"kind",
           [spec](RunConfig& c, const std::string& v) {
             const std::string k = choice(v, {"tent", "gaussian"});
             (c.*spec).kind = k == "tent" ? KernelKind::Tent : KernelKind::TruncatedGaussian;
           },
           [=](const RunConfig& c) { return std::string(kernel_kind_name((c.*spec).kind)); }},
          num("shape", spec, &KernelSpec::shape)};
}

// Every accepted section and key, in emission order. [kernel] is handled separately.
const std::vector<Section>& sections() {
  static const std::vector<Section> table = [] {
    std::vector<Section> t;
    Section model{"model", {}};
    for (const std::string& name : model_param_names()) {
      model.fields.push_back(
          {name,
           [name](RunConfig& c, const std::string& v) {
             *model_param_field(c.model, name) = parse_double(v);
           },
           [name](const RunConfig& c) { return format_number(model_param_value(c.model, name)); }});
    }
    t.push_back(model);

    using N = NumericsConfig;
    t.push_back({"numerics",
                 {num("dx", &RunConfig::numerics, &N::dx),
                  {"dt",
                   [](RunConfig& c, const std::string& v) {
                     c.numerics.dt = trim(v) == "auto" ? 0.0 : parse_double(v);
                   },
                   [](const RunConfig& c) {
                     return c.numerics.dt <= 0.0 ? std::string("auto") : format_number(c.numerics.dt);
                   }},
                  integer("periods", &RunConfig::numerics, &N::periods),
                  num("period_tol", &RunConfig::numerics, &N::period_tol),
                  integer("max_periods", &RunConfig::numerics, &N::max_periods),
                  {"scheme",
                   [](RunConfig& c, const std::string& v) {
                     c.numerics.scheme = choice(v, {"euler", "ssprk3"}) == "euler"
                                             ? TimeScheme::Euler
                                             : TimeScheme::SSPRK3;
                   },
                   [](const RunConfig& c) {
                     return std::string(c.numerics.scheme == TimeScheme::Euler ? "euler" : "ssprk3");
                   }},
                  integer("ode_steps", &RunConfig::numerics, &N::ode_steps),
                  integer("samples", &RunConfig::numerics, &N::samples)}});

    t.push_back({"lamP",
                 {num("L1", &RunConfig::lamP, &IntervalConfig::L1),
                  num("L2", &RunConfig::lamP, &IntervalConfig::L2)}});

    using P = PeriodicConfig;
    t.push_back({"periodic",
                 {num("L1", &RunConfig::periodic, &P::L1),
                  num("L2", &RunConfig::periodic, &P::L2),
                  {"from",
                   [](RunConfig& c, const std::string& v) {
                     c.periodic.from = choice(v, {"above", "below", "ode"});
                   },
                   [](const RunConfig& c) { return c.periodic.from; }},
                  num("eps", &RunConfig::periodic, &P::eps)}});

    using S = SimulateConfig;
    t.push_back({"simulate",
                 {integer("snapshot_every", &RunConfig::simulate, &S::snapshot_every),
                  integer("record_every", &RunConfig::simulate, &S::record_every),
                  num("init_scale", &RunConfig::simulate, &S::init_scale)}});

    using C = ClassifyConfig;
    t.push_back({"classify",
                 {num("spread_tol", &RunConfig::classify, &C::spread_tol),
                  num("vanish_factor", &RunConfig::classify, &C::vanish_factor),
                  num("stall_tol", &RunConfig::classify, &C::stall_tol),
                  integer("stall_periods", &RunConfig::classify, &C::stall_periods),
                  {"search",
                   [](RunConfig& c, const std::string& v) {
                     c.classify.search = choice(v, {"none", "mu", "sigma"});
                   },
                   [](const RunConfig& c) { return c.classify.search; }},
                  num("low", &RunConfig::classify, &C::low),
                  num("high", &RunConfig::classify, &C::high),
                  num("rel_tol", &RunConfig::classify, &C::rel_tol)}});

    using W = SweepConfig;
    t.push_back({"sweep",
                 {list("delta", &RunConfig::sweep, &W::delta), list("b1", &RunConfig::sweep, &W::b1),
                  list("mu", &RunConfig::sweep, &W::mu), list("h0", &RunConfig::sweep, &W::h0),
                  integer("threads", &RunConfig::sweep, &W::threads)}});

    using K = ContourConfig;
    t.push_back({"contour",
                 {list("delta", &RunConfig::contour, &K::delta),
                  num("b1_lo", &RunConfig::contour, &K::b1_lo),
                  num("b1_hi", &RunConfig::contour, &K::b1_hi),
                  {"tie_k",
                   [](RunConfig& c, const std::string& v) {
                     c.contour.tie_k = parse_bool(v);
                   },
                   [](const RunConfig& c) { return std::string(c.contour.tie_k ? "true" : "false"); }}}});
    return t;
  }();
  return table;
}

}  // namespace

void validate_config(const RunConfig& c) {
  require_valid(c.model);
  c.kernel1.make();
  c.kernel2.make();
  auto positive = [](const char* key, double v) {
    if (!(v > 0.0)) throw ConfigError(std::string(key) + " must be positive");
  };
  auto at_least = [](const char* key, int v, int lo) {
    if (v < lo) throw ConfigError(fmt::format("{} must be at least {}", key, lo));
  };
  positive("numerics.dx", c.numerics.dx);
  if (c.numerics.dt < 0.0) throw ConfigError("numerics.dt must be positive or auto");
  at_least("numerics.periods", c.numerics.periods, 0);
  positive("numerics.period_tol", c.numerics.period_tol);
  at_least("numerics.max_periods", c.numerics.max_periods, 1);
  at_least("numerics.ode_steps", c.numerics.ode_steps, 1);
  at_least("numerics.samples", c.numerics.samples, 2);
  if (!(c.lamP.L2 > c.lamP.L1)) throw ConfigError("lamP.L2 must exceed lamP.L1");
  if (!(c.periodic.L2 > c.periodic.L1)) throw ConfigError("periodic.L2 must exceed periodic.L1");
  positive("periodic.eps", c.periodic.eps);
  at_least("simulate.snapshot_every", c.simulate.snapshot_every, 0);
  at_least("simulate.record_every", c.simulate.record_every, 1);
  if (!(c.simulate.init_scale >= 0.0)) throw ConfigError("simulate.init_scale must be nonnegative");
  positive("classify.spread_tol", c.classify.spread_tol);
  positive("classify.vanish_factor", c.classify.vanish_factor);
  positive("classify.stall_tol", c.classify.stall_tol);
  at_least("classify.stall_periods", c.classify.stall_periods, 1);
  positive("classify.low", c.classify.low);
  if (!(c.classify.high > c.classify.low)) throw ConfigError("classify.high must exceed classify.low");
  positive("classify.rel_tol", c.classify.rel_tol);
  at_least("sweep.threads", c.sweep.threads, 0);
  positive("contour.b1_lo", c.contour.b1_lo);
  if (!(c.contour.b1_hi > c.contour.b1_lo)) throw ConfigError("contour.b1_hi must exceed contour.b1_lo");
}

std::string format_number(double v) { return fmt::format("{:.17g}", v); }

bool RunConfig::operator==(const RunConfig& o) const {
  return model == o.model && kernel1 == o.kernel1 && kernel2 == o.kernel2 &&
         numerics == o.numerics && lamP == o.lamP && periodic == o.periodic &&
         simulate == o.simulate && classify == o.classify && sweep == o.sweep &&
         contour == o.contour;
}

ClassifySettings RunConfig::classify_settings() const {
  ClassifySettings s;
  s.sim = sim_settings();
  s.sim.snapshot_every = 0;
  s.max_periods = numerics.max_periods;
  s.spread_tol = classify.spread_tol;
  s.vanish_factor = classify.vanish_factor;
  s.stall_tol = classify.stall_tol;
  s.stall_periods = classify.stall_periods;
  return s;
}

SolverSettings RunConfig::solver_settings() const {
  SolverSettings s;
  s.dt = numerics.dt;
  s.dx = numerics.dx;
  s.period_tol = numerics.period_tol;
  s.max_periods = numerics.max_periods;
  s.scheme = numerics.scheme;
  s.ode_steps = numerics.ode_steps;
  return s;
}

SimSettings RunConfig::sim_settings() const {
  SimSettings s;
  s.dx = numerics.dx;
  s.dt = numerics.dt;
  s.snapshot_every = simulate.snapshot_every;
  s.record_every = simulate.record_every;
  return s;
}

RunConfig parse_config(const std::string& text) {
  // '#' lines are comments too, so emitted file headers parse back.
  std::string cleaned;
  std::istringstream lines(text);
  for (std::string line; std::getline(lines, line);) {
    const std::string t = trim(line);
    if (!t.empty() && t[0] == '#') continue;
    cleaned += line + "\n";
  }
  boost::property_tree::ptree tree;
  try {
    std::istringstream in(cleaned);
    boost::property_tree::ini_parser::read_ini(in, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ConfigError(fmt::format("malformed config at line {}: {}", e.line(), e.message()));
  }

  RunConfig c;
  std::map<std::string, const Section*> by_name;
  for (const Section& s : sections()) by_name[s.name] = &s;
  const bool shared = tree.count("kernel") > 0;
  const bool split = tree.count("kernel1") > 0 || tree.count("kernel2") > 0;
  if (shared && split) throw ConfigError("kernel: use either [kernel] or [kernel1]/[kernel2]");

  std::set<std::string> seen;
  for (const auto& [name, body] : tree) {
    if (body.empty() && !body.data().empty()) {
      throw ConfigError(fmt::format("{}: key outside any section", name));
    }
    std::vector<Field> fields;
    if (name == "kernel" || name == "kernel1" || name == "kernel2") {
      fields = kernel_fields(name == "kernel2" ? &RunConfig::kernel2 : &RunConfig::kernel1);
    } else if (auto it = by_name.find(name); it != by_name.end()) {
      fields = it->second->fields;
    } else {
      throw ConfigError(fmt::format("unknown section [{}]", name));
    }
    for (const auto& [key, value] : body) {
      const auto f = std::find_if(fields.begin(), fields.end(), [&](const Field& x) { return x.key == key; });
      if (f == fields.end()) throw ConfigError(fmt::format("unknown key {}.{}", name, key));
      try {
        f->set(c, value.data());
      } catch (const ConfigError& e) {
        throw ConfigError(fmt::format("{}.{}: {}", name, key, e.what()));
      }
      seen.insert(name + "." + key);
    }
    if (name == "kernel") c.kernel2 = c.kernel1;
  }

  for (const Section& s : sections()) {
    for (const Field& f : s.fields) {
      if (!seen.count(s.name + "." + f.key)) c.defaulted.push_back(s.name + "." + f.key);
    }
  }
  for (const char* sec : {"kernel", "kernel1", "kernel2"}) {
    if (std::string(sec) == "kernel" ? split : !split) continue;
    for (const char* key : {"kind", "shape"}) {
      const std::string k = std::string(sec) + "." + key;
      if (!seen.count(k)) c.defaulted.push_back(k);
    }
  }
  validate_config(c);
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string emit_config(const RunConfig& config) {
  std::string out;
  auto emit_section = [&](const std::string& name, const std::vector<Field>& fields) {
    out += "[" + name + "]\n";
    for (const Field& f : fields) out += f.key + " = " + f.get(config) + "\n";
  };
  bool first = true;
  for (const Section& s : sections()) {
    if (!first) out += "\n";
    first = false;
    emit_section(s.name, s.fields);
    if (s.name == "model") {
      out += "\n";
      if (config.kernels_equal()) {
        emit_section("kernel", kernel_fields(&RunConfig::kernel1));
      } else {
        emit_section("kernel1", kernel_fields(&RunConfig::kernel1));
        out += "\n";
        emit_section("kernel2", kernel_fields(&RunConfig::kernel2));
      }
    }
  }
  return out;
}

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{"eigen",    "lamP",     "periodic", "simulate",
                                              "classify", "sweep",    "contour"};
  return names;
}

namespace {

class CsvFile {
 public:
  CsvFile(const std::filesystem::path& path, const std::string& header,
          const std::vector<std::string>& columns)
      : path_(path), out_(path) {
    if (!out_) throw IoError("cannot write " + path.string());
    out_ << header;
    line(columns);
  }

  void line(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) out_ << (i ? "," : "") << cells[i];
    out_ << '\n';
  }

  void row(std::initializer_list<double> values) {
    std::vector<std::string> cells;
    for (double v : values) cells.push_back(format_number(v));
    line(cells);
  }

  void comment(const std::string& text) { out_ << "# " << text << '\n'; }

  ~CsvFile() noexcept(false) {
    out_.flush();
    if (!out_ && std::uncaught_exceptions() == 0) throw IoError("write failed for " + path_.string());
  }

 private:
  std::filesystem::path path_;
  std::ofstream out_;
};

std::string file_header(const std::string& command, const RunConfig& c) {
  std::string h = "# wnv " + command + "\n";
  std::istringstream text(emit_config(c));
  for (std::string line; std::getline(text, line);) h += line.empty() ? "#\n" : "# " + line + "\n";
  std::string defaulted;
  for (const auto& d : c.defaulted) defaulted += (defaulted.empty() ? "" : " ") + d;
  h += "# defaulted: " + (defaulted.empty() ? std::string("none") : defaulted) + "\n";
  return h;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  out.flush();
  if (!out) throw IoError("write failed for " + path.string());
}

nlohmann::json num_or_null(double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(); }

nlohmann::json outcome_json(const Outcome& o) {
  nlohmann::json trace = nlohmann::json::array();
  for (const auto& r : o.lambda_F) {
    trace.push_back({{"period", r.period}, {"t", r.t}, {"g", r.g}, {"h", r.h}, {"lambda_F", r.lambda_F}});
  }
  nlohmann::json j{{"verdict", to_string(o.verdict)},
                   {"rule", to_string(o.rule)},
                   {"evidence",
                    {{"lambda_O", num_or_null(o.lambda_O)},
                     {"lambda_P_h0", num_or_null(o.lambda_P_h0)},
                     {"periods", o.periods},
                     {"final_length", num_or_null(o.final_length)},
                     {"final_sup_u1", num_or_null(o.final_sup_u1)},
                     {"final_sup_u2", num_or_null(o.final_sup_u2)},
                     {"lambda_F", trace}}}};
  if (o.verdict == Verdict::Undetermined && o.rule == Rule::PeriodLimit) j["t_max"] = o.t_max;
  return j;
}

void require_shared_kernel(const RunConfig& c, const std::string& command) {
  if (!c.kernels_equal()) throw KernelMismatchError(command + " requires J1 = J2");
}

void cmd_eigen(const RunConfig& c, const std::filesystem::path& dir, std::ostream& out) {
  require_shared_kernel(c, "eigen");
  const EigenResultODE r = lambda1_O(c.model, c.numerics.samples);
  const std::string header = file_header("eigen", c);
  {
    CsvFile f(dir / "eigen.csv", header, {"lambda", "lower", "principal", "case", "m", "Lambda"});
    f.line({format_number(r.lambda()), format_number(r.lower()), r.is_principal() ? "1" : "0",
            to_string(r.case_tag), format_number(r.m), format_number(r.Lambda)});
  }
  if (!r.t.empty()) {
    CsvFile f(dir / "eigenfunction.csv", header, {"t", "phi", "psi"});
    for (std::size_t i = 0; i < r.t.size(); ++i) f.row({r.t[i], r.phi[i], r.psi[i]});
  }
  out << "lambda1_O = " << format_number(r.lambda());
  if (!r.is_principal()) out << " (generalized pair, lower " << format_number(r.lower()) << ")";
  out << "\n";
}

void cmd_lamP(const RunConfig& c, const std::filesystem::path& dir, std::ostream& out) {
  const EigenResultNonlocal r = lambda1_P(c.model, c.kernel1.make(), c.kernel2.make(), c.lamP.L1,
                                          c.lamP.L2, c.numerics.dx);
  const std::string header = file_header("lamP", c);
  {
    CsvFile f(dir / "lamP.csv", header,
              {"L1", "L2", "dx", "lambda_star", "lambda_P", "lower", "principal"});
    f.line({format_number(c.lamP.L1), format_number(c.lamP.L2), format_number(c.numerics.dx),
            format_number(r.op.lambda_star), format_number(r.lambda()),
            format_number(r.ode.lower()), r.is_principal() ? "1" : "0"});
  }
  {
    CsvFile f(dir / "lamP_eigenvector.csv", header, {"x", "g"});
    for (std::size_t j = 0; j < r.op.x.size(); ++j) f.row({r.op.x[j], r.op.eigvec[j]});
  }
  out << "lambda1_P = " << format_number(r.lambda()) << "\n";
}

void cmd_periodic(const RunConfig& c, const std::filesystem::path& dir, std::ostream& out) {
  const SolverSettings s = c.solver_settings();
  PeriodicSolution sol;
  if (c.periodic.from == "ode") {
    sol = ode_periodic(c.model, s);
  } else {
    require_shared_kernel(c, "periodic");
    const Kernel k = c.kernel1.make();
    sol = c.periodic.from == "above"
              ? periodic_from_above(c.model, k, c.periodic.L1, c.periodic.L2, s)
              : periodic_from_below(c.model, k, c.periodic.L1, c.periodic.L2, c.periodic.eps, s);
  }
  const std::string header = file_header("periodic", c);
  {
    CsvFile f(dir / "periodic.csv", header, {"x", "U1", "U2"});
    f.comment(fmt::format("origin {} periods {} residual {} trivial {}", to_string(sol.origin),
                          sol.periods, format_number(sol.residual), sol.trivial ? 1 : 0));
    const FieldPair& u = sol.at_start();
    for (std::size_t j = 0; j < sol.x.size(); ++j) f.row({sol.x[j], u.u1[j], u.u2[j]});
  }
  {
    CsvFile f(dir / "periodic_history.csv", header, {"period", "change", "sup_U1", "sup_U2"});
    for (std::size_t i = 0; i < sol.history.size(); ++i) {
      f.row({static_cast<double>(i + 1), sol.history[i], sol.sup1[i], sol.sup2[i]});
    }
  }
  out << "periodic solution: " << to_string(sol.origin) << ", " << sol.periods
      << " periods, residual " << format_number(sol.residual) << (sol.trivial ? ", trivial" : "")
      << "\n";
}

void cmd_simulate(const RunConfig& c, const std::filesystem::path& dir, std::ostream& out) {
  const InitialData init = scaled(default_init(c.model), c.simulate.init_scale);
  const Trajectory tr = simulate(c.model, c.kernel1.make(), c.kernel2.make(), init,
                                 c.numerics.periods, c.sim_settings());
  const std::string header = file_header("simulate", c);
  {
    CsvFile f(dir / "boundaries.csv", header, {"t", "g", "h"});
    for (const auto& b : tr.boundaries) f.row({b.t, b.g, b.h});
  }
  {
    CsvFile f(dir / "norms.csv", header, {"t", "sup_u1", "sup_u2"});
    for (const auto& n : tr.norms) f.row({n.t, n.sup_u1, n.sup_u2});
  }
  {
    CsvFile f(dir / "lambdaF.csv", header, {"period", "lambda_F"});
    if (!c.kernels_equal()) f.comment("lambda_F requires J1 = J2; not computed");
    for (const auto& r : tr.lambda_F) f.row({static_cast<double>(r.period), r.lambda_F});
  }
  for (const auto& snap : tr.snapshots) {
    CsvFile f(dir / fmt::format("field_{}.csv", format_number(snap.t)), header, {"x", "u1", "u2"});
    for (std::size_t j = 0; j < snap.x.size(); ++j) f.row({snap.x[j], snap.u1[j], snap.u2[j]});
  }
  const FieldState& s = tr.final_state;
  out << "t = " << format_number(s.t) << ": g = " << format_number(s.g)
      << ", h = " << format_number(s.h) << "\n";
}

void cmd_classify(const RunConfig& c, const std::filesystem::path& dir, std::ostream& out) {
  const Kernel k1 = c.kernel1.make(), k2 = c.kernel2.make();
  const ClassifySettings s = c.classify_settings();
  const InitialData init = scaled(default_init(c.model), c.simulate.init_scale);
  nlohmann::json j = outcome_json(classify(c.model, k1, k2, init, s));
  if (c.classify.search != "none") {
    const ThresholdResult r =
        c.classify.search == "mu"
            ? mu_threshold(c.model, k1, k2, init, c.classify.low, c.classify.high, s, c.classify.rel_tol)
            : smallness_threshold(c.model, k1, k2, default_init(c.model), c.classify.low,
                                  c.classify.high, s, c.classify.rel_tol);
    nlohmann::json path = nlohmann::json::array();
    for (const auto& p : r.path) path.push_back({{"value", p.value}, {"verdict", to_string(p.verdict)}});
    j["threshold"] = {{"parameter", c.classify.search},
                      {"status", to_string(r.status)},
                      {"low", r.low},
                      {"high", r.high},
                      {"verdict_low", to_string(r.verdict_low)},
                      {"verdict_high", to_string(r.verdict_high)},
                      {"iterations", r.iterations},
                      {"path", path}};
  }
  j["config"] = emit_config(c);
  write_text(dir / "outcome.json", j.dump(2) + "\n");
  j.erase("config");
  out << j.dump(2) << "\n";
}

void cmd_sweep(const RunConfig& c, const std::filesystem::path& dir, std::ostream& out) {
  const SweepGrid grid{c.sweep.delta, c.sweep.b1, c.sweep.mu, c.sweep.h0};
  const auto rows = sweep(c.model, c.kernel1.make(), c.kernel2.make(), grid, c.classify_settings(),
                          static_cast<unsigned>(c.sweep.threads));
  CsvFile f(dir / "phase.csv", file_header("sweep", c), {"delta", "b1", "mu", "h0", "verdict", "rule"});
  for (const auto& r : rows) {
    f.line({format_number(r.delta), format_number(r.b1), format_number(r.mu), format_number(r.h0),
            to_string(r.outcome.verdict), to_string(r.outcome.rule)});
  }
  out << rows.size() << " configurations classified\n";
}

void cmd_contour(const RunConfig& c, const std::filesystem::path& dir, std::ostream& out) {
  const ContourResult r =
      contour_zero(c.model, c.contour.delta, c.contour.b1_lo, c.contour.b1_hi, c.contour.tie_k);
  std::vector<std::string> cols{"delta", "b1"};
  if (c.contour.tie_k) cols.push_back("b1_closed_form");
  CsvFile f(dir / "contour.csv", file_header("contour", c), cols);
  for (double d : r.omitted) f.comment("no sign change at delta = " + format_number(d));
  for (const auto& p : r.points) {
    if (c.contour.tie_k && p.delta < 1.0) {
      f.row({p.delta, p.b1, contour_tied_closed_form(c.model, p.delta)});
    } else if (c.contour.tie_k) {
      f.line({format_number(p.delta), format_number(p.b1), ""});
    } else {
      f.row({p.delta, p.b1});
    }
  }
  out << r.points.size() << " contour points, " << r.omitted.size() << " omitted\n";
}

}  // namespace

void run_command(const std::string& command, const RunConfig& config,
                 const std::filesystem::path& out_dir, std::ostream& out) {
  static const std::map<std::string, void (*)(const RunConfig&, const std::filesystem::path&,
                                              std::ostream&)>
      table{{"eigen", cmd_eigen},       {"lamP", cmd_lamP},   {"periodic", cmd_periodic},
            {"simulate", cmd_simulate}, {"classify", cmd_classify}, {"sweep", cmd_sweep},
            {"contour", cmd_contour}};
  const auto it = table.find(command);
  if (it == table.end()) throw ConfigError("unknown command " + command);
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create " + out_dir.string() + ": " + ec.message());
  it->second(config, out_dir, out);
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const ConfigError*>(&e)) return 3;
  if (dynamic_cast<const ParamError*>(&e)) return 4;
  if (dynamic_cast<const KernelError*>(&e)) return 5;
  if (dynamic_cast<const NumericalError*>(&e)) return 6;
  if (dynamic_cast<const IoError*>(&e)) return 7;
  if (dynamic_cast<const StepSizeError*>(&e)) return 8;
  return 1;
}

}  // namespace wnv
