#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "wnv/classify.hpp"
#include "wnv/model.hpp"
#include "wnv/periodic_solver.hpp"

namespace wnv {

struct KernelSpec {
  KernelKind kind{KernelKind::Tent};
  double shape{1.0};  ///< tent radius or Gaussian sigma

  Kernel make() const { return make_kernel(kind, shape); }
  bool operator==(const KernelSpec&) const = default;
};

struct NumericsConfig {
  double dx{0.02};
  double dt{0.0};  ///< 0 is written as "auto"
  int periods{20};
  double period_tol{1e-8};
  int max_periods{2000};
  TimeScheme scheme{TimeScheme::SSPRK3};
  int ode_steps{2000};
  int samples{201};
  bool operator==(const NumericsConfig&) const = default;
};

struct IntervalConfig {
  double L1{-1.0};
  double L2{1.0};
  bool operator==(const IntervalConfig&) const = default;
};

struct PeriodicConfig {
  double L1{-1.0};
  double L2{1.0};
  std::string from{"above"};  ///< above, below, ode
  double eps{0.01};
  bool operator==(const PeriodicConfig&) const = default;
};

struct SimulateConfig {
  int snapshot_every{0};
  int record_every{1};
  double init_scale{1.0};
  bool operator==(const SimulateConfig&) const = default;
};

struct ClassifyConfig {
  double spread_tol{1e-10};
  double vanish_factor{1e-6};
  double stall_tol{1e-8};
  int stall_periods{3};
  std::string search{"none"};  ///< none, mu, sigma
  double low{0.1};
  double high{10.0};
  double rel_tol{0.05};
  bool operator==(const ClassifyConfig&) const = default;
};

struct SweepConfig {
  std::vector<double> delta{0.0, 0.5, 1.0};
  std::vector<double> b1{0.5};
  std::vector<double> mu{1.0};
  std::vector<double> h0{1.0};
  int threads{0};
  bool operator==(const SweepConfig&) const = default;
};

struct ContourConfig {
  std::vector<double> delta{0.0, 0.25, 0.5, 0.75};
  double b1_lo{0.01};
  double b1_hi{10.0};
  bool tie_k{false};
  bool operator==(const ContourConfig&) const = default;
};

struct RunConfig {
  ModelParams model;
  KernelSpec kernel1;
  KernelSpec kernel2;
  NumericsConfig numerics;
  IntervalConfig lamP;
  PeriodicConfig periodic;
  SimulateConfig simulate;
  ClassifyConfig classify;
  SweepConfig sweep;
  ContourConfig contour;
  /// "section.key" of every value filled from defaults; not part of equality.
  std::vector<std::string> defaulted;

  bool operator==(const RunConfig& o) const;
  bool kernels_equal() const { return kernel1 == kernel2; }
  ClassifySettings classify_settings() const;
  SolverSettings solver_settings() const;
  SimSettings sim_settings() const;
};

/// INI text: [model], [kernel] or [kernel1]/[kernel2], [numerics], and one section per
/// command. Unknown sections or keys and malformed literals raise ConfigError naming
/// the key; parameter invariants raise ParamError.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::filesystem::path& path);

/// Invariant checks applied by parse_config; rerun after overriding fields.
void validate_config(const RunConfig& config);

/// Resolved configuration in the accepted INI form; parse_config(emit_config(c)) == c.
std::string emit_config(const RunConfig& config);

/// 17 significant digits.
std::string format_number(double v);

const std::vector<std::string>& command_names();

/// Runs one command, writing its files into out_dir and a short report to out.
/// Errors propagate as exceptions.
void run_command(const std::string& command, const RunConfig& config,
                 const std::filesystem::path& out_dir, std::ostream& out);

/// Distinct nonzero status per error class: 3 config, 4 parameters, 5 kernel,
/// 6 numerical, 7 I/O, 8 step size, 1 anything else.
int exit_code_for(const std::exception& e);

}  // namespace wnv
