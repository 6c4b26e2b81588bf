#pragma once

#include <functional>
#include <limits>
#include <utility>
#include <vector>

#include "wnv/model.hpp"
#include "wnv/nonlocal_eigen.hpp"
#include "wnv/quadrature.hpp"
#include "wnv/stepping.hpp"

namespace wnv {

/// Initial densities on [-h0, h0]; values outside are ignored.
struct InitialData {
  std::function<double(double)> u1;
  std::function<double(double)> u2;
};

/// u_{i,0}(x) = e_i cos(pi x / (2 h0)).
InitialData default_init(const ModelParams& p);
InitialData scaled(const InitialData& init, double sigma);

/**
 * Densities on the global lattice x_j = j dx, for the active indices
 * first, ..., first + size - 1 strictly inside (g, h).
 */
struct FieldState {
  double t{0.0};
  double g{0.0};
  double h{0.0};
  double dx{0.0};
  long first{0};
  std::vector<double> u1;
  std::vector<double> u2;
  long period{0};
  /// Largest excursion outside [0, e_i] removed by clamping; rounding-sized when
  /// the step respects the positivity bound.
  double clamped{0.0};

  double x(std::size_t i) const { return (first + static_cast<long>(i)) * dx; }
  std::size_t size() const { return u1.size(); }
};

struct SimSettings {
  double dx{0.02};
  double dt{0.0};            ///< <= 0 selects the automatic step
  int snapshot_every{0};     ///< periods between field snapshots; 0 disables
  int record_every{1};       ///< steps between boundary and norm records
  bool compute_lambda_F{true};
};

struct BoundaryRecord {
  double t, g, h;
};
struct NormRecord {
  double t, sup_u1, sup_u2;
};
struct LambdaFRecord {
  long period;
  double t, g, h, lambda_F;
};
struct Snapshot {
  double t;
  std::vector<double> x, u1, u2;
};

struct Trajectory {
  std::vector<BoundaryRecord> boundaries;
  std::vector<NormRecord> norms;
  std::vector<LambdaFRecord> lambda_F;
  std::vector<Snapshot> snapshots;
  FieldState final_state;
  PhaseTiling tiling;
};

/// State handed to the per-period callback at every period start (t = m omega).
struct PeriodSummary {
  long period;
  double t, g, h, sup_u1, sup_u2;
  double lambda_F;  ///< NaN when not computed
};

/// Return true to stop the run after the current period start.
using PeriodCallback = std::function<bool(const PeriodSummary&)>;
/// Sees the state after every completed step.
using StepObserver = std::function<void(const FieldState&)>;

class Simulator {
 public:
  Simulator(const ModelParams& p, const Kernel& k1, const Kernel& k2, SimSettings settings = {});

  const ModelParams& params() const { return p_; }
  const SimSettings& settings() const { return s_; }
  const PhaseTiling& tiling() const { return tiling_; }
  bool kernels_equal() const { return k1_.kernel().same_as(k2_.kernel()); }

  FieldState initial_state(const InitialData& init) const;

  /// (g', h') from the kernel-tail flux of both species.
  std::pair<double, double> boundary_flux(const FieldState& s) const;

  /// Explicit warm step: densities, boundaries, and activation of newly covered nodes.
  void step_warm(FieldState& s, double dt) const;
  /// Cold step: u1 nonlocal decay, u2 scaled by e^{-k dt}, boundaries unchanged.
  void step_cold(FieldState& s, double dt) const;

  /// lambda1_P on the current interval; KernelMismatchError for distinct kernels.
  double lambda_F(const FieldState& s) const;

  Trajectory run(FieldState s, int n_periods, const PeriodCallback& on_period = {},
                 const StepObserver& on_step = {}) const;

 private:
  void rhs(const FieldState& s, bool warm, std::vector<double>& du1, std::vector<double>& du2) const;
  std::vector<double> weights(const FieldState& s) const;
  void extend(FieldState& s) const;

  ModelParams p_;
  LatticeKernel k1_;
  LatticeKernel k2_;
  SimSettings s_;
  PhaseTiling tiling_;
};

Trajectory simulate(const ModelParams& p, const Kernel& k1, const Kernel& k2,
                    const InitialData& init, int n_periods, const SimSettings& settings = {},
                    const PeriodCallback& on_period = {});

struct EnergyBound {
  double D;
  double bound;
};

/// 2 h0 + (1/D) int [u1(0) + (a1 e1 / b2) u2(0)] dx with D = min{d1, a1 e1 d2 / b2} / max{mu1, mu2},
/// the integral taken with the simulator's quadrature.
EnergyBound energy_bound(const ModelParams& p, const InitialData& init, double dx);

/// Decaying upper solution of the vanishing argument on [-h1, h1], h1 = h0 + eps0.
struct DecayingUpper {
  double eps0, h1, gamma, M, sigma;
  /// Largest admissible sup-norm sum of the initial data, sigma * M.
  double smallness() const { return sigma * M; }
  double h_bar(double t) const { return h1 - eps0 * std::exp(-gamma * t); }
  /// Envelope of u1 + u2: M e^{-gamma t}, since phi + psi <= 1.
  double envelope(double t) const { return M * std::exp(-gamma * t); }
};

/// Requires lambda1_P([-h1, h1]) > 0 and J1 = J2.
DecayingUpper decaying_upper_solution(const ModelParams& p, const Kernel& kernel, double dx,
                                      double eps0);

}  // namespace wnv
