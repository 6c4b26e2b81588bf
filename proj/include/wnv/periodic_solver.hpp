#pragma once

#include <vector>

#include "wnv/model.hpp"
#include "wnv/quadrature.hpp"
#include "wnv/stepping.hpp"

namespace wnv {

struct SolverSettings {
  double dt{0.0};  ///< <= 0 selects the automatic step
  double dx{0.05};
  double period_tol{1e-8};
  int max_periods{20000};
  TimeScheme scheme{TimeScheme::SSPRK3};
  /// Step count per period of the maximal-sequence integrator.
  int ode_steps{2000};
};

struct Trajectory2D {
  std::vector<double> x;
  std::vector<double> t;
  std::vector<FieldPair> states;
};

/// Time-marches the fixed-boundary problem from init over [0, t_end], with t_end a
/// whole number of periods; states are recorded every record_every steps.
Trajectory2D solve_fixed(const ModelParams& p, const Kernel& k1, const Kernel& k2, double L1,
                         double L2, const FieldPair& init, int n_periods,
                         const SolverSettings& settings, int record_every = 1);

enum class PeriodicOrigin { FromAbove, FromBelow, MaximalSequence, PeriodMap };

const char* to_string(PeriodicOrigin origin);

struct PeriodicSolution {
  std::vector<double> x;             ///< single point {0} for the spatially independent problem
  std::vector<double> t;             ///< sample times over [0, omega]
  std::vector<FieldPair> samples;    ///< one per entry of t
  double residual{0.0};              ///< sup |U(0) - U(omega)| at the last period
  PeriodicOrigin origin{PeriodicOrigin::FromAbove};
  int periods{0};
  bool trivial{false};
  /// Sup change between consecutive period starts, one entry per period.
  std::vector<double> history;
  /// Sup norms of U1, U2 at consecutive period starts.
  std::vector<double> sup1, sup2;

  const FieldPair& at_start() const { return samples.front(); }
};

PeriodicSolution periodic_from_above(const ModelParams& p, const Kernel& kernel, double L1,
                                     double L2, const SolverSettings& settings);

/// Starts from eps times the principal eigenpair at t = 0 (scaled to sup = 1).
PeriodicSolution periodic_from_below(const ModelParams& p, const Kernel& kernel, double L1,
                                     double L2, double eps, const SolverSettings& settings);

enum class OdeScheme { MaximalSequence, PeriodMap };

/// Periodic solution of the spatially independent problem. MaximalSequence runs the
/// shifted iteration with K1 = a1 e2 + b1, K2 = a2 e1 + b2 + k; PeriodMap iterates the
/// same explicit stepper as the field solvers.
PeriodicSolution ode_periodic(const ModelParams& p, const SolverSettings& settings,
                              OdeScheme scheme = OdeScheme::MaximalSequence);

struct DomainLimitRow {
  double L;
  double mid_gap;       ///< sup over the period of |U*(t, 0) - U_ref(t)|, both species
  double mid_gap_ode;   ///< same against the maximal-sequence solution
  double U1_mid, U2_mid;  ///< U* at x = 0, t = 0
  bool nondecreasing;   ///< U* on [-L, L] >= U* of the previous row on the overlap
};

/// Requires L values on the dx lattice. U_ref is the period-map solution of the
/// spatially independent problem with the same time step, so the gap isolates the
/// effect of the finite interval.
std::vector<DomainLimitRow> domain_limit_check(const ModelParams& p, const Kernel& kernel,
                                               const std::vector<double>& L_sequence,
                                               const SolverSettings& settings);

}  // namespace wnv
