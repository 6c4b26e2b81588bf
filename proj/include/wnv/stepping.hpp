#pragma once

#include <cmath>
#include <vector>

#include "wnv/model.hpp"
#include "wnv/quadrature.hpp"

namespace wnv {

/// theta / max(d1 + b1 + a1 e2, d2 + b2 + a2 e1, k): explicit steps at or below this
/// bound are monotone maps of [0, e1] x [0, e2] into itself.
double positivity_dt_bound(const ModelParams& p, double theta = 0.9);

/// Integer step counts that tile the warm and cold seasons exactly.
struct PhaseTiling {
  int n_warm{0};
  int n_cold{0};
  double dt_warm{0.0};
  double dt_cold{0.0};
};

/// dt_max <= 0 selects min(positivity bound, omega / 100). Throws StepSizeError
/// when an explicit dt_max exceeds the positivity bound.
PhaseTiling tile_period(const ModelParams& p, double dt_max);

enum class TimeScheme { Euler, SSPRK3 };

/// Densities of both species on a node set.
struct FieldPair {
  std::vector<double> u1;
  std::vector<double> u2;
};

/**
 * Semi-discrete seasonal system on a fixed node set.
 *
 * Warm: u1' = d1 (K1 u1 - u1) + a1 (e1 - u1) u2 - b1 u1,
 *       u2' = d2 (K2 u2 - u2) + a2 (e2 - u2) u1 - b2 u2.
 * Cold: u1' = d1 (K1 u1 - u1) - b1 u1, and u2 decays exactly as e^{-k t}.
 * The lattice kernels are held by reference and must outlive the domain.
 */
class FixedDomain {
 public:
  FixedDomain(const ModelParams& p, const LatticeKernel& k1, const LatticeKernel& k2,
              NodeSet nodes);

  const NodeSet& nodes() const { return nodes_; }
  const ModelParams& params() const { return p_; }

  void warm_rhs(const FieldPair& u, FieldPair& du) const;
  void cold_rhs_u1(const std::vector<double>& u1, std::vector<double>& du1) const;

  void step_warm(FieldPair& u, double dt, TimeScheme scheme) const;
  /// Advances u1 only; the caller sets u2 from the closed form.
  void step_cold_u1(std::vector<double>& u1, double dt, TimeScheme scheme) const;

  /// One full period; observer(t_in_period, u) runs after every step when set.
  template <typename Observer>
  void advance_period(FieldPair& u, const PhaseTiling& tiling, TimeScheme scheme,
                      Observer&& observer) const;
  void advance_period(FieldPair& u, const PhaseTiling& tiling, TimeScheme scheme) const {
    advance_period(u, tiling, scheme, [](double, const FieldPair&) {});
  }

 private:
  void convolve(const LatticeKernel& k, const std::vector<double>& v, std::vector<double>& out) const;

  ModelParams p_;
  const LatticeKernel* k1_;
  const LatticeKernel* k2_;
  NodeSet nodes_;
  mutable std::vector<double> scratch_;
};

template <typename Observer>
void FixedDomain::advance_period(FieldPair& u, const PhaseTiling& tiling, TimeScheme scheme,
                                 Observer&& observer) const {
  const double tau = tiling.n_warm * tiling.dt_warm;
  for (int i = 1; i <= tiling.n_warm; ++i) {
    step_warm(u, tiling.dt_warm, scheme);
    observer(i == tiling.n_warm ? tau : i * tiling.dt_warm, u);
  }
  const std::vector<double> u2_start = u.u2;
  for (int i = 1; i <= tiling.n_cold; ++i) {
    step_cold_u1(u.u1, tiling.dt_cold, scheme);
    const double factor = std::exp(-p_.k * (i * tiling.dt_cold));
    for (std::size_t j = 0; j < u.u2.size(); ++j) u.u2[j] = u2_start[j] * factor;
    observer(i == tiling.n_cold ? p_.omega : tau + i * tiling.dt_cold, u);
  }
}

}  // namespace wnv
