#include "wnv/stepping.hpp"

#include <algorithm>
#include <cmath>

#include "wnv/error.hpp"

namespace wnv {

double positivity_dt_bound(const ModelParams& p, double theta) {
  const double rate = std::max({p.d1 + p.b1 + p.a1 * p.e2, p.d2 + p.b2 + p.a2 * p.e1, p.k});
  return theta / rate;
}

PhaseTiling tile_period(const ModelParams& p, double dt_max) {
  const double bound = positivity_dt_bound(p);
  if (dt_max > bound * (1.0 + 1e-12)) {
    throw StepSizeError("dt " + std::to_string(dt_max) + " exceeds the positivity bound " +
                        std::to_string(bound));
  }
  const double dt = dt_max > 0.0 ? dt_max : std::min(bound, p.omega / 100.0);
  const SeasonClock clock(p);
  PhaseTiling t;
  if (clock.warm_length() > 0.0) {
    t.n_warm = static_cast<int>(std::ceil(clock.warm_length() / dt - 1e-9));
    t.dt_warm = clock.warm_length() / t.n_warm;
  }
  if (clock.cold_length() > 0.0) {
    t.n_cold = static_cast<int>(std::ceil(clock.cold_length() / dt - 1e-9));
    t.dt_cold = clock.cold_length() / t.n_cold;
  }
  return t;
}

FixedDomain::FixedDomain(const ModelParams& p, const LatticeKernel& k1, const LatticeKernel& k2,
                         NodeSet nodes)
    : p_(p), k1_(&k1), k2_(&k2), nodes_(std::move(nodes)) {
  if (k1.dx() != nodes_.dx || k2.dx() != nodes_.dx) {
    throw ParamError("kernel lattice spacing differs from the node spacing");
  }
  scratch_.resize(nodes_.size());
}

void FixedDomain::convolve(const LatticeKernel& k, const std::vector<double>& v,
                           std::vector<double>& out) const {
  const std::size_t n = v.size();
  for (std::size_t j = 0; j < n; ++j) scratch_[j] = nodes_.w[j] * v[j];
  out.resize(n);
  k.convolve(scratch_.data(), out.data(), n);
}

void FixedDomain::warm_rhs(const FieldPair& u, FieldPair& du) const {
  const std::size_t n = u.u1.size();
  convolve(*k1_, u.u1, du.u1);
  convolve(*k2_, u.u2, du.u2);
  for (std::size_t j = 0; j < n; ++j) {
    const double a = u.u1[j], b = u.u2[j];
    du.u1[j] = p_.d1 * (du.u1[j] - a) + p_.a1 * (p_.e1 - a) * b - p_.b1 * a;
    du.u2[j] = p_.d2 * (du.u2[j] - b) + p_.a2 * (p_.e2 - b) * a - p_.b2 * b;
  }
}

void FixedDomain::cold_rhs_u1(const std::vector<double>& u1, std::vector<double>& du1) const {
  convolve(*k1_, u1, du1);
  for (std::size_t j = 0; j < u1.size(); ++j) {
    du1[j] = p_.d1 * (du1[j] - u1[j]) - p_.b1 * u1[j];
  }
}

namespace {

// The exact update stays in [0, e]; clamping only removes rounding excursions.
void clamp(std::vector<double>& v, double e) {
  for (double& x : v) x = std::clamp(x, 0.0, e);
}

void axpy(std::vector<double>& y, double a, const std::vector<double>& x) {
  for (std::size_t j = 0; j < y.size(); ++j) y[j] += a * x[j];
}

void blend(std::vector<double>& y, double cy, const std::vector<double>& x, double cx) {
  for (std::size_t j = 0; j < y.size(); ++j) y[j] = cy * y[j] + cx * x[j];
}

}  // namespace

void FixedDomain::step_warm(FieldPair& u, double dt, TimeScheme scheme) const {
  FieldPair du;
  auto euler = [&](FieldPair& v) {
    warm_rhs(v, du);
    axpy(v.u1, dt, du.u1);
    axpy(v.u2, dt, du.u2);
    clamp(v.u1, p_.e1);
    clamp(v.u2, p_.e2);
  };
  if (scheme == TimeScheme::Euler) {
    euler(u);
    return;
  }
  // Shu-Osher SSPRK3: convex combinations of Euler steps.
  FieldPair s = u;
  euler(s);
  euler(s);
  blend(s.u1, 0.25, u.u1, 0.75);
  blend(s.u2, 0.25, u.u2, 0.75);
  euler(s);
  blend(u.u1, 1.0 / 3.0, s.u1, 2.0 / 3.0);
  blend(u.u2, 1.0 / 3.0, s.u2, 2.0 / 3.0);
}

void FixedDomain::step_cold_u1(std::vector<double>& u1, double dt, TimeScheme scheme) const {
  std::vector<double> du;
  auto euler = [&](std::vector<double>& v) {
    cold_rhs_u1(v, du);
    axpy(v, dt, du);
    clamp(v, p_.e1);
  };
  if (scheme == TimeScheme::Euler) {
    euler(u1);
    return;
  }
  std::vector<double> s = u1;
  euler(s);
  euler(s);
  blend(s, 0.25, u1, 0.75);
  euler(s);
  blend(u1, 1.0 / 3.0, s, 2.0 / 3.0);
}

}  // namespace wnv
