#include "wnv/fb_sim.hpp"

#include <algorithm>
#include <cmath>

#include "wnv/error.hpp"

namespace wnv {

namespace {

double clamp_tracked(double v, double hi, double& excess) {
  if (v < 0.0) {
    excess = std::max(excess, -v);
    return 0.0;
  }
  if (v > hi) {
    excess = std::max(excess, v - hi);
    return hi;
  }
  return v;
}

}  // namespace

InitialData default_init(const ModelParams& p) {
  const double h0 = p.h0;
  auto profile = [h0](double e) {
    return [h0, e](double x) {
      return std::abs(x) < h0 ? e * std::cos(M_PI * x / (2.0 * h0)) : 0.0;
    };
  };
  return {profile(p.e1), profile(p.e2)};
}

InitialData scaled(const InitialData& init, double sigma) {
  return {[f = init.u1, sigma](double x) { return sigma * f(x); },
          [f = init.u2, sigma](double x) { return sigma * f(x); }};
}

Simulator::Simulator(const ModelParams& p, const Kernel& k1, const Kernel& k2, SimSettings settings)
    : p_(p), k1_(k1, settings.dx), k2_(k2, settings.dx), s_(settings) {
  require_valid(p);
  if (s_.record_every < 1) throw ParamError("record_every must be positive");
  tiling_ = tile_period(p, s_.dt);
}

FieldState Simulator::initial_state(const InitialData& init) const {
  FieldState s;
  s.dx = s_.dx;
  s.g = -p_.h0;
  s.h = p_.h0;
  long first = 0, last = 0;
  active_range(s.g, s.h, s.dx, first, last);
  s.first = first;
  for (long j = first; j < last; ++j) {
    const double x = j * s.dx;
    const double a = init.u1(x), b = init.u2(x);
    if (!(a >= 0.0 && a <= p_.e1 && b >= 0.0 && b <= p_.e2)) {
      throw ParamError("initial data must lie in [0, e1] x [0, e2]");
    }
    s.u1.push_back(a);
    s.u2.push_back(b);
  }
  return s;
}

std::vector<double> Simulator::weights(const FieldState& s) const {
  std::vector<double> w(s.size());
  for (std::size_t i = 0; i < w.size(); ++i) {
    const double x = s.x(i);
    w[i] = 0.5 * (std::min(x + s.dx, s.h) - std::max(x - s.dx, s.g));
  }
  return w;
}

void Simulator::rhs(const FieldState& s, bool warm, std::vector<double>& du1,
                    std::vector<double>& du2) const {
  const std::size_t n = s.size();
  const std::vector<double> w = weights(s);
  std::vector<double> wu(n);
  du1.resize(n);
  du2.resize(n);
  for (std::size_t j = 0; j < n; ++j) wu[j] = w[j] * s.u1[j];
  k1_.convolve(wu.data(), du1.data(), n);
  if (warm) {
    for (std::size_t j = 0; j < n; ++j) wu[j] = w[j] * s.u2[j];
    k2_.convolve(wu.data(), du2.data(), n);
  }
  for (std::size_t j = 0; j < n; ++j) {
    const double a = s.u1[j], b = s.u2[j];
    if (warm) {
      du1[j] = p_.d1 * (du1[j] - a) + p_.a1 * (p_.e1 - a) * b - p_.b1 * a;
      du2[j] = p_.d2 * (du2[j] - b) + p_.a2 * (p_.e2 - b) * a - p_.b2 * b;
    } else {
      du1[j] = p_.d1 * (du1[j] - a) - p_.b1 * a;
      du2[j] = -p_.k * b;
    }
  }
}

std::pair<double, double> Simulator::boundary_flux(const FieldState& s) const {
  const std::vector<double> w = weights(s);
  double left = 0.0, right = 0.0;
  for (int species = 0; species < 2; ++species) {
    const Kernel& k = (species == 0 ? k1_ : k2_).kernel();
    const double mu = species == 0 ? p_.mu1 : p_.mu2;
    const std::vector<double>& u = species == 0 ? s.u1 : s.u2;
    if (mu == 0.0) continue;
    const double R = k.support_radius();
    double l = 0.0, r = 0.0;
    for (std::size_t j = 0; j < s.size(); ++j) {
      if (u[j] == 0.0) continue;
      const double x = s.x(j);
      if (s.h - x < R) r += w[j] * u[j] * k.tail(s.h - x);
      if (x - s.g < R) l += w[j] * u[j] * k.tail(x - s.g);
    }
    left += mu * l;
    right += mu * r;
  }
  return {-left, right};
}

void Simulator::extend(FieldState& s) const {
  long first = 0, last = 0;
  active_range(s.g, s.h, s.dx, first, last);
  first = std::min(first, s.first);
  last = std::max(last, s.first + static_cast<long>(s.size()));
  const long front = s.first - first;
  const long back = last - (s.first + static_cast<long>(s.size()));
  if (front > 0) {
    s.u1.insert(s.u1.begin(), front, 0.0);
    s.u2.insert(s.u2.begin(), front, 0.0);
    s.first = first;
  }
  if (back > 0) {
    s.u1.insert(s.u1.end(), back, 0.0);
    s.u2.insert(s.u2.end(), back, 0.0);
  }
}

void Simulator::step_warm(FieldState& s, double dt) const {
  std::vector<double> du1, du2;
  rhs(s, true, du1, du2);
  const auto [gr, hr] = boundary_flux(s);
  for (std::size_t j = 0; j < s.size(); ++j) {
    // Exact arithmetic stays in [0, e]; the clamp removes rounding excursions.
    s.u1[j] = clamp_tracked(s.u1[j] + dt * du1[j], p_.e1, s.clamped);
    s.u2[j] = clamp_tracked(s.u2[j] + dt * du2[j], p_.e2, s.clamped);
  }
  s.g += dt * gr;
  s.h += dt * hr;
  s.t += dt;
  extend(s);
}

void Simulator::step_cold(FieldState& s, double dt) const {
  std::vector<double> du1, du2;
  rhs(s, false, du1, du2);
  const double decay = std::exp(-p_.k * dt);
  for (std::size_t j = 0; j < s.size(); ++j) {
    s.u1[j] = clamp_tracked(s.u1[j] + dt * du1[j], p_.e1, s.clamped);
    s.u2[j] *= decay;
  }
  s.t += dt;
}

double Simulator::lambda_F(const FieldState& s) const {
  if (!kernels_equal()) throw KernelMismatchError("lambda_F requires J1 = J2");
  return wnv::lambda1_F(p_, k1_, s.g, s.h);
}

Trajectory Simulator::run(FieldState s, int n_periods, const PeriodCallback& on_period,
                          const StepObserver& on_step) const {
  if (n_periods < 0) throw ParamError("period count must be nonnegative");
  Trajectory tr;
  tr.tiling = tiling_;
  const double omega = p_.omega;
  const double cold_len = p_.delta * omega;
  const bool want_lambda = s_.compute_lambda_F && kernels_equal();
  long step = 0;

  auto sup = [](const std::vector<double>& v) {
    return v.empty() ? 0.0 : *std::max_element(v.begin(), v.end());
  };
  auto record = [&](bool force) {
    if (force || step % s_.record_every == 0) {
      tr.boundaries.push_back({s.t, s.g, s.h});
      tr.norms.push_back({s.t, sup(s.u1), sup(s.u2)});
    }
  };
  double cached_g = NAN, cached_h = NAN, cached_lambda = NAN;

  record(true);
  const long m0 = s.period;
  for (long m = m0; m <= m0 + n_periods; ++m) {
    s.period = m;
    PeriodSummary summary{m, s.t, s.g, s.h, sup(s.u1), sup(s.u2),
                          std::numeric_limits<double>::quiet_NaN()};
    if (want_lambda) {
      // Reuse the value while the interval is unchanged, so the trace is exactly flat.
      if (!(s.g == cached_g && s.h == cached_h)) {
        cached_lambda = lambda_F(s);
        cached_g = s.g;
        cached_h = s.h;
      }
      summary.lambda_F = cached_lambda;
      tr.lambda_F.push_back({m, s.t, s.g, s.h, cached_lambda});
    }
    if (on_period && on_period(summary)) break;
    if (m == m0 + n_periods) break;

    const double start = s.t;
    for (int i = 1; i <= tiling_.n_warm; ++i) {
      step_warm(s, tiling_.dt_warm);
      s.t = start + (i == tiling_.n_warm ? (1.0 - p_.delta) * omega : i * tiling_.dt_warm);
      ++step;
      record(false);
      if (on_step) on_step(s);
    }
    const double cold_start = s.t;
    const std::vector<double> u2_start = s.u2;
    for (int i = 1; i <= tiling_.n_cold; ++i) {
      step_cold(s, tiling_.dt_cold);
      // Closed form from the start of the cold season keeps the decay exact.
      const double frac = static_cast<double>(i) / tiling_.n_cold;
      const double factor = std::exp(-p_.k * cold_len * frac);
      for (std::size_t j = 0; j < s.size(); ++j) s.u2[j] = u2_start[j] * factor;
      s.t = i == tiling_.n_cold ? start + omega : cold_start + cold_len * frac;
      ++step;
      record(false);
      if (on_step) on_step(s);
    }
    s.t = start + omega;
    if (tr.boundaries.back().t != s.t) record(true);
    if (s_.snapshot_every > 0 && (m - m0 + 1) % s_.snapshot_every == 0) {
      Snapshot snap{s.t, {}, s.u1, s.u2};
      for (std::size_t j = 0; j < s.size(); ++j) snap.x.push_back(s.x(j));
      tr.snapshots.push_back(std::move(snap));
    }
  }
  tr.final_state = std::move(s);
  return tr;
}

Trajectory simulate(const ModelParams& p, const Kernel& k1, const Kernel& k2,
                    const InitialData& init, int n_periods, const SimSettings& settings,
                    const PeriodCallback& on_period) {
  const Simulator sim(p, k1, k2, settings);
  return sim.run(sim.initial_state(init), n_periods, on_period);
}

EnergyBound energy_bound(const ModelParams& p, const InitialData& init, double dx) {
  require_valid(p);
  const double mu = std::max(p.mu1, p.mu2);
  const double num = std::min(p.d1, p.a1 * p.e1 * p.d2 / p.b2);
  EnergyBound eb;
  eb.D = mu > 0.0 ? num / mu : INFINITY;
  const NodeSet nodes = active_nodes(-p.h0, p.h0, dx);
  double mass = 0.0;
  for (std::size_t j = 0; j < nodes.size(); ++j) {
    mass += nodes.w[j] * (init.u1(nodes.x[j]) + p.a1 * p.e1 / p.b2 * init.u2(nodes.x[j]));
  }
  eb.bound = 2.0 * p.h0 + (std::isinf(eb.D) ? 0.0 : (eb.D > 0.0 ? mass / eb.D : INFINITY));
  return eb;
}

DecayingUpper decaying_upper_solution(const ModelParams& p, const Kernel& kernel, double dx,
                                      double eps0) {
  if (!(eps0 > 0.0)) throw ParamError("eps0 must be positive");
  DecayingUpper du;
  du.eps0 = eps0;
  du.h1 = p.h0 + eps0;
  const auto eig = lambda1_P(p, kernel, -du.h1, du.h1, dx);
  if (!eig.is_principal() || !(eig.lambda() > 0.0)) {
    throw ParamError("decaying upper solution needs lambda1_P([-h1, h1]) > 0");
  }
  du.gamma = 0.5 * eig.lambda();
  const auto& f1 = eig.ode.phi;
  const auto& f2 = eig.ode.psi;
  // Scale the separable pair f(t) g(x) so that phi + psi <= 1 (sup g = 1).
  double top = 0.0;
  for (std::size_t i = 0; i < f1.size(); ++i) top = std::max(top, f1[i] + f2[i]);
  const double c = 1.0 / top;
  double g_mass = 0.0;
  for (std::size_t j = 0; j < eig.op.x.size(); ++j) g_mass += eig.op.weights[j] * eig.op.eigvec[j];
  double flux = 0.0;
  for (std::size_t i = 0; i < f1.size(); ++i) {
    flux = std::max(flux, c * (p.mu1 * f1[i] + p.mu2 * f2[i]) * g_mass);
  }
  du.M = flux > 0.0 ? du.gamma * eps0 / flux : INFINITY;
  double g_min = INFINITY;
  for (std::size_t j = 0; j < eig.op.x.size(); ++j) {
    if (std::abs(eig.op.x[j]) <= p.h0 + 1e-12) g_min = std::min(g_min, eig.op.eigvec[j]);
  }
  du.sigma = c * std::min(f1.front(), f2.front()) * g_min;
  return du;
}

}  // namespace wnv
