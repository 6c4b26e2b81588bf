#include "wnv/periodic_solver.hpp"

#include <algorithm>
#include <cmath>

#include "wnv/error.hpp"
#include "wnv/nonlocal_eigen.hpp"

namespace wnv {

namespace {

double sup_diff(const FieldPair& a, const FieldPair& b) {
  double d = 0.0;
  for (std::size_t j = 0; j < a.u1.size(); ++j) {
    d = std::max({d, std::abs(a.u1[j] - b.u1[j]), std::abs(a.u2[j] - b.u2[j])});
  }
  return d;
}

double sup(const std::vector<double>& v) {
  return v.empty() ? 0.0 : *std::max_element(v.begin(), v.end());
}

bool is_trivial(const ModelParams& p, const FieldPair& u) {
  return std::max(sup(u.u1), sup(u.u2)) <= 1e-6 * std::min(p.e1, p.e2);
}

// Iterates the period map until two successive period starts differ by at most the
// tolerance while the changes contract, then samples one more period.
PeriodicSolution iterate(const FixedDomain& dom, FieldPair u, const PhaseTiling& tiling,
                         const SolverSettings& s, PeriodicOrigin origin) {
  PeriodicSolution out;
  out.origin = origin;
  out.x = dom.nodes().x;
  double last_change = INFINITY;
  bool converged = false;
  for (int m = 1; m <= s.max_periods; ++m) {
    const FieldPair prev = u;
    dom.advance_period(u, tiling, s.scheme);
    const double change = sup_diff(u, prev);
    out.history.push_back(change);
    out.sup1.push_back(sup(u.u1));
    out.sup2.push_back(sup(u.u2));
    out.periods = m;
    if (change <= s.period_tol && change <= last_change) {
      converged = true;
      break;
    }
    last_change = change;
  }
  if (!converged) throw NumericalError("periodic iteration did not converge within max_periods");

  out.t.push_back(0.0);
  out.samples.push_back(u);
  dom.advance_period(u, tiling, s.scheme, [&](double t, const FieldPair& v) {
    out.t.push_back(t);
    out.samples.push_back(v);
  });
  out.residual = sup_diff(out.samples.front(), out.samples.back());
  out.trivial = is_trivial(dom.params(), out.samples.front());
  return out;
}

FieldPair constant_field(const ModelParams& p, std::size_t n) {
  return {std::vector<double>(n, p.e1), std::vector<double>(n, p.e2)};
}

struct Domain {
  LatticeKernel kernel;
  FixedDomain dom;
  Domain(const ModelParams& p, const Kernel& k, double L1, double L2, double dx)
      : kernel(k, dx), dom(p, kernel, kernel, trapezoid_nodes(L1, L2, dx)) {}
  Domain(const Domain&) = delete;
};

// A single node with no dispersal reproduces the spatially independent system.
PeriodicSolution ode_period_map(const ModelParams& p, const SolverSettings& s) {
  ModelParams q = p;
  q.d1 = q.d2 = 0.0;
  const LatticeKernel K(Kernel::tent(1.0), 1.0);
  NodeSet node;
  node.dx = 1.0;
  node.x = {0.0};
  node.w = {1.0};
  const FixedDomain dom(q, K, K, node);
  return iterate(dom, constant_field(q, 1), tile_period(q, s.dt), s, PeriodicOrigin::PeriodMap);
}

PeriodicSolution maximal_sequence(const ModelParams& p, const SolverSettings& s) {
  const int N = std::max(s.ode_steps, 2);
  const SeasonClock clock(p);
  int n_warm = static_cast<int>(std::lround(N * (1.0 - p.delta)));
  if (p.delta > 0.0 && p.delta < 1.0) n_warm = std::clamp(n_warm, 1, N - 1);
  const int n_cold = N - n_warm;
  const double hw = n_warm > 0 ? clock.warm_length() / n_warm : 0.0;
  const double hc = n_cold > 0 ? clock.cold_length() / n_cold : 0.0;
  const double K1 = p.a1 * p.e2 + p.b1;
  const double K2 = p.a2 * p.e1 + p.b2 + p.k;

  std::vector<double> t(N + 1);
  for (int j = 0; j <= N; ++j) t[j] = j <= n_warm ? j * hw : clock.warm_length() + (j - n_warm) * hc;
  t[N] = p.omega;

  // Nonnegative forcing F = K u + f(u); monotone in u by the choice of K1, K2.
  auto forcing = [&](bool warm, double u1, double u2, double& F1, double& F2) {
    if (warm) {
      F1 = K1 * u1 + p.a1 * (p.e1 - u1) * u2 - p.b1 * u1;
      F2 = K2 * u2 + p.a2 * (p.e2 - u2) * u1 - p.b2 * u2;
    } else {
      F1 = K1 * u1 - p.b1 * u1;
      F2 = K2 * u2 - p.k * u2;
    }
  };
  // Exact integration of u' + K u = F for F linear over the step: both weights >= 0.
  auto weights = [](double K, double h, double& decay, double& w0, double& w1) {
    const double x = K * h;
    decay = std::exp(-x);
    const double a = -std::expm1(-x) / K;
    w1 = (h - a) / x;
    w0 = a - w1;
  };
  double dw1, w0w1, w1w1, dw2, w0w2, w1w2, dc1, w0c1, w1c1, dc2, w0c2, w1c2;
  weights(K1, hw > 0 ? hw : 1.0, dw1, w0w1, w1w1);
  weights(K2, hw > 0 ? hw : 1.0, dw2, w0w2, w1w2);
  weights(K1, hc > 0 ? hc : 1.0, dc1, w0c1, w1c1);
  weights(K2, hc > 0 ? hc : 1.0, dc2, w0c2, w1c2);

  std::vector<double> U1(N + 1, p.e1), U2(N + 1, p.e2), V1(N + 1), V2(N + 1);
  PeriodicSolution out;
  out.origin = PeriodicOrigin::MaximalSequence;
  out.x = {0.0};
  double last_change = INFINITY;
  bool converged = false;
  for (int it = 1; it <= s.max_periods; ++it) {
    V1[0] = U1[N];
    V2[0] = U2[N];
    for (int j = 0; j < N; ++j) {
      const bool warm = j < n_warm;
      double F1a, F2a, F1b, F2b;
      forcing(warm, U1[j], U2[j], F1a, F2a);
      forcing(warm, U1[j + 1], U2[j + 1], F1b, F2b);
      if (warm) {
        V1[j + 1] = dw1 * V1[j] + w0w1 * F1a + w1w1 * F1b;
        V2[j + 1] = dw2 * V2[j] + w0w2 * F2a + w1w2 * F2b;
      } else {
        V1[j + 1] = dc1 * V1[j] + w0c1 * F1a + w1c1 * F1b;
        V2[j + 1] = dc2 * V2[j] + w0c2 * F2a + w1c2 * F2b;
      }
    }
    double change = 0.0;
    for (int j = 0; j <= N; ++j) {
      change = std::max({change, std::abs(V1[j] - U1[j]), std::abs(V2[j] - U2[j])});
    }
    std::swap(U1, V1);
    std::swap(U2, V2);
    out.history.push_back(change);
    out.sup1.push_back(*std::max_element(U1.begin(), U1.end()));
    out.sup2.push_back(*std::max_element(U2.begin(), U2.end()));
    out.periods = it;
    if (change <= s.period_tol && change <= last_change) {
      converged = true;
      break;
    }
    last_change = change;
  }
  if (!converged) throw NumericalError("maximal sequence did not converge within max_periods");
  out.t = t;
  for (int j = 0; j <= N; ++j) out.samples.push_back({{U1[j]}, {U2[j]}});
  out.residual = std::max(std::abs(U1[0] - U1[N]), std::abs(U2[0] - U2[N]));
  out.trivial = is_trivial(p, out.samples.front());
  return out;
}

}  // namespace

const char* to_string(PeriodicOrigin origin) {
  switch (origin) {
    case PeriodicOrigin::FromAbove:
      return "FromAbove";
    case PeriodicOrigin::FromBelow:
      return "FromBelow";
    case PeriodicOrigin::MaximalSequence:
      return "MaximalSequence";
    case PeriodicOrigin::PeriodMap:
      return "PeriodMap";
  }
  return "?";
}

Trajectory2D solve_fixed(const ModelParams& p, const Kernel& k1, const Kernel& k2, double L1,
                         double L2, const FieldPair& init, int n_periods,
                         const SolverSettings& settings, int record_every) {
  require_valid(p);
  if (n_periods < 0) throw ParamError("period count must be nonnegative");
  if (record_every < 1) throw ParamError("record_every must be positive");
  const LatticeKernel K1(k1, settings.dx), K2(k2, settings.dx);
  const FixedDomain dom(p, K1, K2, trapezoid_nodes(L1, L2, settings.dx));
  const std::size_t n = dom.nodes().size();
  if (init.u1.size() != n || init.u2.size() != n) throw ParamError("initial data size mismatch");
  for (std::size_t j = 0; j < n; ++j) {
    if (init.u1[j] < 0.0 || init.u1[j] > p.e1 || init.u2[j] < 0.0 || init.u2[j] > p.e2) {
      throw ParamError("initial data must lie in [0, e1] x [0, e2]");
    }
  }
  const PhaseTiling tiling = tile_period(p, settings.dt);
  Trajectory2D tr;
  tr.x = dom.nodes().x;
  tr.t.push_back(0.0);
  tr.states.push_back(init);
  FieldPair u = init;
  long step = 0;
  const int per_period = tiling.n_warm + tiling.n_cold;
  for (int m = 0; m < n_periods; ++m) {
    int in_period = 0;
    dom.advance_period(u, tiling, settings.scheme, [&](double t, const FieldPair& v) {
      ++step;
      ++in_period;
      const bool last = m == n_periods - 1 && in_period == per_period;
      if (step % record_every == 0 || last) {
        tr.t.push_back(m * p.omega + t);
        tr.states.push_back(v);
      }
    });
  }
  return tr;
}

PeriodicSolution periodic_from_above(const ModelParams& p, const Kernel& kernel, double L1,
                                     double L2, const SolverSettings& settings) {
  require_valid(p);
  const Domain d(p, kernel, L1, L2, settings.dx);
  return iterate(d.dom, constant_field(p, d.dom.nodes().size()), tile_period(p, settings.dt),
                 settings, PeriodicOrigin::FromAbove);
}

PeriodicSolution periodic_from_below(const ModelParams& p, const Kernel& kernel, double L1,
                                     double L2, double eps, const SolverSettings& settings) {
  require_valid(p);
  if (!(eps > 0.0)) throw ParamError("eps must be positive");
  const Domain d(p, kernel, L1, L2, settings.dx);
  const auto eig = lambda1_P(p, kernel, L1, L2, settings.dx);
  if (!eig.is_principal()) throw ParamError("lower solution needs a principal eigenpair (delta < 1)");
  const double f1 = eig.ode.phi.front();
  const double f2 = eig.ode.psi.front();
  const double norm = std::max(f1, f2);
  FieldPair u;
  for (double g : eig.op.eigvec) {
    u.u1.push_back(eps * f1 / norm * g);
    u.u2.push_back(eps * f2 / norm * g);
  }
  if (sup(u.u1) > p.e1 || sup(u.u2) > p.e2) throw ParamError("eps too large: start exceeds e");
  return iterate(d.dom, u, tile_period(p, settings.dt), settings, PeriodicOrigin::FromBelow);
}

PeriodicSolution ode_periodic(const ModelParams& p, const SolverSettings& settings,
                              OdeScheme scheme) {
  require_valid(p);
  return scheme == OdeScheme::MaximalSequence ? maximal_sequence(p, settings)
                                              : ode_period_map(p, settings);
}

std::vector<DomainLimitRow> domain_limit_check(const ModelParams& p, const Kernel& kernel,
                                               const std::vector<double>& L_sequence,
                                               const SolverSettings& settings) {
  const PeriodicSolution ref = ode_periodic(p, settings, OdeScheme::PeriodMap);
  const PeriodicSolution ode = ode_periodic(p, settings, OdeScheme::MaximalSequence);
  std::vector<DomainLimitRow> rows;
  std::vector<double> prev_u1, prev_u2;
  double prev_L = 0.0;
  for (double L : L_sequence) {
    const PeriodicSolution sol = periodic_from_above(p, kernel, -L, L, settings);
    const long mid = std::lround(L / settings.dx);
    DomainLimitRow row{L, 0.0, 0.0, sol.at_start().u1[mid], sol.at_start().u2[mid], true};
    for (std::size_t i = 0; i < sol.t.size(); ++i) {
      row.mid_gap = std::max({row.mid_gap, std::abs(sol.samples[i].u1[mid] - ref.samples[i].u1[0]),
                              std::abs(sol.samples[i].u2[mid] - ref.samples[i].u2[0])});
    }
    row.mid_gap_ode = std::max(std::abs(row.U1_mid - ode.at_start().u1[0]),
                               std::abs(row.U2_mid - ode.at_start().u2[0]));
    if (!prev_u1.empty()) {
      const long shift = std::lround((L - prev_L) / settings.dx);
      for (std::size_t j = 0; j < prev_u1.size(); ++j) {
        const FieldPair& s = sol.at_start();
        if (s.u1[j + shift] < prev_u1[j] - 1e-12 || s.u2[j + shift] < prev_u2[j] - 1e-12) {
          row.nondecreasing = false;
        }
      }
    }
    prev_u1 = sol.at_start().u1;
    prev_u2 = sol.at_start().u2;
    prev_L = L;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace wnv
