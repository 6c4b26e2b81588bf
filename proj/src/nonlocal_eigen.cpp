#include "wnv/nonlocal_eigen.hpp"

#include <algorithm>
#include <cmath>

#include "wnv/error.hpp"

namespace wnv {

NonlocalEigen lambda1_star(const LatticeKernel& kernel, const NodeSet& nodes,
                           const PerronOptions& options) {
  if (nodes.size() == 0) throw NumericalError("interval contains no lattice nodes");
  const PerronResult pr = perron_pair(kernel, nodes.w, options);
  NonlocalEigen out;
  out.lambda_star = pr.rho - 1.0;
  out.x = nodes.x;
  out.weights = nodes.w;
  out.eigvec = pr.vector;
  out.dx = nodes.dx;
  out.residual = pr.residual;
  out.iterations = pr.iterations;
  out.L1 = nodes.x.front();
  out.L2 = nodes.x.back();
  return out;
}

NonlocalEigen lambda1_star(const Kernel& kernel, double L1, double L2, double dx,
                           const PerronOptions& options) {
  const NodeSet nodes = trapezoid_nodes(L1, L2, dx);
  NonlocalEigen out = lambda1_star(LatticeKernel(kernel, dx), nodes, options);
  out.L1 = L1;
  out.L2 = L2;
  return out;
}

ModelParams shifted_params(const ModelParams& p, double lambda_star) {
  ModelParams q = p;
  q.b1 = p.b1 - p.d1 * lambda_star;
  q.b2 = p.b2 - p.d2 * lambda_star;
  return q;
}

namespace {

EigenResultNonlocal compose(const ModelParams& p, NonlocalEigen op) {
  EigenResultNonlocal r;
  r.shifted = shifted_params(p, op.lambda_star);
  r.ode = lambda1_O(r.shifted);
  r.s1 = r.ode.constants.c1;
  r.s2 = r.ode.constants.c2;
  r.op = std::move(op);
  return r;
}

}  // namespace

EigenResultNonlocal lambda1_P(const ModelParams& p, const Kernel& kernel, double L1, double L2,
                              double dx, const PerronOptions& options) {
  require_valid(p);
  return compose(p, lambda1_star(kernel, L1, L2, dx, options));
}

EigenResultNonlocal lambda1_P(const ModelParams& p, const Kernel& kernel1, const Kernel& kernel2,
                              double L1, double L2, double dx, const PerronOptions& options) {
  if (!kernel1.same_as(kernel2)) {
    throw KernelMismatchError("eigenvalue computations require a single shared kernel");
  }
  return lambda1_P(p, kernel1, L1, L2, dx, options);
}

double lambda1_F(const ModelParams& p, const LatticeKernel& kernel, double g, double h) {
  const NodeSet nodes = active_nodes(g, h, kernel.dx());
  const NonlocalEigen op = lambda1_star(kernel, nodes);
  return lambda1_O(shifted_params(p, op.lambda_star), 2).lambda();
}

double lambda1_F(const ModelParams& p, const Kernel& kernel, double g, double h, double dx) {
  return lambda1_F(p, LatticeKernel(kernel, dx), g, h);
}

std::vector<LimitRow> lambda1_O_limit_check(const ModelParams& p, const Kernel& kernel,
                                            const std::vector<double>& L_sequence, double dx) {
  const double ode = lambda1_O(p, 2).lambda();
  std::vector<LimitRow> rows;
  for (double L : L_sequence) {
    const auto r = lambda1_P(p, kernel, -L, L, dx);
    rows.push_back({L, r.op.lambda_star, r.lambda(), std::abs(r.lambda() - ode)});
  }
  return rows;
}

CertifiedBounds certified_bounds(const ModelParams& p, const LatticeKernel& kernel,
                                 const NodeSet& nodes,
                                 const std::function<TestPairSample(double)>& pair, int n_times) {
  if (n_times < 1) throw ParamError("need at least one sample time");
  const SeasonClock clock(p);
  const std::size_t n = nodes.size();
  std::vector<double> wv(n), Kphi(n), Kpsi(n);
  double lo = INFINITY, hi = -INFINITY;
  for (int it = 0; it < n_times; ++it) {
    const double t = p.omega * (it + 0.5) / n_times;
    const bool warm = clock.phase(t) == Phase::Warm;
    const TestPairSample s = pair(t);
    for (std::size_t j = 0; j < n; ++j) wv[j] = nodes.w[j] * s.phi[j];
    kernel.convolve(wv.data(), Kphi.data(), n);
    for (std::size_t j = 0; j < n; ++j) wv[j] = nodes.w[j] * s.psi[j];
    kernel.convolve(wv.data(), Kpsi.data(), n);
    for (std::size_t j = 0; j < n; ++j) {
      if (!(s.phi[j] > 0.0 && s.psi[j] > 0.0)) throw ParamError("test pair must be positive");
      double r1 = s.dphi[j] - p.d1 * (Kphi[j] - s.phi[j]) + p.b1 * s.phi[j];
      double r2 = s.dpsi[j] + (warm ? p.b2 : p.k) * s.psi[j];
      if (warm) {
        r1 -= p.a1 * p.e1 * s.psi[j];
        r2 -= p.d2 * (Kpsi[j] - s.psi[j]) + p.a2 * p.e2 * s.phi[j];
      }
      r1 /= s.phi[j];
      r2 /= s.psi[j];
      lo = std::min({lo, r1, r2});
      hi = std::max({hi, r1, r2});
    }
  }
  return {lo, hi};
}

}  // namespace wnv
