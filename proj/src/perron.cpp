#include "wnv/perron.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include "wnv/error.hpp"

namespace wnv {

namespace {

using Vec = Eigen::VectorXd;

void apply_symmetric(const LatticeKernel& K, const Vec& sw, const Vec& y, Vec& out) {
  const Vec z = sw.cwiseProduct(y);
  out.resize(y.size());
  K.convolve(z.data(), out.data(), static_cast<std::size_t>(y.size()));
  out = out.cwiseProduct(sw);
}

PerronResult finish(const LatticeKernel& K, const Vec& w, const Vec& v_raw, double rho,
                    int iterations) {
  PerronResult r;
  r.rho = rho;
  r.iterations = iterations;
  Vec v = v_raw / v_raw.cwiseAbs().maxCoeff();
  if (v.sum() < 0.0) v = -v;
  const Vec wv = w.cwiseProduct(v);
  Vec Av(v.size());
  K.convolve(wv.data(), Av.data(), static_cast<std::size_t>(v.size()));
  r.residual = (Av - rho * v).cwiseAbs().maxCoeff();
  r.vector.assign(v.data(), v.data() + v.size());
  return r;
}

PerronResult shift_invert(const LatticeKernel& K, const Vec& w, const PerronOptions& opt) {
  const long n = w.size();
  const Vec sw = w.cwiseSqrt();
  const long s = K.reach();

  double sigma = 0.0;
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(static_cast<std::size_t>(n) * static_cast<std::size_t>(s + 1));
  std::vector<double> row_sum(n, 0.0);
  for (long i = 0; i < n; ++i) {
    for (long j = std::max(0L, i - s); j <= std::min(n - 1, i + s); ++j) {
      row_sum[i] += sw[i] * K.at(i - j) * sw[j];
    }
    sigma = std::max(sigma, row_sum[i]);
  }
  // Strictly above the spectral radius, so sigma I - B is positive definite.
  sigma = sigma * (1.0 + 1e-10) + 1e-300;
  for (long i = 0; i < n; ++i) {
    for (long j = i; j <= std::min(n - 1, i + s); ++j) {
      const double b = sw[i] * K.at(i - j) * sw[j];
      trips.emplace_back(j, i, (i == j ? sigma : 0.0) - b);
    }
  }
  Eigen::SparseMatrix<double> M(n, n);
  M.setFromTriplets(trips.begin(), trips.end());
  Eigen::SimplicialLLT<Eigen::SparseMatrix<double>, Eigen::Lower, Eigen::NaturalOrdering<int>> llt(M);
  if (llt.info() != Eigen::Success) throw NumericalError("banded Cholesky factorization failed");

  Vec y = sw;  // positive start vector
  y.normalize();
  Vec By;
  double rho = 0.0;
  double best_res = INFINITY;
  int stall = 0;
  for (int it = 1; it <= opt.max_iterations; ++it) {
    y = llt.solve(y);
    y.normalize();
    apply_symmetric(K, sw, y, By);
    rho = y.dot(By);
    const double res = (By - rho * y).norm();
    if (res <= opt.tol) return finish(K, w, y.cwiseQuotient(sw), rho, it);
    // Rounding floor reached: the residual has stopped improving.
    stall = res < 0.5 * best_res ? 0 : stall + 1;
    best_res = std::min(best_res, res);
    if (stall >= 5 && best_res <= 1e-10) return finish(K, w, y.cwiseQuotient(sw), rho, it);
  }
  throw NumericalError("inverse iteration did not converge");
}

PerronResult power(const LatticeKernel& K, const Vec& w, const PerronOptions& opt) {
  const long n = w.size();
  Vec v = Vec::Ones(n);
  Vec Av(n);
  // Residual test with the Rayleigh quotient in the w-weighted inner product, where
  // K diag(w) is self-adjoint. A max-ratio test stalls falsely on flat start vectors.
  const double tol = std::max(opt.tol, 1e-12);
  for (int it = 1; it <= opt.max_iterations; ++it) {
    const Vec wv = w.cwiseProduct(v);
    K.convolve(wv.data(), Av.data(), static_cast<std::size_t>(n));
    const double rho = wv.dot(Av) / wv.dot(v);
    if ((Av - rho * v).cwiseAbs().maxCoeff() <= tol * rho) return finish(K, w, v, rho, it);
    v = Av / Av.maxCoeff();
  }
  throw NumericalError("power iteration did not converge within the step limit");
}

}  // namespace

PerronResult perron_pair(const LatticeKernel& kernel, const std::vector<double>& weights,
                         const PerronOptions& options) {
  if (weights.empty()) throw NumericalError("empty node set");
  for (double x : weights) {
    if (!(x > 0.0)) throw NumericalError("quadrature weights must be positive");
  }
  const Vec w = Eigen::Map<const Vec>(weights.data(), static_cast<long>(weights.size()));
  return options.method == PerronMethod::ShiftInvert ? shift_invert(kernel, w, options)
                                                      : power(kernel, w, options);
}

}  // namespace wnv
