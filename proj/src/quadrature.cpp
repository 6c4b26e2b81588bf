#include "wnv/quadrature.hpp"

#include <algorithm>
#include <cmath>

#include "wnv/error.hpp"

namespace wnv {

NodeSet trapezoid_nodes(double a, double b, double dx) {
  if (!(a < b)) throw ParamError("interval must satisfy L1 < L2");
  if (!(dx > 0.0)) throw ParamError("dx must be positive");
  const double cells = (b - a) / dx;
  const long n = std::lround(cells);
  if (n < 1 || std::abs(cells - n) > 1e-9 * std::max(1.0, cells)) {
    throw ParamError("dx must divide the interval length");
  }
  NodeSet s;
  s.dx = dx;
  s.x.resize(n + 1);
  s.w.assign(n + 1, dx);
  for (long i = 0; i <= n; ++i) s.x[i] = a + i * dx;
  s.w.front() = s.w.back() = 0.5 * dx;
  return s;
}

void active_range(double g, double h, double dx, long& first, long& last) {
  first = static_cast<long>(std::floor(g / dx)) + 1;
  last = static_cast<long>(std::ceil(h / dx));
  if (last < first) last = first;
}

NodeSet active_nodes(double g, double h, double dx) {
  if (!(g < h)) throw ParamError("free-boundary interval must satisfy g < h");
  if (!(dx > 0.0)) throw ParamError("dx must be positive");
  long first = 0, last = 0;
  active_range(g, h, dx, first, last);
  NodeSet s;
  s.dx = dx;
  for (long j = first; j < last; ++j) {
    const double x = j * dx;
    s.x.push_back(x);
    s.w.push_back(0.5 * (std::min(x + dx, h) - std::max(x - dx, g)));
  }
  return s;
}

LatticeKernel::LatticeKernel(const Kernel& kernel, double dx) : kernel_(kernel), dx_(dx) {
  if (!(dx > 0.0)) throw ParamError("dx must be positive");
  reach_ = static_cast<long>(std::floor(kernel.support_radius() / dx + 1e-9));
  table_.resize(reach_ + 1);
  double sum = 0.0;
  for (long k = 0; k <= reach_; ++k) {
    table_[k] = kernel.density(k * dx);
    sum += (k == 0 ? 1.0 : 2.0) * table_[k];
  }
  sum *= dx;
  if (sum > 1.0) {
    scale_ = 1.0 / sum;
    for (double& v : table_) v *= scale_;
  }
}

void LatticeKernel::convolve(const double* v, double* out, std::size_t n) const {
  const long nn = static_cast<long>(n);
  for (long i = 0; i < nn; ++i) {
    const long lo = std::max(0L, i - reach_);
    const long hi = std::min(nn - 1, i + reach_);
    double acc = 0.0;
    for (long j = lo; j <= hi; ++j) acc += table_[i > j ? i - j : j - i] * v[j];
    out[i] = acc;
  }
}

}  // namespace wnv
