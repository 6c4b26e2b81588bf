#pragma once

#include <cstddef>
#include <vector>

#include "wnv/model.hpp"

namespace wnv {

/// Consecutive points of the lattice x_i = origin + i dx with quadrature weights.
struct NodeSet {
  double dx{0.0};
  std::vector<double> x;
  std::vector<double> w;

  std::size_t size() const { return x.size(); }
};

/// Composite trapezoid nodes a, a + dx, ..., b; (b - a)/dx must be an integer.
NodeSet trapezoid_nodes(double a, double b, double dx);

/// Global-lattice nodes j dx strictly inside (g, h). Each weight is the integral of
/// the piecewise-linear hat through the node that vanishes at g and h.
NodeSet active_nodes(double g, double h, double dx);

/// Lattice indices j with g < j dx < h, as the half-open range [first, last).
void active_range(double g, double h, double dx, long& first, long& last);

/**
 * Kernel sampled on the lattice: J_k = J(k dx) for |k| <= reach.
 *
 * The table is scaled down when its lattice sum exceeds one, so that the
 * discrete convolution never maps [0, e] outside itself.
 */
class LatticeKernel {
 public:
  LatticeKernel(const Kernel& kernel, double dx);

  double at(long k) const {
    const long a = k < 0 ? -k : k;
    return a <= reach_ ? table_[a] : 0.0;
  }
  long reach() const { return reach_; }
  double dx() const { return dx_; }
  /// Multiplier applied to the raw samples (1 unless the lattice sum exceeded one).
  double scale() const { return scale_; }
  const Kernel& kernel() const { return kernel_; }

  /// out_i = sum_j J_{i-j} v_j over n consecutive lattice nodes.
  void convolve(const double* v, double* out, std::size_t n) const;

 private:
  Kernel kernel_;
  double dx_;
  long reach_;
  double scale_{1.0};
  std::vector<double> table_;
};

}  // namespace wnv
