#pragma once

#include <functional>
#include <vector>

#include "wnv/model.hpp"
#include "wnv/ode_eigen.hpp"
#include "wnv/perron.hpp"
#include "wnv/quadrature.hpp"

namespace wnv {

/// Principal pair of u -> int J(x - y) u(y) dy - u on an interval.
struct NonlocalEigen {
  double lambda_star{0.0};
  std::vector<double> x;
  std::vector<double> weights;
  std::vector<double> eigvec;  ///< positive, sup = 1
  double L1{0.0}, L2{0.0};     ///< interval endpoints
  double dx{0.0};
  double residual{0.0};
  int iterations{0};
};

NonlocalEigen lambda1_star(const Kernel& kernel, double L1, double L2, double dx,
                           const PerronOptions& options = {});

/// Same on an arbitrary node set (used for free-boundary intervals).
NonlocalEigen lambda1_star(const LatticeKernel& kernel, const NodeSet& nodes,
                           const PerronOptions& options = {});

struct EigenResultNonlocal {
  EigenResultODE ode;          ///< lambda1_O of the shifted rates; holds the value
  ModelParams shifted;         ///< b_i replaced by b_i - d_i lambda_star
  double s1{0.0}, s2{0.0};     ///< c1, c2 of the shifted rates
  NonlocalEigen op;

  double lambda() const { return ode.lambda(); }
  bool is_principal() const { return ode.is_principal(); }
};

ModelParams shifted_params(const ModelParams& p, double lambda_star);

EigenResultNonlocal lambda1_P(const ModelParams& p, const Kernel& kernel, double L1, double L2,
                              double dx, const PerronOptions& options = {});

/// Two-kernel entry point; throws KernelMismatchError unless the kernels agree.
EigenResultNonlocal lambda1_P(const ModelParams& p, const Kernel& kernel1, const Kernel& kernel2,
                              double L1, double L2, double dx, const PerronOptions& options = {});

/// lambda1_P on the free-boundary interval (g, h), discretized on the global lattice.
double lambda1_F(const ModelParams& p, const LatticeKernel& kernel, double g, double h);
double lambda1_F(const ModelParams& p, const Kernel& kernel, double g, double h, double dx);

struct LimitRow {
  double L;
  double lambda_star;
  double lambda_P;
  double gap;  ///< |lambda_P([-L, L]) - lambda1_O|
};

std::vector<LimitRow> lambda1_O_limit_check(const ModelParams& p, const Kernel& kernel,
                                            const std::vector<double>& L_sequence, double dx);

/// Test pair values and time derivatives at the nodes, at one time instant.
struct TestPairSample {
  std::vector<double> phi, psi, dphi, dpsi;
};

struct CertifiedBounds {
  double lower;
  double upper;
};

/**
 * Collatz-Wielandt bracket for the discrete periodic eigenproblem: for a positive
 * periodic test pair the pointwise ratios
 *   (phi_t - d1 (K phi - phi) - a1 e1 psi + b1 phi) / phi   (warm)
 * and their cold-season counterparts bound lambda1_P from below (min) and above (max).
 * The pair is sampled at n_times points of [0, omega).
 */
CertifiedBounds certified_bounds(const ModelParams& p, const LatticeKernel& kernel,
                                 const NodeSet& nodes,
                                 const std::function<TestPairSample(double)>& pair, int n_times);

}  // namespace wnv
