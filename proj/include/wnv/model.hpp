#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace wnv {

/**
 * Rate and geometry parameters of the seasonal bird/mosquito system.
 *
 * Invariants: a1, a2, e1, e2, b1, b2, k, omega, h0 > 0; d1, d2 >= 0;
 * mu1, mu2 >= 0; 0 <= delta <= 1.
 */
struct ModelParams {
  double a1{1.0};     ///< transmission, mosquito -> bird
  double a2{1.0};     ///< transmission, bird -> mosquito
  double e1{1.0};     ///< total bird density
  double e2{1.0};     ///< total adult mosquito density
  double b1{1.0};     ///< bird removal rate
  double b2{1.0};     ///< warm-season mosquito death rate
  double k{1.0};      ///< cold-season mosquito decay rate
  double d1{1.0};     ///< bird dispersal rate
  double d2{1.0};     ///< mosquito dispersal rate
  double omega{1.0};  ///< period length
  double delta{0.5};  ///< cold-season fraction of the period
  double mu1{1.0};    ///< boundary expansion coefficient, birds
  double mu2{1.0};    ///< boundary expansion coefficient, mosquitoes
  double h0{1.0};     ///< initial half-width of the infected interval

  bool operator==(const ModelParams&) const = default;
};

/// Names of the ModelParams fields, in declaration order.
const std::vector<std::string>& model_param_names();

/// Mutable access to a field by name; nullptr for unknown names.
double* model_param_field(ModelParams& p, const std::string& name);
double model_param_value(const ModelParams& p, const std::string& name);

/// Lists every violated invariant; an empty report means the parameters are valid.
std::vector<std::string> validate_params(const ModelParams& p);

/// Throws ParamError carrying the joined report when validate_params is non-empty.
void require_valid(const ModelParams& p);

/// sqrt(a1 a2 e1 e2 / (b1 b2)).
double basic_reproduction_number(const ModelParams& p);

enum class Phase { Warm, Cold };

/// Warm season occupies (m w, m w + (1-delta) w], the cold season the rest of the period.
class SeasonClock {
 public:
  SeasonClock(double omega, double delta);
  explicit SeasonClock(const ModelParams& p) : SeasonClock(p.omega, p.delta) {}

  double omega() const { return omega_; }
  double delta() const { return delta_; }
  double warm_length() const { return (1.0 - delta_) * omega_; }
  double cold_length() const { return delta_ * omega_; }

  Phase phase(double t) const;
  /// Integer m with t in (m w, (m+1) w]; 0 for t = 0.
  long period_index(double t) const;

 private:
  double omega_;
  double delta_;
};

enum class KernelKind { Tent, TruncatedGaussian, Custom };

/**
 * Symmetric dispersal density with compact (or effectively compact) support.
 *
 * tail(z) is the closed-form mass beyond z, i.e. the integral of the density
 * over (z, infinity). Instances are immutable and cheap to copy.
 */
class Kernel {
 public:
  using Function = std::function<double(double)>;

  /// Triangular density (1 - |x|/r)/r on [-r, r].
  static Kernel tent(double radius);
  /// Gaussian with standard deviation sigma, cut at 6 sigma and renormalized.
  static Kernel truncated_gaussian(double sigma);
  /// User-supplied density and tail; nothing is checked until check_kernel.
  static Kernel custom(std::string name, Function density, Function tail, double support_radius);

  double density(double x) const;
  double tail(double z) const;
  double support_radius() const { return radius_; }
  KernelKind kind() const { return kind_; }
  /// Radius for tent, sigma for the Gaussian, support radius for custom kernels.
  double shape() const { return shape_; }
  const std::string& name() const { return name_; }

  /// Same builtin family and shape parameter (custom kernels compare by name and radius).
  bool same_as(const Kernel& other) const;

 private:
  Kernel() = default;

  KernelKind kind_{KernelKind::Tent};
  double shape_{1.0};
  double radius_{1.0};
  double gauss_norm_{1.0};
  std::string name_;
  std::shared_ptr<const Function> custom_density_;
  std::shared_ptr<const Function> custom_tail_;
};

Kernel make_kernel(KernelKind kind, double shape);

/// Gaussian truncation point in units of sigma.
inline constexpr double kGaussianCutoff = 6.0;

/**
 * Checks assumption (J) on a sample grid: symmetry, unit mass, positive
 * value at the origin, boundedness, and a discrete continuity modulus
 * evaluated on 10^4 points. Returns the list of violations.
 */
std::vector<std::string> check_kernel(const Kernel& kernel);

}  // namespace wnv
