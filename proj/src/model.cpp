#include "wnv/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "wnv/error.hpp"

namespace wnv {

namespace {

struct FieldRef {
  const char* name;
  double ModelParams::*member;
};

constexpr FieldRef kFields[] = {
    {"a1", &ModelParams::a1},       {"a2", &ModelParams::a2},   {"e1", &ModelParams::e1},
    {"e2", &ModelParams::e2},       {"b1", &ModelParams::b1},   {"b2", &ModelParams::b2},
    {"k", &ModelParams::k},         {"d1", &ModelParams::d1},   {"d2", &ModelParams::d2},
    {"omega", &ModelParams::omega}, {"delta", &ModelParams::delta},
    {"mu1", &ModelParams::mu1},     {"mu2", &ModelParams::mu2}, {"h0", &ModelParams::h0},
};

}  // namespace

const std::vector<std::string>& model_param_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& f : kFields) out.emplace_back(f.name);
    return out;
  }();
  return names;
}

double* model_param_field(ModelParams& p, const std::string& name) {
  for (const auto& f : kFields) {
    if (name == f.name) return &(p.*(f.member));
  }
  return nullptr;
}

double model_param_value(const ModelParams& p, const std::string& name) {
  for (const auto& f : kFields) {
    if (name == f.name) return p.*(f.member);
  }
  throw ParamError("unknown model parameter '" + name + "'");
}

std::vector<std::string> validate_params(const ModelParams& p) {
  std::vector<std::string> report;
  for (const auto& f : kFields) {
    if (!std::isfinite(p.*(f.member))) report.push_back(std::string(f.name) + " not finite");
  }
  auto positive = [&](const char* name, double v) {
    if (!(v > 0.0)) report.push_back(std::string(name) + " not positive");
  };
  auto nonnegative = [&](const char* name, double v) {
    if (v < 0.0) report.push_back(std::string(name) + " negative");
  };
  positive("a1", p.a1);
  positive("a2", p.a2);
  positive("e1", p.e1);
  positive("e2", p.e2);
  positive("b1", p.b1);
  positive("b2", p.b2);
  positive("k", p.k);
  positive("omega", p.omega);
  positive("h0", p.h0);
  nonnegative("d1", p.d1);
  nonnegative("d2", p.d2);
  nonnegative("mu1", p.mu1);
  nonnegative("mu2", p.mu2);
  if (!(p.delta >= 0.0 && p.delta <= 1.0)) report.push_back("delta out of [0,1]");
  return report;
}

void require_valid(const ModelParams& p) {
  const auto report = validate_params(p);
  if (report.empty()) return;
  std::ostringstream os;
  os << "invalid model parameters:";
  for (const auto& r : report) os << ' ' << r << ';';
  throw ParamError(os.str());
}

double basic_reproduction_number(const ModelParams& p) {
  return std::sqrt(p.a1 * p.a2 * p.e1 * p.e2 / (p.b1 * p.b2));
}

SeasonClock::SeasonClock(double omega, double delta) : omega_(omega), delta_(delta) {
  if (!(omega > 0.0)) throw ParamError("omega not positive");
  if (!(delta >= 0.0 && delta <= 1.0)) throw ParamError("delta out of [0,1]");
}

long SeasonClock::period_index(double t) const {
  if (t <= 0.0) return 0;
  return static_cast<long>(std::ceil(t / omega_)) - 1;
}

Phase SeasonClock::phase(double t) const {
  double r = std::fmod(t, omega_);
  if (r < 0.0) r += omega_;
  // t = m w belongs to the cold season closing period m-1.
  if (r == 0.0) return delta_ > 0.0 ? Phase::Cold : Phase::Warm;
  return r <= warm_length() ? Phase::Warm : Phase::Cold;
}

Kernel Kernel::tent(double radius) {
  if (!(radius > 0.0) || !std::isfinite(radius)) throw KernelError("tent radius must be positive");
  Kernel k;
  k.kind_ = KernelKind::Tent;
  k.shape_ = radius;
  k.radius_ = radius;
  k.name_ = "tent";
  return k;
}

Kernel Kernel::truncated_gaussian(double sigma) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw KernelError("gaussian sigma must be positive");
  Kernel k;
  k.kind_ = KernelKind::TruncatedGaussian;
  k.shape_ = sigma;
  k.radius_ = kGaussianCutoff * sigma;
  k.gauss_norm_ = std::erf(kGaussianCutoff / std::sqrt(2.0));
  k.name_ = "gaussian";
  return k;
}

Kernel Kernel::custom(std::string name, Function density, Function tail, double support_radius) {
  if (!(support_radius > 0.0)) throw KernelError("support radius must be positive");
  if (!density || !tail) throw KernelError("custom kernel needs density and tail");
  Kernel k;
  k.kind_ = KernelKind::Custom;
  k.shape_ = support_radius;
  k.radius_ = support_radius;
  k.name_ = std::move(name);
  k.custom_density_ = std::make_shared<const Function>(std::move(density));
  k.custom_tail_ = std::make_shared<const Function>(std::move(tail));
  return k;
}

double Kernel::density(double x) const {
  const double ax = std::abs(x);
  switch (kind_) {
    case KernelKind::Tent:
      return ax < shape_ ? (1.0 - ax / shape_) / shape_ : 0.0;
    case KernelKind::TruncatedGaussian: {
      if (ax > radius_) return 0.0;
      const double z = x / shape_;
      return std::exp(-0.5 * z * z) / (shape_ * std::sqrt(2.0 * M_PI) * gauss_norm_);
    }
    case KernelKind::Custom:
      return (*custom_density_)(x);
  }
  return 0.0;
}

double Kernel::tail(double z) const {
  if (kind_ == KernelKind::Custom) return (*custom_tail_)(z);
  if (z < 0.0) return 1.0 - tail(-z);
  if (z >= radius_) return 0.0;
  switch (kind_) {
    case KernelKind::Tent: {
      const double s = (shape_ - z) / shape_;
      return 0.5 * s * s;
    }
    case KernelKind::TruncatedGaussian: {
      // erfc difference keeps relative accuracy far into the tail.
      const double c = std::sqrt(2.0);
      return 0.5 * (std::erfc(z / (shape_ * c)) - std::erfc(kGaussianCutoff / c)) / gauss_norm_;
    }
    case KernelKind::Custom:
      break;
  }
  return 0.0;
}

bool Kernel::same_as(const Kernel& other) const {
  if (kind_ != other.kind_) return false;
  if (kind_ == KernelKind::Custom) {
    return name_ == other.name_ && radius_ == other.radius_ &&
           custom_density_ == other.custom_density_;
  }
  return shape_ == other.shape_;
}

Kernel make_kernel(KernelKind kind, double shape) {
  switch (kind) {
    case KernelKind::Tent:
      return Kernel::tent(shape);
    case KernelKind::TruncatedGaussian:
      return Kernel::truncated_gaussian(shape);
    case KernelKind::Custom:
      break;
  }
  throw KernelError("custom kernels need explicit density and tail");
}

std::vector<std::string> check_kernel(const Kernel& kernel) {
  using boost::math::quadrature::gauss_kronrod;
  std::vector<std::string> report;
  const double r = kernel.support_radius();
  auto f = [&](double x) { return kernel.density(x); };

  constexpr int kSamples = 10000;
  const double lo = -1.05 * r;
  const double step = 2.1 * r / (kSamples - 1);
  double sup = 0.0;
  double max_jump = 0.0;
  double max_asym = 0.0;
  bool negative = false;
  bool finite = true;
  double prev = f(lo);
  for (int i = 0; i < kSamples; ++i) {
    const double x = lo + i * step;
    const double v = f(x);
    if (!std::isfinite(v)) finite = false;
    if (v < 0.0) negative = true;
    sup = std::max(sup, v);
    max_jump = std::max(max_jump, std::abs(v - prev));
    max_asym = std::max(max_asym, std::abs(v - f(-x)));
    prev = v;
  }
  if (!finite) report.push_back("density not finite");
  if (negative) report.push_back("density negative");
  if (!(f(0.0) > 0.0)) report.push_back("density(0) not positive");
  if (max_asym > 1e-12 * std::max(sup, 1.0)) report.push_back("density not symmetric");
  if (max_jump > 0.02 * sup) report.push_back("density not continuous (jump exceeds modulus bound)");

  const double mass = gauss_kronrod<double, 61>::integrate(f, -r, 0.0, 15, 1e-14) +
                      gauss_kronrod<double, 61>::integrate(f, 0.0, r, 15, 1e-14);
  if (std::abs(mass - 1.0) > 1e-10) report.push_back("density mass differs from 1");
  if (std::abs(kernel.tail(0.0) - 0.5) > 1e-10) report.push_back("tail(0) differs from 1/2");
  if (kernel.tail(r) > 1e-12) report.push_back("tail does not vanish at the support radius");
  return report;
}

}  // namespace wnv
