#include "wnv/ode_eigen.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "wnv/error.hpp"

namespace wnv {

namespace {

struct Coefficients {
  double A11, A12, A13, A14, A21, A22, A23, A24;
};

Coefficients coefficients(const ModelParams& p, const SpectralConstants& sc) {
  const double tau = (1.0 - p.delta) * p.omega;
  const double cold = p.delta * p.omega;
  const double bc = p.b1 + sc.c1;  // equals -(b2 + c2)
  const double eb = std::exp(p.b1 * cold);
  const double ek = std::exp(p.k * cold);
  return {p.a1 * p.e1 * std::exp(sc.c1 * tau), bc * std::exp(sc.c2 * tau), bc * eb,
          p.a1 * p.e1 * eb,
          bc * std::exp(sc.c1 * tau), p.a2 * p.e2 * std::exp(sc.c2 * tau), p.a2 * p.e2 * ek,
          bc * ek};
}

// Real roots of a x^2 + b x + c, avoiding cancellation; a tiny negative
// discriminant is treated as a double root.
std::array<double, 2> stable_roots(double a, double b, double c) {
  double disc = b * b - 4.0 * a * c;
  const double scale = b * b + std::abs(4.0 * a * c);
  if (disc < 0.0) {
    if (disc < -1e-12 * scale) throw NumericalError("quadratic has complex roots");
    disc = 0.0;
  }
  const double q = -0.5 * (b + std::copysign(std::sqrt(disc), b));
  if (q == 0.0) return {0.0, 0.0};
  return {q / a, c / q};
}

// Eigenfunction at t in [0, omega] from the unscaled closed forms.
EigenPoint raw_eigen(const ModelParams& p, const SpectralConstants& sc, double lambda, double m,
                     double t) {
  const double tau = (1.0 - p.delta) * p.omega;
  const double bc = p.b1 + sc.c1;
  const double mu1 = lambda + sc.c1;
  const double mu2 = lambda + sc.c2;
  auto warm = [&](double s) {
    const double e1 = std::exp(mu1 * s);
    const double e2 = std::exp(mu2 * s);
    return EigenPoint{(p.a1 * p.e1 * e1 - bc * m * e2) / sc.C0,
                      (bc * e1 + p.a2 * p.e2 * m * e2) / sc.C0,
                      (p.a1 * p.e1 * mu1 * e1 - bc * m * mu2 * e2) / sc.C0,
                      (bc * mu1 * e1 + p.a2 * p.e2 * m * mu2 * e2) / sc.C0};
  };
  if (t <= tau) return warm(t);
  const EigenPoint end = warm(tau);
  const double phi = end.phi * std::exp((lambda - p.b1) * (t - tau));
  const double psi = end.psi * std::exp((lambda - p.k) * (t - tau));
  return {phi, psi, (lambda - p.b1) * phi, (lambda - p.k) * psi};
}

struct Candidate {
  double Lambda;
  double m;
  bool positive;
  bool in_region;
};

bool in_region(const ModelParams& p, const SpectralConstants& sc, double Lambda, double m) {
  const double tau = (1.0 - p.delta) * p.omega;
  const double cold = p.delta * p.omega;
  const double lb = std::exp(p.b1 * cold - sc.c1 * tau);
  const double lk = std::exp(p.k * cold - sc.c1 * tau);
  if (p.k > p.b1) {
    return m > (p.b2 + sc.c2) / (p.a2 * p.e2) && m < 0.0 && Lambda > lb && Lambda < lk;
  }
  return m > 0.0 && m < p.a1 * p.e1 / (p.b1 + sc.c1) && Lambda > lk && Lambda < lb;
}

double recover_m(const Coefficients& A, double Lambda) {
  const double d1 = A.A13 - A.A12 * Lambda;
  const double d2 = A.A22 * Lambda - A.A23;
  if (std::abs(d1) >= std::abs(d2)) return (A.A14 - A.A11 * Lambda) / d1;
  return (A.A24 - A.A21 * Lambda) / d2;
}

void newton_polish(const Coefficients& A, double& Lambda, double& m) {
  for (int it = 0; it < 2; ++it) {
    const double f1 = A.A11 * Lambda - A.A12 * Lambda * m + A.A13 * m - A.A14;
    const double f2 = A.A21 * Lambda + A.A22 * Lambda * m - A.A23 * m - A.A24;
    const double j11 = A.A11 - A.A12 * m;
    const double j12 = A.A13 - A.A12 * Lambda;
    const double j21 = A.A21 + A.A22 * m;
    const double j22 = A.A22 * Lambda - A.A23;
    const double det = j11 * j22 - j12 * j21;
    if (det == 0.0 || !std::isfinite(det)) return;
    const double dL = (f1 * j22 - f2 * j12) / det;
    const double dm = (j11 * f2 - j21 * f1) / det;
    if (!std::isfinite(dL) || !std::isfinite(dm)) return;
    Lambda -= dL;
    m -= dm;
  }
}

void sample(const ModelParams& p, EigenResultODE& r, int samples) {
  const double lambda = r.lambda();
  r.t.resize(samples);
  r.phi.resize(samples);
  r.psi.resize(samples);
  const double psi0 = raw_eigen(p, r.constants, lambda, r.m, 0.0).psi;
  r.scale = 1.0 / psi0;
  for (int i = 0; i < samples; ++i) {
    const double t = p.omega * i / (samples - 1);
    const EigenPoint e = raw_eigen(p, r.constants, lambda, r.m, t);
    r.t[i] = t;
    r.phi[i] = r.scale * e.phi;
    r.psi[i] = r.scale * e.psi;
  }
}

bool positive_on_grid(const ModelParams& p, const SpectralConstants& sc, double lambda, double m,
                      int samples) {
  // The overall sign is free; every sample must share the sign of phi(0).
  const double sign = raw_eigen(p, sc, lambda, m, 0.0).phi;
  for (int i = 0; i < samples; ++i) {
    const EigenPoint e = raw_eigen(p, sc, lambda, m, p.omega * i / (samples - 1));
    if (!(e.phi * sign > 0.0 && e.psi * sign > 0.0)) return false;
  }
  return true;
}

}  // namespace

const char* to_string(CaseTag tag) {
  switch (tag) {
    case CaseTag::KEqualsB1:
      return "KEqualsB1";
    case CaseTag::KGreater:
      return "KGreater";
    case CaseTag::KLess:
      return "KLess";
    case CaseTag::DeltaOne:
      return "DeltaOne";
  }
  return "?";
}

double EigenResultODE::lambda() const {
  if (const auto* pr = std::get_if<Principal>(&value)) return pr->lambda;
  return std::get<GeneralizedPair>(value).upper;
}

double EigenResultODE::lower() const {
  if (const auto* pr = std::get_if<Principal>(&value)) return pr->lambda;
  return std::get<GeneralizedPair>(value).lower;
}

SpectralConstants spectral_constants(const ModelParams& p) {
  const double P = p.a1 * p.a2 * p.e1 * p.e2;
  const double root = std::sqrt((p.b1 - p.b2) * (p.b1 - p.b2) + 4.0 * P);
  SpectralConstants sc;
  // c1 = (-(b1+b2) + root)/2 rewritten to avoid cancellation when P ~ b1 b2.
  sc.c1 = 2.0 * (P - p.b1 * p.b2) / ((p.b1 + p.b2) + root);
  sc.c2 = -(p.b1 + p.b2) - sc.c1;
  sc.C0 = P + (p.b1 + sc.c1) * (p.b1 + sc.c1);
  return sc;
}

EigenResultODE lambda1_O(const ModelParams& p, int samples) {
  require_valid(p);
  if (samples < 2) throw ParamError("eigenfunction samples must be at least 2");
  EigenResultODE r;
  r.constants = spectral_constants(p);
  const SpectralConstants& sc = r.constants;

  if (p.delta == 1.0) {
    r.case_tag = CaseTag::DeltaOne;
    if (p.b1 == p.k) {
      r.value = Principal{p.b1};
      r.Lambda = std::exp(p.b1 * p.omega);
      r.t.resize(samples);
      for (int i = 0; i < samples; ++i) r.t[i] = p.omega * i / (samples - 1);
      r.phi.assign(samples, 1.0);
      r.psi.assign(samples, 1.0);
    } else {
      r.value = GeneralizedPair{std::max(p.b1, p.k), std::min(p.b1, p.k)};
      r.Lambda = std::exp(std::max(p.b1, p.k) * p.omega);
    }
    return r;
  }

  r.case_tag = p.k == p.b1 ? CaseTag::KEqualsB1 : (p.k > p.b1 ? CaseTag::KGreater : CaseTag::KLess);
  const Coefficients A = coefficients(p, sc);
  r.A = {A.A11, A.A12, A.A13, A.A14, A.A21, A.A22, A.A23, A.A24};

  if (p.k == p.b1 || p.delta == 0.0) {
    const double lambda = (p.b1 + sc.c1) * p.delta - sc.c1;
    r.value = Principal{lambda};
    r.m = 0.0;
    r.Lambda = std::exp(lambda * p.omega);
    sample(p, r, samples);
    return r;
  }

  for (double a : r.A) {
    if (!std::isfinite(a)) throw NumericalError("quadratic coefficients overflow");
  }
  const double qa = A.A11 * A.A22 + A.A12 * A.A21;
  const double qb = -(A.A13 * A.A21 + A.A11 * A.A23 + A.A22 * A.A14 + A.A12 * A.A24);
  const double qc = A.A23 * A.A14 + A.A13 * A.A24;
  const auto roots = stable_roots(qa, qb, qc);

  std::vector<Candidate> candidates;
  for (double L : roots) {
    if (!(L > 0.0)) continue;
    double m = recover_m(A, L);
    newton_polish(A, L, m);
    if (!(L > 0.0) || !std::isfinite(m)) continue;
    const double lambda = std::log(L) / p.omega;
    candidates.push_back(
        {L, m, positive_on_grid(p, sc, lambda, m, samples), in_region(p, sc, L, m)});
  }

  std::optional<Candidate> chosen;
  int n_positive = 0;
  for (const auto& c : candidates) n_positive += c.positive ? 1 : 0;
  if (n_positive == 1) {
    for (const auto& c : candidates) {
      if (c.positive) chosen = c;
    }
  } else if (n_positive == 2) {
    int n_region = 0;
    for (const auto& c : candidates) {
      if (c.in_region) {
        chosen = c;
        ++n_region;
      }
    }
    if (n_region != 1) chosen.reset();
  }
  if (!chosen) {
    throw NumericalError("root selection failed: " + std::to_string(n_positive) +
                         " candidate roots give positive eigenfunctions");
  }

  r.Lambda = chosen->Lambda;
  r.m = chosen->m;
  r.value = Principal{std::log(chosen->Lambda) / p.omega};
  sample(p, r, samples);
  return r;
}

double lambda1_O_oracle(const ModelParams& p) {
  require_valid(p);
  const double tau = (1.0 - p.delta) * p.omega;
  const double cold = p.delta * p.omega;
  // exp(Aw tau) = e^{(alpha+D) tau} [ (1+q)/2 I + (1-q)/(2D) (Aw - alpha I) ], q = e^{-2 D tau}.
  const double alpha = -0.5 * (p.b1 + p.b2);
  const double half = 0.5 * (p.b2 - p.b1);  // (Aw00 - alpha), and -(Aw11 - alpha)
  const double D = std::sqrt(half * half + p.a1 * p.e1 * p.a2 * p.e2);
  const double q = std::exp(-2.0 * D * tau);
  const double cp = 0.5 * (1.0 + q);
  const double sp = tau > 0.0 ? -std::expm1(-2.0 * D * tau) / (2.0 * D) : 0.0;
  const double w00 = cp + sp * half;
  const double w01 = sp * p.a1 * p.e1;
  const double w10 = sp * p.a2 * p.e2;
  const double w11 = cp - sp * half;
  // Cold factor diag(e^{-b1 cold}, e^{-k cold}) scaled by e^{min(b1,k) cold}.
  const double lo = std::min(p.b1, p.k);
  const double f1 = std::exp(-(p.b1 - lo) * cold);
  const double f2 = std::exp(-(p.k - lo) * cold);
  const double m00 = f1 * w00, m01 = f1 * w01, m10 = f2 * w10, m11 = f2 * w11;
  const double rho = 0.5 * (m00 + m11) + std::sqrt(0.25 * (m00 - m11) * (m00 - m11) + m01 * m10);
  const double log_rho = (alpha + D) * tau - lo * cold + std::log(rho);
  return -log_rho / p.omega;
}

EigenPoint eigenfunction_at(const ModelParams& p, const EigenResultODE& r, double t) {
  if (!r.is_principal()) throw NumericalError("no principal eigenfunction for a generalized pair");
  double s = std::fmod(t, p.omega);
  if (s < 0.0) s += p.omega;
  if (r.case_tag == CaseTag::DeltaOne) return {1.0, 1.0, 0.0, 0.0};
  EigenPoint e = raw_eigen(p, r.constants, r.lambda(), r.m, s);
  e.phi *= r.scale;
  e.psi *= r.scale;
  e.dphi *= r.scale;
  e.dpsi *= r.scale;
  return e;
}

QuadraticRoots quadratic_roots(const ModelParams& p) {
  require_valid(p);
  if (!(p.delta > 0.0 && p.delta < 1.0) || p.k == p.b1) {
    throw ParamError("quadratic system needs 0 < delta < 1 and k != b1");
  }
  const Coefficients A = coefficients(p, spectral_constants(p));
  QuadraticRoots out;
  const double la = A.A11 * A.A22 + A.A12 * A.A21;
  const double lb = -(A.A13 * A.A21 + A.A11 * A.A23 + A.A22 * A.A14 + A.A12 * A.A24);
  const double lc = A.A23 * A.A14 + A.A13 * A.A24;
  out.Lambda = stable_roots(la, lb, lc);
  out.Lambda_product = lc / la;
  const double ma = A.A13 * A.A22 - A.A12 * A.A23;
  const double mb = -(A.A22 * A.A14 + A.A12 * A.A24 - A.A13 * A.A21 - A.A11 * A.A23);
  const double mc = A.A11 * A.A24 - A.A21 * A.A14;
  out.m = stable_roots(ma, mb, mc);
  out.m_product = mc / ma;
  return out;
}

double zero_level_residual(const ModelParams& p) {
  require_valid(p);
  if (!(p.delta > 0.0 && p.delta < 1.0)) throw ParamError("zero-level residual needs 0 < delta < 1");
  const SpectralConstants sc = spectral_constants(p);
  const double tau = (1.0 - p.delta) * p.omega;
  const double cold = p.delta * p.omega;
  const double e1t = std::exp(sc.c1 * tau);
  const double e2t = std::exp(sc.c2 * tau);
  const double eb = std::exp(p.b1 * cold);
  const double ek = std::exp(p.k * cold);
  const double den_l = (p.b1 + sc.c1) * (e2t - eb);
  const double den_r = p.a2 * p.e2 * (e2t - ek);
  if (std::abs(den_l) < 1e-300 || std::abs(den_r) < 1e-300) {
    throw NumericalError("zero-level residual denominator vanishes");
  }
  const double lhs = p.a1 * p.e1 * (e1t - eb) / den_l;
  const double rhs = (p.b2 + sc.c2) * (e1t - ek) / den_r;
  return lhs - rhs;
}

SignBounds sign_bounds(const ModelParams& p) {
  require_valid(p);
  const double c1 = spectral_constants(p).c1;
  const double lo = std::min(p.b1, p.k) * p.delta;
  const double hi = std::max(p.b1, p.k) * p.delta;
  const double ref = c1 * (1.0 - p.delta);
  return {lo > ref, hi > ref, hi < ref, lo < ref};
}

ContourResult contour_zero(const ModelParams& p, const std::vector<double>& delta_grid,
                           double b1_lo, double b1_hi, bool tie_k_to_b1) {
  if (!(b1_lo > 0.0 && b1_lo < b1_hi)) throw ParamError("b1 range must satisfy 0 < lo < hi");
  ContourResult out;
  for (double delta : delta_grid) {
    ModelParams q = p;
    q.delta = delta;
    if (!(delta >= 0.0 && delta < 1.0)) {
      out.omitted.push_back(delta);
      continue;
    }
    auto f = [&](double b1) {
      q.b1 = b1;
      if (tie_k_to_b1) q.k = b1;
      return lambda1_O(q, 2).lambda();
    };
    double lo = b1_lo, hi = b1_hi;
    double flo = f(lo), fhi = f(hi);
    if (!(flo <= 0.0 && fhi >= 0.0)) {
      out.omitted.push_back(delta);
      continue;
    }
    double mid = 0.5 * (lo + hi);
    for (int it = 0; it < 200 && hi - lo > 1e-14 * std::max(1.0, hi); ++it) {
      mid = 0.5 * (lo + hi);
      const double fm = f(mid);
      if (fm == 0.0) {
        lo = hi = mid;
        break;
      }
      (fm < 0.0 ? lo : hi) = mid;
    }
    mid = 0.5 * (lo + hi);
    if (std::abs(f(mid)) > 1e-9) {
      out.omitted.push_back(delta);
      continue;
    }
    out.points.push_back({delta, mid});
  }
  return out;
}

double contour_tied_closed_form(const ModelParams& p, double delta) {
  if (!(delta >= 0.0 && delta < 1.0)) throw ParamError("delta must lie in [0, 1)");
  // With k = b1 the zero satisfies b1 delta = c1 (1 - delta); r = delta/(1-delta) gives
  // r(1+r) b1^2 + b2(1+r) b1 - P = 0, solved in the cancellation-free form.
  const double P = p.a1 * p.a2 * p.e1 * p.e2;
  const double r = delta / (1.0 - delta);
  const double B = p.b2 * (1.0 + r);
  return 2.0 * P / (B + std::sqrt(B * B + 4.0 * r * (1.0 + r) * P));
}

}  // namespace wnv
