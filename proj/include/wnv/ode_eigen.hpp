#pragma once

#include <array>
#include <variant>
#include <vector>

#include "wnv/model.hpp"

namespace wnv {

/// Roots c1 >= c2 of (c + b1)(c + b2) = a1 a2 e1 e2 and the normalizer C0.
struct SpectralConstants {
  double c1{0.0};
  double c2{0.0};
  double C0{0.0};
};

SpectralConstants spectral_constants(const ModelParams& p);

enum class CaseTag { KEqualsB1, KGreater, KLess, DeltaOne };

const char* to_string(CaseTag tag);

struct Principal {
  double lambda{0.0};
};

/// Upper and lower generalized principal eigenvalues (delta = 1, b1 != k).
struct GeneralizedPair {
  double upper{0.0};
  double lower{0.0};
};

using Eigenvalue = std::variant<Principal, GeneralizedPair>;

struct EigenResultODE {
  Eigenvalue value;
  double m{0.0};
  double Lambda{1.0};  ///< exp(lambda * omega)
  CaseTag case_tag{CaseTag::KEqualsB1};
  SpectralConstants constants;
  /// Samples on a uniform grid over [0, omega]; empty for a generalized pair.
  std::vector<double> t, phi, psi;
  /// A11, A12, A13, A14, A21, A22, A23, A24 of the (Lambda, m) system.
  std::array<double, 8> A{};
  /// Multiplier applied to the raw eigenfunction formulas so that psi(0) = 1.
  double scale{1.0};

  bool is_principal() const { return std::holds_alternative<Principal>(value); }
  /// The principal eigenvalue, or the upper member of a generalized pair.
  double lambda() const;
  double lower() const;
};

EigenResultODE lambda1_O(const ModelParams& p, int samples = 201);

/// -ln(rho(exp(Ac delta w) exp(Aw (1-delta) w))) / w, evaluated in closed form.
double lambda1_O_oracle(const ModelParams& p);

struct EigenPoint {
  double phi, psi, dphi, dpsi;
};

/// Eigenfunction values and time derivatives at t (taken modulo omega).
EigenPoint eigenfunction_at(const ModelParams& p, const EigenResultODE& r, double t);

/// Both roots of each quadratic of the (Lambda, m) system, for structural checks.
struct QuadraticRoots {
  std::array<double, 2> Lambda{};
  std::array<double, 2> m{};
  double Lambda_product{0.0};
  double m_product{0.0};
};

/// Requires 0 < delta < 1 and k != b1.
QuadraticRoots quadratic_roots(const ModelParams& p);

/// Difference of the two expressions for m at Lambda = 1; zero iff lambda1_O = 0.
double zero_level_residual(const ModelParams& p);

struct SignBounds {
  bool sufficient_positive{false};
  bool necessary_positive{false};
  bool sufficient_negative{false};
  bool necessary_negative{false};
};

SignBounds sign_bounds(const ModelParams& p);

struct ContourPoint {
  double delta;
  double b1;
};

struct ContourResult {
  std::vector<ContourPoint> points;
  /// Grid values without a sign change of lambda1_O in the b1 range.
  std::vector<double> omitted;
};

/// Zero contour of lambda1_O in the (delta, b1) plane by bisection in b1.
/// With tie_k_to_b1 the cold decay rate follows b1 along the search.
ContourResult contour_zero(const ModelParams& p, const std::vector<double>& delta_grid,
                           double b1_lo, double b1_hi, bool tie_k_to_b1 = false);

/// Closed-form zero of lambda1_O in b1 when k = b1, for delta in [0, 1).
double contour_tied_closed_form(const ModelParams& p, double delta);

}  // namespace wnv
