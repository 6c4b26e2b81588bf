#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "wnv/fb_sim.hpp"

namespace wnv {

enum class Verdict { Spreading, Vanishing, Undetermined };

/// The single rule behind a verdict.
enum class Rule {
  DeltaOne,             ///< delta = 1: no warm season
  LambdaONonnegative,   ///< lambda1_O >= 0
  LambdaPNonpositive,   ///< lambda1_O < 0 and lambda1_P([-h0, h0]) <= 0
  LambdaFCrossing,      ///< observed lambda1_P([g, h]) < -tol at a period start
  DecayAndStall,        ///< small sup norms and stalled boundaries
  KernelsDiffer,        ///< eigenvalue rules need J1 = J2
  NoStaticRule,         ///< lambda1_O < 0 < lambda1_P([-h0, h0])
  PeriodLimit,          ///< neither trigger fired within max_periods
};

const char* to_string(Verdict v);
const char* to_string(Rule r);

struct Outcome {
  Verdict verdict{Verdict::Undetermined};
  Rule rule{Rule::NoStaticRule};
  double t_max{0.0};          ///< simulated time behind an Undetermined dynamic verdict
  double lambda_O{NAN};       ///< upper generalized value when delta = 1
  double lambda_P_h0{NAN};    ///< NaN when not evaluated
  std::vector<LambdaFRecord> lambda_F;
  long periods{0};
  double final_length{NAN};
  double final_sup_u1{NAN};
  double final_sup_u2{NAN};
};

struct ClassifySettings {
  SimSettings sim{};
  int max_periods{2000};
  double spread_tol{1e-10};
  double vanish_factor{1e-6};  ///< sup norms below vanish_factor * min(e1, e2)
  double stall_tol{1e-8};      ///< per-period growth of h - g
  int stall_periods{3};
};

/// Eigenvalue rules only; lambda1_P([-h0, h0]) uses the simulator's lattice.
Outcome classify_static(const ModelParams& p, const Kernel& k1, const Kernel& k2, double dx);

/// Watches period-start summaries for the spreading and vanishing triggers.
class TriggerMonitor {
 public:
  TriggerMonitor(const ModelParams& p, const ClassifySettings& s);
  /// Rule that fired at this period start, if any.
  std::optional<Rule> update(const PeriodSummary& s);

 private:
  double small_;
  double spread_tol_;
  double stall_tol_;
  int stall_periods_;
  int streak_{0};
  std::optional<double> last_length_;
};

Outcome classify_dynamic(const ModelParams& p, const Kernel& k1, const Kernel& k2,
                         const InitialData& init, const ClassifySettings& settings);

/// Static rules first, then the dynamic detector from init.
Outcome classify(const ModelParams& p, const Kernel& k1, const Kernel& k2, const InitialData& init,
                 const ClassifySettings& settings);

enum class ThresholdStatus {
  Bracketed,
  SameVerdict,   ///< both ends gave the same verdict; no search
  Undetermined,  ///< a probe returned Undetermined; the bracket so far is reported
};

const char* to_string(ThresholdStatus s);

struct ThresholdProbe {
  double value;
  Verdict verdict;
};

struct ThresholdResult {
  ThresholdStatus status{ThresholdStatus::Bracketed};
  double low{0.0};   ///< Vanishing end
  double high{0.0};  ///< Spreading end
  Verdict verdict_low{Verdict::Undetermined};
  Verdict verdict_high{Verdict::Undetermined};
  int iterations{0};
  std::vector<ThresholdProbe> path;
};

/// Bisects mu1 = mu2 = mu over [mu_low, mu_high] until high / low <= 1 + rel_tol.
ThresholdResult mu_threshold(const ModelParams& p, const Kernel& k1, const Kernel& k2,
                             const InitialData& init, double mu_low, double mu_high,
                             const ClassifySettings& settings, double rel_tol = 0.05);

/// Bisects the scale sigma of base_init over [sigma_low, sigma_high].
ThresholdResult smallness_threshold(const ModelParams& p, const Kernel& k1, const Kernel& k2,
                                    const InitialData& base_init, double sigma_low,
                                    double sigma_high, const ClassifySettings& settings,
                                    double rel_tol = 0.05);

struct SweepGrid {
  std::vector<double> delta, b1, mu, h0;
  std::size_t size() const { return delta.size() * b1.size() * mu.size() * h0.size(); }
};

struct SweepRow {
  double delta, b1, mu, h0;
  Outcome outcome;
};

/// Row-major over (delta, b1, mu, h0) with h0 fastest; the default initial data of
/// each configuration. Rows are independent and run on up to `threads` workers.
std::vector<SweepRow> sweep(const ModelParams& base, const Kernel& k1, const Kernel& k2,
                            const SweepGrid& grid, const ClassifySettings& settings,
                            unsigned threads = 0);

}  // namespace wnv
