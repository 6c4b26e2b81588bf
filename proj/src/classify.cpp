#include "wnv/classify.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <functional>
#include <thread>

#include "wnv/error.hpp"
#include "wnv/nonlocal_eigen.hpp"
#include "wnv/ode_eigen.hpp"

namespace wnv {

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Spreading: return "Spreading";
    case Verdict::Vanishing: return "Vanishing";
    case Verdict::Undetermined: return "Undetermined";
  }
  return "?";
}

const char* to_string(Rule r) {
  switch (r) {
    case Rule::DeltaOne: return "delta_one";
    case Rule::LambdaONonnegative: return "lambda_O_nonnegative";
    case Rule::LambdaPNonpositive: return "lambda_P_nonpositive";
    case Rule::LambdaFCrossing: return "lambda_F_crossing";
    case Rule::DecayAndStall: return "decay_and_stall";
    case Rule::KernelsDiffer: return "kernels_differ";
    case Rule::NoStaticRule: return "no_static_rule";
    case Rule::PeriodLimit: return "period_limit";
  }
  return "?";
}

const char* to_string(ThresholdStatus s) {
  switch (s) {
    case ThresholdStatus::Bracketed: return "bracketed";
    case ThresholdStatus::SameVerdict: return "same_verdict";
    case ThresholdStatus::Undetermined: return "undetermined";
  }
  return "?";
}

Outcome classify_static(const ModelParams& p, const Kernel& k1, const Kernel& k2, double dx) {
  require_valid(p);
  Outcome out;
  if (p.delta == 1.0) {
    out.lambda_O = lambda1_O(p).lambda();
    out.verdict = Verdict::Vanishing;
    out.rule = Rule::DeltaOne;
    return out;
  }
  if (!k1.same_as(k2)) {
    out.rule = Rule::KernelsDiffer;
    return out;
  }
  out.lambda_O = lambda1_O(p).lambda();
  if (out.lambda_O >= 0.0) {
    out.verdict = Verdict::Vanishing;
    out.rule = Rule::LambdaONonnegative;
    return out;
  }
  out.lambda_P_h0 = lambda1_F(p, k1, -p.h0, p.h0, dx);
  if (out.lambda_P_h0 <= 0.0) {
    out.verdict = Verdict::Spreading;
    out.rule = Rule::LambdaPNonpositive;
  } else {
    out.rule = Rule::NoStaticRule;
  }
  return out;
}

TriggerMonitor::TriggerMonitor(const ModelParams& p, const ClassifySettings& s)
    : small_(s.vanish_factor * std::min(p.e1, p.e2)),
      spread_tol_(s.spread_tol),
      stall_tol_(s.stall_tol),
      stall_periods_(s.stall_periods) {}

std::optional<Rule> TriggerMonitor::update(const PeriodSummary& s) {
  if (!std::isnan(s.lambda_F) && s.lambda_F < -spread_tol_) return Rule::LambdaFCrossing;
  const double length = s.h - s.g;
  const bool stalled = last_length_ && length - *last_length_ < stall_tol_;
  last_length_ = length;
  streak_ = (stalled && s.sup_u1 < small_ && s.sup_u2 < small_) ? streak_ + 1 : 0;
  if (streak_ >= stall_periods_) return Rule::DecayAndStall;
  return std::nullopt;
}

Outcome classify_dynamic(const ModelParams& p, const Kernel& k1, const Kernel& k2,
                         const InitialData& init, const ClassifySettings& settings) {
  TriggerMonitor monitor(p, settings);
  std::optional<Rule> fired;
  const Trajectory tr = simulate(p, k1, k2, init, settings.max_periods, settings.sim,
                                 [&](const PeriodSummary& s) {
                                   fired = monitor.update(s);
                                   return fired.has_value();
                                 });
  Outcome out;
  const FieldState& f = tr.final_state;
  out.lambda_F = tr.lambda_F;
  out.periods = f.period;
  out.final_length = f.h - f.g;
  out.final_sup_u1 = f.u1.empty() ? 0.0 : *std::max_element(f.u1.begin(), f.u1.end());
  out.final_sup_u2 = f.u2.empty() ? 0.0 : *std::max_element(f.u2.begin(), f.u2.end());
  if (!tr.lambda_F.empty()) out.lambda_P_h0 = tr.lambda_F.front().lambda_F;
  if (fired) {
    out.rule = *fired;
    out.verdict = *fired == Rule::LambdaFCrossing ? Verdict::Spreading : Verdict::Vanishing;
  } else {
    out.rule = Rule::PeriodLimit;
    out.verdict = Verdict::Undetermined;
    out.t_max = f.t;
  }
  return out;
}

Outcome classify(const ModelParams& p, const Kernel& k1, const Kernel& k2, const InitialData& init,
                 const ClassifySettings& settings) {
  Outcome stat = classify_static(p, k1, k2, settings.sim.dx);
  if (stat.verdict != Verdict::Undetermined) return stat;
  Outcome dyn = classify_dynamic(p, k1, k2, init, settings);
  if (!std::isnan(stat.lambda_O)) dyn.lambda_O = stat.lambda_O;
  return dyn;
}

namespace {

// Bisection between a Vanishing low end and a Spreading high end; midpoints are
// geometric when both ends are positive, so the stop rule is a ratio.
ThresholdResult bisect(double low, double high, double rel_tol,
                       const std::function<Verdict(double)>& verdict_at) {
  if (!(low > 0.0 && high > low)) throw ParamError("threshold range needs 0 < low < high");
  if (!(rel_tol > 0.0)) throw ParamError("rel_tol must be positive");
  ThresholdResult r;
  auto probe = [&](double v) {
    const Verdict out = verdict_at(v);
    r.path.push_back({v, out});
    return out;
  };
  r.low = low;
  r.high = high;
  r.verdict_low = probe(low);
  r.verdict_high = probe(high);
  if (r.verdict_low == Verdict::Undetermined || r.verdict_high == Verdict::Undetermined) {
    r.status = ThresholdStatus::Undetermined;
    return r;
  }
  if (r.verdict_low == r.verdict_high || r.verdict_low != Verdict::Vanishing) {
    r.status = ThresholdStatus::SameVerdict;
    return r;
  }
  while (r.high / r.low > 1.0 + rel_tol) {
    const double mid = std::sqrt(r.low * r.high);
    ++r.iterations;
    const Verdict v = probe(mid);
    if (v == Verdict::Vanishing) {
      r.low = mid;
    } else if (v == Verdict::Spreading) {
      r.high = mid;
    } else {
      r.status = ThresholdStatus::Undetermined;
      return r;
    }
  }
  return r;
}

}  // namespace

ThresholdResult mu_threshold(const ModelParams& p, const Kernel& k1, const Kernel& k2,
                             const InitialData& init, double mu_low, double mu_high,
                             const ClassifySettings& settings, double rel_tol) {
  return bisect(mu_low, mu_high, rel_tol, [&](double mu) {
    ModelParams q = p;
    q.mu1 = q.mu2 = mu;
    return classify_dynamic(q, k1, k2, init, settings).verdict;
  });
}

ThresholdResult smallness_threshold(const ModelParams& p, const Kernel& k1, const Kernel& k2,
                                    const InitialData& base_init, double sigma_low,
                                    double sigma_high, const ClassifySettings& settings,
                                    double rel_tol) {
  return bisect(sigma_low, sigma_high, rel_tol, [&](double sigma) {
    return classify_dynamic(p, k1, k2, scaled(base_init, sigma), settings).verdict;
  });
}

std::vector<SweepRow> sweep(const ModelParams& base, const Kernel& k1, const Kernel& k2,
                            const SweepGrid& grid, const ClassifySettings& settings,
                            unsigned threads) {
  std::vector<SweepRow> rows;
  rows.reserve(grid.size());
  for (double d : grid.delta)
    for (double b : grid.b1)
      for (double m : grid.mu)
        for (double h : grid.h0) rows.push_back({d, b, m, h, {}});

  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(rows.size());
  auto worker = [&] {
    for (std::size_t i = next++; i < rows.size(); i = next++) {
      try {
        ModelParams q = base;
        q.delta = rows[i].delta;
        q.b1 = rows[i].b1;
        q.mu1 = q.mu2 = rows[i].mu;
        q.h0 = rows[i].h0;
        rows[i].outcome = classify(q, k1, k2, default_init(q), settings);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, rows.size()));
  std::vector<std::thread> pool;
  for (unsigned i = 1; i < threads; ++i) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  return rows;
}

}  // namespace wnv
