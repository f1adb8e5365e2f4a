#include "qkd/keyrate_bb84.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "qkd/cs_bounds.hpp"

namespace qkd {
namespace {

double clamp01(double x) { return std::clamp(x, 0.0, 1.0); }

}  // namespace

double BoundTracker::count_lower(double prediction, double s) {
  ++used_;
  if (exact_) return std::clamp(s, 0.0, n_);
  return kato::count_lower({n_, eps_, std::clamp(prediction, 0.0, n_)}, s);
}

double BoundTracker::count_upper(double prediction, double s) {
  ++used_;
  if (exact_) return std::clamp(s, 0.0, n_);
  return kato::count_upper({n_, eps_, std::clamp(prediction, 0.0, n_)}, s);
}

double BoundTracker::sum_lower(double prediction, double count) {
  ++used_;
  if (exact_) return std::clamp(count, 0.0, n_);
  return kato::sum_lower({n_, eps_, std::clamp(prediction, 0.0, n_)}, count);
}

double BoundTracker::sum_upper(double prediction, double count) {
  ++used_;
  if (exact_) return std::clamp(count, 0.0, n_);
  return kato::sum_upper({n_, eps_, std::clamp(prediction, 0.0, n_)}, count);
}

double binary_entropy(double x) {
  if (!(x >= 0.0 && x <= 1.0))
    throw std::invalid_argument("binary_entropy: argument outside [0,1]");
  if (x == 0.0 || x == 1.0) return 0.0;
  return -x * std::log2(x) - (1.0 - x) * std::log2(1.0 - x);
}

namespace detail {

double m1_lower_tracked(const ExperimentConfig& cfg,
                        const ObservedStatistics& obs, BoundTracker& tracker,
                        double* y1_lp) {
  const auto& src = cfg.source;
  const double n = cfg.n_total;
  const double delta = effective_delta(cfg);
  const double sel_z = cfg.p_z_alice * cfg.p_z_bob;

  std::vector<decoy::Interval> ref_gains(src.intensities.size());
  for (std::size_t i = 0; i < src.intensities.size(); ++i) {
    const double expect = n * sel_z * src.probs[i] *
                          channel::gain(cfg.channel, src.intensities[i]);
    const double s_lo = tracker.sum_lower(expect, obs.m_z[i]);
    const double s_hi = tracker.sum_upper(expect, obs.m_z[i]);
    ref_gains[i].lo = cs::lower(delta, clamp01(s_lo / n));
    ref_gains[i].hi = cs::upper(delta, clamp01(s_hi / n));
  }

  // With an unboundedly fine intensity set the LP pins the conditional
  // single-photon rate exactly; the hook substitutes that limit.
  const double y1 =
      cfg.exact_yields
          ? channel::fock_gain(cfg.channel, 1)
          : lp::solve(decoy::yield_problem(src, ref_gains, cfg.p_z_alice,
                                           cfg.p_z_bob))
                .value;
  if (y1_lp) *y1_lp = y1;

  const double p1 = decoy::pn_marginal(src, 1);
  const double avg_ref = clamp01(p1 * sel_z * y1);
  const double truth = clamp01(p1 * sel_z * channel::fock_gain(cfg.channel, 1));
  const double predicted_arg = n * cs::lower(delta, truth);
  return tracker.count_lower(predicted_arg, n * cs::lower(delta, avg_ref));
}

double mph1_upper_tracked(const ExperimentConfig& cfg,
                          const ObservedStatistics& obs, BoundTracker& tracker,
                          double* g1_lp) {
  const auto& src = cfg.source;
  const double n = cfg.n_total;
  const double delta = effective_delta(cfg);
  const double p_x_alice = 1.0 - cfg.p_z_alice;
  const double p_x_bob = 1.0 - cfg.p_z_bob;
  const double sel_x = p_x_alice * p_x_bob;

  std::vector<decoy::Interval> ref_errors(src.intensities.size());
  for (std::size_t i = 0; i < src.intensities.size(); ++i) {
    const double expect =
        n * sel_x * src.probs[i] *
        channel::error_rate(cfg.channel, src.intensities[i],
                            channel::Basis::x);
    const double s_lo = tracker.sum_lower(expect, obs.e_x[i]);
    const double s_hi = tracker.sum_upper(expect, obs.e_x[i]);
    ref_errors[i].lo = cs::lower(delta, clamp01(s_lo / n));
    ref_errors[i].hi = cs::upper(delta, clamp01(s_hi / n));
  }

  const double g1 =
      cfg.exact_yields
          ? channel::fock_error_rate(cfg.channel, 1, channel::Basis::x)
          : lp::solve(decoy::error_problem(src, ref_errors, p_x_alice,
                                           p_x_bob))
                .value;
  if (g1_lp) *g1_lp = g1;

  // The reference phase-error rate of the Z-sifted single photons equals the
  // X-basis reference error rate scaled by the basis-selection ratio, so the
  // p1*sel_x normalization cancels into p1*sel_z.
  const double p1 = decoy::pn_marginal(src, 1);
  const double sel_z = cfg.p_z_alice * cfg.p_z_bob;
  const double avg_ref = clamp01(p1 * sel_z * g1);
  const double truth = clamp01(
      p1 * sel_z * channel::fock_error_rate(cfg.channel, 1,
                                            channel::Basis::x));
  const double predicted_arg = n * cs::upper(delta, truth);
  return tracker.count_upper(predicted_arg, n * cs::upper(delta, avg_ref));
}

}  // namespace detail

double estimate_m1_lower(const ExperimentConfig& cfg,
                         const ObservedStatistics& obs) {
  const EpsilonBudget budget = budget_for(cfg);
  BoundTracker tracker(cfg.n_total, budget.eps_bound, cfg.exact_tails);
  return detail::m1_lower_tracked(cfg, obs, tracker, nullptr);
}

double estimate_mph1_upper(const ExperimentConfig& cfg,
                           const ObservedStatistics& obs) {
  const EpsilonBudget budget = budget_for(cfg);
  BoundTracker tracker(cfg.n_total, budget.eps_bound, cfg.exact_tails);
  return detail::mph1_upper_tracked(cfg, obs, tracker, nullptr);
}

KeyRateResult key_length(const ExperimentConfig& cfg, double m1_lower,
                         double mph1_upper, const ObservedStatistics& obs) {
  const EpsilonBudget budget = budget_for(cfg);
  KeyRateResult r;
  r.m1_lower = m1_lower;
  r.mph1_upper = mph1_upper;
  r.ec_leakage = obs.m_z_total * cfg.f_ec * binary_entropy(
      clamp01(obs.e_z_rate));
  if (m1_lower <= 0.0) {
    r.eph_upper = 1.0;
    return r;
  }
  const double eph = std::min(mph1_upper / m1_lower, 1.0);
  r.eph_upper = eph;
  const double entropy_arg = std::min(eph, 0.5);
  double l = m1_lower * (1.0 - binary_entropy(entropy_arg)) - r.ec_leakage -
             std::log2(1.0 / budget.eps_c) - 2.0 * std::log2(1.0 / budget.eps_2)
             - 1.0 - std::log2(1.0 / (4.0 * budget.eps_pa));
  l = std::floor(l);
  l = std::clamp(l, 0.0, cfg.n_total);
  r.key_length = l;
  r.rate = cfg.n_total > 0.0 ? l / cfg.n_total : 0.0;
  return r;
}

KeyRateResult bb84_rate(const ExperimentConfig& cfg,
                        const ObservedStatistics& obs) {
  validate(cfg);
  if (cfg.protocol != Protocol::bb84)
    throw std::invalid_argument("bb84_rate: config is not a bb84 run");
  if (cfg.n_total < 1.0) return KeyRateResult{};
  const EpsilonBudget budget = budget_for(cfg);
  BoundTracker tracker(cfg.n_total, budget.eps_bound, cfg.exact_tails);
  double y1 = 0.0;
  double g1 = 0.0;
  const double m1 = detail::m1_lower_tracked(cfg, obs, tracker, &y1);
  const double mph1 = detail::mph1_upper_tracked(cfg, obs, tracker, &g1);
  if (tracker.applications() != budget.n_bounds)
    throw std::logic_error("bb84_rate: concentration budget audit failed");
  KeyRateResult r = key_length(cfg, m1, mph1, obs);
  r.y1_lp = y1;
  r.g1_lp = g1;
  r.bound_applications = tracker.applications();
  return r;
}

KeyRateResult bb84_rate(const ExperimentConfig& cfg) {
  return bb84_rate(cfg, expected_statistics(cfg));
}

}  // namespace qkd
