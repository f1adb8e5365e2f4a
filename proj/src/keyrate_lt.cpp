#include "qkd/keyrate_lt.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "qkd/cs_bounds.hpp"

namespace qkd {
namespace {

double clamp01(double x) { return std::clamp(x, 0.0, 1.0); }

struct YieldTerm {
  int setting;     // 0 -> z0, 1 -> z1, 2 -> x0
  int outcome;     // Bob's X-basis outcome
  lp::Sense sense;
};

constexpr std::array<channel::State, 3> kLtStates = {
    channel::State::z0, channel::State::z1, channel::State::x0};

// One decoy estimate of an averaged conditional single-photon rate: count
// bounds per intensity, overlap correction, then the LP extremum.
double estimate_setting_yield(const ExperimentConfig& cfg,
                              const ObservedStatistics& obs,
                              BoundTracker& tracker, const YieldTerm& term) {
  const auto& src = cfg.source;
  const double n = cfg.n_total;
  const double delta = effective_delta(cfg);
  const double p_a = term.setting == 2 ? 1.0 - cfg.p_z_alice
                                       : cfg.p_z_alice / 2.0;
  const double p_x_bob = 1.0 - cfg.p_z_bob;

  std::vector<decoy::Interval> ref(src.intensities.size());
  for (std::size_t i = 0; i < src.intensities.size(); ++i) {
    const double expect =
        n * src.probs[i] * p_a * p_x_bob *
        channel::outcome_prob(cfg.channel,
                              kLtStates[static_cast<std::size_t>(term.setting)],
                              src.intensities[i], channel::Basis::x,
                              term.outcome);
    const double count =
        obs.m_lt[i][static_cast<std::size_t>(term.setting)]
                 [static_cast<std::size_t>(term.outcome)];
    const double s_lo = tracker.sum_lower(expect, count);
    const double s_hi = tracker.sum_upper(expect, count);
    ref[i].lo = cs::lower(delta, clamp01(s_lo / n));
    ref[i].hi = cs::upper(delta, clamp01(s_hi / n));
  }
  if (cfg.exact_yields)
    return channel::fock_outcome_prob(
        cfg.channel, kLtStates[static_cast<std::size_t>(term.setting)], 1,
        channel::Basis::x, term.outcome);
  const auto lp = decoy::setting_yield_problem(src, ref, p_a, p_x_bob,
                                               term.sense);
  return clamp01(lp::solve(lp).value);
}

double phase_error_truth(const ExperimentConfig& cfg, const VirtualProbs& vp) {
  const auto& ch = cfg.channel;
  const auto b = channel::Basis::x;
  LtYieldEstimate exact;
  exact.z0_to_x0_upper = channel::fock_outcome_prob(ch, channel::State::z0, 1,
                                                    b, 0);
  exact.z1_to_x0_upper = channel::fock_outcome_prob(ch, channel::State::z1, 1,
                                                    b, 0);
  exact.x0_to_x0_lower = channel::fock_outcome_prob(ch, channel::State::x0, 1,
                                                    b, 0);
  exact.x0_to_x1_upper = channel::fock_outcome_prob(ch, channel::State::x0, 1,
                                                    b, 1);
  return lt_phase_error_bound(exact, vp, decoy::pn_marginal(cfg.source, 1),
                              cfg.p_z_bob);
}

}  // namespace

VirtualProbs lt_virtual_probs(double p_z0, double p_z1, double overlap_re) {
  if (!(p_z0 >= 0.0 && p_z1 >= 0.0 && p_z0 + p_z1 > 0.0))
    throw std::invalid_argument("lt_virtual_probs: bad setting probabilities");
  if (!(overlap_re >= -1.0 && overlap_re <= 1.0))
    throw std::invalid_argument("lt_virtual_probs: overlap outside [-1,1]");
  const double mean = 0.5 * (p_z0 + p_z1);
  const double cross = std::sqrt(p_z0 * p_z1) * overlap_re;
  VirtualProbs vp;
  vp.p0 = mean + cross;
  vp.p1 = mean - cross;
  return vp;
}

double lt_phase_error_bound(const LtYieldEstimate& est, const VirtualProbs& vp,
                            double p1, double p_z_bob) {
  if (!(vp.p0 >= 0.0 && vp.p1 >= 0.0))
    throw std::invalid_argument("lt_phase_error_bound: negative virtual prob");
  if (!(p1 >= 0.0 && p1 <= 1.0) || !(p_z_bob >= 0.0 && p_z_bob <= 1.0))
    throw std::invalid_argument("lt_phase_error_bound: bad probabilities");
  const double grouped = vp.p0 * est.x0_to_x1_upper +
                         vp.p1 * (est.z0_to_x0_upper + est.z1_to_x0_upper -
                                  est.x0_to_x0_lower);
  return clamp01(p1 * p_z_bob * grouped);
}

KeyRateResult lt_rate(const ExperimentConfig& cfg,
                      const ObservedStatistics& obs) {
  validate(cfg);
  if (cfg.protocol != Protocol::lt)
    throw std::invalid_argument("lt_rate: config is not a three-state run");
  if (cfg.n_total < 1.0) return KeyRateResult{};
  const EpsilonBudget budget = budget_for(cfg);
  BoundTracker tracker(cfg.n_total, budget.eps_bound, cfg.exact_tails);

  double y1 = 0.0;
  const double m1 = detail::m1_lower_tracked(cfg, obs, tracker, &y1);

  const YieldTerm terms[] = {
      {0, 0, lp::Sense::maximize},   // z0 -> x0
      {1, 0, lp::Sense::maximize},   // z1 -> x0
      {2, 0, lp::Sense::minimize},   // x0 -> x0
      {2, 1, lp::Sense::maximize},   // x0 -> x1
  };
  LtYieldEstimate est;
  est.z0_to_x0_upper = estimate_setting_yield(cfg, obs, tracker, terms[0]);
  est.z1_to_x0_upper = estimate_setting_yield(cfg, obs, tracker, terms[1]);
  est.x0_to_x0_lower = estimate_setting_yield(cfg, obs, tracker, terms[2]);
  est.x0_to_x1_upper = estimate_setting_yield(cfg, obs, tracker, terms[3]);

  const VirtualProbs vp =
      lt_virtual_probs(cfg.p_z_alice / 2.0, cfg.p_z_alice / 2.0, 0.0);
  const double p1 = decoy::pn_marginal(cfg.source, 1);
  const double gamma_bar = lt_phase_error_bound(est, vp, p1, cfg.p_z_bob);

  const double n = cfg.n_total;
  const double delta = effective_delta(cfg);
  const double predicted_arg =
      n * cs::upper(delta, phase_error_truth(cfg, vp));
  const double mph1 =
      tracker.count_upper(predicted_arg, n * cs::upper(delta, gamma_bar));

  if (tracker.applications() != budget.n_bounds)
    throw std::logic_error("lt_rate: concentration budget audit failed");
  KeyRateResult r = key_length(cfg, m1, mph1, obs);
  r.y1_lp = y1;
  r.g1_lp = gamma_bar;
  r.bound_applications = tracker.applications();
  return r;
}

KeyRateResult lt_rate(const ExperimentConfig& cfg) {
  return lt_rate(cfg, expected_statistics(cfg));
}

KeyRateResult protocol_rate(const ExperimentConfig& cfg,
                            const ObservedStatistics& obs) {
  return cfg.protocol == Protocol::bb84 ? bb84_rate(cfg, obs)
                                        : lt_rate(cfg, obs);
}

KeyRateResult protocol_rate(const ExperimentConfig& cfg) {
  return protocol_rate(cfg, expected_statistics(cfg));
}

}  // namespace qkd
