#include "qkd/decoy_lp.hpp"

#include <cmath>
#include <stdexcept>

namespace qkd::decoy {

namespace {

double clamp01(double x) { return x < 0.0 ? 0.0 : (x > 1.0 ? 1.0 : x); }

}  // namespace

void validate(const PhotonSource& s) {
  if (s.intensities.empty() || s.intensities.size() != s.probs.size())
    throw std::invalid_argument("source: intensity/probability lists must match");
  if (s.n_cut < 1) throw std::invalid_argument("source: n_cut must be >= 1");
  double sum = 0.0;
  for (std::size_t i = 0; i < s.intensities.size(); ++i) {
    if (!(s.intensities[i] >= 0.0))
      throw std::invalid_argument("source: intensities must be >= 0");
    if (i > 0 && !(s.intensities[i] < s.intensities[i - 1]))
      throw std::invalid_argument("source: intensities must be strictly decreasing");
    if (!(s.probs[i] > 0.0))
      throw std::invalid_argument("source: intensity probabilities must be > 0");
    sum += s.probs[i];
  }
  if (std::fabs(sum - 1.0) > 1e-12)
    throw std::invalid_argument("source: intensity probabilities must sum to 1");
}

double pn_given_mu(double mu, int n) {
  if (!(mu >= 0.0) || n < 0)
    throw std::invalid_argument("poisson: mu >= 0 and n >= 0 required");
  if (mu == 0.0) return n == 0 ? 1.0 : 0.0;
  return std::exp(-mu + n * std::log(mu) - std::lgamma(n + 1.0));
}

double tail_mass(double mu, int n_cut) {
  if (!(mu >= 0.0) || n_cut < 0)
    throw std::invalid_argument("poisson: mu >= 0 and n_cut >= 0 required");
  double sum = 0.0;
  for (int n = 0; n <= n_cut; ++n) sum += pn_given_mu(mu, n);
  return clamp01(1.0 - sum);
}

double pn_marginal(const PhotonSource& s, int n) {
  validate(s);
  if (n < 0) throw std::invalid_argument("poisson: n >= 0 required");
  double p = 0.0;
  for (std::size_t i = 0; i < s.intensities.size(); ++i)
    p += s.probs[i] * pn_given_mu(s.intensities[i], n);
  return p;
}

lp::Problem conditional_rate_problem(const PhotonSource& s,
                                     const std::vector<Interval>& observed,
                                     double sel_prob, int target_n,
                                     lp::Sense sense) {
  validate(s);
  if (observed.size() != s.intensities.size())
    throw std::invalid_argument("decoy: one observed interval per intensity required");
  if (!(sel_prob > 0.0) || !(sel_prob <= 1.0))
    throw std::invalid_argument("decoy: selection probability must lie in (0,1]");
  if (target_n < 0 || target_n > s.n_cut)
    throw std::invalid_argument("decoy: target photon number outside truncation");

  lp::Problem p;
  p.sense = sense;
  p.objective.assign(s.n_cut + 1, 0.0);
  p.objective[target_n] = 1.0;
  for (std::size_t i = 0; i < s.intensities.size(); ++i) {
    const double mu = s.intensities[i];
    const double norm = s.probs[i] * sel_prob;
    lp::Row row;
    row.coeff.resize(s.n_cut + 1);
    for (int n = 0; n <= s.n_cut; ++n) row.coeff[n] = pn_given_mu(mu, n);
    row.lo = clamp01(observed[i].lo / norm) - tail_mass(mu, s.n_cut);
    if (row.lo < 0.0) row.lo = 0.0;
    row.hi = clamp01(observed[i].hi / norm);
    if (row.lo > row.hi)
      throw lp::Infeasible("decoy: observed interval empty after normalization");
    p.rows.push_back(std::move(row));
  }
  return p;
}

lp::Problem yield_problem(const PhotonSource& s,
                          const std::vector<Interval>& gains, double p_z_alice,
                          double p_z_bob) {
  return conditional_rate_problem(s, gains, p_z_alice * p_z_bob, 1,
                                  lp::Sense::minimize);
}

lp::Problem error_problem(const PhotonSource& s,
                          const std::vector<Interval>& error_gains,
                          double p_x_alice, double p_x_bob) {
  return conditional_rate_problem(s, error_gains, p_x_alice * p_x_bob, 1,
                                  lp::Sense::maximize);
}

lp::Problem setting_yield_problem(const PhotonSource& s,
                                  const std::vector<Interval>& gains,
                                  double p_setting, double p_x_bob,
                                  lp::Sense sense) {
  return conditional_rate_problem(s, gains, p_setting * p_x_bob, 1, sense);
}

}  // namespace qkd::decoy
