#include "qkd/experiment.hpp"

#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

namespace qkd {
namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument("experiment: " + what);
}

double setting_prob(const ExperimentConfig& cfg, int setting) {
  // Three-state source: z0 and z1 split the Z-basis probability evenly,
  // the single X state takes the rest.
  return setting == 2 ? 1.0 - cfg.p_z_alice : cfg.p_z_alice / 2.0;
}

constexpr std::array<channel::State, 3> kLtStates = {
    channel::State::z0, channel::State::z1, channel::State::x0};

}  // namespace

int bound_applications(Protocol p) { return p == Protocol::bb84 ? 14 : 32; }

EpsilonBudget EpsilonBudget::split(double eps_s, double eps_c, int n_bounds) {
  require(std::isfinite(eps_s) && eps_s > 0.0 && eps_s < 1.0,
          "secrecy epsilon out of range");
  require(std::isfinite(eps_c) && eps_c > 0.0 && eps_c < 1.0,
          "correctness epsilon out of range");
  require(n_bounds >= 1, "bound count must be positive");
  EpsilonBudget b;
  b.eps_s = eps_s;
  b.eps_c = eps_c;
  b.eps_2 = eps_s / 3.0;
  b.eps_pa = eps_s / 3.0;
  b.eps_bar = (eps_s / 6.0) * (eps_s / 6.0);
  b.eps_bound = b.eps_bar / n_bounds;
  b.n_bounds = n_bounds;
  const double recombined = b.eps_2 + b.eps_pa + 2.0 * std::sqrt(b.eps_bar);
  if (std::abs(recombined - eps_s) > 1e-15 * eps_s)
    throw std::logic_error("experiment: epsilon split identity violated");
  return b;
}

void validate(const ExperimentConfig& cfg) {
  require(std::isfinite(cfg.n_total) && cfg.n_total >= 0.0,
          "n_total must be non-negative");
  channel::validate(cfg.channel);
  decoy::validate(cfg.source);
  require(cfg.p_z_alice > 0.0 && cfg.p_z_alice < 1.0,
          "p_z_alice must lie in (0,1)");
  require(cfg.p_z_bob > 0.0 && cfg.p_z_bob < 1.0, "p_z_bob must lie in (0,1)");
  require(std::isfinite(cfg.delta) && cfg.delta >= 0.0 && cfg.delta <= 1.0,
          "delta must lie in [0,1]");
  require(cfg.i_max < 0.0 || std::isfinite(cfg.i_max),
          "i_max must be finite when set");
  require(std::isfinite(cfg.f_ec) && cfg.f_ec >= 1.0,
          "error-correction efficiency must be >= 1");
  // Exercises the range checks.
  EpsilonBudget::split(cfg.eps_secrecy, cfg.eps_correct,
                       bound_applications(cfg.protocol));
}

double effective_delta(const ExperimentConfig& cfg) {
  if (cfg.i_max >= 0.0) return std::exp(-0.5 * cfg.i_max);
  return cfg.delta;
}

EpsilonBudget budget_for(const ExperimentConfig& cfg) {
  return EpsilonBudget::split(cfg.eps_secrecy, cfg.eps_correct,
                              bound_applications(cfg.protocol));
}

ObservedStatistics expected_statistics(const ExperimentConfig& cfg) {
  validate(cfg);
  const std::size_t k = cfg.source.intensities.size();
  ObservedStatistics obs;
  obs.n_total = cfg.n_total;
  obs.m_z.assign(k, 0.0);
  obs.e_x.assign(k, 0.0);
  obs.m_lt.assign(k, {});
  const double n = cfg.n_total;
  const double sel_z = cfg.p_z_alice * cfg.p_z_bob;
  const double p_x_bob = 1.0 - cfg.p_z_bob;
  double err_z = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    const double mu = cfg.source.intensities[i];
    const double p_mu = cfg.source.probs[i];
    obs.m_z[i] = n * sel_z * p_mu * channel::gain(cfg.channel, mu);
    err_z += n * sel_z * p_mu *
             channel::error_rate(cfg.channel, mu, channel::Basis::z);
    if (cfg.protocol == Protocol::bb84) {
      obs.e_x[i] = n * (1.0 - cfg.p_z_alice) * p_x_bob * p_mu *
                   channel::error_rate(cfg.channel, mu, channel::Basis::x);
    } else {
      for (int a = 0; a < 3; ++a) {
        const double p_a = setting_prob(cfg, a);
        for (int b = 0; b < 2; ++b) {
          obs.m_lt[i][static_cast<std::size_t>(a)][static_cast<std::size_t>(
              b)] = n * p_mu * p_a * p_x_bob *
                    channel::outcome_prob(cfg.channel, kLtStates[
                        static_cast<std::size_t>(a)], mu, channel::Basis::x,
                        b);
        }
      }
    }
    obs.m_z_total += obs.m_z[i];
  }
  obs.e_z_rate = obs.m_z_total > 0.0 ? err_z / obs.m_z_total : 0.0;
  return obs;
}

ObservedStatistics sampled_statistics(const ExperimentConfig& cfg,
                                      std::uint64_t seed) {
  validate(cfg);
  std::mt19937_64 rng(seed);
  const auto draw = [&rng](double trials, double p) {
    const long long t = std::llround(trials);
    if (t <= 0 || p <= 0.0) return 0.0;
    std::binomial_distribution<long long> dist(t, std::min(p, 1.0));
    return static_cast<double>(dist(rng));
  };
  const std::size_t k = cfg.source.intensities.size();
  ObservedStatistics obs;
  obs.n_total = cfg.n_total;
  obs.m_z.assign(k, 0.0);
  obs.e_x.assign(k, 0.0);
  obs.m_lt.assign(k, {});
  const double n = cfg.n_total;
  const double sel_z = cfg.p_z_alice * cfg.p_z_bob;
  const double p_x_bob = 1.0 - cfg.p_z_bob;
  double err_z = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    const double mu = cfg.source.intensities[i];
    const double p_mu = cfg.source.probs[i];
    const double rounds_z = n * sel_z * p_mu;
    obs.m_z[i] = draw(rounds_z, channel::gain(cfg.channel, mu));
    err_z += draw(rounds_z,
                  channel::error_rate(cfg.channel, mu, channel::Basis::z));
    if (cfg.protocol == Protocol::bb84) {
      obs.e_x[i] =
          draw(n * (1.0 - cfg.p_z_alice) * p_x_bob * p_mu,
               channel::error_rate(cfg.channel, mu, channel::Basis::x));
    } else {
      for (int a = 0; a < 3; ++a) {
        const double p_a = setting_prob(cfg, a);
        for (int b = 0; b < 2; ++b) {
          obs.m_lt[i][static_cast<std::size_t>(a)][static_cast<std::size_t>(
              b)] = draw(n * p_mu * p_a * p_x_bob,
                         channel::outcome_prob(cfg.channel, kLtStates[
                             static_cast<std::size_t>(a)], mu,
                             channel::Basis::x, b));
        }
      }
    }
    obs.m_z_total += obs.m_z[i];
  }
  obs.e_z_rate = obs.m_z_total > 0.0 ? std::min(err_z / obs.m_z_total, 1.0)
                                     : 0.0;
  return obs;
}

}  // namespace qkd
