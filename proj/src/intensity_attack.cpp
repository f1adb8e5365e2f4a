#include "qkd/intensity_attack.hpp"

#include <cmath>
#include <stdexcept>

#include "qkd/cs_bounds.hpp"

namespace qkd {
namespace {

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(what);
}

void check_attack_args(const ExperimentConfig& cfg, double kappa, int n_it) {
  validate(cfg);
  require(cfg.i_max >= 0.0, "intensity attack: cfg.i_max must be set");
  require(std::isfinite(kappa) && kappa >= 1.0,
          "intensity attack: kappa must be >= 1");
  require(n_it >= 1, "intensity attack: n_it must be >= 1");
}

cs::LeakModel leak_model(const ExperimentConfig& cfg) {
  return {cfg.i_max, cfg.source.intensities, cfg.source.probs};
}

}  // namespace

std::vector<double> subinterval_scales(double kappa, int n_it) {
  require(std::isfinite(kappa) && kappa >= 1.0 && n_it >= 1,
          "subinterval_scales: bad arguments");
  std::vector<double> scales(static_cast<std::size_t>(n_it));
  for (int k = 0; k < n_it; ++k)
    scales[static_cast<std::size_t>(k)] = 1.0 + k * (kappa - 1.0) / n_it;
  return scales;
}

std::vector<double> subinterval_kappas(double kappa, int n_it) {
  require(std::isfinite(kappa) && kappa >= 1.0 && n_it >= 1,
          "subinterval_kappas: bad arguments");
  std::vector<double> kappas(static_cast<std::size_t>(n_it));
  for (int k = 0; k < n_it; ++k)
    kappas[static_cast<std::size_t>(k)] =
        (n_it + (k + 1) * (kappa - 1.0)) / (n_it + k * (kappa - 1.0));
  return kappas;
}

KeyRateResult rate_round_dependent(const ExperimentConfig& cfg, double kappa) {
  check_attack_args(cfg, kappa, 1);
  ExperimentConfig analysis = cfg;
  analysis.delta = cs::overlap_intensity(leak_model(cfg), 1.0, kappa);
  analysis.i_max = -1.0;
  return protocol_rate(analysis, expected_statistics(cfg));
}

KeyRateResult rate_worst_case_subintervals(const ExperimentConfig& cfg,
                                           double kappa, int n_it,
                                           bool resimulate, Exec exec) {
  check_attack_args(cfg, kappa, n_it);
  const std::vector<double> scales = subinterval_scales(kappa, n_it);
  const std::vector<double> kappas = subinterval_kappas(kappa, n_it);
  const ObservedStatistics nominal = expected_statistics(cfg);

  std::vector<KeyRateResult> slices(static_cast<std::size_t>(n_it));
  for_each_index(exec, static_cast<std::size_t>(n_it), [&](std::size_t k) {
    ExperimentConfig analysis = cfg;
    for (double& mu : analysis.source.intensities) mu *= scales[k];
    analysis.delta =
        cs::overlap_intensity(leak_model(cfg), scales[k], kappas[k]);
    analysis.i_max = -1.0;
    slices[k] = resimulate ? protocol_rate(analysis)
                           : protocol_rate(analysis, nominal);
  });

  std::size_t worst = 0;
  for (std::size_t k = 1; k < slices.size(); ++k)
    if (slices[k].key_length < slices[worst].key_length) worst = k;
  return slices[worst];
}

}  // namespace qkd
