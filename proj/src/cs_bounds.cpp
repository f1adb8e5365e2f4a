#include "qkd/cs_bounds.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace qkd::cs {

namespace {

double checked_unit(double x, const char* what) {
  if (!(x >= -1e-12) || !(x <= 1.0 + 1e-12) || !std::isfinite(x))
    throw std::invalid_argument(std::string("cs: ") + what +
                                " must lie in [0,1]");
  return x < 0.0 ? 0.0 : (x > 1.0 ? 1.0 : x);
}

double g_core(double delta, double p, double sign) {
  delta = checked_unit(delta, "delta");
  p = checked_unit(p, "p");
  const double q = 1.0 - delta * delta;
  double rad = q * p * (1.0 - p);
  if (rad < 0.0) rad = 0.0;
  return p + q * (1.0 - 2.0 * p) + sign * 2.0 * delta * std::sqrt(rad);
}

}  // namespace

double g_plus(double delta, double p) { return g_core(delta, p, 1.0); }
double g_minus(double delta, double p) { return g_core(delta, p, -1.0); }

double upper(double delta, double p) {
  delta = checked_unit(delta, "delta");
  p = checked_unit(p, "p");
  if (p >= delta * delta) return 1.0;
  const double v = g_plus(delta, p);
  return v < 0.0 ? 0.0 : (v > 1.0 ? 1.0 : v);
}

double lower(double delta, double p) {
  delta = checked_unit(delta, "delta");
  p = checked_unit(p, "p");
  if (p <= 1.0 - delta * delta) return 0.0;
  const double v = g_minus(delta, p);
  return v < 0.0 ? 0.0 : (v > 1.0 ? 1.0 : v);
}

void validate(const LeakModel& m) {
  if (m.i_max < 0.0 || !std::isfinite(m.i_max))
    throw std::invalid_argument("cs: i_max must be >= 0");
  if (m.intensities.size() != m.probs.size() || m.intensities.empty())
    throw std::invalid_argument("cs: intensity/probability lists must match");
  double sum = 0.0;
  for (std::size_t i = 0; i < m.intensities.size(); ++i) {
    if (m.intensities[i] < 0.0)
      throw std::invalid_argument("cs: intensities must be >= 0");
    if (m.probs[i] <= 0.0)
      throw std::invalid_argument("cs: intensity probabilities must be > 0");
    sum += m.probs[i];
  }
  if (std::fabs(sum - 1.0) > 1e-12)
    throw std::invalid_argument("cs: intensity probabilities must sum to 1");
}

double overlap_coherent(const LeakModel& m) {
  validate(m);
  return std::exp(-m.i_max / 2.0);
}

double overlap_intensity(const LeakModel& m, double mu_scale, double kappa) {
  validate(m);
  if (!(kappa >= 1.0))
    throw std::invalid_argument("cs: kappa must be >= 1");
  if (!(mu_scale > 0.0))
    throw std::invalid_argument("cs: mu_scale must be > 0");
  // At kappa == 1 the spread term is exactly zero and the sum collapses to
  // exp(-i_max/2) * sum(p_mu); return the collapsed value directly so the
  // no-rescaling case is bit-identical to overlap_coherent.
  if (kappa == 1.0) return std::exp(-m.i_max / 2.0);
  const double spread = 1.0 + kappa - 2.0 * std::sqrt(kappa);
  double delta = 0.0;
  for (std::size_t i = 0; i < m.intensities.size(); ++i) {
    const double mu = m.intensities[i] * mu_scale;
    delta += m.probs[i] * std::exp(-(m.i_max + spread * mu) / 2.0);
  }
  return delta > 1.0 ? 1.0 : delta;
}

}  // namespace qkd::cs
