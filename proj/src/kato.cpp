#include "qkd/kato.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace qkd::kato {

namespace {

void check_query(const BoundQuery& q) {
  if (!(q.n >= 1.0) || !std::isfinite(q.n))
    throw std::invalid_argument("kato: trial count must be a positive integer");
  if (!(q.epsilon > 0.0) || !(q.epsilon < 1.0))
    throw std::invalid_argument("kato: epsilon must lie in (0,1)");
  if (!(q.prediction >= -1e-9) || !(q.prediction <= q.n * (1.0 + 1e-12) + 1e-9) ||
      !std::isfinite(q.prediction))
    throw std::invalid_argument("kato: prediction must lie in [0,N]");
}

double clamp(double x, double lo, double hi) {
  return x < lo ? lo : (x > hi ? hi : x);
}

double checked_arg(const BoundQuery& q, double v, const char* what) {
  if (!std::isfinite(v) || v < -1e-9 * (q.n > 1 ? q.n : 1.0) ||
      v > q.n * (1.0 + 1e-12) + 1e-9)
    throw std::invalid_argument(std::string("kato: ") + what +
                                " must lie in [0,N]");
  return clamp(v, 0.0, q.n);
}

// The closed forms degenerate at extreme predictions: the discriminants go
// negative, or |a| reaches 3 sqrt(N)/4 which flips the sign of the
// N/(sqrt(N) +- 2a) prefactor. Any (a,b) with b >= |a| satisfying the tail
// constraint is valid, so those cases fall back to a = 0.
bool usable(const BoundQuery& q, const Params& p) {
  if (!std::isfinite(p.a) || !std::isfinite(p.b)) return false;
  if (p.b < std::fabs(p.a) * (1.0 - 1e-12)) return false;
  if (std::fabs(p.a) >= 0.5 * std::sqrt(q.n) * (1.0 - 1e-9)) return false;
  return true;
}

Params closed_count_lower(const BoundQuery& q) {
  const double n = q.n, s = clamp(q.prediction, 0.0, q.n);
  const double l = std::log(q.epsilon), r = std::sqrt(n);
  // The (n - 2s) factor carries a sign and must stay outside the root;
  // folding its square inside is only valid below s = n/2. Mirrors the
  // count_upper optimum under s -> n - s, a -> -a.
  const double inner = n * l * (n * l - 18 * s * (n - s));
  const double num =
      3 * r * (-9 * (3 * n * n - 8 * n * s + 8 * s * s) * l +
               9 * (n - 2 * s) * std::sqrt(inner) - 4 * n * l * l);
  const double den =
      4 * (36 * (n * n - 2 * n * s + 2 * s * s) * l + 81 * n * s * (n - s) +
           4 * n * l * l);
  Params p;
  p.a = num / den;
  const double t = 4 * p.a + 3 * r;
  p.b = std::sqrt(9 * p.a * p.a - t * t * l / (2 * n)) / 3.0;
  return p;
}

Params closed_count_upper(const BoundQuery& q) {
  const double n = q.n, s = clamp(q.prediction, 0.0, q.n);
  const double l = std::log(q.epsilon), r = std::sqrt(n);
  const double inner = n * l * (n * l + 18 * s * (s - n));
  const double num =
      3 * r * (9 * (3 * n * n - 8 * n * s + 8 * s * s) * l +
               9 * (n - 2 * s) * std::sqrt(inner) + 4 * n * l * l);
  const double den =
      4 * (36 * l * (n * n - 2 * n * s + 2 * s * s) + 4 * n * l * l +
           81 * n * s * (n - s));
  Params p;
  p.a = num / den;
  p.b = std::sqrt(18 * p.a * p.a * n -
                  (16 * p.a * p.a - 24 * p.a * r + 9 * n) * l) /
        (3 * std::sqrt(2 * n));
  return p;
}

// Shared core of the two sum-bound parameter sets; only the sign pattern of
// the numerator and of the 24 a sqrt(N) term in b differ.
Params closed_sum(const BoundQuery& q, bool upper) {
  const double n = q.n, lam = clamp(q.prediction, 0.0, q.n);
  const double l = std::log(q.epsilon), r = std::sqrt(n);
  const double spread = 9 * lam * (n - lam) - 2 * n * l;
  const double inner = -n * n * l * spread;
  const double sgn = upper ? 1.0 : -1.0;
  const double num =
      3 * (sgn * 72 * r * lam * (n - lam) * l - sgn * 16 * n * r * l * l +
           9 * std::sqrt(2.0) * (n - 2 * lam) * std::sqrt(inner));
  const double den = 4 * (9 * n - 8 * l) * spread;
  Params p;
  p.a = num / den;
  const double cross = upper ? 24 * p.a * r : -24 * p.a * r;
  p.b = std::sqrt(18 * p.a * p.a * n - (16 * p.a * p.a + cross + 9 * n) * l) /
        (3 * std::sqrt(2 * n));
  return p;
}

}  // namespace

double upper_tail_log_prob(double n, double a, double b) {
  const double d = 1.0 + 4 * a / (3 * std::sqrt(n));
  return -2 * (b * b - a * a) / (d * d);
}

double lower_tail_log_prob(double n, double a, double b) {
  const double d = 1.0 - 4 * a / (3 * std::sqrt(n));
  return -2 * (b * b - a * a) / (d * d);
}

Params hoeffding_fallback(const BoundQuery& q) {
  check_query(q);
  return {0.0, std::sqrt(std::log(1.0 / q.epsilon) / 2.0)};
}

Params optimal_ab_count_lower(const BoundQuery& q) {
  check_query(q);
  Params p = closed_count_lower(q);
  return usable(q, p) ? p : hoeffding_fallback(q);
}

Params optimal_ab_count_upper(const BoundQuery& q) {
  check_query(q);
  Params p = closed_count_upper(q);
  return usable(q, p) ? p : hoeffding_fallback(q);
}

Params optimal_ab_sum_lower(const BoundQuery& q) {
  check_query(q);
  Params p = closed_sum(q, false);
  return usable(q, p) ? p : hoeffding_fallback(q);
}

Params optimal_ab_sum_upper(const BoundQuery& q) {
  check_query(q);
  Params p = closed_sum(q, true);
  return usable(q, p) ? p : hoeffding_fallback(q);
}

double count_lower(const BoundQuery& q, double s) {
  check_query(q);
  s = checked_arg(q, s, "sum target");
  const Params p = optimal_ab_count_lower(q);
  const double r = std::sqrt(q.n);
  const double v = q.n / (r + 2 * p.a) * (s / r + p.a - p.b);
  return clamp(v, 0.0, q.n);
}

double count_upper(const BoundQuery& q, double s) {
  check_query(q);
  s = checked_arg(q, s, "sum target");
  const Params p = optimal_ab_count_upper(q);
  const double r = std::sqrt(q.n);
  const double v = q.n / (r - 2 * p.a) * (s / r - p.a + p.b);
  return clamp(v, 0.0, q.n);
}

double sum_lower(const BoundQuery& q, double count) {
  check_query(q);
  count = checked_arg(q, count, "count");
  const Params p = optimal_ab_sum_lower(q);
  const double dev = (p.b + p.a * (2 * count / q.n - 1.0)) * std::sqrt(q.n);
  return clamp(count - dev, 0.0, q.n);
}

double sum_upper(const BoundQuery& q, double count) {
  check_query(q);
  count = checked_arg(q, count, "count");
  const Params p = optimal_ab_sum_upper(q);
  const double dev = (p.b + p.a * (2 * count / q.n - 1.0)) * std::sqrt(q.n);
  return clamp(count + dev, 0.0, q.n);
}

}  // namespace qkd::kato
