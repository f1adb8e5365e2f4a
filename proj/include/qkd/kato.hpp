#pragma once

namespace qkd::kato {

// One-sided concentration bounds for a sequence of N (possibly dependent)
// Bernoulli variables, relating the realized count L_N to the sum of
// conditional success probabilities S_N. Both directions are provided:
//   count_lower / count_upper : bound L_N from a bound on S_N
//   sum_lower   / sum_upper   : bound S_N from the observed L_N
// Each bound holds except with probability epsilon. The free parameters
// (a, b) trade deviation against the tail exponent
//   log Pr[fail] <= -2(b^2 - a^2) / (1 +- 4a/(3 sqrt(N)))^2
// and the optimal_ab_* functions return the closed-form optimum for a given
// prediction of the bound's input, falling back to the Hoeffding-style
// a = 0, b = sqrt(ln(1/eps)/2) when the closed form degenerates.

struct BoundQuery {
  double n = 0;           // number of rounds N (integer-valued, held as double)
  double epsilon = 0;     // failure probability, in (0,1)
  double prediction = 0;  // forecast of the bound's input argument, in [0,N]
};

struct Params {
  double a = 0;
  double b = 0;
};

// Tail exponents (log of the failure-probability bound). A valid (a,b) pair
// keeps the matching exponent at or below log(epsilon).
double upper_tail_log_prob(double n, double a, double b);
double lower_tail_log_prob(double n, double a, double b);

Params hoeffding_fallback(const BoundQuery& q);

Params optimal_ab_count_lower(const BoundQuery& q);
Params optimal_ab_count_upper(const BoundQuery& q);
Params optimal_ab_sum_lower(const BoundQuery& q);
Params optimal_ab_sum_upper(const BoundQuery& q);

// s: lower/upper bound target for the probability sum S_N, in [0,N].
double count_lower(const BoundQuery& q, double s);
double count_upper(const BoundQuery& q, double s);
// count: observed L_N, in [0,N].
double sum_lower(const BoundQuery& q, double count);
double sum_upper(const BoundQuery& q, double count);

}  // namespace qkd::kato
