#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace qkd::lp {

enum class Sense { minimize, maximize };

// Two-sided row constraint lo <= coeff . x <= hi.
struct Row {
  std::vector<double> coeff;
  double lo = 0.0;
  double hi = 0.0;
};

// Dense LP over box-bounded variables (default box [0,1] per variable).
struct Problem {
  Sense sense = Sense::minimize;
  std::vector<double> objective;
  std::vector<Row> rows;
  std::vector<double> var_lo;  // empty means all 0
  std::vector<double> var_hi;  // empty means all 1
};

struct Solution {
  double value = 0.0;
  std::vector<double> x;
};

struct Infeasible : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void validate(const Problem& p);

// Two-phase dense simplex with Bland's anti-cycling rule. The box bounds make
// every problem bounded, so an unbounded ray is reported as a logic error.
Solution solve(const Problem& p);

}  // namespace qkd::lp
