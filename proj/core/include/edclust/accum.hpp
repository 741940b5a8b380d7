#pragma once

#include <cmath>

namespace edclust {

// Neumaier-compensated accumulator.  The result depends on the order in
// which terms arrive only at the level of the compensation term, which keeps
// totals stable under permutations to ~2 ulp of the true sum.
class NeumaierSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }

  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

}  // namespace edclust
