#pragma once

#include <cmath>

namespace dyadic {

/// Neumaier-compensated running sum.
class CompensatedSum {
 public:
  void add(double x) {
    double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  CompensatedSum& operator+=(double x) {
    add(x);
    return *this;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

/// x^q with the integer cases q = 0, 1, 2 kept exact.
inline double pow_fast(double x, double q) {
  if (q == 1.0) return x;
  if (q == 2.0) return x * x;
  if (q == 0.0) return 1.0;
  return std::pow(x, q);
}

}  // namespace dyadic
