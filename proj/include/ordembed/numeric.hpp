#pragma once

#include <cmath>

namespace ordembed {

/// Neumaier compensated summation.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      compensation_ += (sum_ - t) + x;
    } else {
      compensation_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  CompensatedSum& operator+=(double x) {
    add(x);
    return *this;
  }
  double value() const { return sum_ + compensation_; }

 private:
  double sum_ = 0;
  double compensation_ = 0;
};

/// ln(x!) via log-gamma; exact enough for the counting calculators.
inline double log_factorial(double x) { return std::lgamma(x + 1.0); }

/// ln C(x, 2) for real x >= 2.
inline double log_choose2(double x) { return std::log(x) + std::log(x - 1.0) - std::log(2.0); }

}  // namespace ordembed
