#pragma once

#include <cmath>

namespace gmc::detail {

/// Neumaier-compensated running sum.
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

    double value() const { return sum_ + compensation_; }

private:
    double sum_ = 0.0;
    double compensation_ = 0.0;
};

/// |x|^p with exact fast paths for the common integer orders.
inline double abs_pow(double x, double p) {
    const double a = std::abs(x);
    if (p == 1.0) {
        return a;
    }
    if (p == 2.0) {
        return a * a;
    }
    if (a == 0.0) {
        return 0.0;
    }
    return std::pow(a, p);
}

}  // namespace gmc::detail
