#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace pairquad {

// Neumaier's variant of Kahan summation. Accumulation order is part of the
// contract: summing the same values in the same order gives bitwise-equal
// results, which is what makes parallel reductions reproducible here (terms
// are written to an indexed buffer, then reduced in index order).
class NeumaierSum {
  public:
    void add(double x) {
        double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }

    double value() const { return sum_ + comp_; }

  private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

class ComplexNeumaierSum {
  public:
    void add(std::complex<double> z) {
        re_.add(z.real());
        im_.add(z.imag());
    }

    std::complex<double> value() const { return {re_.value(), im_.value()}; }

  private:
    NeumaierSum re_;
    NeumaierSum im_;
};

inline double compensated_sum(const std::vector<double>& xs) {
    NeumaierSum s;
    for (double x : xs) s.add(x);
    return s.value();
}

inline std::complex<double> compensated_sum(const std::vector<std::complex<double>>& xs) {
    ComplexNeumaierSum s;
    for (auto x : xs) s.add(x);
    return s.value();
}

}  // namespace pairquad
