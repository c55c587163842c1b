#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "errors.hpp"

namespace gldp {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Dense square matrix of doubles, row-major.
class Matrix {
public:
    Matrix() : n_(0) {}
    explicit Matrix(std::size_t n, double fill = 0.0) : n_(n), d_(n * n, fill) {}

    std::size_t size() const { return n_; }
    double& operator()(std::size_t i, std::size_t j) { return d_[i * n_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return d_[i * n_ + j]; }
    const std::vector<double>& data() const { return d_; }
    std::vector<double>& data() { return d_; }

    bool symmetric(double tol) const {
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t j = i + 1; j < n_; ++j)
                if (std::fabs(d_[i * n_ + j] - d_[j * n_ + i]) > tol) return false;
        return true;
    }

    void symmetrize() {
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t j = i + 1; j < n_; ++j) {
                double v = 0.5 * (d_[i * n_ + j] + d_[j * n_ + i]);
                d_[i * n_ + j] = v;
                d_[j * n_ + i] = v;
            }
    }

private:
    std::size_t n_;
    std::vector<double> d_;
};

// Extended-real addition saturating at +inf.  Operands must not be NaN.
inline double ext_add(double a, double b) {
    if (std::isinf(a) || std::isinf(b)) return kInf;
    return a + b;
}

// Kahan-Neumaier compensated accumulator.
struct Kahan {
    double sum = 0.0;
    double c = 0.0;
    void add(double x) {
        double t = sum + x;
        if (std::fabs(sum) >= std::fabs(x))
            c += (sum - t) + x;
        else
            c += (x - t) + sum;
        sum = t;
    }
    double value() const { return sum + c; }
};

inline double vec_sum(const std::vector<double>& v) {
    Kahan k;
    for (double x : v) k.add(x);
    return k.value();
}

// Regularized upper incomplete gamma Q(a, x); used for chi-square p-values.
double gamma_q(double a, double x);

// p-value of a chi-square statistic with df degrees of freedom.
inline double chi2_pvalue(double stat, double df) { return gamma_q(df / 2.0, stat / 2.0); }

} // namespace gldp
