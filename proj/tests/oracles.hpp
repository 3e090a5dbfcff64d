#pragma once

#include <cmath>
#include <numbers>

#include "qclock/linalg.hpp"

namespace oracle {

using qclock::Complex;
using qclock::Operator;

// exp(A) by a plain Taylor series after scaling down by 2^s.
inline Operator taylor_exp(const Operator& a) {
    int s = 0;
    double n = a.cwiseAbs().rowwise().sum().maxCoeff();
    while (n > 0.5) {
        n /= 2.0;
        ++s;
    }
    const Operator b = a / std::pow(2.0, s);
    Operator term = Operator::Identity(a.rows(), a.cols());
    Operator sum = term;
    for (int k = 1; k < 40; ++k) {
        term = term * b / static_cast<double>(k);
        sum += term;
    }
    for (int i = 0; i < s; ++i) sum = sum * sum;
    return sum;
}

// Solves A X + X A^dagger = C by assembling the map column by column on the
// matrix-unit basis.
inline Operator brute_sylvester(const Operator& a, const Operator& c) {
    const Eigen::Index n = a.rows();
    Operator big(n * n, n * n);
    for (Eigen::Index j = 0; j < n; ++j) {
        for (Eigen::Index i = 0; i < n; ++i) {
            Operator e = Operator::Zero(n, n);
            e(i, j) = 1.0;
            const Operator img = a * e + e * a.adjoint();
            for (Eigen::Index q = 0; q < n; ++q) {
                for (Eigen::Index p = 0; p < n; ++p) big(p + q * n, i + j * n) = img(p, q);
            }
        }
    }
    Eigen::VectorXcd rhs(n * n);
    for (Eigen::Index q = 0; q < n; ++q) {
        for (Eigen::Index p = 0; p < n; ++p) rhs(p + q * n) = c(p, q);
    }
    const Eigen::VectorXcd x = big.partialPivLu().solve(rhs);
    Operator out(n, n);
    for (Eigen::Index q = 0; q < n; ++q) {
        for (Eigen::Index p = 0; p < n; ++p) out(p, q) = x(p + q * n);
    }
    return out;
}

// Composite Simpson rule on [a, b] with n (even) panels.
template <class F>
double simpson(F&& f, double a, double b, int n) {
    const double h = (b - a) / n;
    double s = f(a) + f(b);
    for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
    return s * h / 3.0;
}

}  // namespace oracle
