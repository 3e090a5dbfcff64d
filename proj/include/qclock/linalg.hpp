#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace qclock {

using Complex = std::complex<double>;
using Operator = Eigen::MatrixXcd;
using StateVector = Eigen::VectorXcd;
using DensityMatrix = Eigen::MatrixXcd;

// Input validation shared by all modules. Each throws InvalidInput with `what` in the message.
void require_finite(const Operator& a, const char* what);
void require_square(const Operator& a, const char* what);
void require_normalized(const StateVector& psi, const char* what, double tol = 1e-12);
void require_density_matrix(const DensityMatrix& rho, const char* what);

bool is_hermitian(const Operator& a, double tol = 1e-10);

// exp(tA), scaling and squaring with Pade approximants.
Operator matrix_exp(const Operator& a, double t);

// Eigenvalues sorted by real part, then imaginary part.
std::vector<Complex> spectrum(const Operator& a);

// Solves A X + X A^dagger = C. The complex Schur form of A is computed once
// and reused across right-hand sides.
class SylvesterSolver {
public:
    explicit SylvesterSolver(const Operator& a);

    Operator solve(const Operator& c) const;

    Eigen::Index dim() const { return a_.rows(); }
    // min |lambda_i + conj(lambda_k)| over eigenvalue pairs of A
    double min_gap() const { return min_gap_; }

private:
    Operator solve_dense(const Operator& c) const;

    Operator a_;
    Operator u_;
    Operator t_;
    double min_gap_ = 0.0;
};

Operator sylvester_solve(const Operator& a, const Operator& c);

}  // namespace qclock
