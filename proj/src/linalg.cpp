#include "qclock/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <unsupported/Eigen/MatrixFunctions>

#include "qclock/errors.hpp"

namespace qclock {

void require_finite(const Operator& a, const char* what) {
    if (!a.allFinite()) {
        throw InvalidInput(std::string(what) + ": non-finite entries");
    }
}

void require_square(const Operator& a, const char* what) {
    if (a.rows() != a.cols() || a.rows() == 0) {
        throw InvalidInput(std::string(what) + ": expected a non-empty square matrix");
    }
}

void require_normalized(const StateVector& psi, const char* what, double tol) {
    if (!psi.allFinite() || std::abs(psi.norm() - 1.0) > tol) {
        throw InvalidInput(std::string(what) + ": state vector is not normalized");
    }
}

bool is_hermitian(const Operator& a, double tol) {
    if (a.rows() != a.cols()) return false;
    return (a - a.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

void require_density_matrix(const DensityMatrix& rho, const char* what) {
    require_square(rho, what);
    require_finite(rho, what);
    if (!is_hermitian(rho, 1e-10)) {
        throw InvalidInput(std::string(what) + ": density matrix is not Hermitian");
    }
    Eigen::SelfAdjointEigenSolver<Operator> es(rho, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -1e-10) {
        throw InvalidInput(std::string(what) + ": density matrix has a negative eigenvalue");
    }
    double tr = rho.trace().real();
    if (tr <= 0.0 || tr > 1.0 + 1e-10) {
        throw InvalidInput(std::string(what) + ": trace outside (0, 1]");
    }
}

Operator matrix_exp(const Operator& a, double t) {
    require_square(a, "matrix_exp");
    require_finite(a, "matrix_exp");
    if (!std::isfinite(t) || t < 0.0) {
        throw InvalidInput("matrix_exp: t must be finite and non-negative");
    }
    if (t == 0.0) return Operator::Identity(a.rows(), a.cols());
    Operator ta = t * a;
    return ta.exp();
}

std::vector<Complex> spectrum(const Operator& a) {
    require_square(a, "spectrum");
    require_finite(a, "spectrum");
    Eigen::ComplexEigenSolver<Operator> es(a, false);
    if (es.info() != Eigen::Success) {
        throw InvalidInput("spectrum: eigenvalue iteration did not converge");
    }
    std::vector<Complex> ev(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
    std::sort(ev.begin(), ev.end(), [](Complex x, Complex y) {
        if (x.real() != y.real()) return x.real() < y.real();
        return x.imag() < y.imag();
    });
    return ev;
}

SylvesterSolver::SylvesterSolver(const Operator& a) : a_(a) {
    require_square(a, "sylvester_solve");
    require_finite(a, "sylvester_solve");
    Eigen::ComplexSchur<Operator> schur(a);
    if (schur.info() != Eigen::Success) {
        throw InvalidInput("sylvester_solve: Schur iteration did not converge");
    }
    u_ = schur.matrixU();
    t_ = schur.matrixT();

    const Eigen::Index n = a.rows();
    min_gap_ = std::numeric_limits<double>::infinity();
    Eigen::Index bi = 0, bk = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index k = 0; k < n; ++k) {
            double g = std::abs(t_(i, i) + std::conj(t_(k, k)));
            if (g < min_gap_) {
                min_gap_ = g;
                bi = i;
                bk = k;
            }
        }
    }
    if (min_gap_ < 1e-12) {
        std::ostringstream msg;
        msg << "sylvester_solve: spectra of A and -A^dagger intersect (lambda = " << t_(bi, bi)
            << ", mu = " << t_(bk, bk) << ", |lambda + conj(mu)| = " << min_gap_ << ")";
        throw SingularGenerator(msg.str());
    }
}

Operator SylvesterSolver::solve(const Operator& c) const {
    const Eigen::Index n = a_.rows();
    if (c.rows() != n || c.cols() != n) {
        throw InvalidInput("sylvester_solve: right-hand side has the wrong shape");
    }
    require_finite(c, "sylvester_solve");

    // T Y + Y T^* = F with T upper triangular; T^* is lower triangular, so
    // column k couples only to columns j > k.
    Operator f = u_.adjoint() * c * u_;
    Operator y(n, n);
    Operator shifted = t_;
    for (Eigen::Index k = n - 1; k >= 0; --k) {
        StateVector rhs = f.col(k);
        for (Eigen::Index j = k + 1; j < n; ++j) {
            rhs -= std::conj(t_(k, j)) * y.col(j);
        }
        shifted.diagonal() = t_.diagonal().array() + std::conj(t_(k, k));
        y.col(k) = shifted.triangularView<Eigen::Upper>().solve(rhs);
    }
    Operator x = u_ * y * u_.adjoint();

    const double cn = c.norm();
    double res = (a_ * x + x * a_.adjoint() - c).norm();
    if (cn > 0.0 && res > 1e-10 * cn) {
        Operator xd = solve_dense(c);
        double resd = (a_ * xd + xd * a_.adjoint() - c).norm();
        if (resd < res) return xd;
    }
    return x;
}

Operator SylvesterSolver::solve_dense(const Operator& c) const {
    // column-major vec: vec(AX) = (I kron A) vec X, vec(X A^dagger) = (conj(A) kron I) vec X
    const Eigen::Index n = a_.rows();
    Operator big = Operator::Zero(n * n, n * n);
    for (Eigen::Index j = 0; j < n; ++j) {
        big.block(j * n, j * n, n, n) += a_;
        for (Eigen::Index l = 0; l < n; ++l) {
            big.block(j * n, l * n, n, n).diagonal().array() += std::conj(a_(j, l));
        }
    }
    StateVector rhs = Eigen::Map<const StateVector>(c.data(), n * n);
    StateVector sol = big.fullPivLu().solve(rhs);
    return Eigen::Map<const Operator>(sol.data(), n, n);
}

Operator sylvester_solve(const Operator& a, const Operator& c) {
    return SylvesterSolver(a).solve(c);
}

}  // namespace qclock
