#pragma once

#include <functional>
#include <vector>

#include "qclock/linalg.hpp"

namespace qclock {

// d parabolic wells on a ring of radius 1 (mass 1), optionally with the
// degeneracy-lifting potential shifted so its lattice values sit on the well
// centres.
struct RingPotential {
    int d = 2;
    double omega_well = 3000.0;
    bool lifting = true;
    double lifting_scale = 1.0;

    double lattice_constant() const;
    double operator()(double x) const;
};

struct RingSpectrum {
    int grid = 0;
    std::vector<double> x;            // grid points j * 2 pi / grid
    std::vector<double> eigenvalues;  // ascending
    Eigen::MatrixXd eigenfunctions;   // column n sampled on x, int |psi|^2 dx = 1
    double convergence = 0.0;         // max relative change of the checked levels when halving the grid
};

double well_potential(int d, double omega_well, double x);
// V_q = 1 / (exp(2 pi i q / d) - 1), q = 1..d-1
std::vector<Complex> degeneracy_lifting_coefficients(int d);
// (d - 1) + sum_q -cos(qx) + sin(2 pi q/d) / (1 - cos(2 pi q/d)) sin(qx)
double lifting_potential(int d, double x);
// (d - 1) + sum_q V_q e^{iqx} + conj(V_q) e^{-iqx}, kept complex
Complex lifting_potential_from_coefficients(int d, double x);

// Periodic Fourier-grid Hamiltonian -1/2 d^2/dx^2 + potential on [0, 2 pi).
// The lowest `levels` eigenvalues are compared against a grid of half the
// size; the lowest `checked` must agree to 1e-6 relative or GridRefinementError
// is thrown.
RingSpectrum solve_ring(const std::function<double(double)>& potential, int grid, int levels, int checked);
RingSpectrum solve_ring(const RingPotential& potential, int grid);

// f(x + shift) by Fourier interpolation on the periodic grid.
Eigen::VectorXd translate(const Eigen::VectorXd& f, double shift);
Eigen::VectorXcd translate(const Eigen::VectorXcd& f, double shift);

struct HarmonicityReport {
    std::vector<double> spacings;
    double max_deviation = 0.0;  // max |s_k / s_0 - 1|
    double gap_ratio = 0.0;      // (E_d - E_{d-1}) / (E_{d-1} - E_0)
};

HarmonicityReport harmonicity_check(const RingSpectrum& spectrum, int d);

// error_n = || |psi_n| - translate(|psi_0|, n a) ||_2, n = 0..d-1
std::vector<double> shift_equality_errors(const RingSpectrum& spectrum, int d);

struct DipoleSymmetryReport {
    int m = 0;
    std::vector<double> magnitudes;  // |O_{n,m}|
    std::vector<double> phases;      // arg O_{n,m} after gauge fixing
    double magnitude_spread = 0.0;
    double phase_deviation = 0.0;
    bool dipole_forbidden = false;
};

// O_{n,m} = int e^{imx} psi_n(x) chi(x) dx with psi_n rephased so O_{n,0} > 0.
// chi defaults to the uniform weight 1 / sqrt(2 pi).
DipoleSymmetryReport flux_overlap_check(const RingSpectrum& spectrum, int d, int m,
                                        const std::function<double(double)>& chi = {});

// Eigenvalues of the translation-by-a operator restricted to the lowest d states.
std::vector<Complex> restricted_translation_eigenvalues(const RingSpectrum& spectrum, int d);

}  // namespace qclock
