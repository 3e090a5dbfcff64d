#include "qclock/ring.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <lapacke.h>
#include <unsupported/Eigen/FFT>

#include "qclock/errors.hpp"

namespace qclock {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap_angle(double a) {
    a = std::fmod(a + std::numbers::pi, kTwoPi);
    if (a < 0.0) a += kTwoPi;
    return a - std::numbers::pi;
}

// Lowest `levels` eigenpairs of the periodic Fourier-grid Hamiltonian.
void diagonalize(const std::function<double(double)>& potential, int grid, int levels, std::vector<double>& x,
                 std::vector<double>& w, Eigen::MatrixXd& z) {
    const double dx = kTwoPi / grid;
    // circulant kinetic matrix t(r) = (1/N) sum_m k_m^2 / 2 cos(2 pi m r / N)
    std::vector<double> t(grid, 0.0);
    for (int r = 0; r < grid; ++r) {
        double s = 0.0;
        for (int m = 0; m < grid; ++m) {
            const int k = m <= grid / 2 ? m : m - grid;
            const long phase = (static_cast<long>(m) * r) % grid;
            s += 0.5 * k * k * std::cos(kTwoPi * static_cast<double>(phase) / grid);
        }
        t[r] = s / grid;
    }
    Eigen::MatrixXd h(grid, grid);
    x.resize(grid);
    for (int j = 0; j < grid; ++j) x[j] = j * dx;
    for (int j = 0; j < grid; ++j) {
        for (int k = 0; k < grid; ++k) h(j, k) = t[(j - k + grid) % grid];
        const double v = potential(x[j]);
        if (!std::isfinite(v)) throw InvalidInput("solve_ring: potential is not finite");
        h(j, j) += v;
    }

    lapack_int found = 0;
    w.assign(grid, 0.0);
    z.resize(grid, levels);
    std::vector<lapack_int> support(2 * static_cast<std::size_t>(levels));
    const lapack_int info = LAPACKE_dsyevr(LAPACK_COL_MAJOR, 'V', 'I', 'U', grid, h.data(), grid, 0.0, 0.0, 1, levels,
                                           0.0, &found, w.data(), z.data(), grid, support.data());
    if (info != 0 || found != levels) {
        throw GridRefinementError("solve_ring: eigensolver failed (info " + std::to_string(info) + ")");
    }
    w.resize(levels);
    z /= std::sqrt(dx);
}

}  // namespace

double RingPotential::lattice_constant() const { return kTwoPi / d; }

double RingPotential::operator()(double x) const {
    double v = well_potential(d, omega_well, x);
    if (lifting && d >= 2) {
        const double a = lattice_constant();
        double y = x - 0.5 * a;
        if (y < 0.0) y += kTwoPi;
        v += lifting_scale * lifting_potential(d, y);
    }
    return v;
}

double well_potential(int d, double omega_well, double x) {
    if (d < 1) throw InvalidInput("well_potential: d must be >= 1");
    const double a = kTwoPi / d;
    const double y = x - std::floor(x / a) * a - 0.5 * a;
    return 0.5 * omega_well * omega_well * y * y;
}

std::vector<Complex> degeneracy_lifting_coefficients(int d) {
    if (d < 2) throw InvalidInput("degeneracy_lifting_coefficients: d must be >= 2");
    std::vector<Complex> v;
    for (int q = 1; q < d; ++q) {
        v.push_back(1.0 / (std::polar(1.0, kTwoPi * q / d) - 1.0));
    }
    return v;
}

double lifting_potential(int d, double x) {
    if (d < 2) throw InvalidInput("lifting_potential: d must be >= 2");
    double v = d - 1.0;
    for (int q = 1; q < d; ++q) {
        const double th = kTwoPi * q / d;
        v += -std::cos(q * x) + std::sin(th) / (1.0 - std::cos(th)) * std::sin(q * x);
    }
    return v;
}

Complex lifting_potential_from_coefficients(int d, double x) {
    const auto c = degeneracy_lifting_coefficients(d);
    Complex v = d - 1.0;
    for (int q = 1; q < d; ++q) {
        const Complex e = std::polar(1.0, q * x);
        v += c[q - 1] * e + std::conj(c[q - 1]) * std::conj(e);
    }
    return v;
}

RingSpectrum solve_ring(const std::function<double(double)>& potential, int grid, int levels, int checked) {
    if (grid < 256 || grid % 2 != 0) throw InvalidInput("solve_ring: grid must be even and >= 256");
    if (levels < 1 || levels > grid / 4) throw InvalidInput("solve_ring: bad level count");
    checked = std::clamp(checked, 1, levels);
    RingSpectrum s;
    s.grid = grid;
    diagonalize(potential, grid, levels, s.x, s.eigenvalues, s.eigenfunctions);

    std::vector<double> xc, wc;
    Eigen::MatrixXd zc;
    diagonalize(potential, grid / 2, checked, xc, wc, zc);
    for (int n = 0; n < checked; ++n) {
        const double rel = std::abs(s.eigenvalues[n] - wc[n]) / std::max(1.0, std::abs(s.eigenvalues[n]));
        s.convergence = std::max(s.convergence, rel);
    }
    if (s.convergence > 1e-6) {
        throw GridRefinementError("solve_ring: eigenvalues change by " + std::to_string(s.convergence) +
                                  " between grids " + std::to_string(grid / 2) + " and " + std::to_string(grid));
    }
    return s;
}

RingSpectrum solve_ring(const RingPotential& potential, int grid) {
    if (potential.d < 1) throw InvalidInput("solve_ring: d must be >= 1");
    if (!(potential.omega_well > 0.0)) throw InvalidInput("solve_ring: omega_well must be positive");
    const int d = potential.d;
    return solve_ring([&potential](double x) { return potential(x); }, grid, std::max(2 * d, d + 2), d);
}

Eigen::VectorXcd translate(const Eigen::VectorXcd& f, double shift) {
    const int n = static_cast<int>(f.size());
    Eigen::FFT<double> fft;
    std::vector<Complex> in(f.data(), f.data() + n), spec, out;
    fft.fwd(spec, in);
    for (int m = 0; m < n; ++m) {
        const int k = m <= n / 2 ? m : m - n;
        if (2 * m == n) {
            spec[m] *= std::cos(k * shift);
        } else {
            spec[m] *= std::polar(1.0, k * shift);
        }
    }
    fft.inv(out, spec);
    return Eigen::Map<Eigen::VectorXcd>(out.data(), n);
}

Eigen::VectorXd translate(const Eigen::VectorXd& f, double shift) {
    return translate(Eigen::VectorXcd(f.cast<Complex>()), shift).real();
}

HarmonicityReport harmonicity_check(const RingSpectrum& s, int d) {
    if (d < 2 || static_cast<int>(s.eigenvalues.size()) < d + 1) {
        throw InvalidInput("harmonicity_check: need d >= 2 and d + 1 eigenvalues");
    }
    HarmonicityReport r;
    for (int k = 0; k + 1 < d; ++k) r.spacings.push_back(s.eigenvalues[k + 1] - s.eigenvalues[k]);
    for (double sp : r.spacings) r.max_deviation = std::max(r.max_deviation, std::abs(sp / r.spacings[0] - 1.0));
    r.gap_ratio = (s.eigenvalues[d] - s.eigenvalues[d - 1]) / (s.eigenvalues[d - 1] - s.eigenvalues[0]);
    return r;
}

std::vector<double> shift_equality_errors(const RingSpectrum& s, int d) {
    if (d < 1 || s.eigenfunctions.cols() < d) throw InvalidInput("shift_equality_errors: need d eigenfunctions");
    const double dx = kTwoPi / s.grid;
    const double a = kTwoPi / d;
    const Eigen::VectorXd base = s.eigenfunctions.col(0).cwiseAbs();
    std::vector<double> err;
    for (int n = 0; n < d; ++n) {
        const Eigen::VectorXd shifted = n == 0 ? base : translate(base, n * a);
        err.push_back(std::sqrt(dx) * (s.eigenfunctions.col(n).cwiseAbs() - shifted).norm());
    }
    return err;
}

DipoleSymmetryReport flux_overlap_check(const RingSpectrum& s, int d, int m, const std::function<double(double)>& chi) {
    if (d < 1 || s.eigenfunctions.cols() < d) throw InvalidInput("flux_overlap_check: need d eigenfunctions");
    if (m < 0 || m >= d) throw InvalidInput("flux_overlap_check: m must lie in 0..d-1");
    const double dx = kTwoPi / s.grid;
    const double uniform = 1.0 / std::sqrt(kTwoPi);
    auto overlap = [&](int n, int mm) {
        Complex o = 0.0;
        for (int j = 0; j < s.grid; ++j) {
            const double w = chi ? chi(s.x[j]) : uniform;
            o += std::polar(1.0, mm * s.x[j]) * s.eigenfunctions(j, n) * w;
        }
        return o * dx;
    };
    DipoleSymmetryReport r;
    r.m = m;
    std::vector<Complex> o;
    for (int n = 0; n < d; ++n) {
        const Complex o0 = overlap(n, 0);
        const Complex gauge = std::abs(o0) > 0.0 ? std::conj(o0) / std::abs(o0) : Complex(1.0);
        o.push_back(gauge * (m == 0 ? o0 : overlap(n, m)));
        r.magnitudes.push_back(std::abs(o.back()));
        r.phases.push_back(std::arg(o.back()));
    }
    if (std::abs(o[0]) < 1e-12) {
        r.dipole_forbidden = true;
        return r;
    }
    for (int n = 0; n < d; ++n) {
        r.magnitude_spread = std::max(r.magnitude_spread, std::abs(r.magnitudes[n] / r.magnitudes[0] - 1.0));
        const double dev = wrap_angle(std::arg(o[n] / o[0]) + kTwoPi * n * m / d);
        r.phase_deviation = std::max(r.phase_deviation, std::abs(dev));
    }
    return r;
}

std::vector<Complex> restricted_translation_eigenvalues(const RingSpectrum& s, int d) {
    if (d < 1 || s.eigenfunctions.cols() < d) throw InvalidInput("restricted_translation_eigenvalues: need d states");
    const double dx = kTwoPi / s.grid;
    const double a = kTwoPi / d;
    Operator t(d, d);
    for (int k = 0; k < d; ++k) {
        const Eigen::VectorXd shifted = translate(Eigen::VectorXd(s.eigenfunctions.col(k)), a);
        for (int j = 0; j < d; ++j) t(j, k) = s.eigenfunctions.col(j).dot(shifted) * dx;
    }
    return spectrum(t);
}

}  // namespace qclock
