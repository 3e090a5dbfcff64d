#include <doctest.h>

#include <numbers>

#include "qclock/errors.hpp"
#include "qclock/ring.hpp"

using namespace qclock;

namespace {

constexpr double kPi = std::numbers::pi;

// Lowest eigenvalues of -1/2 d^2/dx^2 + q cos(x) in a plane-wave basis e^{ikx}, |k| <= kmax.
std::vector<double> mathieu_plane_waves(double q, int kmax, int levels) {
    const int n = 2 * kmax + 1;
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        const int k = i - kmax;
        h(i, i) = 0.5 * k * k;
        if (i + 1 < n) h(i, i + 1) = h(i + 1, i) = 0.5 * q;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
    std::vector<double> out(es.eigenvalues().data(), es.eigenvalues().data() + levels);
    return out;
}

}  // namespace

TEST_CASE("grid eigensolver reproduces a plane-wave Mathieu spectrum") {
    const double q = 7.0;
    const RingSpectrum s = solve_ring([q](double x) { return q * std::cos(x); }, 256, 6, 6);
    const auto ref = mathieu_plane_waves(q, 60, 6);
    for (int n = 0; n < 6; ++n) CHECK(s.eigenvalues[n] == doctest::Approx(ref[n]).epsilon(1e-10));
    // normalization: int |psi|^2 dx = 1
    const double dx = 2.0 * kPi / 256;
    CHECK(s.eigenfunctions.col(0).squaredNorm() * dx == doctest::Approx(1.0));
}

TEST_CASE("a single stiff well is a harmonic oscillator") {
    RingPotential p;
    p.d = 1;
    p.omega_well = 400.0;
    p.lifting = false;
    const RingSpectrum s = solve_ring(p, 512);
    for (int n = 0; n < 2; ++n) CHECK(s.eigenvalues[n] == doctest::Approx(400.0 * (n + 0.5)).epsilon(1e-6));
}

TEST_CASE("lifting potential equals its Fourier-coefficient form") {
    for (int d : {2, 3, 5}) {
        for (double x : {0.0, 0.4, 2.0, 5.5}) {
            const Complex c = lifting_potential_from_coefficients(d, x);
            CHECK(std::abs(c.imag()) < 1e-12);
            CHECK(c.real() == doctest::Approx(lifting_potential(d, x)));
        }
        CHECK(std::abs(lifting_potential(d, 0.0)) < 1e-12);
        const auto v = degeneracy_lifting_coefficients(d);
        CHECK(v.size() == static_cast<std::size_t>(d - 1));
    }
    CHECK_THROWS_AS(lifting_potential(1, 0.0), InvalidInput);
}

TEST_CASE("Fourier translation is exact for band-limited functions") {
    const int n = 256;
    Eigen::VectorXd f(n), ref(n);
    const double s = 0.77;
    for (int j = 0; j < n; ++j) {
        const double x = 2.0 * kPi * j / n;
        f(j) = std::cos(3.0 * x) + 0.5 * std::sin(7.0 * x);
        ref(j) = std::cos(3.0 * (x + s)) + 0.5 * std::sin(7.0 * (x + s));
    }
    CHECK((translate(f, s) - ref).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("ring of wells: harmonic spacing, shift equality and phase law") {
    RingPotential p;
    p.d = 3;
    const RingSpectrum s = solve_ring(p, 2048);
    const HarmonicityReport h = harmonicity_check(s, 3);
    CHECK(h.max_deviation < 1e-3);
    CHECK(h.gap_ratio > 10.0);
    for (double e : shift_equality_errors(s, 3)) CHECK(e < 3e-3);
    for (int m = 0; m < 3; ++m) {
        const DipoleSymmetryReport r = flux_overlap_check(s, 3, m);
        CHECK_FALSE(r.dipole_forbidden);
        CHECK(r.magnitude_spread < 2e-2);
        CHECK(r.phase_deviation < 2e-2);
    }
    const auto ev = restricted_translation_eigenvalues(s, 3);
    for (const Complex& z : ev) CHECK(std::abs(z) == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("ring solver input checks") {
    RingPotential p;
    CHECK_THROWS_AS(solve_ring(p, 100), InvalidInput);
    CHECK_THROWS_AS(solve_ring(p, 257), InvalidInput);
    p.omega_well = -1.0;
    CHECK_THROWS_AS(solve_ring(p, 512), InvalidInput);
    CHECK_THROWS_AS(flux_overlap_check(solve_ring(RingPotential{2, 300.0}, 512), 2, 2), InvalidInput);
}
