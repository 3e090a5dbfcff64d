#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "qclock/errors.hpp"
#include "qclock/linalg.hpp"

using namespace qclock;

namespace {

Operator random_operator(int n, std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    Operator a(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) a(i, j) = Complex(g(rng), g(rng));
    }
    return a;
}

}  // namespace

TEST_CASE("sylvester solve matches the assembled linear map") {
    std::mt19937_64 rng(3);
    for (int n : {1, 2, 4, 7}) {
        Operator a = random_operator(n, rng);
        a -= (a.cwiseAbs().sum() + 1.0) * Operator::Identity(n, n);
        const Operator c = random_operator(n, rng);
        const Operator x = sylvester_solve(a, c);
        CHECK((x - oracle::brute_sylvester(a, c)).norm() < 1e-10 * (1.0 + x.norm()));
    }
}

TEST_CASE("sylvester solver reuses the factorization across right-hand sides") {
    std::mt19937_64 rng(5);
    Operator a = random_operator(5, rng) - 8.0 * Operator::Identity(5, 5);
    const SylvesterSolver solver(a);
    for (int k = 0; k < 3; ++k) {
        const Operator c = random_operator(5, rng);
        const Operator x = solver.solve(c);
        CHECK((a * x + x * a.adjoint() - c).norm() < 1e-11 * c.norm());
    }
    CHECK(solver.min_gap() > 0.0);
}

TEST_CASE("sylvester solve rejects a spectrum touching the imaginary axis") {
    Operator a = Operator::Zero(2, 2);
    a(0, 0) = Complex(0.0, 1.0);
    a(1, 1) = Complex(-1.0, 0.0);
    CHECK_THROWS_AS(sylvester_solve(a, Operator::Identity(2, 2)), SingularGenerator);
}

TEST_CASE("matrix exponential agrees with a Taylor series") {
    std::mt19937_64 rng(11);
    for (int n : {1, 3, 6}) {
        const Operator a = random_operator(n, rng);
        for (double t : {0.0, 0.1, 1.7}) {
            const Operator e = matrix_exp(a, t);
            const Operator ref = oracle::taylor_exp(t * a);
            CHECK((e - ref).norm() < 1e-10 * (1.0 + ref.norm()));
        }
    }
}

TEST_CASE("spectrum is sorted by real part") {
    Operator a = Operator::Zero(3, 3);
    a(0, 0) = 2.0;
    a(1, 1) = -1.0;
    a(2, 2) = Complex(0.5, 3.0);
    const auto ev = spectrum(a);
    REQUIRE(ev.size() == 3);
    CHECK(ev[0].real() == doctest::Approx(-1.0));
    CHECK(ev[1].real() == doctest::Approx(0.5));
    CHECK(ev[2].real() == doctest::Approx(2.0));
}

TEST_CASE("validation helpers") {
    Operator rho = Operator::Zero(2, 2);
    rho(0, 0) = 0.5;
    rho(1, 1) = 0.5;
    CHECK_NOTHROW(require_density_matrix(rho, "test"));
    rho(0, 1) = 0.3;
    CHECK_FALSE(is_hermitian(rho));
    CHECK_THROWS_AS(require_density_matrix(rho, "test"), InvalidInput);

    StateVector psi(2);
    psi << 1.0, 1.0;
    CHECK_THROWS_AS(require_normalized(psi, "test"), InvalidInput);
    Operator bad = Operator::Identity(2, 2);
    bad(0, 0) = std::nan("");
    CHECK_THROWS_AS(require_finite(bad, "test"), InvalidInput);
    CHECK_THROWS_AS(require_square(Operator::Zero(2, 3), "test"), InvalidInput);
}
