#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "qclock/clock_models.hpp"
#include "qclock/errors.hpp"
#include "qclock/tick_statistics.hpp"

using namespace qclock;

namespace {

ClockSpec single_level(double gamma) {
    ClockSpec c;
    c.hamiltonian = Operator::Zero(1, 1);
    c.tick_ops.push_back(Operator::Constant(1, 1, std::sqrt(gamma)));
    c.initial_state = Operator::Identity(1, 1);
    return c;
}

ClockSpec random_clock(int d, bool noisy, std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    auto rand_op = [&](double scale) {
        Operator a(d, d);
        for (int i = 0; i < d; ++i) {
            for (int j = 0; j < d; ++j) a(i, j) = scale * Complex(g(rng), g(rng));
        }
        return a;
    };
    ClockSpec c;
    const Operator h = rand_op(1.0);
    c.hamiltonian = 0.5 * (h + h.adjoint());
    c.tick_ops.push_back(rand_op(0.6));
    if (noisy) c.noise_ops.push_back(rand_op(0.4));
    StateVector psi(d);
    for (int i = 0; i < d; ++i) psi(i) = Complex(g(rng), g(rng));
    psi.normalize();
    c.initial_state = psi * psi.adjoint();
    return c;
}

}  // namespace

TEST_CASE("Erlang chain reaches the classical bound R = d") {
    for (int d = 1; d <= 8; ++d) {
        const ClockSpec c = build_erlang(d, 1.7);
        if (d > 1) CHECK(moment_path(c) == MomentPath::Classical);
        const TickStatistics s = precision(c);
        CHECK(s.R == doctest::Approx(d).epsilon(1e-10));
        CHECK(s.mu == doctest::Approx(d / 1.7).epsilon(1e-10));
        CHECK(s.mass == doctest::Approx(1.0).epsilon(1e-10));
    }
}

TEST_CASE("Erlang mean equals the integrated survival probability") {
    const ClockSpec c = build_erlang(3, 2.0);
    const double mean = oracle::simpson([&](double t) { return survival_trace(c, t); }, 0.0, 40.0, 8000);
    CHECK(mean == doctest::Approx(1.5).epsilon(1e-8));
}

TEST_CASE("single decaying level has an exponential delay function") {
    const double gamma = 0.8;
    const DelayFunctionSamples s = delay_density_ode(single_level(gamma), 10.0, 100);
    REQUIRE(s.times.size() == s.density.size());
    for (std::size_t i = 0; i < s.times.size(); ++i) {
        CHECK(std::abs(s.density[i] - gamma * std::exp(-gamma * s.times[i])) < 1e-8);
    }
    CHECK(precision(single_level(gamma)).R == doctest::Approx(1.0));
}

TEST_CASE("d = 2 optimum has R = 4 on both paths") {
    const ClockSpec c = build_quasi_ideal({2, 1.0, {1.0 / std::sqrt(2.0), 0.0}, time_state(2, 1)});
    CHECK(moment_path(c) == MomentPath::Sylvester);
    CHECK(std::abs(precision(c).R - 4.0) < 1e-9);
    CHECK(std::abs(precision_ode(c).R - 4.0) < 1e-6);
}

TEST_CASE("d = 2 delay density matches the closed form") {
    for (double v1 : {0.3, 1.0 / std::sqrt(2.0), 1.0, 2.0}) {
        const ClockSpec c = build_quasi_ideal({2, 1.0, {0.0, v1}, time_state(2, 0)});
        const DelayFunctionSamples s = delay_density_ode(c, 20.0, 80);
        for (std::size_t i = 0; i < s.times.size(); ++i) {
            CHECK(std::abs(s.density[i] - two_level_density(v1, s.times[i])) < 1e-9);
        }
        const double mass = oracle::simpson([&](double t) { return two_level_density(v1, t); }, 0.0, 200.0, 20000);
        CHECK(mass == doctest::Approx(1.0).epsilon(1e-7));
    }
}

TEST_CASE("fast moments agree with the ODE oracle on random clocks") {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 8; ++trial) {
        const int d = 2 + trial % 4;
        const bool noisy = trial % 2 == 1;
        const ClockSpec c = random_clock(d, noisy, rng);
        if (noisy) CHECK(moment_path(c) == MomentPath::Vectorized);
        const TickStatistics fast = precision(c);
        const TickStatistics slow = precision_ode(c);
        CHECK(std::abs(fast.R - slow.R) / fast.R < 1e-6);
        CHECK(std::abs(fast.mu - slow.mu) / fast.mu < 1e-6);
    }
}

TEST_CASE("thermal extension with emission-only ticks reduces to V (1 + N)") {
    const std::vector<double> v{0.0, 0.6, 0.2};
    const StateVector psi = time_state(3, 0);
    for (double n : {0.0, 0.3}) {
        ThermalExtensionParams p;
        p.base = {3, 1.0, v, psi};
        p.channels = {{1, 60.0, n}, {2, 60.0, n}};
        const TickStatistics ext = precision(build_thermal_extended(p));
        std::vector<double> scaled = v;
        for (double& x : scaled) x *= 1.0 + n;
        CHECK(ext.R == doctest::Approx(precision(build_quasi_ideal({3, 1.0, scaled, psi})).R).epsilon(1e-9));
    }
}

TEST_CASE("no-tick generator preserves Hermiticity and loses trace at the tick rate") {
    std::mt19937_64 rng(23);
    const ClockSpec c = random_clock(3, true, rng);
    const NoTickGenerator gen(c);
    const DensityMatrix rho = c.initial_state;
    const DensityMatrix out = gen.apply(rho);
    CHECK(is_hermitian(out, 1e-12));
    CHECK(out.trace().real() == doctest::Approx(-gen.tick_rate(rho)));

    Eigen::VectorXcd vec = Eigen::Map<const Eigen::VectorXcd>(rho.data(), 9);
    const Eigen::VectorXcd img = gen.superoperator() * vec;
    CHECK((img - Eigen::Map<const Eigen::VectorXcd>(out.data(), 9)).norm() < 1e-12);
}

TEST_CASE("invertibility check flags a clock whose tick never fires") {
    const ClockSpec c = build_quasi_ideal({2, 1.0, {0.0, 0.0}, time_state(2, 0)});
    CHECK(check_invertibility(c).singular);
    CHECK_THROWS_AS(precision(c), NonTickingClock);
    const ClockSpec ok = build_quasi_ideal({2, 1.0, {0.5, 0.5}, time_state(2, 0)});
    CHECK_FALSE(check_invertibility(ok).singular);
}

TEST_CASE("population trapped in a dark level is reported") {
    // half the initial weight sits in |1>, which no jump ever leaves
    ClockSpec c;
    c.hamiltonian = Operator::Zero(2, 2);
    c.tick_ops.push_back(Operator::Zero(2, 2));
    c.tick_ops[0](0, 0) = 1.0;
    c.initial_state = Operator::Zero(2, 2);
    c.initial_state(0, 0) = 0.5;
    c.initial_state(1, 1) = 0.5;
    CHECK_THROWS_AS(precision(c), Error);
}
