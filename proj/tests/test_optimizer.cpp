#include <doctest.h>

#include <random>

#include "qclock/clock_models.hpp"
#include "qclock/errors.hpp"
#include "qclock/optimizer.hpp"
#include "qclock/tick_statistics.hpp"

using namespace qclock;

namespace {

OptimizationConfig quick(int restarts, std::uint64_t seed = 1) {
    OptimizationConfig c;
    c.restarts = restarts;
    c.seed = seed;
    c.tolerance = 1e-9;
    c.threads = 1;
    return c;
}

}  // namespace

TEST_CASE("objective agrees with the general precision routine") {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(0.0, 2.0);
    std::normal_distribution<double> g;
    for (int d = 2; d <= 6; ++d) {
        std::vector<double> v(d);
        for (double& x : v) x = u(rng);
        StateVector psi(d);
        for (int n = 0; n < d; ++n) psi(n) = Complex(g(rng), g(rng));
        psi.normalize();
        const double ref = precision(build_quasi_ideal({d, 1.0, v, psi})).R;
        CHECK(quasi_ideal_precision(v, psi) == doctest::Approx(ref).epsilon(1e-9));
    }
    CHECK(std::isnan(quasi_ideal_precision({0.0, 0.0}, time_state(2, 0))));
}

TEST_CASE("d = 1 gives R = 1 for any V") {
    const OptimizationResult r = optimize_precision(1, quick(3));
    CHECK(r.R == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("d = 2 search reaches at least the time-state optimum R = 4") {
    const OptimizationResult r = optimize_precision(2, quick(8));
    CHECK(r.R >= 4.0 - 1e-3);
    CHECK(r.psi.norm() == doctest::Approx(1.0));
    for (double v : r.V) {
        CHECK(v >= 0.0);
        CHECK(v <= 2.0);
    }
    CHECK(r.trace.size() == 8);
}

TEST_CASE("optimizer is deterministic and independent of the thread count") {
    OptimizationConfig a = quick(6, 42);
    OptimizationConfig b = a;
    b.threads = 3;
    const OptimizationResult r1 = optimize_precision(4, a);
    const OptimizationResult r2 = optimize_precision(4, b);
    CHECK(r1.R == r2.R);
    CHECK(r1.V == r2.V);
    CHECK((r1.psi - r2.psi).norm() == 0.0);
    CHECK(r1.R > 4.0);
}

TEST_CASE("restricted search honours the channel budget") {
    const OptimizationResult one = optimize_restricted(5, 1, quick(6));
    int nonzero = 0;
    for (double v : one.V) nonzero += v > 0.0 ? 1 : 0;
    CHECK(nonzero <= 1);
    CHECK(one.channels.size() == 1);
    const OptimizationResult two = optimize_restricted(5, 2, quick(6));
    CHECK(two.R >= one.R - 1e-9);
    CHECK_THROWS_AS(optimize_restricted(5, 0, quick(2)), InvalidInput);
    CHECK_THROWS_AS(optimize_restricted(5, 6, quick(2)), InvalidInput);
}

TEST_CASE("robustness at zero budget returns the optimum exactly") {
    const OptimizationResult opt = optimize_precision(3, quick(6));
    RobustnessConfig rc;
    const RobustnessResult r = robustness_worst_case(opt, rc);
    CHECK(r.R_worst == opt.R);
    rc.fidelity_deficit = 0.05;
    rc.v_budget = 0.05;
    rc.samples = 50;
    const RobustnessResult p = robustness_worst_case(opt, rc);
    CHECK(p.R_worst < opt.R);
    CHECK(p.samples == 50);
    rc.fidelity_deficit = 1.0;
    CHECK_THROWS_AS(robustness_worst_case(opt, rc), InvalidInput);
}

TEST_CASE("robustness grid is non-increasing in both budgets") {
    const OptimizationResult opt = optimize_precision(3, quick(6));
    const std::vector<double> b{0.0, 0.05, 0.1};
    const auto cells = robustness_grid(opt, b, b, 40, 9);
    REQUIRE(cells.size() == 9);
    CHECK(cells[0].R_worst == opt.R);
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            if (i > 0) CHECK(cells[i * 3 + j].R_worst <= cells[(i - 1) * 3 + j].R_worst);
            if (j > 0) CHECK(cells[i * 3 + j].R_worst <= cells[i * 3 + j - 1].R_worst);
        }
    }
}

TEST_CASE("temperature sweep starts at the optimum and decreases") {
    const OptimizationResult opt = optimize_precision(3, quick(6));
    for (auto conv : {TickConvention::EmissionOnly, TickConvention::AbsorptionTicks}) {
        const auto pts = temperature_sweep(opt, {1e-2, 0.0, 1e-3}, conv);
        REQUIRE(pts.size() == 3);
        CHECK(pts[0].N == 0.0);
        CHECK(pts[0].R == doctest::Approx(opt.R).epsilon(1e-9));
        CHECK(pts[1].R <= pts[0].R + 1e-9);
        CHECK(pts[2].R <= pts[1].R + 1e-9);
    }
    CHECK_THROWS_AS(temperature_sweep(opt, {-1.0}, TickConvention::EmissionOnly), InvalidInput);
}
