#include <doctest.h>

#include "qclock/clock_models.hpp"
#include "qclock/entropy.hpp"
#include "qclock/errors.hpp"
#include "qclock/tick_statistics.hpp"

using namespace qclock;

namespace {

// Two-level emitter |e> -> |g> at rate gamma, energy gap w.
ClockSpec emitter(double gamma, double w, double beta) {
    ClockSpec c;
    c.hamiltonian = Operator::Zero(2, 2);
    c.hamiltonian(1, 1) = w;
    Operator j = Operator::Zero(2, 2);
    j(0, 1) = std::sqrt(gamma);
    c.tick_ops.push_back(j);
    c.initial_state = Operator::Zero(2, 2);
    c.initial_state(1, 1) = 1.0;
    c.bath_tags = std::map<std::size_t, BathTag>{{0, {BathShare{"photon", beta, 1.0}}}};
    return c;
}

}  // namespace

TEST_CASE("entropy flux of a decaying emitter is beta gamma w") {
    const ClockSpec c = emitter(0.7, 2.5, 0.4);
    CHECK(entropy_flux_rate(c, c.initial_state) == doctest::Approx(0.4 * 0.7 * 2.5));
    // the tick empties the emitter: one quantum w per tick
    const EntropyResult e = entropy_per_tick(c);
    CHECK(e.delta_S_tick == doctest::Approx(0.4 * 2.5).epsilon(1e-8));
    CHECK(e.error_estimate < 1e-8);
    REQUIRE(e.tick_channel_probability.size() == 1);
    CHECK(e.tick_channel_probability[0] == doctest::Approx(1.0));
}

TEST_CASE("untagged dissipators are a configuration error") {
    ClockSpec c = emitter(1.0, 1.0, 1.0);
    c.bath_tags.reset();
    CHECK_THROWS_AS(entropy_per_tick(c), ConfigurationError);
    c.bath_tags = std::map<std::size_t, BathTag>{};
    CHECK_THROWS_AS(entropy_flux_rate(c, c.initial_state), ConfigurationError);
}

TEST_CASE("d = 2 entropy per tick matches the closed form") {
    for (double v1 : {0.3, 1.0 / std::sqrt(2.0), 2.0}) {
        for (double n : {0.0, 0.2}) {
            ThermalExtensionParams p;
            p.base = {2, 1.0, {0.0, v1}, time_state(2, 0)};
            p.channels = {{1, 30.0, n}};
            p.beta = 0.5;
            const EntropyResult e = entropy_per_tick(build_thermal_extended(p));
            const double closed = entropy_d2_closed_form(v1, 0.5, 1.0, n, 30.0);
            CHECK(e.delta_S_tick == doctest::Approx(closed).epsilon(1e-6));
            CHECK(e.mass == doctest::Approx(1.0).epsilon(1e-9));
        }
    }
    CHECK(entropy_d2_closed_form(1.0, 0.0, 1.0, 0.0) == 0.0);
    CHECK_THROWS_AS(entropy_d2_closed_form(-1.0, 1.0, 1.0, 0.0), InvalidInput);
}

TEST_CASE("per-bath entropies sum to the total") {
    LadderClockParams p;
    p.d = 4;
    p.beta_h = 0.1;
    p.beta_c = 0.4;
    const EntropyResult e = entropy_per_tick(build_ladder(p));
    double sum = 0.0;
    for (const auto& b : e.per_bath) sum += b.delta_S;
    CHECK(sum == doctest::Approx(e.delta_S_tick));
    REQUIRE(e.per_bath.size() == 3);
    CHECK(e.per_bath[0].bath == "cold");
    CHECK(e.error_estimate < 1e-6 * std::abs(e.delta_S_tick));
}

TEST_CASE("ladder comparison reference and degenerate bias") {
    LadderClockParams p;
    p.d = 6;
    p.beta_h = 0.1;
    p.beta_c = 0.4;
    const LadderEntropyReport r = ladder_entropy_comparison(p);
    CHECK_FALSE(r.degenerate);
    CHECK(r.Q_h == doctest::Approx(5 * p.E_h));
    CHECK(r.reference == doctest::Approx(p.beta_c * r.Q_c - p.beta_h * r.Q_h));
    CHECK(r.delta_S > 0.0);
    CHECK(r.R > 1.0);

    p.beta_c = p.beta_h * p.E_h / p.E_c;
    CHECK(ladder_entropy_comparison(p).degenerate);
}

TEST_CASE("entropy curve of fixed clocks") {
    std::vector<OptimizationResult> clocks;
    for (int d : {2, 3}) {
        OptimizationResult o;
        o.d = d;
        o.V.assign(d, 0.0);
        o.V[0] = 1.0;
        o.psi = time_state(d, d - 1);
        clocks.push_back(o);
    }
    const EntropyCurve c = entropy_precision_curve(clocks, 1.0, 40.0);
    REQUIRE(c.points.size() == 2);
    for (const auto& pt : c.points) CHECK(pt.delta_S > 40.0);
    CHECK_THROWS_AS(entropy_precision_curve(clocks, -1.0, 40.0), InvalidInput);
}
