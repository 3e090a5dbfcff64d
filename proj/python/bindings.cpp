#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qclock/clock_models.hpp"
#include "qclock/entropy.hpp"
#include "qclock/errors.hpp"
#include "qclock/optimizer.hpp"
#include "qclock/ring.hpp"
#include "qclock/tick_statistics.hpp"

namespace py = pybind11;
using namespace qclock;

namespace {

ClockSpec quasi_ideal(const std::vector<double>& V, const StateVector& psi, double omega0) {
    return build_quasi_ideal({static_cast<int>(V.size()), omega0, V, psi});
}

py::dict stats_dict(const TickStatistics& s) {
    py::dict d;
    d["R"] = s.R;
    d["mu"] = s.mu;
    d["variance"] = s.variance;
    d["mass"] = s.mass;
    return d;
}

OptimizationConfig make_config(int restarts, std::uint64_t seed, double bound, std::vector<int> channels,
                               int threads) {
    OptimizationConfig c;
    c.restarts = restarts;
    c.seed = seed;
    c.bound = bound;
    c.channels = std::move(channels);
    c.threads = threads;
    return c;
}

OptimizationResult as_optimum(const std::vector<double>& V, const StateVector& psi) {
    OptimizationResult o;
    o.d = static_cast<int>(V.size());
    o.V = V;
    o.psi = psi;
    o.R = quasi_ideal_precision(V, psi);
    return o;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Markovian ticking clocks: precision, optimization, entropy per tick and ring checks";
    m.attr("__version__") = "1.0.0";

    auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<InvalidInput>(m, "InvalidInput", PyExc_ValueError);
    py::register_exception<ConfigurationError>(m, "ConfigurationError", base.ptr());
    py::register_exception<SingularGenerator>(m, "SingularGenerator", base.ptr());
    py::register_exception<NonTickingClock>(m, "NonTickingClock", base.ptr());
    py::register_exception<OptimizationFailed>(m, "OptimizationFailed", base.ptr());
    py::register_exception<GridRefinementError>(m, "GridRefinementError", base.ptr());

    m.def("time_state", &time_state, py::arg("d"), py::arg("k"));
    m.def("energy_state", &energy_state, py::arg("d"), py::arg("n"));

    m.def(
        "precision",
        [](const std::vector<double>& V, const StateVector& psi, double omega0) {
            return stats_dict(precision(quasi_ideal(V, psi, omega0)));
        },
        py::arg("V"), py::arg("psi"), py::arg("omega0") = 1.0);
    m.def(
        "precision_ode",
        [](const std::vector<double>& V, const StateVector& psi, double omega0) {
            return stats_dict(precision_ode(quasi_ideal(V, psi, omega0)));
        },
        py::arg("V"), py::arg("psi"), py::arg("omega0") = 1.0);
    m.def(
        "delay_density",
        [](const std::vector<double>& V, const StateVector& psi, double t_max, int n_steps) {
            const DelayFunctionSamples s = delay_density_ode(quasi_ideal(V, psi, 1.0), t_max, n_steps);
            return py::make_tuple(s.times, s.density);
        },
        py::arg("V"), py::arg("psi"), py::arg("t_max") = 20.0, py::arg("n_steps") = 200);
    m.def(
        "erlang_precision", [](int d, double gamma) { return stats_dict(precision(build_erlang(d, gamma))); },
        py::arg("d"), py::arg("gamma") = 1.0);
    m.def("two_level_density", &two_level_density, py::arg("V1"), py::arg("t"));

    auto optimum_dict = [](const OptimizationResult& r) {
        py::dict d;
        d["d"] = r.d;
        d["R"] = r.R;
        d["V"] = r.V;
        d["psi"] = r.psi;
        d["channels"] = r.channels;
        d["wall_seconds"] = r.wall_seconds;
        return d;
    };
    m.def(
        "optimize_precision",
        [optimum_dict](int d, int restarts, std::uint64_t seed, double bound, std::vector<int> channels, int threads) {
            return optimum_dict(optimize_precision(d, make_config(restarts, seed, bound, std::move(channels), threads)));
        },
        py::arg("d"), py::arg("restarts") = 0, py::arg("seed") = 1, py::arg("bound") = 0.0,
        py::arg("channels") = std::vector<int>{}, py::arg("threads") = 0);
    m.def(
        "optimize_restricted",
        [optimum_dict](int d, int k, int restarts, std::uint64_t seed, int threads) {
            return optimum_dict(optimize_restricted(d, k, make_config(restarts, seed, 0.0, {}, threads)));
        },
        py::arg("d"), py::arg("k"), py::arg("restarts") = 0, py::arg("seed") = 1, py::arg("threads") = 0);
    m.def(
        "robustness_worst_case",
        [](const std::vector<double>& V, const StateVector& psi, double fidelity_deficit, double v_budget,
           int samples, std::uint64_t seed) {
            const RobustnessResult r =
                robustness_worst_case(as_optimum(V, psi), {fidelity_deficit, v_budget, samples, seed});
            return py::make_tuple(r.R_worst, r.samples);
        },
        py::arg("V"), py::arg("psi"), py::arg("fidelity_deficit"), py::arg("v_budget"), py::arg("samples") = 200,
        py::arg("seed") = 1);
    m.def(
        "temperature_sweep",
        [](const std::vector<double>& V, const StateVector& psi, const std::vector<double>& N, bool absorption_ticks,
           double gap) {
            std::vector<std::pair<double, double>> out;
            const auto conv = absorption_ticks ? TickConvention::AbsorptionTicks : TickConvention::EmissionOnly;
            for (const auto& p : temperature_sweep(as_optimum(V, psi), N, conv, gap)) out.emplace_back(p.N, p.R);
            return out;
        },
        py::arg("V"), py::arg("psi"), py::arg("N"), py::arg("absorption_ticks") = false, py::arg("gap") = 0.0);

    m.def(
        "entropy_per_tick",
        [](const std::vector<double>& V, const StateVector& psi, double beta, double N, double gap) {
            ThermalExtensionParams p;
            const int d = static_cast<int>(V.size());
            p.base = {d, 1.0, V, psi};
            for (int k = 0; k < d; ++k) {
                if (V[k] > 0.0) p.channels.push_back({k, gap > 0.0 ? gap : 20.0 * d, N});
            }
            p.beta = beta;
            const EntropyResult e = entropy_per_tick(build_thermal_extended(p));
            py::dict out;
            out["deltaS"] = e.delta_S_tick;
            out["error_estimate"] = e.error_estimate;
            out["mass"] = e.mass;
            return out;
        },
        py::arg("V"), py::arg("psi"), py::arg("beta"), py::arg("N") = 0.0, py::arg("gap") = 0.0);
    m.def("entropy_d2_closed_form", &entropy_d2_closed_form, py::arg("V1"), py::arg("beta"), py::arg("omega"),
          py::arg("N"), py::arg("omega_gamma") = 0.0);
    m.def(
        "ladder_entropy_comparison",
        [](int d, double E_h, double E_c, double beta_h, double beta_c, double coupling, double tick_rate) {
            const LadderEntropyReport r =
                ladder_entropy_comparison({d, E_h, E_c, beta_h, beta_c, coupling, tick_rate, 0.0});
            py::dict out;
            out["deltaS"] = r.delta_S;
            out["reference"] = r.reference;
            out["R"] = r.R;
            out["virtual_beta"] = r.virtual_beta;
            out["degenerate"] = r.degenerate;
            return out;
        },
        py::arg("d"), py::arg("E_h") = 2.0, py::arg("E_c") = 1.0, py::arg("beta_h") = 0.1, py::arg("beta_c") = 1.0,
        py::arg("coupling") = 1.0, py::arg("tick_rate") = 1.0);

    m.def(
        "ring_check",
        [](int d, double omega, int grid) {
            RingPotential p;
            p.d = d;
            p.omega_well = omega;
            const RingSpectrum s = solve_ring(p, grid);
            py::dict out;
            out["eigenvalues"] = s.eigenvalues;
            out["shift_errors"] = shift_equality_errors(s, d);
            out["convergence"] = s.convergence;
            std::vector<double> spread, phase;
            for (int m = 0; m < d; ++m) {
                const DipoleSymmetryReport r = flux_overlap_check(s, d, m);
                spread.push_back(r.magnitude_spread);
                phase.push_back(r.phase_deviation);
            }
            out["magnitude_spread"] = spread;
            out["phase_deviation"] = phase;
            if (d >= 2) out["spacing_deviation"] = harmonicity_check(s, d).max_deviation;
            return out;
        },
        py::arg("d"), py::arg("omega") = 3000.0, py::arg("grid") = 2048);
}
