#pragma once

#include <cstdint>
#include <vector>

#include "qclock/clock_models.hpp"

namespace qclock {

struct OptimizationConfig {
    int restarts = 0;            // 0 selects 50 d
    std::uint64_t seed = 1;
    double bound = 0.0;          // upper limit on each V_l; 0 selects d
    std::vector<int> channels;   // allowed flux indices; empty means all
    double tolerance = 1e-10;    // relative spread of the simplex at convergence
    int max_evaluations = 0;     // per local search; 0 selects 3000 * dimension
    int threads = 0;             // 0 selects the hardware concurrency
};

struct RestartRecord {
    int index = 0;
    double start_R = 0.0;
    double final_R = 0.0;
    int evaluations = 0;
};

struct OptimizationResult {
    int d = 0;
    double R = 0.0;
    std::vector<double> V;
    StateVector psi;
    std::vector<int> channels;   // flux indices that were allowed to be non-zero
    std::vector<RestartRecord> trace;
    double wall_seconds = 0.0;
};

// R of the quasi-ideal clock with omega0 = 1; NaN when the moment problem is singular.
double quasi_ideal_precision(const std::vector<double>& V, const StateVector& psi);

OptimizationResult optimize_precision(int d, const OptimizationConfig& config);
// At most k non-zero V entries. Candidate channel sets contain flux index 0;
// cyclic relabelling and reflection of the time basis leave R unchanged.
OptimizationResult optimize_restricted(int d, int k, const OptimizationConfig& config);

struct RobustnessConfig {
    double fidelity_deficit = 0.0;  // 1 - |<psi_opt|psi>|^2
    double v_budget = 0.0;          // ||dV||_1 relative to ||V_opt||_1
    int samples = 200;
    std::uint64_t seed = 1;
};

struct RobustnessResult {
    double R_worst = 0.0;
    double R_optimal = 0.0;
    int samples = 0;
};

RobustnessResult robustness_worst_case(const OptimizationResult& optimum, const RobustnessConfig& config);

struct RobustnessCell {
    double fidelity_deficit = 0.0;
    double v_budget = 0.0;
    double R_worst = 0.0;
    int samples = 0;
};

// Worst case over every budget pair up to and including each grid cell, so
// the table is monotone in both budgets. Sample i uses the same random
// directions in every cell.
std::vector<RobustnessCell> robustness_grid(const OptimizationResult& optimum,
                                            const std::vector<double>& fidelity_deficits,
                                            const std::vector<double>& v_budgets, int samples,
                                            std::uint64_t seed);

enum class TickConvention { EmissionOnly, AbsorptionTicks };

struct TemperaturePoint {
    double N = 0.0;
    double R = 0.0;
    TickConvention convention = TickConvention::EmissionOnly;
};

// One thermal channel per non-zero V entry of the optimum, all at occupation N.
// omega_gap <= 0 selects 20 d.
std::vector<TemperaturePoint> temperature_sweep(const OptimizationResult& optimum, const std::vector<double>& N_values,
                                                TickConvention convention, double omega_gap = 0.0);

}  // namespace qclock
