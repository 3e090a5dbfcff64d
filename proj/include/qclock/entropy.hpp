#pragma once

#include <string>
#include <vector>

#include "qclock/clock_models.hpp"
#include "qclock/optimizer.hpp"

namespace qclock {

struct BathEntropy {
    std::string bath;
    double delta_S = 0.0;
};

struct EntropyResult {
    double delta_S_tick = 0.0;
    std::vector<BathEntropy> per_bath;  // sorted by bath name; sums to delta_S_tick
    double error_estimate = 0.0;
    double mass = 0.0;
    // probability that the first tick is produced by tick_ops[j]
    std::vector<double> tick_channel_probability;
};

// sum_b -beta_b tr[H D_b(rho)], D_b the dissipators (tick jumps included)
// booked against bath b. Throws ConfigurationError when a dissipator is untagged.
double entropy_flux_rate(const ClockSpec& clock, const DensityMatrix& rho);
std::vector<BathEntropy> entropy_flux_rate_by_bath(const ClockSpec& clock, const DensityMatrix& rho);

EntropyResult entropy_per_tick(const ClockSpec& clock, double t_max = 10.0, double tol = 1e-8);

// d = 2 clock with V = (0, V1), started in |t_0>, emitting into a level
// omega_gamma below the ground state. Evaluates
//   beta (omega_gamma + omega/2) int P(t) int_0^t P(s) / (2 a0(s)) ds dt
// in rescaled time with V1 -> V1 (1 + N) / omega.
double entropy_d2_closed_form(double V1, double beta, double omega, double N, double omega_gamma = 0.0);

struct LadderEntropyReport {
    double delta_S = 0.0;    // entropy_per_tick on the ladder clock
    double reference = 0.0;  // beta_c Q_c - beta_h Q_h
    double Q_h = 0.0;
    double Q_c = 0.0;
    double E_gamma = 0.0;
    double R = 0.0;
    double virtual_beta = 0.0;
    bool degenerate = false;  // no bias: E_h = E_c or beta_h E_h = beta_c E_c
};

LadderEntropyReport ladder_entropy_comparison(const LadderClockParams& params);

struct EntropyCurvePoint {
    int d = 0;
    double R = 0.0;
    double delta_S = 0.0;
    double beta = 0.0;
};

struct EntropyCurve {
    std::vector<EntropyCurvePoint> points;
    double slope_dS_dd = 0.0;         // least-squares slope of delta_S against d
    double exponent = 0.0;            // log-log slope of R against delta_S / beta - omega_gamma
    double quadratic_coefficient = 0.0;  // R ~ c (delta_S / beta - omega_gamma)^2 * 4
};

EntropyCurve entropy_precision_curve(const std::vector<OptimizationResult>& optima, double beta, double channel_gap);
EntropyCurve entropy_precision_curve(const std::vector<int>& d_range, double beta, double channel_gap,
                                     const OptimizationConfig& config);

}  // namespace qclock
