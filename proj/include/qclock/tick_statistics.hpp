#pragma once

#include <vector>

#include "qclock/clock_models.hpp"

namespace qclock {

struct DelayFunctionSamples {
    std::vector<double> times;
    std::vector<double> density;
    double total_mass = 0.0;
};

struct TickStatistics {
    double mu = 0.0;
    double variance = 0.0;
    double R = 0.0;
    double mass = 0.0;
};

struct Moments {
    double mu = 0.0;   // int t P(t) dt
    double chi = 0.0;  // int t^2 P(t) dt
    double mass = 0.0; // int P(t) dt
};

enum class MomentPath { Sylvester, Classical, Vectorized };

// The no-tick conditioned generator
//   rho -> -i[H, rho] - 1/2 {K, rho} + sum_k L_k rho L_k^dagger - 1/2 {L_k^dagger L_k, rho},
// with K = sum_j J_j^dagger J_j.
class NoTickGenerator {
public:
    explicit NoTickGenerator(const ClockSpec& clock);

    DensityMatrix apply(const DensityMatrix& rho) const;
    // Column-major vectorized superoperator, dim^2 x dim^2.
    Operator superoperator() const;
    // -iH - 1/2 (K + sum L^dagger L); equals -iH - V for noise-free clocks.
    const Operator& drift() const { return drift_; }
    const Operator& tick_weight() const { return k_; }
    double tick_rate(const DensityMatrix& rho) const;

private:
    Operator drift_;
    Operator k_;
    std::vector<Operator> noise_;
};

NoTickGenerator no_tick_generator(const ClockSpec& clock);

// Adaptive Runge-Kutta-Fehlberg 7(8) integration of the unnormalized no-tick state.
DelayFunctionSamples delay_density_ode(const ClockSpec& clock, double t_max, int n_steps);
double survival_trace(const ClockSpec& clock, double t);
TickStatistics precision_ode(const ClockSpec& clock);

Moments moments_fast(const ClockSpec& clock);
MomentPath moment_path(const ClockSpec& clock);
TickStatistics precision(const ClockSpec& clock);

struct InvertibilityReport {
    std::vector<Complex> eigenvalues;
    std::vector<Complex> perturbative;
    double min_abs_real = 0.0;
    bool singular = false;
};

InvertibilityReport check_invertibility(const ClockSpec& clock);

// Closed forms for the d = 2 quasi-ideal clock with a single channel of
// strength V1 and omega0 = 1, started in the orthogonal time state.
double two_level_density(double V1, double t);
double two_level_a0(double V1, double t);

}  // namespace qclock
