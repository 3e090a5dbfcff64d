#pragma once

// Internal: real linear-flow representation of the no-tick dynamics, used by
// the ODE oracle and the entropy sweep, plus the reachable-subspace reduction
// used by the resolvent paths.

#include <functional>
#include <vector>

#include "qclock/clock_models.hpp"

namespace qclock::detail {

// y' = G y, where y packs a Hermitian matrix (diagonal, then Re/Im of the
// upper triangle) or, for classical clocks, just the populations.
struct LinearFlow {
    Eigen::MatrixXd G;
    Eigen::VectorXd y0;
    Eigen::RowVectorXd tick;   // P = tick . y
    Eigen::RowVectorXd trace;  // tr rho = trace . y
    std::vector<Eigen::RowVectorXd> observables;
    bool classical = false;
};

bool is_classical(const ClockSpec& clock);

// `observables` must be Hermitian.
LinearFlow make_flow(const ClockSpec& clock, const std::vector<Operator>& observables = {});

struct FlowIntegral {
    double m0 = 0.0;
    double m1 = 0.0;
    double m2 = 0.0;
    double survival = 1.0;
    double t_end = 0.0;
    // per observable: int P(t) int_0^t <O>_{rho(s)/tr rho(s)} ds dt
    std::vector<double> nested;
};

// Integrates to t_hint, then keeps doubling the horizon while the survival
// exceeds 1e-13. Throws NonTickingClock if more than 1e-4 probability never ticks.
FlowIntegral integrate_flow(const LinearFlow& flow, double t_hint, double tol);

// Tick density at the requested (increasing, from 0) times; also returns the
// survival at the last time.
std::vector<double> sample_flow(const LinearFlow& flow, const std::vector<double>& times, double tol,
                                double& survival_end, double& mass_end);

// Smallest basis-index subspace containing the support of rho0 that is
// invariant under H, K = sum J^dagger J and every noise operator.
struct ReducedClock {
    std::vector<Eigen::Index> index;
    Operator H;
    Operator K;
    std::vector<Operator> L;
    DensityMatrix rho0;
    bool noise_free = true;
};

ReducedClock reduce_clock(const ClockSpec& clock);

// int_0^inf rho~(t) dt on the reduced subspace, by the resolvent of the
// no-tick generator.
DensityMatrix integrated_state(const ClockSpec& clock, const ReducedClock& red);
Operator restrict_to(const Operator& op, const std::vector<Eigen::Index>& index);

}  // namespace qclock::detail
