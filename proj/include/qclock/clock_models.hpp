#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qclock/linalg.hpp"

namespace qclock {

// Share of a dissipator's heat booked against one bath. Weights of a
// dissipator's shares need not sum to one (the ladder splits E_w into
// E_h and -E_c).
struct BathShare {
    std::string bath;
    double beta = 0.0;
    double weight = 1.0;
};

using BathTag = std::vector<BathShare>;

// Finite-dimensional clock. Dissipator indices used by bath_tags run over
// tick_ops first, then noise_ops.
struct ClockSpec {
    Operator hamiltonian;
    std::vector<Operator> tick_ops;
    std::vector<Operator> noise_ops;
    DensityMatrix initial_state;
    std::optional<std::map<std::size_t, BathTag>> bath_tags;
    std::vector<std::string> warnings;

    Eigen::Index dim() const { return hamiltonian.rows(); }
    std::size_t dissipator_count() const { return tick_ops.size() + noise_ops.size(); }
    const Operator& dissipator(std::size_t k) const;

    // Throws InvalidInput if shapes, finiteness, Hermiticity or the initial
    // state are off.
    void validate() const;
    bool has_nonzero_tick() const;
};

struct QuasiIdealParams {
    int d = 2;
    double omega0 = 1.0;
    std::vector<double> V;
    StateVector psi;
};

struct ThermalChannel {
    int m = 0;
    double omega_gap = 0.0;
    double occupation = 0.0;
};

struct ThermalExtensionParams {
    QuasiIdealParams base;
    std::vector<ThermalChannel> channels;
    bool absorption_ticks = false;
    // When set, every dissipator is tagged with this photon-bath inverse temperature.
    std::optional<double> beta;
};

struct LadderClockParams {
    int d = 2;
    double E_h = 2.0;
    double E_c = 1.0;
    double beta_h = 0.1;
    double beta_c = 1.0;
    double coupling = 1.0;
    double tick_rate = 1.0;
    // Inverse temperature charged on the emitted tick photon; 0 leaves it uncounted.
    double beta_tick = 0.0;
};

struct VirtualQubitParams {
    double c = 1.0;
    double g = 1.0;
    double beta_h = 1.0;
    double beta_c = 1.0;
    double E_h = 1.0;
    double E_c = 1.0;
};

// |t_k> = d^{-1/2} sum_j exp(-2 pi i j k / d) |E_j>
std::vector<StateVector> fourier_basis(int d);
Operator fourier_matrix(int d);  // columns are |t_k>
StateVector time_state(int d, int k);
StateVector energy_state(int d, int n);

ClockSpec build_quasi_ideal(const QuasiIdealParams& params);
ClockSpec build_erlang(int d, double gamma);
ClockSpec build_thermal_extended(const ThermalExtensionParams& params);
ClockSpec build_ladder(const LadderClockParams& params);

double planck_occupation(double omega, double beta);
// Emission (omega > 0) or absorption (omega < 0) rate with c = 1; N is the
// occupation at |omega|.
double gamma_coefficient(double omega, double N);

// Ladder helpers.
double ladder_virtual_beta(const LadderClockParams& params);
double ladder_rate_up(const LadderClockParams& params);
double ladder_rate_down(const LadderClockParams& params);

double virtual_qubit_excitation(const VirtualQubitParams& params);
double virtual_qubit_delay_density(const VirtualQubitParams& params, double t);

}  // namespace qclock
