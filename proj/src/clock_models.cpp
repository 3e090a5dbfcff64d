#include "qclock/clock_models.hpp"

#include <cmath>
#include <numbers>
#include <set>
#include <sstream>

#include "qclock/errors.hpp"

namespace qclock {

namespace {

void require_positive(double x, const char* what) {
    if (!std::isfinite(x) || x <= 0.0) {
        throw InvalidInput(std::string(what) + " must be finite and positive");
    }
}

Operator ket_bra(const StateVector& a, const StateVector& b) { return a * b.adjoint(); }

Operator unit_op(Eigen::Index n, Eigen::Index row, Eigen::Index col, double amp) {
    Operator op = Operator::Zero(n, n);
    op(row, col) = amp;
    return op;
}

}  // namespace

const Operator& ClockSpec::dissipator(std::size_t k) const {
    if (k < tick_ops.size()) return tick_ops[k];
    return noise_ops.at(k - tick_ops.size());
}

void ClockSpec::validate() const {
    require_square(hamiltonian, "ClockSpec hamiltonian");
    require_finite(hamiltonian, "ClockSpec hamiltonian");
    if (!is_hermitian(hamiltonian, 1e-10)) {
        throw InvalidInput("ClockSpec: hamiltonian is not Hermitian");
    }
    const Eigen::Index n = dim();
    for (std::size_t k = 0; k < dissipator_count(); ++k) {
        const Operator& op = dissipator(k);
        if (op.rows() != n || op.cols() != n) {
            throw InvalidInput("ClockSpec: dissipator " + std::to_string(k) + " has the wrong shape");
        }
        require_finite(op, "ClockSpec dissipator");
    }
    if (initial_state.rows() != n || initial_state.cols() != n) {
        throw InvalidInput("ClockSpec: initial state has the wrong shape");
    }
    require_density_matrix(initial_state, "ClockSpec initial state");
    if (std::abs(initial_state.trace().real() - 1.0) > 1e-10) {
        throw InvalidInput("ClockSpec: initial state must have unit trace");
    }
    if (bath_tags) {
        for (const auto& [k, tag] : *bath_tags) {
            if (k >= dissipator_count()) {
                throw InvalidInput("ClockSpec: bath tag refers to a missing dissipator");
            }
            for (const auto& share : tag) {
                if (!std::isfinite(share.beta) || !std::isfinite(share.weight)) {
                    throw InvalidInput("ClockSpec: non-finite bath tag");
                }
            }
        }
    }
}

bool ClockSpec::has_nonzero_tick() const {
    for (const auto& j : tick_ops) {
        if (j.norm() > 0.0) return true;
    }
    return false;
}

std::vector<StateVector> fourier_basis(int d) {
    if (d < 1) throw InvalidInput("fourier_basis: d must be >= 1");
    Operator f = fourier_matrix(d);
    std::vector<StateVector> out;
    out.reserve(d);
    for (int k = 0; k < d; ++k) out.emplace_back(f.col(k));
    return out;
}

Operator fourier_matrix(int d) {
    if (d < 1) throw InvalidInput("fourier_matrix: d must be >= 1");
    Operator f(d, d);
    const double norm = 1.0 / std::sqrt(static_cast<double>(d));
    for (int j = 0; j < d; ++j) {
        for (int k = 0; k < d; ++k) {
            // reduce jk mod d first so the phase stays accurate for large d
            const long r = (static_cast<long>(j) * k) % d;
            const double ang = -2.0 * std::numbers::pi * static_cast<double>(r) / d;
            f(j, k) = norm * Complex(std::cos(ang), std::sin(ang));
        }
    }
    return f;
}

StateVector time_state(int d, int k) {
    if (k < 0 || k >= d) throw InvalidInput("time_state: index out of range");
    return fourier_matrix(d).col(k);
}

StateVector energy_state(int d, int n) {
    if (d < 1 || n < 0 || n >= d) throw InvalidInput("energy_state: index out of range");
    StateVector e = StateVector::Zero(d);
    e(n) = 1.0;
    return e;
}

ClockSpec build_quasi_ideal(const QuasiIdealParams& p) {
    if (p.d < 1) throw InvalidInput("build_quasi_ideal: d must be >= 1");
    require_positive(p.omega0, "build_quasi_ideal: omega0");
    if (static_cast<int>(p.V.size()) != p.d) {
        throw InvalidInput("build_quasi_ideal: V must have d entries");
    }
    for (double v : p.V) {
        if (!std::isfinite(v) || v < 0.0) {
            throw InvalidInput("build_quasi_ideal: V entries must be finite and non-negative");
        }
    }
    if (p.psi.size() != p.d) throw InvalidInput("build_quasi_ideal: psi must have d entries");
    require_normalized(p.psi, "build_quasi_ideal psi", 1e-10);
    const StateVector psi = p.psi / p.psi.norm();

    ClockSpec c;
    c.hamiltonian = Operator::Zero(p.d, p.d);
    for (int n = 0; n < p.d; ++n) c.hamiltonian(n, n) = p.omega0 * n;
    const Operator f = fourier_matrix(p.d);
    for (int j = 0; j < p.d; ++j) {
        c.tick_ops.push_back(std::sqrt(2.0 * p.V[j]) * ket_bra(psi, f.col(j)));
    }
    c.initial_state = ket_bra(psi, psi);
    return c;
}

ClockSpec build_erlang(int d, double gamma) {
    if (d < 1) throw InvalidInput("build_erlang: d must be >= 1");
    require_positive(gamma, "build_erlang: gamma");
    ClockSpec c;
    c.hamiltonian = Operator::Zero(d, d);
    const double amp = std::sqrt(gamma);
    for (int k = 0; k + 1 < d; ++k) c.noise_ops.push_back(unit_op(d, k + 1, k, amp));
    c.tick_ops.push_back(unit_op(d, 0, d - 1, amp));
    c.initial_state = unit_op(d, 0, 0, 1.0);
    return c;
}

ClockSpec build_thermal_extended(const ThermalExtensionParams& p) {
    const QuasiIdealParams& b = p.base;
    ClockSpec prim = build_quasi_ideal(b);
    const int d = b.d;
    const int L = static_cast<int>(p.channels.size());
    if (L == 0) throw InvalidInput("build_thermal_extended: at least one channel required");

    std::set<int> seen;
    ClockSpec c;
    const int n = d + L;
    c.hamiltonian = Operator::Zero(n, n);
    c.hamiltonian.topLeftCorner(d, d) = prim.hamiltonian;
    c.initial_state = Operator::Zero(n, n);
    c.initial_state.topLeftCorner(d, d) = prim.initial_state;

    const Operator f = fourier_matrix(d);
    std::vector<Operator> emission, absorption;
    for (int j = 0; j < L; ++j) {
        const ThermalChannel& ch = p.channels[j];
        if (ch.m < 0 || ch.m >= d) throw InvalidInput("build_thermal_extended: flux index out of range");
        if (!seen.insert(ch.m).second) {
            throw InvalidInput("build_thermal_extended: duplicate flux index " + std::to_string(ch.m));
        }
        require_positive(ch.omega_gap, "build_thermal_extended: omega_gap");
        if (!std::isfinite(ch.occupation) || ch.occupation < 0.0) {
            throw InvalidInput("build_thermal_extended: occupation must be non-negative");
        }
        if (ch.omega_gap < 10.0 * d * b.omega0) {
            std::ostringstream w;
            w << "channel m=" << ch.m << ": gap " << ch.omega_gap << " below 10*d*omega0";
            c.warnings.push_back(w.str());
        }
        const int s = d + j;
        c.hamiltonian(s, s) = -ch.omega_gap;
        StateVector sec = StateVector::Zero(n);
        sec(s) = 1.0;
        StateVector t = StateVector::Zero(n);
        t.head(d) = f.col(ch.m);
        const double v = b.V[ch.m];
        emission.push_back(std::sqrt(2.0 * v * (1.0 + ch.occupation)) * ket_bra(sec, t));
        absorption.push_back(std::sqrt(2.0 * v * ch.occupation) * ket_bra(t, sec));
    }
    c.tick_ops = emission;
    if (p.absorption_ticks) {
        c.tick_ops.insert(c.tick_ops.end(), absorption.begin(), absorption.end());
    } else {
        c.noise_ops = absorption;
    }
    if (p.beta) {
        std::map<std::size_t, BathTag> tags;
        for (std::size_t k = 0; k < c.dissipator_count(); ++k) {
            tags[k] = {BathShare{"photon", *p.beta, 1.0}};
        }
        c.bath_tags = std::move(tags);
    }
    return c;
}

double planck_occupation(double omega, double beta) {
    if (!std::isfinite(omega) || omega <= 0.0) {
        throw InvalidInput("planck_occupation: omega must be positive");
    }
    if (!std::isfinite(beta) || beta <= 0.0) {
        throw InvalidInput("planck_occupation: beta must be positive");
    }
    return 1.0 / std::expm1(beta * omega);
}

double gamma_coefficient(double omega, double N) {
    if (!std::isfinite(omega) || omega == 0.0) {
        throw InvalidInput("gamma_coefficient: omega must be non-zero");
    }
    const double a = std::abs(omega);
    const double pref = 2.0 * a * a * a / 3.0;
    return omega > 0.0 ? pref * (1.0 + N) : pref * N;
}

double ladder_virtual_beta(const LadderClockParams& p) {
    const double ew = p.E_h - p.E_c;
    if (ew <= 0.0) throw InvalidInput("ladder: E_h must exceed E_c");
    return (p.beta_h * p.E_h - p.beta_c * p.E_c) / ew;
}

namespace {

double ladder_norm(const LadderClockParams& p) {
    return (1.0 + std::exp(-p.beta_h * p.E_h)) * (1.0 + std::exp(-p.beta_c * p.E_c));
}

}  // namespace

double ladder_rate_up(const LadderClockParams& p) {
    return p.coupling * std::exp(-p.beta_h * p.E_h) / ladder_norm(p);
}

double ladder_rate_down(const LadderClockParams& p) {
    return p.coupling * std::exp(-p.beta_c * p.E_c) / ladder_norm(p);
}

ClockSpec build_ladder(const LadderClockParams& p) {
    if (p.d < 2) throw InvalidInput("build_ladder: d must be >= 2");
    for (double x : {p.E_h, p.E_c, p.beta_h, p.beta_c, p.coupling, p.tick_rate}) {
        require_positive(x, "build_ladder: energies, inverse temperatures and rates");
    }
    if (!std::isfinite(p.beta_tick) || p.beta_tick < 0.0) {
        throw InvalidInput("build_ladder: beta_tick must be non-negative");
    }
    const double ew = p.E_h - p.E_c;
    if (ew <= 0.0) throw InvalidInput("build_ladder: E_h must exceed E_c");

    ClockSpec c;
    const int d = p.d;
    const double bv = ladder_virtual_beta(p);
    if (bv >= 0.0) {
        c.warnings.push_back("virtual qubit is not inverted (beta_v >= 0); the ladder drifts downward");
    }
    if (!(p.beta_c > p.beta_h)) {
        c.warnings.push_back("hot bath is not hotter than the cold bath");
    }
    c.hamiltonian = Operator::Zero(d, d);
    for (int k = 0; k < d; ++k) c.hamiltonian(k, k) = ew * k;
    const double up = std::sqrt(ladder_rate_up(p));
    const double down = std::sqrt(ladder_rate_down(p));
    c.tick_ops.push_back(unit_op(d, 0, d - 1, std::sqrt(p.tick_rate)));
    for (int k = 0; k + 1 < d; ++k) c.noise_ops.push_back(unit_op(d, k + 1, k, up));
    for (int k = 0; k + 1 < d; ++k) c.noise_ops.push_back(unit_op(d, k, k + 1, down));
    c.initial_state = unit_op(d, 0, 0, 1.0);

    std::map<std::size_t, BathTag> tags;
    tags[0] = {BathShare{"photon", p.beta_tick, 1.0}};
    const BathTag pair{BathShare{"hot", p.beta_h, p.E_h / ew}, BathShare{"cold", p.beta_c, -p.E_c / ew}};
    for (std::size_t k = 1; k < c.dissipator_count(); ++k) tags[k] = pair;
    c.bath_tags = std::move(tags);
    return c;
}

double virtual_qubit_excitation(const VirtualQubitParams& p) {
    const double zh = 1.0 + std::exp(-p.beta_h * p.E_h);
    const double zc = 1.0 + std::exp(-p.beta_c * p.E_c);
    return std::exp(-p.beta_h * p.E_h) / (zc * zh);
}

double virtual_qubit_delay_density(const VirtualQubitParams& p, double t) {
    for (double x : {p.c, p.g, p.beta_h, p.beta_c, p.E_h, p.E_c}) {
        require_positive(x, "virtual_qubit_delay_density: parameters");
    }
    if (!std::isfinite(t) || t < 0.0) throw InvalidInput("virtual_qubit_delay_density: t must be >= 0");
    const double nbar = virtual_qubit_excitation(p);
    const double s = std::sin(p.g * t);
    const double co = std::cos(p.g * t);
    const double k = p.c * nbar;
    return k * s * s * std::exp(-0.5 * k * t) * std::exp(0.5 * k * s * co / p.g);
}

}  // namespace qclock
