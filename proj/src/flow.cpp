#include "flow.hpp"

#include <cmath>
#include <queue>

#include <boost/numeric/odeint.hpp>

#include "qclock/errors.hpp"

namespace qclock::detail {

namespace odeint = boost::numeric::odeint;

namespace {

using State = std::vector<double>;

double entry_scale(const ClockSpec& c) {
    double s = c.hamiltonian.cwiseAbs().maxCoeff();
    for (std::size_t k = 0; k < c.dissipator_count(); ++k) {
        s = std::max(s, c.dissipator(k).cwiseAbs().maxCoeff());
    }
    return s > 0.0 ? s : 1.0;
}

bool single_entry(const Operator& op, double tol) {
    int count = 0;
    for (Eigen::Index j = 0; j < op.cols(); ++j) {
        for (Eigen::Index i = 0; i < op.rows(); ++i) {
            if (std::abs(op(i, j)) > tol) ++count;
        }
    }
    return count <= 1;
}

bool diagonal(const Operator& op, double tol) {
    Operator off = op;
    off.diagonal().setZero();
    return off.cwiseAbs().maxCoeff() <= tol;
}

// Hermitian packing: [rho_00..rho_nn, (Re rho_ij, Im rho_ij) for i < j]
Eigen::Index packed_size(Eigen::Index n) { return n * n; }

Eigen::VectorXd pack(const Operator& rho) {
    const Eigen::Index n = rho.rows();
    Eigen::VectorXd y(packed_size(n));
    Eigen::Index p = 0;
    for (Eigen::Index i = 0; i < n; ++i) y(p++) = rho(i, i).real();
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i + 1; j < n; ++j) {
            y(p++) = rho(i, j).real();
            y(p++) = rho(i, j).imag();
        }
    }
    return y;
}

Operator basis_element(Eigen::Index n, Eigen::Index p) {
    Operator e = Operator::Zero(n, n);
    if (p < n) {
        e(p, p) = 1.0;
        return e;
    }
    Eigen::Index q = n;
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i + 1; j < n; ++j) {
            if (q == p) {
                e(i, j) = 1.0;
                e(j, i) = 1.0;
                return e;
            }
            if (q + 1 == p) {
                e(i, j) = Complex(0.0, 1.0);
                e(j, i) = Complex(0.0, -1.0);
                return e;
            }
            q += 2;
        }
    }
    return e;
}

// tr(O rho) as a row acting on packed rho, O Hermitian.
Eigen::RowVectorXd expectation_row(const Operator& o) {
    const Eigen::Index n = o.rows();
    Eigen::RowVectorXd r(packed_size(n));
    Eigen::Index p = 0;
    for (Eigen::Index i = 0; i < n; ++i) r(p++) = o(i, i).real();
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i + 1; j < n; ++j) {
            // O_ji rho_ij + O_ij rho_ji = 2 Re(O_ji rho_ij)
            r(p++) = 2.0 * o(j, i).real();
            r(p++) = -2.0 * o(j, i).imag();
        }
    }
    return r;
}

}  // namespace

bool is_classical(const ClockSpec& clock) {
    const double tol = 1e-14 * entry_scale(clock);
    if (!diagonal(clock.hamiltonian, tol) || !diagonal(clock.initial_state, tol)) return false;
    for (std::size_t k = 0; k < clock.dissipator_count(); ++k) {
        if (!single_entry(clock.dissipator(k), tol)) return false;
    }
    return true;
}

LinearFlow make_flow(const ClockSpec& clock, const std::vector<Operator>& observables) {
    const Eigen::Index n = clock.dim();
    LinearFlow f;
    if (is_classical(clock)) {
        f.classical = true;
        f.G = Eigen::MatrixXd::Zero(n, n);
        f.tick = Eigen::RowVectorXd::Zero(n);
        for (const auto& op : clock.tick_ops) {
            for (Eigen::Index i = 0; i < n; ++i) {
                for (Eigen::Index j = 0; j < n; ++j) {
                    const double w = std::norm(op(j, i));
                    f.G(i, i) -= w;
                    f.tick(i) += w;
                }
            }
        }
        for (const auto& op : clock.noise_ops) {
            for (Eigen::Index i = 0; i < n; ++i) {
                for (Eigen::Index j = 0; j < n; ++j) {
                    const double w = std::norm(op(j, i));
                    f.G(j, i) += w;
                    f.G(i, i) -= w;
                }
            }
        }
        f.y0 = clock.initial_state.diagonal().real();
        f.trace = Eigen::RowVectorXd::Ones(n);
        for (const auto& o : observables) f.observables.push_back(o.diagonal().real().transpose());
        return f;
    }

    Operator k = Operator::Zero(n, n);
    for (const auto& j : clock.tick_ops) k += j.adjoint() * j;
    Operator drift = Complex(0.0, -1.0) * clock.hamiltonian - 0.5 * k;
    for (const auto& l : clock.noise_ops) drift -= 0.5 * l.adjoint() * l;

    const Eigen::Index m = packed_size(n);
    f.G.resize(m, m);
    for (Eigen::Index p = 0; p < m; ++p) {
        Operator e = basis_element(n, p);
        Operator out = drift * e + e * drift.adjoint();
        for (const auto& l : clock.noise_ops) out += l * e * l.adjoint();
        f.G.col(p) = pack(out);
    }
    f.y0 = pack(clock.initial_state);
    f.tick = expectation_row(k);
    f.trace = expectation_row(Operator::Identity(n, n));
    for (const auto& o : observables) f.observables.push_back(expectation_row(o));
    return f;
}

namespace {

struct FlowSystem {
    const LinearFlow* flow;
    Eigen::Index n;
    std::size_t nobs;

    void operator()(const State& x, State& dx, double t) const {
        Eigen::Map<const Eigen::VectorXd> y(x.data(), n);
        Eigen::Map<Eigen::VectorXd> dy(dx.data(), n);
        dy.noalias() = flow->G * y;
        const double p = flow->tick.dot(y);
        dx[n] = p;
        dx[n + 1] = t * p;
        dx[n + 2] = t * t * p;
        const double tr = flow->trace.dot(y);
        for (std::size_t k = 0; k < nobs; ++k) {
            const double rate = tr > 1e-300 ? flow->observables[k].dot(y) / tr : 0.0;
            dx[n + 3 + k] = rate;
            dx[n + 3 + nobs + k] = p * x[n + 3 + k];
        }
    }
};

State initial_state(const LinearFlow& flow) {
    const std::size_t nobs = flow.observables.size();
    State x(flow.y0.size() + 3 + 2 * nobs, 0.0);
    for (Eigen::Index i = 0; i < flow.y0.size(); ++i) x[i] = flow.y0(i);
    return x;
}

double survival_of(const LinearFlow& flow, const State& x) {
    Eigen::Map<const Eigen::VectorXd> y(x.data(), flow.y0.size());
    return flow.trace.dot(y);
}

double initial_step(const LinearFlow& flow) {
    const double g = flow.G.cwiseAbs().maxCoeff();
    return g > 0.0 ? 1e-3 / g : 1e-3;
}

}  // namespace

FlowIntegral integrate_flow(const LinearFlow& flow, double t_hint, double tol) {
    if (!(t_hint > 0.0)) t_hint = 10.0;
    FlowSystem sys{&flow, flow.y0.size(), flow.observables.size()};
    State x = initial_state(flow);
    auto stepper = odeint::make_controlled<odeint::runge_kutta_fehlberg78<State>>(tol, tol);

    double t0 = 0.0;
    double t1 = t_hint;
    double dt = initial_step(flow);
    int doublings = 0;
    while (true) {
        odeint::integrate_adaptive(stepper, sys, x, t0, t1, dt);
        const double s = survival_of(flow, x);
        if (s <= 1e-13 || doublings >= 40) break;
        t0 = t1;
        t1 *= 2.0;
        ++doublings;
    }
    const Eigen::Index n = flow.y0.size();
    FlowIntegral out;
    out.survival = survival_of(flow, x);
    out.t_end = t1;
    out.m0 = x[n];
    out.m1 = x[n + 1];
    out.m2 = x[n + 2];
    const std::size_t nobs = flow.observables.size();
    for (std::size_t k = 0; k < nobs; ++k) out.nested.push_back(x[n + 3 + nobs + k]);
    if (1.0 - out.m0 > 1e-4) {
        throw NonTickingClock("no-tick dynamics retain probability " + std::to_string(1.0 - out.m0) +
                              " that never ticks");
    }
    return out;
}

std::vector<double> sample_flow(const LinearFlow& flow, const std::vector<double>& times, double tol,
                                double& survival_end, double& mass_end) {
    FlowSystem sys{&flow, flow.y0.size(), 0};
    LinearFlow bare = flow;
    bare.observables.clear();
    sys.flow = &bare;
    State x = initial_state(bare);
    std::vector<double> density;
    density.reserve(times.size());
    const Eigen::Index n = bare.y0.size();
    auto observer = [&](const State& s, double) {
        Eigen::Map<const Eigen::VectorXd> y(s.data(), n);
        density.push_back(bare.tick.dot(y));
        survival_end = bare.trace.dot(y);
        mass_end = s[n];
    };
    auto stepper = odeint::make_controlled<odeint::runge_kutta_fehlberg78<State>>(tol, tol);
    odeint::integrate_times(stepper, sys, x, times.begin(), times.end(), initial_step(bare), observer);
    return density;
}

Operator restrict_to(const Operator& op, const std::vector<Eigen::Index>& index) {
    const Eigen::Index m = static_cast<Eigen::Index>(index.size());
    Operator out(m, m);
    for (Eigen::Index a = 0; a < m; ++a) {
        for (Eigen::Index b = 0; b < m; ++b) out(a, b) = op(index[a], index[b]);
    }
    return out;
}

ReducedClock reduce_clock(const ClockSpec& clock) {
    const Eigen::Index n = clock.dim();
    const double tol = 1e-14 * entry_scale(clock);
    Operator k = Operator::Zero(n, n);
    for (const auto& j : clock.tick_ops) k += j.adjoint() * j;

    // undirected couplings from Hermitian generators, directed ones from jumps
    std::vector<const Operator*> sym{&clock.hamiltonian, &k};
    std::vector<Operator> ll;
    for (const auto& l : clock.noise_ops) ll.push_back(l.adjoint() * l);
    for (const auto& m : ll) sym.push_back(&m);

    std::vector<char> in(n, 0);
    std::queue<Eigen::Index> todo;
    for (Eigen::Index i = 0; i < n; ++i) {
        if (clock.initial_state.row(i).cwiseAbs().maxCoeff() > tol) {
            in[i] = 1;
            todo.push(i);
        }
    }
    while (!todo.empty()) {
        const Eigen::Index i = todo.front();
        todo.pop();
        auto visit = [&](Eigen::Index j) {
            if (!in[j]) {
                in[j] = 1;
                todo.push(j);
            }
        };
        for (const Operator* m : sym) {
            for (Eigen::Index j = 0; j < n; ++j) {
                if (std::abs((*m)(j, i)) > tol || std::abs((*m)(i, j)) > tol) visit(j);
            }
        }
        for (const auto& l : clock.noise_ops) {
            for (Eigen::Index j = 0; j < n; ++j) {
                if (std::abs(l(j, i)) > tol) visit(j);
            }
        }
    }

    ReducedClock r;
    for (Eigen::Index i = 0; i < n; ++i) {
        if (in[i]) r.index.push_back(i);
    }
    r.H = restrict_to(clock.hamiltonian, r.index);
    r.K = restrict_to(k, r.index);
    r.rho0 = restrict_to(clock.initial_state, r.index);
    for (const auto& l : clock.noise_ops) {
        Operator lr = restrict_to(l, r.index);
        if (lr.cwiseAbs().maxCoeff() > tol) {
            r.L.push_back(std::move(lr));
            r.noise_free = false;
        }
    }
    return r;
}

}  // namespace qclock::detail
