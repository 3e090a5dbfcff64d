#include "qclock/tick_statistics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <unsupported/Eigen/MatrixFunctions>

#include "flow.hpp"
#include "qclock/errors.hpp"

namespace qclock {

namespace {

constexpr double kOdeTol = 1e-12;

Operator tick_weight_of(const ClockSpec& c) {
    Operator k = Operator::Zero(c.dim(), c.dim());
    for (const auto& j : c.tick_ops) k += j.adjoint() * j;
    return k;
}

void require_ticking(const ClockSpec& clock) {
    clock.validate();
    if (!clock.has_nonzero_tick()) throw NonTickingClock("clock has no non-zero tick operator");
}

// (I kron A) + (conj(B) kron I) plus jump terms, column-major vec.
Operator vectorized(const Operator& drift, const std::vector<Operator>& noise) {
    const Eigen::Index n = drift.rows();
    Operator big = Operator::Zero(n * n, n * n);
    for (Eigen::Index j = 0; j < n; ++j) {
        big.block(j * n, j * n, n, n) += drift;
        for (Eigen::Index l = 0; l < n; ++l) {
            big.block(j * n, l * n, n, n).diagonal().array() += std::conj(drift(j, l));
        }
    }
    for (const auto& op : noise) {
        for (Eigen::Index j = 0; j < n; ++j) {
            for (Eigen::Index l = 0; l < n; ++l) {
                const Complex c = std::conj(op(j, l));
                if (c != Complex(0.0)) big.block(j * n, l * n, n, n) += c * op;
            }
        }
    }
    return big;
}

Complex trace_product(const Operator& a, const Operator& b) { return (a.transpose().cwiseProduct(b)).sum(); }

TickStatistics finish(const Moments& m) {
    if (std::abs(m.mass - 1.0) > 1e-6) {
        std::ostringstream msg;
        msg << "total tick probability " << m.mass << " differs from 1";
        throw NonTickingClock(msg.str());
    }
    TickStatistics s;
    s.mu = m.mu;
    s.variance = m.chi - m.mu * m.mu;
    s.mass = m.mass;
    if (!(s.variance > 0.0)) throw SingularGenerator("non-positive waiting-time variance");
    s.R = m.mu * m.mu / s.variance;
    return s;
}

double sinhc_sq_arg(double z) {
    // sinh(x)/x with z = x^2, analytic in z
    if (std::abs(z) < 1e-8) return 1.0 + z / 6.0 + z * z / 120.0;
    if (z > 0.0) {
        const double x = std::sqrt(z);
        return std::sinh(x) / x;
    }
    const double x = std::sqrt(-z);
    return std::sin(x) / x;
}

double cosh_sq_arg(double z) {
    if (z >= 0.0) return std::cosh(std::sqrt(z));
    return std::cos(std::sqrt(-z));
}

}  // namespace

NoTickGenerator::NoTickGenerator(const ClockSpec& clock) {
    clock.validate();
    k_ = tick_weight_of(clock);
    drift_ = Complex(0.0, -1.0) * clock.hamiltonian - 0.5 * k_;
    for (const auto& l : clock.noise_ops) drift_ -= 0.5 * l.adjoint() * l;
    noise_ = clock.noise_ops;
}

DensityMatrix NoTickGenerator::apply(const DensityMatrix& rho) const {
    DensityMatrix out = drift_ * rho + rho * drift_.adjoint();
    for (const auto& l : noise_) out += l * rho * l.adjoint();
    return out;
}

Operator NoTickGenerator::superoperator() const { return vectorized(drift_, noise_); }

double NoTickGenerator::tick_rate(const DensityMatrix& rho) const { return trace_product(k_, rho).real(); }

NoTickGenerator no_tick_generator(const ClockSpec& clock) { return NoTickGenerator(clock); }

DelayFunctionSamples delay_density_ode(const ClockSpec& clock, double t_max, int n_steps) {
    require_ticking(clock);
    if (!std::isfinite(t_max) || t_max <= 0.0) throw InvalidInput("delay_density_ode: t_max must be positive");
    if (n_steps < 1) throw InvalidInput("delay_density_ode: n_steps must be >= 1");
    const detail::LinearFlow flow = detail::make_flow(clock);

    DelayFunctionSamples out;
    double survival = 1.0;
    double mass = 0.0;
    for (int attempt = 0; attempt <= 40; ++attempt) {
        out.times.resize(n_steps + 1);
        for (int i = 0; i <= n_steps; ++i) out.times[i] = t_max * i / n_steps;
        out.density = detail::sample_flow(flow, out.times, kOdeTol, survival, mass);
        if (survival <= 1e-6) break;
        t_max *= 2.0;
    }
    out.total_mass = mass;
    if (1.0 - mass > 1e-4) {
        throw NonTickingClock("tick probability deficit " + std::to_string(1.0 - mass) + " after extension");
    }
    return out;
}

double survival_trace(const ClockSpec& clock, double t) {
    clock.validate();
    if (!std::isfinite(t) || t < 0.0) throw InvalidInput("survival_trace: t must be >= 0");
    if (t == 0.0) return clock.initial_state.trace().real();
    if (clock.noise_ops.empty()) {
        const NoTickGenerator gen(clock);
        const Operator u = matrix_exp(gen.drift(), t);
        return (u * clock.initial_state * u.adjoint()).trace().real();
    }
    const detail::LinearFlow flow = detail::make_flow(clock);
    const Eigen::MatrixXd e = (t * flow.G).exp();
    return flow.trace.dot(e * flow.y0);
}

TickStatistics precision_ode(const ClockSpec& clock) {
    require_ticking(clock);
    const detail::LinearFlow flow = detail::make_flow(clock);
    const detail::FlowIntegral r = detail::integrate_flow(flow, 10.0, kOdeTol);
    return finish(Moments{r.m1, r.m2, r.m0});
}

MomentPath moment_path(const ClockSpec& clock) {
    const detail::ReducedClock red = detail::reduce_clock(clock);
    if (red.noise_free) return MomentPath::Sylvester;
    ClockSpec sub;
    sub.hamiltonian = red.H;
    sub.initial_state = red.rho0;
    sub.noise_ops = red.L;
    Operator k_off = red.K;
    k_off.diagonal().setZero();
    const double scale = std::max(1.0, red.K.cwiseAbs().maxCoeff());
    if (k_off.cwiseAbs().maxCoeff() <= 1e-14 * scale && detail::is_classical(sub)) return MomentPath::Classical;
    return MomentPath::Vectorized;
}

Moments moments_fast(const ClockSpec& clock) {
    require_ticking(clock);
    const detail::ReducedClock red = detail::reduce_clock(clock);
    const Eigen::Index n = static_cast<Eigen::Index>(red.index.size());
    const MomentPath path = moment_path(clock);
    Moments m;

    if (path == MomentPath::Sylvester) {
        // M(X) = A X + X A^dagger with A = iH - V
        const Operator a = Complex(0.0, 1.0) * red.H - 0.5 * red.K;
        const SylvesterSolver solver(a);
        const Operator x1 = solver.solve(Operator::Identity(n, n));
        const Operator x2 = solver.solve(x1);
        const Operator xm = solver.solve(red.K);
        m.mu = -trace_product(x1, red.rho0).real();
        m.chi = 2.0 * trace_product(x2, red.rho0).real();
        m.mass = -trace_product(xm, red.rho0).real();
        return m;
    }

    if (path == MomentPath::Classical) {
        Eigen::MatrixXd q = Eigen::MatrixXd::Zero(n, n);
        Eigen::VectorXd k = red.K.diagonal().real();
        q.diagonal() -= k;
        for (const auto& l : red.L) {
            for (Eigen::Index i = 0; i < n; ++i) {
                for (Eigen::Index j = 0; j < n; ++j) {
                    const double w = std::norm(l(j, i));
                    q(j, i) += w;
                    q(i, i) -= w;
                }
            }
        }
        const Eigen::PartialPivLU<Eigen::MatrixXd> lu(q);
        if (lu.rcond() < 1e-14) throw SingularGenerator("population generator is singular");
        const Eigen::VectorXd p0 = red.rho0.diagonal().real();
        const Eigen::VectorXd y1 = lu.solve(p0);
        const Eigen::VectorXd y2 = lu.solve(y1);
        const Eigen::VectorXd y3 = lu.solve(y2);
        m.mass = -k.dot(y1);
        m.mu = k.dot(y2);
        m.chi = -2.0 * k.dot(y3);
        return m;
    }

    Operator drift = Complex(0.0, -1.0) * red.H - 0.5 * red.K;
    for (const auto& l : red.L) drift -= 0.5 * l.adjoint() * l;
    const Operator big = vectorized(drift, red.L);
    const Eigen::PartialPivLU<Operator> lu(big);
    if (lu.rcond() < 1e-14) throw SingularGenerator("no-tick generator is singular");
    const StateVector r0 = Eigen::Map<const StateVector>(red.rho0.data(), n * n);
    const StateVector y1 = lu.solve(r0);
    const StateVector y2 = lu.solve(y1);
    const StateVector y3 = lu.solve(y2);
    auto tick_of = [&](const StateVector& y) {
        return trace_product(red.K, Eigen::Map<const Operator>(y.data(), n, n)).real();
    };
    m.mass = -tick_of(y1);
    m.mu = tick_of(y2);
    m.chi = -2.0 * tick_of(y3);
    return m;
}

TickStatistics precision(const ClockSpec& clock) { return finish(moments_fast(clock)); }

DensityMatrix detail::integrated_state(const ClockSpec& clock, const detail::ReducedClock& red) {
    const Eigen::Index n = static_cast<Eigen::Index>(red.index.size());
    const MomentPath path = moment_path(clock);
    if (path == MomentPath::Sylvester) {
        // A' Y + Y A'^dagger = -rho0 with A' = -iH - V
        const Operator a = Complex(0.0, -1.0) * red.H - 0.5 * red.K;
        return SylvesterSolver(a).solve(-red.rho0);
    }
    if (path == MomentPath::Classical) {
        Eigen::MatrixXd q = Eigen::MatrixXd::Zero(n, n);
        q.diagonal() -= red.K.diagonal().real();
        for (const auto& l : red.L) {
            for (Eigen::Index i = 0; i < n; ++i) {
                for (Eigen::Index j = 0; j < n; ++j) {
                    const double w = std::norm(l(j, i));
                    q(j, i) += w;
                    q(i, i) -= w;
                }
            }
        }
        const Eigen::PartialPivLU<Eigen::MatrixXd> lu(q);
        if (lu.rcond() < 1e-14) throw SingularGenerator("population generator is singular");
        const Eigen::VectorXd y = -lu.solve(Eigen::VectorXd(red.rho0.diagonal().real()));
        return y.cast<Complex>().asDiagonal();
    }
    Operator drift = Complex(0.0, -1.0) * red.H - 0.5 * red.K;
    for (const auto& l : red.L) drift -= 0.5 * l.adjoint() * l;
    const Eigen::PartialPivLU<Operator> lu(vectorized(drift, red.L));
    if (lu.rcond() < 1e-14) throw SingularGenerator("no-tick generator is singular");
    const StateVector r0 = Eigen::Map<const StateVector>(red.rho0.data(), n * n);
    const StateVector y = -lu.solve(r0);
    return Eigen::Map<const Operator>(y.data(), n, n);
}

InvertibilityReport check_invertibility(const ClockSpec& clock) {
    clock.validate();
    InvertibilityReport rep;
    const Operator v = 0.5 * tick_weight_of(clock);
    const Operator a = Complex(0.0, 1.0) * clock.hamiltonian - v;
    rep.eigenvalues = spectrum(a);

    Eigen::SelfAdjointEigenSolver<Operator> es(clock.hamiltonian);
    for (Eigen::Index n = 0; n < clock.dim(); ++n) {
        const StateVector e = es.eigenvectors().col(n);
        const double shift = (e.adjoint() * v * e)(0, 0).real();
        rep.perturbative.emplace_back(-shift, es.eigenvalues()(n));
    }
    std::sort(rep.perturbative.begin(), rep.perturbative.end(), [](Complex x, Complex y) {
        if (x.real() != y.real()) return x.real() < y.real();
        return x.imag() < y.imag();
    });
    double max_real = -std::numeric_limits<double>::infinity();
    rep.min_abs_real = std::numeric_limits<double>::infinity();
    for (const Complex& z : rep.eigenvalues) {
        max_real = std::max(max_real, z.real());
        rep.min_abs_real = std::min(rep.min_abs_real, std::abs(z.real()));
    }
    rep.singular = max_real > -1e-12;
    return rep;
}

namespace {

// c = cosh(sqrt z), s = (t/2) sinh(sqrt z)/sqrt z with z = t^2 (V1^2 - 1)/4,
// both scaled by exp(-sqrt z); the returned exponent restores exp(-V1 t) c^2.
struct TwoLevelParts {
    double c;
    double s;
    double log_weight;
};

TwoLevelParts two_level_parts(double V1, double t) {
    const double z = 0.25 * t * t * (V1 * V1 - 1.0);
    if (z <= 1.0) return {cosh_sq_arg(z), 0.5 * t * sinhc_sq_arg(z), -V1 * t};
    const double x = std::sqrt(z);
    const double e = std::exp(-2.0 * x);
    return {0.5 * (1.0 + e), 0.5 * t * 0.5 * (1.0 - e) / x, -V1 * t + 2.0 * x};
}

}  // namespace

double two_level_density(double V1, double t) {
    if (!std::isfinite(V1) || V1 <= 0.0) throw InvalidInput("two_level_density: V1 must be positive");
    if (!std::isfinite(t) || t < 0.0) throw InvalidInput("two_level_density: t must be >= 0");
    const TwoLevelParts p = two_level_parts(V1, t);
    return 2.0 * V1 * std::exp(p.log_weight) * p.s * p.s;
}

double two_level_a0(double V1, double t) {
    if (!std::isfinite(V1) || V1 <= 0.0) throw InvalidInput("two_level_a0: V1 must be positive");
    if (!std::isfinite(t) || t < 0.0) throw InvalidInput("two_level_a0: t must be >= 0");
    const TwoLevelParts p = two_level_parts(V1, t);
    return std::exp(p.log_weight) * (0.5 * p.c * p.c + V1 * p.c * p.s + 0.5 * (V1 * V1 + 1.0) * p.s * p.s);
}

}  // namespace qclock
