#include "qclock/entropy.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>

#include <boost/numeric/odeint.hpp>

#include "flow.hpp"
#include "qclock/errors.hpp"
#include "qclock/tick_statistics.hpp"

namespace qclock {

namespace {

// Heisenberg-side heat observables, one per bath:
//   O_b = sum_k sum_{shares of k in b} -beta w (L^dagger H L - 1/2 {L^dagger L, H})
std::map<std::string, Operator> heat_observables(const ClockSpec& clock) {
    if (!clock.bath_tags) throw ConfigurationError("entropy: clock carries no bath tags");
    const auto& tags = *clock.bath_tags;
    const Operator& h = clock.hamiltonian;
    std::map<std::string, Operator> out;
    for (std::size_t k = 0; k < clock.dissipator_count(); ++k) {
        const auto it = tags.find(k);
        if (it == tags.end() || it->second.empty()) {
            throw ConfigurationError("entropy: dissipator " + std::to_string(k) + " has no bath tag");
        }
        const Operator& l = clock.dissipator(k);
        const Operator ll = l.adjoint() * l;
        const Operator heat = l.adjoint() * h * l - 0.5 * (ll * h + h * ll);
        for (const BathShare& s : it->second) {
            auto [pos, inserted] = out.try_emplace(s.bath, Operator::Zero(h.rows(), h.cols()));
            pos->second += -s.beta * s.weight * heat;
        }
    }
    for (auto& [name, o] : out) o = 0.5 * (o + o.adjoint()).eval();
    return out;
}

Complex trace_product(const Operator& a, const Operator& b) { return (a.transpose().cwiseProduct(b)).sum(); }

double least_squares_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    return sxx > 0.0 ? sxy / sxx : 0.0;
}

}  // namespace

std::vector<BathEntropy> entropy_flux_rate_by_bath(const ClockSpec& clock, const DensityMatrix& rho) {
    clock.validate();
    if (rho.rows() != clock.dim() || rho.cols() != clock.dim()) {
        throw InvalidInput("entropy_flux_rate: state has the wrong shape");
    }
    require_finite(rho, "entropy_flux_rate");
    std::vector<BathEntropy> out;
    for (const auto& [name, o] : heat_observables(clock)) {
        out.push_back({name, trace_product(o, rho).real()});
    }
    return out;
}

double entropy_flux_rate(const ClockSpec& clock, const DensityMatrix& rho) {
    double total = 0.0;
    for (const auto& b : entropy_flux_rate_by_bath(clock, rho)) total += b.delta_S;
    return total;
}

EntropyResult entropy_per_tick(const ClockSpec& clock, double t_max, double tol) {
    clock.validate();
    if (!clock.has_nonzero_tick()) throw NonTickingClock("clock has no non-zero tick operator");
    if (!(tol > 0.0)) throw InvalidInput("entropy_per_tick: tol must be positive");
    const auto obs = heat_observables(clock);
    std::vector<std::string> names;
    std::vector<Operator> ops;
    for (const auto& [name, o] : obs) {
        names.push_back(name);
        ops.push_back(o);
    }

    const detail::LinearFlow flow = detail::make_flow(clock, ops);
    const detail::FlowIntegral sweep = detail::integrate_flow(flow, t_max, std::min(1e-10, 0.01 * tol));

    EntropyResult res;
    res.mass = sweep.m0;
    for (std::size_t b = 0; b < names.size(); ++b) {
        res.per_bath.push_back({names[b], sweep.nested[b]});
        res.delta_S_tick += sweep.nested[b];
    }

    // int P(t) int_0^t r(s) ds dt = int tr(O rho~(s)) ds, linear in rho~
    try {
        const detail::ReducedClock red = detail::reduce_clock(clock);
        const DensityMatrix y = detail::integrated_state(clock, red);
        double resolvent = 0.0;
        for (const Operator& o : ops) resolvent += trace_product(detail::restrict_to(o, red.index), y).real();
        res.error_estimate = std::abs(resolvent - res.delta_S_tick);
        for (const auto& j : clock.tick_ops) {
            const Operator jj = detail::restrict_to(j.adjoint() * j, red.index);
            res.tick_channel_probability.push_back(trace_product(jj, y).real());
        }
    } catch (const SingularGenerator&) {
        res.error_estimate = std::abs(1.0 - sweep.m0) * std::abs(res.delta_S_tick);
    }
    return res;
}

double entropy_d2_closed_form(double V1, double beta, double omega, double N, double omega_gamma) {
    if (!std::isfinite(V1) || V1 <= 0.0) throw InvalidInput("entropy_d2_closed_form: V1 must be positive");
    if (!std::isfinite(omega) || omega <= 0.0) throw InvalidInput("entropy_d2_closed_form: omega must be positive");
    if (!std::isfinite(N) || N < 0.0) throw InvalidInput("entropy_d2_closed_form: N must be >= 0");
    if (!std::isfinite(beta)) throw InvalidInput("entropy_d2_closed_form: beta must be finite");
    if (beta == 0.0) return 0.0;
    const double v = V1 * (1.0 + N) / omega;

    namespace odeint = boost::numeric::odeint;
    using State = std::array<double, 2>;
    // y0' = P / (2 a0), y1' = P y0 in rescaled time
    auto rhs = [v](const State& y, State& dy, double t) {
        const double p = two_level_density(v, t);
        const double tr = 2.0 * two_level_a0(v, t);
        dy[0] = tr > 1e-300 ? p / tr : 0.0;
        dy[1] = p * y[0];
    };
    State y{0.0, 0.0};
    auto stepper = odeint::make_controlled<odeint::runge_kutta_fehlberg78<State>>(1e-13, 1e-13);
    double t0 = 0.0, t1 = 20.0;
    for (int i = 0; i < 40; ++i) {
        odeint::integrate_adaptive(stepper, rhs, y, t0, t1, 1e-3);
        if (2.0 * two_level_a0(v, t1) < 1e-15) break;
        t0 = t1;
        t1 *= 2.0;
    }
    return beta * (omega_gamma + 0.5 * omega) * y[1];
}

LadderEntropyReport ladder_entropy_comparison(const LadderClockParams& p) {
    LadderEntropyReport rep;
    const double ew = p.E_h - p.E_c;
    rep.Q_h = (p.d - 1) * p.E_h;
    rep.Q_c = (p.d - 1) * p.E_c;
    rep.E_gamma = (p.d - 1) * ew;
    rep.reference = p.beta_c * rep.Q_c - p.beta_h * rep.Q_h;
    const double bias = p.beta_c * p.E_c - p.beta_h * p.E_h;
    if (ew == 0.0 || bias == 0.0) {
        rep.degenerate = true;
        rep.virtual_beta = ew == 0.0 ? std::nan("") : 0.0;
        rep.delta_S = std::nan("");
        rep.R = std::nan("");
        return rep;
    }
    rep.virtual_beta = ladder_virtual_beta(p);
    const ClockSpec clock = build_ladder(p);
    rep.delta_S = entropy_per_tick(clock).delta_S_tick;
    rep.R = precision(clock).R;
    return rep;
}

EntropyCurve entropy_precision_curve(const std::vector<OptimizationResult>& optima, double beta, double channel_gap) {
    if (!std::isfinite(beta) || beta <= 0.0) throw InvalidInput("entropy_precision_curve: beta must be positive");
    if (!std::isfinite(channel_gap) || channel_gap <= 0.0) {
        throw InvalidInput("entropy_precision_curve: channel gap must be positive");
    }
    EntropyCurve curve;
    for (const auto& opt : optima) {
        ThermalExtensionParams p;
        p.base = QuasiIdealParams{opt.d, 1.0, opt.V, opt.psi};
        for (int m = 0; m < opt.d; ++m) {
            if (opt.V[m] > 0.0) p.channels.push_back({m, channel_gap, 0.0});
        }
        p.beta = beta;
        const ClockSpec clock = build_thermal_extended(p);
        const EntropyResult e = entropy_per_tick(clock);
        curve.points.push_back({opt.d, precision(clock).R, e.delta_S_tick, beta});
    }
    std::sort(curve.points.begin(), curve.points.end(),
              [](const EntropyCurvePoint& a, const EntropyCurvePoint& b) { return a.d < b.d; });
    std::vector<double> ds, s, lx, ly;
    double num = 0.0, den = 0.0;
    for (const auto& pt : curve.points) {
        ds.push_back(pt.d);
        s.push_back(pt.delta_S);
        const double excess = pt.delta_S / beta - channel_gap;
        if (excess > 0.0 && pt.R > 0.0) {
            lx.push_back(std::log(excess));
            ly.push_back(std::log(pt.R));
        }
        const double q = 4.0 * excess * excess;
        num += q * pt.R;
        den += q * q;
    }
    if (curve.points.size() >= 2) curve.slope_dS_dd = least_squares_slope(ds, s);
    if (lx.size() >= 2) curve.exponent = least_squares_slope(lx, ly);
    curve.quadratic_coefficient = den > 0.0 ? num / den : 0.0;
    return curve;
}

EntropyCurve entropy_precision_curve(const std::vector<int>& d_range, double beta, double channel_gap,
                                     const OptimizationConfig& config) {
    std::vector<OptimizationResult> optima;
    for (int d : d_range) optima.push_back(optimize_precision(d, config));
    return entropy_precision_curve(optima, beta, channel_gap);
}

}  // namespace qclock
