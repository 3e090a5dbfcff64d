#include "qclock/optimizer.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <Eigen/Eigenvalues>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <thread>

#include "qclock/errors.hpp"
#include "qclock/tick_statistics.hpp"

namespace qclock {

namespace {

using Vec = Eigen::VectorXd;
using Objective = std::function<double(const Vec&)>;

std::mt19937_64 make_rng(std::uint64_t seed, std::uint64_t stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
    return std::mt19937_64(seq);
}

struct LocalResult {
    Vec x;
    double f = std::numeric_limits<double>::infinity();
    int evaluations = 0;
};

// Nelder-Mead with dimension-adaptive coefficients (Gao and Han, 2012).
LocalResult nelder_mead(const Objective& f, const Vec& x0, const Vec& step, double tol, int max_evals) {
    const Eigen::Index n = x0.size();
    const double nd = static_cast<double>(n);
    const double alpha = 1.0;
    const double gamma = 1.0 + 2.0 / nd;
    const double rho = 0.75 - 1.0 / (2.0 * nd);
    const double sigma = 1.0 - 1.0 / nd;

    std::vector<Vec> pts(n + 1, x0);
    std::vector<double> vals(n + 1);
    LocalResult out;
    for (Eigen::Index i = 0; i < n; ++i) pts[i + 1](i) += step(i);
    for (Eigen::Index i = 0; i <= n; ++i) vals[i] = f(pts[i]);
    out.evaluations = static_cast<int>(n + 1);

    std::vector<Eigen::Index> order(n + 1);
    while (out.evaluations < max_evals) {
        for (Eigen::Index i = 0; i <= n; ++i) order[i] = i;
        std::sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) { return vals[a] < vals[b]; });
        const double best = vals[order[0]];
        const double worst = vals[order[n]];
        double diam = 0.0;
        for (Eigen::Index i = 1; i <= n; ++i) {
            diam = std::max(diam, (pts[order[i]] - pts[order[0]]).cwiseAbs().maxCoeff());
        }
        if (std::isfinite(worst) && std::abs(worst - best) <= tol * (std::abs(best) + 1e-30) && diam < 1e-6) break;
        if (diam < 1e-12) break;

        Vec centroid = Vec::Zero(n);
        for (Eigen::Index i = 0; i < n; ++i) centroid += pts[order[i]];
        centroid /= nd;
        const Eigen::Index w = order[n];
        const double second = vals[order[n - 1]];

        const Vec xr = centroid + alpha * (centroid - pts[w]);
        const double fr = f(xr);
        ++out.evaluations;
        if (fr < best) {
            const Vec xe = centroid + gamma * (xr - centroid);
            const double fe = f(xe);
            ++out.evaluations;
            if (fe < fr) {
                pts[w] = xe;
                vals[w] = fe;
            } else {
                pts[w] = xr;
                vals[w] = fr;
            }
            continue;
        }
        if (fr < second) {
            pts[w] = xr;
            vals[w] = fr;
            continue;
        }
        const bool outside = fr < vals[w];
        const Vec xc = outside ? Vec(centroid + rho * (xr - centroid)) : Vec(centroid + rho * (pts[w] - centroid));
        const double fc = f(xc);
        ++out.evaluations;
        if (fc < (outside ? fr : vals[w])) {
            pts[w] = xc;
            vals[w] = fc;
            continue;
        }
        const Vec xb = pts[order[0]];
        for (Eigen::Index i = 1; i <= n; ++i) {
            const Eigen::Index k = order[i];
            pts[k] = xb + sigma * (pts[k] - xb);
            vals[k] = f(pts[k]);
            ++out.evaluations;
        }
    }
    const auto it = std::min_element(vals.begin(), vals.end());
    out.f = *it;
    out.x = pts[static_cast<std::size_t>(it - vals.begin())];
    return out;
}

// Parameter layout: u (one angle per allowed channel, V = bound sin^2 u), then
// psi as Re psi_0 followed by (Re, Im) of psi_1..psi_{d-1}.
struct Layout {
    int d;
    double bound;
    std::vector<int> channels;

    Eigen::Index size() const { return static_cast<Eigen::Index>(channels.size()) + 2 * d - 1; }

    std::vector<double> V(const Vec& x) const {
        std::vector<double> v(d, 0.0);
        for (std::size_t c = 0; c < channels.size(); ++c) {
            const double s = std::sin(x(static_cast<Eigen::Index>(c)));
            v[channels[c]] = bound * s * s;
        }
        return v;
    }

    StateVector psi(const Vec& x) const {
        const Eigen::Index o = static_cast<Eigen::Index>(channels.size());
        StateVector p(d);
        p(0) = x(o);
        for (int n = 1; n < d; ++n) p(n) = Complex(x(o + 2 * n - 1), x(o + 2 * n));
        const double nn = p.norm();
        if (!(nn > 0.0)) return p;
        return p / nn;
    }

    Vec encode(const std::vector<double>& v, const StateVector& psi) const {
        Vec x(size());
        for (std::size_t c = 0; c < channels.size(); ++c) {
            const double r = std::clamp(v[channels[c]] / bound, 0.0, 1.0);
            x(static_cast<Eigen::Index>(c)) = std::asin(std::sqrt(r));
        }
        // rotate the global phase so psi_0 is real and non-negative
        const Complex ph = std::abs(psi(0)) > 0.0 ? std::conj(psi(0)) / std::abs(psi(0)) : Complex(1.0);
        const Eigen::Index o = static_cast<Eigen::Index>(channels.size());
        x(o) = std::abs(psi(0));
        for (int n = 1; n < d; ++n) {
            const Complex z = ph * psi(n);
            x(o + 2 * n - 1) = z.real();
            x(o + 2 * n) = z.imag();
        }
        return x;
    }
};

double safe_precision(const std::vector<double>& v, const StateVector& psi) {
    if (!(psi.norm() > 0.0)) return std::numeric_limits<double>::quiet_NaN();
    return quasi_ideal_precision(v, psi);
}

Vec seed_point(const Layout& lay, std::mt19937_64& rng, int restart) {
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::normal_distribution<double> normal(0.0, 1.0);
    const int d = lay.d;
    const int nc = static_cast<int>(lay.channels.size());
    std::vector<double> v(d, 0.0);
    StateVector psi(d);
    if (restart % 4 == 0) {
        for (int c : lay.channels) v[c] = lay.bound * unif(rng);
        for (int n = 0; n < d; ++n) psi(n) = Complex(normal(rng), normal(rng));
    } else {
        // decreasing V profile on a short run of allowed channels, and a bell
        // in energy whose linear phase places the state about half a period
        // ahead of the decay window
        const int run = 1 + static_cast<int>(unif(rng) * std::max(1, std::min(nc, d / 3 + 1)));
        const int first = static_cast<int>(unif(rng) * nc);
        double amp = std::min(lay.bound, 1.0 + 3.0 * unif(rng));
        const double ratio = 0.3 + 0.5 * unif(rng);
        for (int j = 0; j < run; ++j) {
            v[lay.channels[(first + j) % nc]] = amp;
            amp *= ratio;
        }
        const double width = (0.15 + 0.25 * unif(rng)) * d;
        const double centre = 0.5 * (d - 1);
        const double k0 = lay.channels[first] - 0.5 * d - 2.0 * unif(rng) + 0.5;
        for (int n = 0; n < d; ++n) {
            const double g = std::exp(-0.5 * (n - centre) * (n - centre) / (width * width));
            psi(n) = g * std::polar(1.0, -2.0 * std::numbers::pi * n * k0 / d);
        }
    }
    psi /= psi.norm();
    return lay.encode(v, psi);
}

struct RestartOutcome {
    RestartRecord record;
    Vec x;
    double R = std::numeric_limits<double>::quiet_NaN();
};

RestartOutcome run_restart(const Layout& lay, const OptimizationConfig& cfg, int index) {
    auto rng = make_rng(cfg.seed, static_cast<std::uint64_t>(index));
    const Vec x0 = seed_point(lay, rng, index);
    const Objective obj = [&lay](const Vec& x) {
        const double r = safe_precision(lay.V(x), lay.psi(x));
        return std::isfinite(r) ? -r : std::numeric_limits<double>::infinity();
    };
    const Eigen::Index n = lay.size();
    const int max_evals = cfg.max_evaluations > 0 ? cfg.max_evaluations : static_cast<int>(3000 * n);

    RestartOutcome out;
    out.record.index = index;
    out.record.start_R = -obj(x0);
    Vec x = x0;
    double fx = -out.record.start_R;
    double step_scale = 0.3;
    int evals = 1;
    // restart the simplex around the incumbent until it stops improving
    for (int round = 0; round < 8 && evals < max_evals; ++round) {
        Vec step = Vec::Constant(n, step_scale);
        const LocalResult r = nelder_mead(obj, x, step, cfg.tolerance, max_evals - evals);
        evals += r.evaluations;
        const bool improved = r.f < fx - cfg.tolerance * std::abs(fx);
        if (r.f < fx) {
            x = r.x;
            fx = r.f;
        }
        if (!improved && round > 0) break;
        step_scale = std::max(0.02, 0.5 * step_scale);
    }
    out.record.evaluations = evals;
    out.x = x;
    out.R = std::isfinite(fx) ? -fx : std::numeric_limits<double>::quiet_NaN();
    out.record.final_R = out.R;
    return out;
}

int resolve_threads(int requested, int tasks) {
    int t = requested > 0 ? requested : static_cast<int>(std::thread::hardware_concurrency());
    return std::clamp(t, 1, std::max(1, tasks));
}

template <class Fn>
void parallel_for(int count, int threads, Fn&& fn) {
    if (threads <= 1) {
        for (int i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    std::exception_ptr err;
    std::atomic<bool> failed{false};
    for (int t = 0; t < threads; ++t) {
        pool.emplace_back([&] {
            for (int i = next++; i < count; i = next++) {
                try {
                    fn(i);
                } catch (...) {
                    if (!failed.exchange(true)) err = std::current_exception();
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    if (err) std::rethrow_exception(err);
}

OptimizationResult optimize_channels(int d, const std::vector<int>& channels, const OptimizationConfig& cfg,
                                     int restarts, std::uint64_t seed) {
    Layout lay{d, cfg.bound > 0.0 ? cfg.bound : static_cast<double>(d), channels};
    OptimizationConfig local = cfg;
    local.seed = seed;
    std::vector<RestartOutcome> outcomes(restarts);
    parallel_for(restarts, resolve_threads(cfg.threads, restarts),
                 [&](int i) { outcomes[i] = run_restart(lay, local, i); });

    OptimizationResult res;
    res.d = d;
    res.channels = channels;
    int best = -1;
    for (int i = 0; i < restarts; ++i) {
        res.trace.push_back(outcomes[i].record);
        if (std::isfinite(outcomes[i].R) && (best < 0 || outcomes[i].R > outcomes[best].R)) best = i;
    }
    if (best < 0) throw OptimizationFailed("every restart hit a singular generator");
    res.V = lay.V(outcomes[best].x);
    res.psi = lay.psi(outcomes[best].x);
    res.R = quasi_ideal_precision(res.V, res.psi);
    return res;
}

void check_config(int d, const OptimizationConfig& cfg) {
    if (d < 1) throw InvalidInput("optimizer: d must be >= 1");
    if (cfg.restarts < 0) throw InvalidInput("optimizer: restarts must be >= 0");
    if (!std::isfinite(cfg.bound) || cfg.bound < 0.0) throw InvalidInput("optimizer: bound must be positive");
    if (!(cfg.tolerance > 0.0)) throw InvalidInput("optimizer: tolerance must be positive");
    for (int c : cfg.channels) {
        if (c < 0 || c >= d) throw InvalidInput("optimizer: channel index out of range");
    }
}

std::vector<int> all_channels(int d, const std::vector<int>& requested) {
    std::vector<int> ch = requested;
    if (ch.empty()) {
        for (int i = 0; i < d; ++i) ch.push_back(i);
    }
    std::sort(ch.begin(), ch.end());
    ch.erase(std::unique(ch.begin(), ch.end()), ch.end());
    return ch;
}

}  // namespace

double quasi_ideal_precision(const std::vector<double>& V, const StateVector& psi) {
    const int d = static_cast<int>(V.size());
    if (psi.size() != d || d < 1) throw InvalidInput("quasi_ideal_precision: size mismatch");
    thread_local int cached_d = 0;
    thread_local Operator f;
    if (cached_d != d) {
        f = fourier_matrix(d);
        cached_d = d;
    }
    Operator a = -(f * Eigen::Map<const Eigen::VectorXd>(V.data(), d).cast<Complex>().asDiagonal() * f.adjoint());
    for (int n = 0; n < d; ++n) a(n, n) += Complex(0.0, static_cast<double>(n));
    const Eigen::ComplexSchur<Operator> schur(a);
    if (schur.info() != Eigen::Success) return std::numeric_limits<double>::quiet_NaN();
    const Operator& t = schur.matrixT();
    for (int i = 0; i < d; ++i) {
        if (t(i, i).real() > -1e-12) return std::numeric_limits<double>::quiet_NaN();
    }
    // In Schur coordinates T Y + Y T^* = U^* C U, and U^* I U = I.
    auto solve = [&](const Operator& rhs) {
        Operator y(d, d);
        for (int k = d - 1; k >= 0; --k) {
            for (int i = d - 1; i >= 0; --i) {
                Complex s = rhs(i, k);
                for (int l = i + 1; l < d; ++l) s -= t(i, l) * y(l, k);
                for (int j = k + 1; j < d; ++j) s -= y(i, j) * std::conj(t(k, j));
                y(i, k) = s / (t(i, i) + std::conj(t(k, k)));
            }
        }
        return y;
    };
    const Operator y1 = solve(Operator::Identity(d, d));
    const Operator y2 = solve(y1);
    const StateVector w = schur.matrixU().adjoint() * psi;
    const double mu = -(w.adjoint() * y1 * w)(0, 0).real();
    const double chi = 2.0 * (w.adjoint() * y2 * w)(0, 0).real();
    const double var = chi - mu * mu;
    if (!(var > 0.0) || !std::isfinite(mu)) return std::numeric_limits<double>::quiet_NaN();
    return mu * mu / var;
}

OptimizationResult optimize_precision(int d, const OptimizationConfig& config) {
    check_config(d, config);
    const auto start = std::chrono::steady_clock::now();
    const int restarts = config.restarts > 0 ? config.restarts : 50 * d;
    OptimizationResult res = optimize_channels(d, all_channels(d, config.channels), config, restarts, config.seed);
    res.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return res;
}

OptimizationResult optimize_restricted(int d, int k, const OptimizationConfig& config) {
    check_config(d, config);
    if (k < 1 || k > d) throw InvalidInput("optimize_restricted: need 1 <= k <= d");
    if (k == d) return optimize_precision(d, config);
    const auto start = std::chrono::steady_clock::now();

    std::vector<std::vector<int>> sets;
    if (k == 1) {
        sets.push_back({0});
    } else if (k == 2) {
        for (int j = 1; j <= d / 2; ++j) sets.push_back({0, j});
    } else {
        std::vector<int> contiguous(k);
        for (int i = 0; i < k; ++i) contiguous[i] = i;
        sets.push_back(contiguous);
        auto rng = make_rng(config.seed, 0x5e75ULL);
        for (int extra = 0; extra < std::min(d, 8); ++extra) {
            std::vector<int> pool;
            for (int i = 1; i < d; ++i) pool.push_back(i);
            std::shuffle(pool.begin(), pool.end(), rng);
            std::vector<int> s{0};
            s.insert(s.end(), pool.begin(), pool.begin() + (k - 1));
            std::sort(s.begin(), s.end());
            if (std::find(sets.begin(), sets.end(), s) == sets.end()) sets.push_back(s);
        }
    }
    const int total = config.restarts > 0 ? config.restarts : 50 * d;
    const int per_set = std::max(2, total / static_cast<int>(sets.size()));

    OptimizationResult best;
    bool have = false;
    for (std::size_t s = 0; s < sets.size(); ++s) {
        OptimizationResult r;
        try {
            r = optimize_channels(d, sets[s], config, per_set, config.seed + 0x9e3779b97f4a7c15ULL * (s + 1));
        } catch (const OptimizationFailed&) {
            continue;
        }
        if (!have || r.R > best.R) {
            std::vector<RestartRecord> trace = have ? best.trace : std::vector<RestartRecord>{};
            trace.insert(trace.end(), r.trace.begin(), r.trace.end());
            best = std::move(r);
            best.trace = std::move(trace);
            have = true;
        } else {
            best.trace.insert(best.trace.end(), r.trace.begin(), r.trace.end());
        }
    }
    if (!have) throw OptimizationFailed("every channel set hit a singular generator");
    best.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return best;
}

namespace {

struct Perturbation {
    StateVector phi;     // unit, orthogonal to psi_opt
    Eigen::VectorXd dv;  // unit 1-norm direction, non-negative where V_opt = 0
};

Perturbation draw_perturbation(const OptimizationResult& opt, std::mt19937_64& rng) {
    const int d = opt.d;
    std::normal_distribution<double> normal(0.0, 1.0);
    std::exponential_distribution<double> expo(1.0);
    std::bernoulli_distribution coin(0.5);
    Perturbation p;
    p.phi.resize(d);
    if (d == 1) {
        p.phi = opt.psi;
    } else {
        for (int i = 0; i < 20; ++i) {
            for (int n = 0; n < d; ++n) p.phi(n) = Complex(normal(rng), normal(rng));
            p.phi -= opt.psi * (opt.psi.adjoint() * p.phi)(0, 0);
            if (p.phi.norm() > 1e-8) break;
        }
        p.phi /= p.phi.norm();
    }
    p.dv.resize(d);
    for (int n = 0; n < d; ++n) {
        const double mag = expo(rng);
        const bool neg = opt.V[n] > 0.0 && coin(rng);
        p.dv(n) = neg ? -mag : mag;
    }
    p.dv /= p.dv.cwiseAbs().sum();
    return p;
}

double perturbed_precision(const OptimizationResult& opt, const Perturbation& p, double df, double dv_budget) {
    const int d = opt.d;
    StateVector psi = opt.psi;
    if (df > 0.0 && d > 1) psi = std::sqrt(1.0 - df) * opt.psi + std::sqrt(df) * p.phi;
    std::vector<double> v = opt.V;
    if (dv_budget > 0.0) {
        double l1 = 0.0;
        for (double x : opt.V) l1 += x;
        // clip entries that would go negative and move the lost budget onto
        // the increasing entries, keeping ||dV||_1 fixed
        const double budget = dv_budget * l1;
        for (int n = 0; n < d; ++n) v[n] = opt.V[n] + budget * p.dv(n);
        double deficit = 0.0;
        for (int n = 0; n < d; ++n) {
            if (v[n] < 0.0) {
                deficit += -v[n];
                v[n] = 0.0;
            }
        }
        if (deficit > 0.0) {
            double pos = 0.0;
            for (int n = 0; n < d; ++n) pos += p.dv(n) > 0.0 ? p.dv(n) : 0.0;
            for (int n = 0; n < d; ++n) {
                if (pos == 0.0) {
                    v[n] += deficit / d;
                } else if (p.dv(n) > 0.0) {
                    v[n] += deficit * p.dv(n) / pos;
                }
            }
        }
    }
    return quasi_ideal_precision(v, psi);
}

}  // namespace

RobustnessResult robustness_worst_case(const OptimizationResult& optimum, const RobustnessConfig& cfg) {
    if (!(cfg.fidelity_deficit >= 0.0 && cfg.fidelity_deficit < 1.0)) {
        throw InvalidInput("robustness: fidelity deficit must lie in [0, 1)");
    }
    if (!(cfg.v_budget >= 0.0) || !std::isfinite(cfg.v_budget)) throw InvalidInput("robustness: budget must be >= 0");
    if (cfg.samples < 1) throw InvalidInput("robustness: need at least one sample");
    RobustnessResult out;
    out.R_optimal = quasi_ideal_precision(optimum.V, optimum.psi);
    out.R_worst = out.R_optimal;
    if (cfg.fidelity_deficit == 0.0 && cfg.v_budget == 0.0) {
        out.samples = 1;
        return out;
    }
    for (int i = 0; i < cfg.samples; ++i) {
        auto rng = make_rng(cfg.seed, static_cast<std::uint64_t>(i));
        const Perturbation p = draw_perturbation(optimum, rng);
        const double r = perturbed_precision(optimum, p, cfg.fidelity_deficit, cfg.v_budget);
        if (std::isfinite(r)) {
            out.R_worst = out.samples == 0 ? r : std::min(out.R_worst, r);
            ++out.samples;
        }
    }
    return out;
}

std::vector<RobustnessCell> robustness_grid(const OptimizationResult& optimum, const std::vector<double>& dfs,
                                            const std::vector<double>& dvs, int samples, std::uint64_t seed) {
    std::vector<double> fs = dfs, vs = dvs;
    std::sort(fs.begin(), fs.end());
    std::sort(vs.begin(), vs.end());
    const std::size_t nf = fs.size(), nv = vs.size();
    std::vector<RobustnessCell> cells(nf * nv);
    for (std::size_t i = 0; i < nf; ++i) {
        for (std::size_t j = 0; j < nv; ++j) {
            const RobustnessResult r = robustness_worst_case(optimum, {fs[i], vs[j], samples, seed});
            cells[i * nv + j] = {fs[i], vs[j], r.R_worst, r.samples};
        }
    }
    for (std::size_t i = 0; i < nf; ++i) {
        for (std::size_t j = 0; j < nv; ++j) {
            double w = cells[i * nv + j].R_worst;
            if (i > 0) w = std::min(w, cells[(i - 1) * nv + j].R_worst);
            if (j > 0) w = std::min(w, cells[i * nv + j - 1].R_worst);
            cells[i * nv + j].R_worst = w;
        }
    }
    return cells;
}

std::vector<TemperaturePoint> temperature_sweep(const OptimizationResult& optimum, const std::vector<double>& N_values,
                                                TickConvention convention, double omega_gap) {
    const int d = optimum.d;
    if (omega_gap <= 0.0) omega_gap = 20.0 * d;
    std::vector<double> ns = N_values;
    for (double n : ns) {
        if (!std::isfinite(n) || n < 0.0) throw InvalidInput("temperature_sweep: N must be >= 0");
    }
    std::sort(ns.begin(), ns.end());
    std::vector<TemperaturePoint> out;
    for (double n : ns) {
        ThermalExtensionParams p;
        p.base = QuasiIdealParams{d, 1.0, optimum.V, optimum.psi};
        for (int m = 0; m < d; ++m) {
            if (optimum.V[m] > 0.0) p.channels.push_back({m, omega_gap, n});
        }
        p.absorption_ticks = convention == TickConvention::AbsorptionTicks;
        const ClockSpec clock = build_thermal_extended(p);
        out.push_back({n, precision(clock).R, convention});
    }
    return out;
}

}  // namespace qclock
