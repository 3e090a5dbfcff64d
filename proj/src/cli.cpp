#include "qclock/cli.hpp"

#include <chrono>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <set>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "qclock/clock_models.hpp"
#include "qclock/entropy.hpp"
#include "qclock/errors.hpp"
#include "qclock/optimizer.hpp"
#include "qclock/ring.hpp"
#include "qclock/tick_statistics.hpp"

namespace qclock::cli {

namespace {

using json = nlohmann::ordered_json;

struct Params {
    std::string d = "2";
    std::string V;
    std::string psi = "t0";
    double omega0 = 1.0;
    double beta = 1.0;
    std::string N = "0";
    std::uint64_t seed = 1;
    std::string out;
    double tol = 1e-8;
    int grid = 2048;
    int restarts = 0;
    std::string channels;
    bool no_header = false;
    bool ode = false;
    double omega = 3000.0;
    double gap = 0.0;
    double t_max = 20.0;
    int steps = 200;
    int threads = 0;
    double bound = 0.0;
    std::string deltaF = "0,0.025,0.05,0.075,0.1";
    std::string deltaV = "0,0.025,0.05,0.075,0.1";
    int samples = 200;
    std::string convention = "emission";
    double E_h = 2.0;
    double E_c = 1.0;
    double beta_h = 0.1;
    std::string beta_c = "0.4,0.6,0.8,1.0,1.2";
    double coupling = 1.0;
    double tick_rate = 1.0;
    double beta_tick = 0.0;
};

std::string fmt(double x) {
    std::ostringstream s;
    s << std::setprecision(12) << x;
    return s.str();
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep)) {
        const auto b = cur.find_first_not_of(" \t");
        const auto e = cur.find_last_not_of(" \t");
        out.push_back(b == std::string::npos ? "" : cur.substr(b, e - b + 1));
    }
    return out;
}

double to_double(const std::string& s, const char* what) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw InvalidInput(std::string(what) + ": cannot parse '" + s + "' as a number");
    }
}

int to_int(const std::string& s, const char* what) {
    const double v = to_double(s, what);
    if (v != std::floor(v)) throw InvalidInput(std::string(what) + ": expected an integer, got " + s);
    return static_cast<int>(v);
}

std::vector<double> doubles(const std::string& s, const char* what) {
    std::vector<double> v;
    if (s.empty()) return v;
    for (const auto& t : split(s, ',')) v.push_back(to_double(t, what));
    return v;
}

// "4", "2,3,5" or "2-10"
std::vector<int> ints(const std::string& s, const char* what) {
    std::vector<int> v;
    for (const auto& t : split(s, ',')) {
        const auto dash = t.find('-', 1);
        if (dash != std::string::npos) {
            const int lo = to_int(t.substr(0, dash), what);
            const int hi = to_int(t.substr(dash + 1), what);
            if (hi < lo) throw InvalidInput(std::string(what) + ": empty range " + t);
            for (int i = lo; i <= hi; ++i) v.push_back(i);
        } else {
            v.push_back(to_int(t, what));
        }
    }
    if (v.empty()) throw InvalidInput(std::string(what) + ": empty list");
    return v;
}

int single_int(const std::string& s, const char* what) {
    const auto v = ints(s, what);
    if (v.size() != 1) throw InvalidInput(std::string(what) + ": expected a single value");
    return v[0];
}

Complex to_complex(const std::string& s) {
    // accepts "a", "bi", "a+bi", "a-bi"
    if (s.empty()) throw InvalidInput("--psi: empty amplitude");
    if (s.back() != 'i') return {to_double(s, "--psi"), 0.0};
    const std::string body = s.substr(0, s.size() - 1);
    std::size_t cut = std::string::npos;
    for (std::size_t i = body.size(); i-- > 1;) {
        if ((body[i] == '+' || body[i] == '-') && body[i - 1] != 'e' && body[i - 1] != 'E') {
            cut = i;
            break;
        }
    }
    if (cut == std::string::npos) {
        const std::string im = body.empty() || body == "+" ? "1" : (body == "-" ? "-1" : body);
        return {0.0, to_double(im, "--psi")};
    }
    std::string im = body.substr(cut);
    if (im == "+") im = "1";
    if (im == "-") im = "-1";
    return {to_double(body.substr(0, cut), "--psi"), to_double(im, "--psi")};
}

StateVector parse_psi(const std::string& s, int d) {
    if (s.size() >= 2 && (s[0] == 't' || s[0] == 'E') && s.find(',') == std::string::npos) {
        const int k = to_int(s.substr(1), "--psi");
        return s[0] == 't' ? time_state(d, k) : energy_state(d, k);
    }
    const auto parts = split(s, ',');
    if (static_cast<int>(parts.size()) != d) throw InvalidInput("--psi: expected d amplitudes");
    StateVector psi(d);
    for (int i = 0; i < d; ++i) psi(i) = to_complex(parts[i]);
    if (!(psi.norm() > 0.0)) throw InvalidInput("--psi: zero vector");
    return psi / psi.norm();
}

std::vector<double> parse_V(const std::string& s, int d) {
    auto v = doubles(s, "--V");
    if (static_cast<int>(v.size()) != d) throw InvalidInput("--V: expected d comma-separated values");
    return v;
}

std::string timestamp() {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::ostringstream s;
    s << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return s.str();
}

class Table {
public:
    Table(std::vector<std::string> columns) : columns_(std::move(columns)) {}
    void add(std::vector<double> row) { rows_.push_back(std::move(row)); }

    std::string render(const std::string& command, bool no_header) const {
        std::ostringstream s;
        if (!no_header) s << "# qclock " << command << " generated " << timestamp() << "\n";
        for (std::size_t i = 0; i < columns_.size(); ++i) s << (i ? "," : "") << columns_[i];
        s << "\n";
        for (const auto& r : rows_) {
            for (std::size_t i = 0; i < r.size(); ++i) s << (i ? "," : "") << fmt(r[i]);
            s << "\n";
        }
        return s.str();
    }

private:
    std::vector<std::string> columns_;
    std::vector<std::vector<double>> rows_;
};

json number(double x) {
    // round-trip through the 12-digit representation
    return json::parse(fmt(std::isfinite(x) ? x : 0.0));
}

std::string render_json(json j, const std::string& command, bool no_header) {
    json out;
    out["command"] = command;
    if (!no_header) out["generated"] = timestamp();
    for (auto& [k, v] : j.items()) out[k] = v;
    return out.dump(2) + "\n";
}

void emit(const Params& p, const std::string& text, std::ostream& out) {
    if (p.out.empty()) {
        out << text;
        return;
    }
    std::ofstream f(p.out, std::ios::binary);
    if (!f) throw ConfigurationError("cannot open output file " + p.out);
    f << text;
}

OptimizationConfig opt_config(const Params& p, int d) {
    OptimizationConfig c;
    c.restarts = p.restarts;
    c.seed = p.seed;
    c.bound = p.bound;
    c.threads = p.threads;
    if (!p.channels.empty()) c.channels = ints(p.channels, "--channels");
    for (int ch : c.channels) {
        if (ch < 0 || ch >= d) throw InvalidInput("--channels: index out of range");
    }
    return c;
}

ClockSpec quasi_ideal_from(const Params& p, int d) {
    return build_quasi_ideal(QuasiIdealParams{d, p.omega0, parse_V(p.V, d), parse_psi(p.psi, d)});
}

std::string cmd_precision(const Params& p) {
    const int d = single_int(p.d, "--d");
    const ClockSpec clock = quasi_ideal_from(p, d);
    const TickStatistics s = precision(clock);
    json j;
    j["d"] = d;
    j["R"] = number(s.R);
    j["mu"] = number(s.mu);
    j["variance"] = number(s.variance);
    j["mass"] = number(s.mass);
    if (p.ode) j["R_ode"] = number(precision_ode(clock).R);
    return render_json(j, "precision", p.no_header);
}

std::string cmd_delay(const Params& p) {
    const int d = single_int(p.d, "--d");
    const DelayFunctionSamples s = delay_density_ode(quasi_ideal_from(p, d), p.t_max, p.steps);
    Table t({"t", "P"});
    for (std::size_t i = 0; i < s.times.size(); ++i) t.add({s.times[i], s.density[i]});
    return t.render("delay", p.no_header);
}

std::string cmd_optimize(const Params& p) {
    Table t({"d", "R"});
    for (int d : ints(p.d, "--d")) t.add({static_cast<double>(d), optimize_precision(d, opt_config(p, d)).R});
    return t.render("optimize", p.no_header);
}

std::string cmd_optimize_restricted(const Params& p) {
    Table t({"d", "R_1ch", "R_2ch"});
    for (int d : ints(p.d, "--d")) {
        const OptimizationConfig c = opt_config(p, d);
        const double r1 = optimize_restricted(d, 1, c).R;
        const double r2 = d >= 2 ? optimize_restricted(d, 2, c).R : r1;
        t.add({static_cast<double>(d), r1, r2});
    }
    return t.render("optimize-restricted", p.no_header);
}

std::string cmd_robustness(const Params& p) {
    const int d = single_int(p.d, "--d");
    const OptimizationResult opt = optimize_precision(d, opt_config(p, d));
    const auto cells = robustness_grid(opt, doubles(p.deltaF, "--deltaF"), doubles(p.deltaV, "--deltaV"), p.samples,
                                       p.seed);
    Table t({"deltaF", "deltaV1norm", "R_worst"});
    for (const auto& c : cells) t.add({c.fidelity_deficit, c.v_budget, c.R_worst});
    return t.render("robustness", p.no_header);
}

std::string cmd_sweep_temp(const Params& p) {
    const int d = single_int(p.d, "--d");
    const OptimizationResult opt = optimize_precision(d, opt_config(p, d));
    const auto ns = doubles(p.N, "--N");
    if (p.convention == "both") {
        const auto e = temperature_sweep(opt, ns, TickConvention::EmissionOnly, p.gap);
        const auto a = temperature_sweep(opt, ns, TickConvention::AbsorptionTicks, p.gap);
        Table t({"N", "R_emission", "R_absorption"});
        for (std::size_t i = 0; i < e.size(); ++i) t.add({e[i].N, e[i].R, a[i].R});
        return t.render("sweep-temp", p.no_header);
    }
    TickConvention conv;
    if (p.convention == "emission") {
        conv = TickConvention::EmissionOnly;
    } else if (p.convention == "absorption") {
        conv = TickConvention::AbsorptionTicks;
    } else {
        throw InvalidInput("--convention must be emission, absorption or both");
    }
    Table t({"N", "R"});
    for (const auto& pt : temperature_sweep(opt, ns, conv, p.gap)) t.add({pt.N, pt.R});
    return t.render("sweep-temp", p.no_header);
}

std::string cmd_entropy(const Params& p) {
    const int d = single_int(p.d, "--d");
    const auto v = parse_V(p.V, d);
    const auto ns = doubles(p.N, "--N");
    if (ns.size() != 1) throw InvalidInput("--N: expected a single occupation");
    ThermalExtensionParams tp;
    tp.base = QuasiIdealParams{d, p.omega0, v, parse_psi(p.psi, d)};
    const double gap = p.gap > 0.0 ? p.gap : 20.0 * d;
    for (int m = 0; m < d; ++m) {
        if (v[m] > 0.0) tp.channels.push_back({m, gap, ns[0]});
    }
    tp.beta = p.beta;
    const ClockSpec clock = build_thermal_extended(tp);
    const EntropyResult e = entropy_per_tick(clock, p.t_max, p.tol);
    json j;
    j["d"] = d;
    j["beta"] = number(p.beta);
    j["gap"] = number(gap);
    j["deltaS"] = number(e.delta_S_tick);
    j["error_estimate"] = number(e.error_estimate);
    json baths = json::object();
    for (const auto& b : e.per_bath) baths[b.bath] = number(b.delta_S);
    j["per_bath"] = baths;
    json ch = json::array();
    for (std::size_t k = 0; k < e.tick_channel_probability.size(); ++k) {
        ch.push_back({{"m", tp.channels[k].m}, {"probability", number(e.tick_channel_probability[k])}});
    }
    j["channels"] = ch;
    j["R"] = number(precision(clock).R);
    return render_json(j, "entropy", p.no_header);
}

std::string cmd_entropy_curve(const Params& p) {
    const auto ds = ints(p.d, "--d");
    std::vector<OptimizationResult> optima;
    for (int d : ds) optima.push_back(optimize_precision(d, opt_config(p, d)));
    const double gap = p.gap > 0.0 ? p.gap : 20.0 * ds.back();
    const EntropyCurve c = entropy_precision_curve(optima, p.beta, gap);
    Table t({"d", "beta", "deltaS"});
    for (const auto& pt : c.points) t.add({static_cast<double>(pt.d), pt.beta, pt.delta_S});
    return t.render("entropy-curve", p.no_header);
}

std::string cmd_ladder(const Params& p) {
    const int d = single_int(p.d, "--d");
    Table t({"heat", "deltaS_ours"});
    for (double bc : doubles(p.beta_c, "--beta-c")) {
        LadderClockParams lp{d, p.E_h, p.E_c, p.beta_h, bc, p.coupling, p.tick_rate, p.beta_tick};
        const LadderEntropyReport r = ladder_entropy_comparison(lp);
        if (r.degenerate) throw InvalidInput("ladder-compare: unbiased virtual qubit (degenerate case)");
        t.add({r.reference, r.delta_S});
    }
    return t.render("ladder-compare", p.no_header);
}

std::string cmd_ring(const Params& p) {
    const int d = single_int(p.d, "--d");
    RingPotential pot;
    pot.d = d;
    pot.omega_well = p.omega;
    const RingSpectrum s = solve_ring(pot, p.grid);
    json j;
    j["d"] = d;
    j["omega"] = number(p.omega);
    j["grid"] = p.grid;
    j["norm"] = "L2 on [0, 2pi), int |psi|^2 dx = 1";
    json ev = json::array();
    for (int n = 0; n <= d && n < static_cast<int>(s.eigenvalues.size()); ++n) ev.push_back(number(s.eigenvalues[n]));
    j["eigenvalues"] = ev;
    j["convergence"] = number(s.convergence);
    json se = json::array();
    for (double e : shift_equality_errors(s, d)) se.push_back(number(e));
    j["shift_errors"] = se;
    if (d >= 2) {
        const HarmonicityReport h = harmonicity_check(s, d);
        j["spacing_deviation"] = number(h.max_deviation);
        j["gap_ratio"] = number(h.gap_ratio);
    }
    json flux = json::array();
    for (int m = 0; m < d; ++m) {
        const DipoleSymmetryReport r = flux_overlap_check(s, d, m);
        flux.push_back({{"m", m},
                        {"magnitude_spread", number(r.magnitude_spread)},
                        {"phase_deviation", number(r.phase_deviation)},
                        {"dipole_forbidden", r.dipole_forbidden}});
    }
    j["flux"] = flux;
    return render_json(j, "ring-check", p.no_header);
}

struct Command {
    std::string name;
    std::string help;
    std::vector<std::string> options;
    std::string (*fn)(const Params&);
};

const std::vector<Command>& commands() {
    static const std::vector<Command> c{
        {"precision", "first-tick statistics of a quasi-ideal clock", {"d", "V", "psi", "omega0", "ode"}, cmd_precision},
        {"delay", "waiting-time density on a grid (CSV t,P)", {"d", "V", "psi", "omega0", "t-max", "steps"},
         cmd_delay},
        {"optimize", "optimized precision per dimension (CSV d,R)",
         {"d", "restarts", "seed", "bound", "channels", "threads"}, cmd_optimize},
        {"optimize-restricted", "optimum with one and two channels (CSV d,R_1ch,R_2ch)",
         {"d", "restarts", "seed", "bound", "threads"}, cmd_optimize_restricted},
        {"robustness", "worst-case precision over a budget grid (CSV deltaF,deltaV1norm,R_worst)",
         {"d", "restarts", "seed", "bound", "threads", "deltaF", "deltaV", "samples"}, cmd_robustness},
        {"sweep-temp", "precision against bath occupation (CSV N,R)",
         {"d", "restarts", "seed", "bound", "threads", "N", "convention", "gap"}, cmd_sweep_temp},
        {"entropy", "entropy per tick of a thermally extended quasi-ideal clock",
         {"d", "V", "psi", "omega0", "beta", "N", "gap", "t-max", "tol"}, cmd_entropy},
        {"entropy-curve", "entropy per tick of optimized clocks (CSV d,beta,deltaS)",
         {"d", "restarts", "seed", "bound", "threads", "beta", "gap"}, cmd_entropy_curve},
        {"ladder-compare", "ladder clock entropy against the heat reference (CSV heat,deltaS_ours)",
         {"d", "Eh", "Ec", "beta-h", "beta-c", "g", "tick-rate", "beta-tick"}, cmd_ladder},
        {"ring-check", "ring spectrum, shift-equality and flux-overlap checks", {"d", "omega", "grid"}, cmd_ring},
    };
    return c;
}

void add_option(CLI::App* app, const std::string& key, Params& p) {
    if (key == "d") app->add_option("--d", p.d, "clock dimension (list or range where supported)");
    else if (key == "V") app->add_option("--V", p.V, "comma list of V coefficients")->required();
    else if (key == "psi") app->add_option("--psi", p.psi, "t<k>, E<n> or comma list of amplitudes a+bi");
    else if (key == "omega0") app->add_option("--omega0", p.omega0, "level spacing");
    else if (key == "ode") app->add_flag("--ode", p.ode, "also integrate the ODE oracle");
    else if (key == "beta") app->add_option("--beta", p.beta, "photon-bath inverse temperature");
    else if (key == "N") app->add_option("--N", p.N, "bath occupation (comma list for sweeps)");
    else if (key == "gap") app->add_option("--gap", p.gap, "secondary-level gap (default 20 d)");
    else if (key == "t-max") app->add_option("--t-max", p.t_max, "initial time horizon");
    else if (key == "steps") app->add_option("--steps", p.steps, "number of grid intervals");
    else if (key == "tol") app->add_option("--tol", p.tol, "absolute tolerance");
    else if (key == "restarts") app->add_option("--restarts", p.restarts, "optimizer restarts (0: 50 d)");
    else if (key == "seed") app->add_option("--seed", p.seed, "random seed");
    else if (key == "bound") app->add_option("--bound", p.bound, "upper limit on V entries (0: d)");
    else if (key == "channels") app->add_option("--channels", p.channels, "allowed flux indices");
    else if (key == "threads") app->add_option("--threads", p.threads, "worker threads (0: all cores)");
    else if (key == "deltaF") app->add_option("--deltaF", p.deltaF, "fidelity deficits");
    else if (key == "deltaV") app->add_option("--deltaV", p.deltaV, "relative 1-norm budgets");
    else if (key == "samples") app->add_option("--samples", p.samples, "samples per budget cell");
    else if (key == "convention") app->add_option("--convention", p.convention, "emission, absorption or both");
    else if (key == "Eh") app->add_option("--Eh", p.E_h, "hot qubit gap");
    else if (key == "Ec") app->add_option("--Ec", p.E_c, "cold qubit gap");
    else if (key == "beta-h") app->add_option("--beta-h", p.beta_h, "hot bath inverse temperature");
    else if (key == "beta-c") app->add_option("--beta-c", p.beta_c, "cold bath inverse temperatures (list)");
    else if (key == "g") app->add_option("--g", p.coupling, "ladder coupling rate");
    else if (key == "tick-rate") app->add_option("--tick-rate", p.tick_rate, "tick emission rate");
    else if (key == "beta-tick") app->add_option("--beta-tick", p.beta_tick, "inverse temperature charged on the tick");
    else if (key == "omega") app->add_option("--omega", p.omega, "well stiffness");
    else if (key == "grid") app->add_option("--grid", p.grid, "grid size");
}

std::string json_scalar(const json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number_integer()) return std::to_string(v.get<long long>());
    if (v.is_number()) return fmt(v.get<double>());
    throw ConfigurationError("config: unsupported value " + v.dump());
}

// Expands `--config file.json` into flags placed before the command-line
// ones, so explicit flags take precedence.
std::vector<std::string> expand_config(const std::vector<std::string>& args) {
    std::vector<std::string> rest;
    std::string path;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config") {
            if (i + 1 >= args.size()) throw ConfigurationError("--config needs a file name");
            path = args[++i];
        } else if (args[i].rfind("--config=", 0) == 0) {
            path = args[i].substr(9);
        } else {
            rest.push_back(args[i]);
        }
    }
    if (path.empty()) return rest;

    std::ifstream in(path);
    if (!in) throw ConfigurationError("cannot read config file " + path);
    json cfg;
    try {
        cfg = json::parse(in);
    } catch (const json::exception& e) {
        throw ConfigurationError(std::string("config: ") + e.what());
    }
    if (!cfg.is_object()) throw ConfigurationError("config: top level must be an object");

    std::string name;
    if (!rest.empty() && rest[0].rfind("-", 0) != 0) {
        name = rest[0];
        rest.erase(rest.begin());
    }
    if (cfg.contains("command")) {
        const std::string c = cfg["command"].get<std::string>();
        if (!name.empty() && name != c) throw ConfigurationError("config command '" + c + "' contradicts '" + name + "'");
        name = c;
    }
    const Command* cmd = nullptr;
    for (const auto& c : commands()) {
        if (c.name == name) cmd = &c;
    }
    if (!cmd) throw ConfigurationError("config: unknown or missing command '" + name + "'");
    std::set<std::string> allowed(cmd->options.begin(), cmd->options.end());
    allowed.insert({"out", "no-header", "command"});

    std::vector<std::string> expanded{name};
    for (const auto& [key, value] : cfg.items()) {
        if (!allowed.count(key)) throw ConfigurationError("config: unknown key '" + key + "' for " + name);
        if (key == "command") continue;
        if (value.is_boolean()) {
            if (value.get<bool>()) expanded.push_back("--" + key);
            continue;
        }
        std::string text;
        if (value.is_array()) {
            for (std::size_t i = 0; i < value.size(); ++i) text += (i ? "," : "") + json_scalar(value[i]);
        } else {
            text = json_scalar(value);
        }
        expanded.push_back("--" + key);
        expanded.push_back(text);
    }
    expanded.insert(expanded.end(), rest.begin(), rest.end());
    return expanded;
}

}  // namespace

int run(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
    Params p;
    CLI::App app{"Markovian ticking clocks: precision, optimization, entropy per tick and ring checks", "qclock"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "qclock 1.0.0");
    std::vector<std::pair<CLI::App*, const Command*>> subs;
    for (const auto& c : commands()) {
        CLI::App* sub = app.add_subcommand(c.name, c.help);
        sub->option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
        for (const auto& key : c.options) add_option(sub, key, p);
        sub->add_option("--out", p.out, "output file (default stdout)");
        sub->add_flag("--no-header", p.no_header, "omit the timestamp line");
        subs.emplace_back(sub, &c);
    }

    std::vector<std::string> args;
    try {
        args = expand_config(raw_args);
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }

    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForVersion& e) {
        out << e.what() << "\n";
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        std::ostringstream o, m;
        const int code = app.exit(e, o, m);
        if (code == 0) {
            out << o.str();
            return kExitOk;
        }
        err << m.str();
        return kExitUsage;
    }

    for (const auto& [sub, cmd] : subs) {
        if (!sub->parsed()) continue;
        try {
            emit(p, cmd->fn(p), out);
            return kExitOk;
        } catch (const InvalidInput& e) {
            err << "error: " << e.what() << "\n";
            return kExitUsage;
        } catch (const ConfigurationError& e) {
            err << "error: " << e.what() << "\n";
            return kExitUsage;
        } catch (const std::exception& e) {
            err << "numerical failure: " << e.what() << "\n";
            return kExitNumerical;
        }
    }
    err << app.help();
    return kExitUsage;
}

int run(int argc, const char* const* argv) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return run(args, std::cout, std::cerr);
}

}  // namespace qclock::cli
