#include "eepc/experiment.hpp"

#include "eepc/csv.hpp"
#include "eepc/linear_rotation.hpp"
#include "eepc/precision.hpp"
#include "eepc/stage_polynomial.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <string_view>

namespace eepc {

using nlohmann::json;

std::string to_string(SystemKind kind) {
    switch (kind) {
        case SystemKind::Burgers: return "burgers";
        case SystemKind::KdvH1: return "kdv-h1";
        case SystemKind::KdvH2: return "kdv-h2";
    }
    return "unknown";
}

double GridConfig::spacing() const { return dx ? *dx : 2.0 * half_length / double(*n1); }

Index GridConfig::points() const { return n1 ? *n1 : grid_count(half_length, *dx); }

// Parsing -------------------------------------------------------------------------------

namespace {

/// Reads one JSON object. Keys outside `allowed` are rejected before any field
/// is read, so a misspelt key is reported ahead of the field it was meant to be.
class Section {
public:
    Section(const json& node, std::string path, std::initializer_list<std::string_view> allowed)
        : node_(node), path_(std::move(path)) {
        if (!node_.is_object()) throw ConfigError(path_.empty() ? "<root>" : path_, "expected an object");
        for (auto it = node_.begin(); it != node_.end(); ++it)
            if (std::find(allowed.begin(), allowed.end(), it.key()) == allowed.end())
                throw ConfigError(field(it.key()), "unknown key");
    }

    bool has(const std::string& key) const { return node_.contains(key); }

    const json& raw(const std::string& key) {
        if (!node_.contains(key)) throw ConfigError(field(key), "missing required field");
        return node_.at(key);
    }

    double number(const std::string& key) {
        const json& v = raw(key);
        if (!v.is_number()) throw ConfigError(field(key), "expected a number");
        const double d = v.get<double>();
        if (!std::isfinite(d)) throw ConfigError(field(key), "must be finite");
        return d;
    }

    double number_or(const std::string& key, double fallback) {
        return has(key) ? number(key) : fallback;
    }

    long long integer(const std::string& key) {
        const json& v = raw(key);
        if (v.is_number_integer()) return v.get<long long>();
        if (v.is_number_float()) {
            const double d = v.get<double>();
            if (std::floor(d) == d && std::abs(d) < 9e15) return static_cast<long long>(d);
        }
        throw ConfigError(field(key), "expected an integer");
    }

    long long integer_or(const std::string& key, long long fallback) {
        return has(key) ? integer(key) : fallback;
    }

    std::string text(const std::string& key) {
        const json& v = raw(key);
        if (!v.is_string()) throw ConfigError(field(key), "expected a string");
        return v.get<std::string>();
    }

    std::string text_or(const std::string& key, const std::string& fallback) {
        return has(key) ? text(key) : fallback;
    }

    Section child(const std::string& key, std::initializer_list<std::string_view> allowed) {
        return Section(raw(key), field(key), allowed);
    }

    std::string field(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

private:
    const json& node_;
    std::string path_;
};

SystemKind system_from_string(const std::string& name, const std::string& path) {
    if (name == "burgers") return SystemKind::Burgers;
    if (name == "kdv-h1") return SystemKind::KdvH1;
    if (name == "kdv-h2") return SystemKind::KdvH2;
    throw ConfigError(path, "unknown system '" + name + "' (burgers | kdv-h1 | kdv-h2)");
}

}  // namespace

long step_count(const TimeConfig& time) {
    const double ratio = time.t_end / time.dt;
    return static_cast<long>(std::floor(ratio + 1e-9 * (1.0 + ratio)));
}

void validate(const ExperimentConfig& c) {
    if (!(c.grid.half_length > 0)) throw ConfigError("grid.L", "must be positive");
    if (c.grid.dx.has_value() == c.grid.n1.has_value())
        throw ConfigError("grid", "give exactly one of dx or n1");
    if (c.grid.dx && !(*c.grid.dx > 0)) throw ConfigError("grid.dx", "must be positive");
    if (c.grid.points() < 3) throw ConfigError("grid", "fewer than 3 grid points");
    const bool kdv = c.system != SystemKind::Burgers;
    if (kdv && !c.params) throw ConfigError("params", "required for KdV systems");
    if (!kdv && c.params) throw ConfigError("params", "not used by the burgers system");
    if (c.damping.kind == DampingKind::ConstantUnequal && !c.damping.seed)
        throw ConfigError("damping.seed", "required for constant-unequal damping");
    if (c.initial.profile != "gaussian")
        throw ConfigError("initial.profile", "unknown profile '" + c.initial.profile + "'");
    if (!(c.initial.width > 0)) throw ConfigError("initial.width", "must be positive");
    if (!(c.time.t_end >= 0)) throw ConfigError("time.T", "must be non-negative");
    if (!(c.time.dt > 0)) throw ConfigError("time.dt", "must be positive");
    if (c.scheme.stages < 1 || c.scheme.stages > 4) throw ConfigError("scheme.s", "must be in 1..4");
    if (c.scheme.quadrature_nodes < 1) throw ConfigError("scheme.q", "must be >= 1");
    if (!(c.scheme.tol > 0)) throw ConfigError("scheme.tol", "must be positive");
    if (c.scheme.max_iter < 1) throw ConfigError("scheme.max_iter", "must be >= 1");
    if (c.output.stride < 1) throw ConfigError("output.stride", "must be >= 1");
}

ExperimentConfig parse_config(const json& doc) {
    ExperimentConfig c;
    Section root(doc, "", {"system", "grid", "params", "damping", "initial", "time", "scheme", "output"});
    c.system = system_from_string(root.text("system"), "system");

    {
        auto g = root.child("grid", {"L", "dx", "n1"});
        c.grid.half_length = g.number("L");
        if (g.has("dx")) c.grid.dx = g.number("dx");
        if (g.has("n1")) c.grid.n1 = static_cast<Index>(g.integer("n1"));
    }
    if (root.has("params")) {
        auto p = root.child("params", {"alpha", "rho", "nu"});
        c.params = KdvParams{p.number("alpha"), p.number("rho"), p.number("nu")};
    }
    {
        auto d = root.child("damping", {"case", "gamma", "spread", "seed"});
        try {
            c.damping.kind = damping_kind_from_string(d.text("case"));
        } catch (const ConfigError&) {
            throw;
        } catch (const Error& e) {
            throw ConfigError(d.field("case"), e.what());
        }
        c.damping.gamma = d.number("gamma");
        if (d.has("spread")) {
            if (c.damping.kind != DampingKind::ConstantUnequal)
                throw ConfigError(d.field("spread"), "only valid for constant-unequal damping");
            c.damping.spread = d.number("spread");
        }
        if (d.has("seed")) {
            const long long seed = d.integer("seed");
            if (seed < 0) throw ConfigError(d.field("seed"), "must be non-negative");
            c.damping.seed = static_cast<std::uint64_t>(seed);
        }
    }
    if (root.has("initial")) {
        auto i = root.child("initial", {"profile", "amplitude", "centre", "width"});
        c.initial.profile = i.text_or("profile", c.initial.profile);
        c.initial.amplitude = i.number_or("amplitude", c.initial.amplitude);
        c.initial.centre = i.number_or("centre", c.initial.centre);
        c.initial.width = i.number_or("width", c.initial.width);
    }
    {
        auto t = root.child("time", {"T", "dt"});
        c.time.t_end = t.number("T");
        c.time.dt = t.number("dt");
    }
    {
        auto s = root.child("scheme", {"s", "q", "tol", "max_iter"});
        c.scheme.stages = static_cast<int>(s.integer("s"));
        c.scheme.quadrature_nodes = static_cast<int>(s.integer_or("q", c.scheme.quadrature_nodes));
        c.scheme.tol = s.number_or("tol", c.scheme.tol);
        c.scheme.max_iter = static_cast<int>(s.integer_or("max_iter", c.scheme.max_iter));
    }
    if (root.has("output")) {
        auto o = root.child("output", {"directory", "stride"});
        c.output.directory = o.text_or("directory", c.output.directory);
        c.output.stride = static_cast<long>(o.integer_or("stride", c.output.stride));
    }
    validate(c);
    return c;
}

ExperimentConfig load_config(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw ConfigError(file.string(), "cannot open config file");
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError(file.string(), std::string("malformed JSON: ") + e.what());
    }
    return parse_config(doc);
}

json to_json(const ExperimentConfig& c) {
    json doc;
    doc["system"] = to_string(c.system);
    json grid{{"L", c.grid.half_length}};
    if (c.grid.dx) grid["dx"] = *c.grid.dx;
    if (c.grid.n1) grid["n1"] = *c.grid.n1;
    doc["grid"] = grid;
    if (c.params) doc["params"] = {{"alpha", c.params->alpha}, {"rho", c.params->rho}, {"nu", c.params->nu}};
    json damping{{"case", to_string(c.damping.kind)}, {"gamma", c.damping.gamma}};
    if (c.damping.kind == DampingKind::ConstantUnequal) damping["spread"] = c.damping.spread;
    if (c.damping.seed) damping["seed"] = *c.damping.seed;
    doc["damping"] = damping;
    doc["initial"] = {{"profile", c.initial.profile},
                      {"amplitude", c.initial.amplitude},
                      {"centre", c.initial.centre},
                      {"width", c.initial.width}};
    doc["time"] = {{"T", c.time.t_end}, {"dt", c.time.dt}};
    doc["scheme"] = {{"s", c.scheme.stages},
                     {"q", c.scheme.quadrature_nodes},
                     {"tol", c.scheme.tol},
                     {"max_iter", c.scheme.max_iter}};
    doc["output"] = {{"directory", c.output.directory}, {"stride", c.output.stride}};
    return doc;
}

std::unique_ptr<PeriodicSystem> build_system(const ExperimentConfig& c) {
    const Index n1 = c.grid.points();
    const double dx = c.grid.spacing();
    switch (c.system) {
        case SystemKind::Burgers: return std::make_unique<BurgersSystem>(n1, dx, c.damping);
        case SystemKind::KdvH1: return std::make_unique<KdvH1System>(n1, dx, *c.params, c.damping);
        case SystemKind::KdvH2: return std::make_unique<KdvH2System>(n1, dx, *c.params, c.damping);
    }
    throw ConfigError("system", "unsupported");
}

VectorXd initial_state(const ExperimentConfig& c) {
    const VectorXd grid = periodic_grid(c.grid.half_length, c.grid.spacing(), c.grid.points());
    return gaussian_profile(grid, c.initial.amplitude, c.initial.centre, c.initial.width);
}

// Run -------------------------------------------------------------------------------------

namespace {

std::ofstream open_output(const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path.string());
    return out;
}

SolverOptions<double> solver_options(const SchemeConfig& scheme) {
    SolverOptions<double> opts;
    opts.tol = scheme.tol;
    opts.max_iter = scheme.max_iter;
    return opts;
}

}  // namespace

RunSummary run_experiment(const ExperimentConfig& config) {
    validate(config);
    const auto start = std::chrono::steady_clock::now();
    const auto sys = build_system(config);
    const VectorXd x0 = initial_state(config);
    const EepcStepper<double> stepper(
        make_tableau<double>(config.scheme.stages, config.scheme.quadrature_nodes));

    RunSummary summary;
    summary.steps = step_count(config.time);
    summary.t_final = double(summary.steps) * config.time.dt;
    if (std::abs(summary.t_final - config.time.t_end) > 1e-9 * (1.0 + config.time.t_end))
        summary.warnings.push_back("T/dt is not an integer; the run stops at t = " +
                                   format_number(summary.t_final));

    const auto traj = integrate<double>(*sys, stepper, x0, 0.0, config.time.dt, summary.steps,
                                        solver_options(config.scheme));

    summary.directory = config.output.directory;
    std::filesystem::create_directories(summary.directory);

    {
        auto out = open_output(summary.directory / "solution.csv");
        std::vector<std::string> header{"t"};
        for (Index j = 0; j < x0.size(); ++j) header.push_back("u" + std::to_string(j));
        CsvWriter csv(out, header);
        for (std::size_t n = 0; n < traj.size(); ++n) {
            if (n % static_cast<std::size_t>(config.output.stride) != 0 && n + 1 != traj.size()) continue;
            std::vector<double> row{traj.times[n]};
            row.insert(row.end(), traj.states[n].data(), traj.states[n].data() + traj.states[n].size());
            csv.row(row);
        }
    }

    for (const auto& inv : sys->invariants()) {
        summary.invariant_names.push_back(inv.name);
        summary.invariant_values.push_back(invariant_series(traj, inv));
    }
    {
        auto out = open_output(summary.directory / "invariants.csv");
        std::vector<std::string> header{"t"};
        header.insert(header.end(), summary.invariant_names.begin(), summary.invariant_names.end());
        CsvWriter csv(out, header);
        for (std::size_t n = 0; n < traj.size(); ++n) {
            std::vector<double> row{traj.times[n]};
            for (const auto& series : summary.invariant_values) row.push_back(series[n]);
            csv.row(row);
        }
    }

    const std::size_t pairs = traj.size() - 1;
    for (const auto& inv : sys->invariants()) {
        const ResidualMode mode = inv.has_eta() ? ResidualMode::KnownEta : ResidualMode::AveragedGamma;
        try {
            summary.residuals.push_back(mode == ResidualMode::KnownEta
                                            ? residual_known_eta(traj, inv)
                                            : residual_averaged(traj, inv, *sys));
        } catch (const NonPositiveInvariant& e) {
            summary.warnings.push_back(std::string("residual skipped: ") + e.what());
            summary.residuals.push_back(
                {inv.name, mode, std::vector<double>(pairs, std::numeric_limits<double>::quiet_NaN())});
        }
    }
    {
        auto out = open_output(summary.directory / "residuals.csv");
        std::vector<std::string> header{"t"};
        for (const auto& r : summary.residuals) header.push_back(r.name + "[" + to_string(r.mode) + "]");
        CsvWriter csv(out, header);
        for (std::size_t n = 0; n < pairs; ++n) {
            std::vector<double> row{traj.times[n + 1]};
            for (const auto& r : summary.residuals) row.push_back(r.values[n]);
            csv.row(row);
        }
    }

    auto& it = summary.iterations;
    if (!traj.iterations.empty()) {
        it.min = *std::min_element(traj.iterations.begin(), traj.iterations.end());
        it.max = *std::max_element(traj.iterations.begin(), traj.iterations.end());
        for (int k : traj.iterations) it.total += k;
        it.mean = double(it.total) / double(traj.iterations.size());
    }

    json meta;
    meta["config"] = to_json(config);
    meta["seed"] = config.damping.seed ? json(*config.damping.seed) : json(nullptr);
    meta["n1"] = sys->dim();
    meta["dx"] = config.grid.spacing();
    meta["steps"] = summary.steps;
    meta["t_final"] = summary.t_final;
    meta["iterations"] = {{"min", it.min}, {"max", it.max}, {"mean", it.mean}, {"total", it.total}};
    json residual_max = json::object();
    for (const auto& r : summary.residuals)
        residual_max[r.name] = {{"mode", to_string(r.mode)}, {"max_abs", r.max_abs()}};
    meta["residual_max_abs"] = residual_max;
    meta["rng"] = "mt19937_64, u = 2 * (x >> 11) * 2^-53 - 1";
    meta["warnings"] = summary.warnings;
    meta["wall_seconds"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    open_output(summary.directory / "meta.json") << meta.dump(2) << '\n';
    return summary;
}

// Order -------------------------------------------------------------------------------------

OrderTable linear_order_study(double t_end, const std::vector<double>& dts,
                              const std::vector<int>& stages) {
    using Q = QuadScalar;
    const LinearRotation<Q> sys(Q(LinearOracle::omega), Q(LinearOracle::gamma));
    Vector<Q> x0(2);
    x0 << Q(LinearOracle::x0[0]), Q(LinearOracle::x0[1]);
    SolverOptions<Q> opts;
    opts.tol = Q(std::numeric_limits<Q>::epsilon()) * Q(1000);
    opts.max_iter = 200;
    std::vector<Q> qdts;
    for (double dt : dts) qdts.push_back(Q(dt));
    return order_study<Q>(sys, x0, Q(t_end), qdts, stages, sys.exact(Q(t_end), x0), opts);
}

OrderSummary run_order(const ExperimentConfig& config, const OrderRequest& request) {
    validate(config);
    if (request.dts.empty()) throw ConfigError("--dts", "at least one step size is required");
    for (double dt : request.dts)
        if (!(dt > 0)) throw ConfigError("--dts", "step sizes must be positive");
    for (int s : request.stages)
        if (s < 1 || s > 4) throw ConfigError("--stages", "stage counts must be in 1..4");

    OrderSummary summary;
    const double t_end = config.time.t_end;
    if (request.linear) {
        summary.table = linear_order_study(t_end, request.dts, request.stages);
    } else {
        const double min_dt = *std::min_element(request.dts.begin(), request.dts.end());
        if (!(request.ref_dt > 0) || request.ref_dt > min_dt / 4.0 * (1.0 + 1e-12))
            throw ConfigError("--ref-dt", "must be positive and at most a quarter of the smallest dt");
        const auto sys = build_system(config);
        const VectorXd x0 = initial_state(config);
        const auto opts = solver_options(config.scheme);
        const auto ref = reference_solution<double>(*sys, 0.0, t_end, x0, request.ref_dt, opts,
                                                    std::nullopt, config.scheme.quadrature_nodes);
        summary.table = order_study<double>(*sys, x0, t_end, request.dts, request.stages,
                                            ref.states.back(), opts, std::sqrt(config.grid.spacing()),
                                            config.scheme.quadrature_nodes);
    }

    const std::filesystem::path dir = config.output.directory;
    std::filesystem::create_directories(dir);
    {
        auto out = open_output(dir / "order.csv");
        CsvWriter csv(out, {"s", "dt", "error", "seconds"});
        for (const auto& r : summary.table.rows)
            csv.row(std::vector<double>{double(r.stages), r.dt, r.error, r.seconds});
    }
    {
        auto out = open_output(dir / "slopes.csv");
        CsvWriter csv(out, {"s", "slope"});
        for (const auto& sl : summary.table.slopes) {
            if (sl.slope) {
                csv.row(std::vector<double>{double(sl.stages), *sl.slope});
            } else {
                summary.warnings.push_back("no slope for s=" + std::to_string(sl.stages) +
                                           ": fewer than two usable step sizes");
            }
        }
    }
    json meta;
    meta["config"] = to_json(config);
    meta["dts"] = request.dts;
    meta["ref_dt"] = request.linear ? json(nullptr) : json(request.ref_dt);
    meta["stages"] = request.stages;
    meta["oracle"] = request.linear ? "damped rotation, closed form" : "s=4 reference solution";
    meta["warnings"] = summary.warnings;
    open_output(dir / "order_meta.json") << meta.dump(2) << '\n';
    return summary;
}

// Verify ----------------------------------------------------------------------------------------

namespace {

template <typename F>
double skew_defect(Index n, std::uint64_t seed, F&& apply) {
    const VectorXd y = seeded_uniform(seed, n);
    const VectorXd z = seeded_uniform(seed + 1, n);
    const double scale = std::max(1.0, std::abs(y.dot(apply(z))));
    return std::abs(y.dot(apply(z)) + z.dot(apply(y))) / scale;
}

}  // namespace

std::vector<VerifyCheck> verify_checks() {
    std::vector<VerifyCheck> checks;
    auto add = [&](std::string name, double defect, double threshold) {
        checks.push_back({std::move(name), defect, threshold});
    };

    for (int q = 1; q <= 8; ++q) {
        const auto rule = gauss_legendre<double>(q);
        double worst = std::abs(rule.weights.sum() - 1.0);
        for (int d = 0; d <= 2 * q - 1; ++d)
            worst = std::max(worst, std::abs(rule.integrate([d](double x) { return std::pow(x, d); }) -
                                             1.0 / (d + 1)));
        add("quadrature q=" + std::to_string(q) + " exact to degree " + std::to_string(2 * q - 1),
            worst, 1e-14);
    }

    for (int s = 1; s <= 4; ++s) {
        const auto tab = make_tableau<double>(s);
        const auto general = make_tableau_general<long double>(s);
        const std::string tag = "s=" + std::to_string(s);
        add(tag + " closed form vs Gauss-Legendre construction",
            double(coefficient_distance(tableau_cast<long double>(tab), general)), 1e-12);
        add(tag + " C_tau = tau", order_condition_defect(tab, 1), 1e-13);
        for (int k = 2; k <= s; ++k)
            add(tag + " order condition k=" + std::to_string(k), order_condition_defect(tab, k), 1e-13);
        add(tag + " symmetry A(t,s) + A(1-t,1-s) = 1 on 20x20 grid", symmetry_defect(tab, 20), 1e-12);
        add(tag + " A(1, sigma) = 1", (tab.sigma_polynomial(1.0) - VectorXd::Unit(s, 0)).cwiseAbs().maxCoeff(),
            1e-13);
        StagePolynomial<double> poly{seeded_uniform(7, 3 * (s + 1)).reshaped(3, s + 1), 0.1, 0.0};
        double interp = 0;
        for (int j = 0; j <= s; ++j)
            interp = std::max(interp, (eval_stage_polynomial(poly, double(j) / s) - poly.node(j))
                                          .cwiseAbs()
                                          .maxCoeff());
        add(tag + " stage polynomial interpolates its nodes", interp, 1e-14);
    }

    const Index n = 24;
    const double dx = 0.25;
    const auto ops = build_fd_operators(n, dx);
    const MatrixXd d1 = ops.d1, d2 = ops.d2, d3 = ops.d3;
    add("D1 skew-symmetric", (d1 + d1.transpose()).cwiseAbs().maxCoeff(), 0.0);
    add("D2 symmetric", (d2 - d2.transpose()).cwiseAbs().maxCoeff(), 0.0);
    add("D3 = D1 D2 skew-symmetric", (d3 + d3.transpose()).cwiseAbs().maxCoeff() * dx * dx * dx, 1e-12);
    add("D1 row and column sums vanish",
        std::max(d1.rowwise().sum().cwiseAbs().maxCoeff(), d1.colwise().sum().cwiseAbs().maxCoeff()), 1e-12);
    add("D2 row sums vanish", d2.rowwise().sum().cwiseAbs().maxCoeff() * dx * dx, 1e-12);

    const DampingCase damping{DampingKind::ConstantEqual, 0.25, 0.1, std::nullopt};
    const KdvParams params;
    const BurgersSystem burgers(n, dx, damping);
    const KdvH1System kdv1(n, dx, params, damping);
    const KdvH2System kdv2(n, dx, params, damping);
    const VectorXd frozen = seeded_uniform(11, n);
    add("Burgers S skew", skew_defect(n, 21, [&](const VectorXd& z) { return burgers.skew_apply(0, frozen, z); }),
        1e-12);
    add("KdV-H1 S skew", skew_defect(n, 23, [&](const VectorXd& z) { return kdv1.skew_apply(0, frozen, z); }),
        1e-12);
    add("KdV-H2 S(u) skew", skew_defect(n, 25, [&](const VectorXd& z) { return kdv2.skew_apply(0, frozen, z); }),
        1e-12);
    add("A(u) skew", skew_defect(n, 27, [&](const VectorXd& z) { return bracket_apply(frozen, z, dx); }), 1e-12);
    return checks;
}

}  // namespace eepc
