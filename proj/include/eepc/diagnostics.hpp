#pragma once

#include "eepc/damped_system.hpp"
#include "eepc/stepper.hpp"
#include "eepc/tableau.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace eepc {

template <typename Scalar = double>
struct Trajectory {
    std::vector<Scalar> times;
    std::vector<Vector<Scalar>> states;
    std::vector<int> iterations;  // one entry per step taken

    std::size_t size() const { return states.size(); }
    bool empty() const { return states.empty(); }
};

/// Integrates `steps` uniform steps of size dt from (t0, x0). `record_every`
/// thins the stored states (the initial and final states are always kept).
template <typename Scalar>
Trajectory<Scalar> integrate(const DampedSystem<Scalar>& sys, const EepcStepper<Scalar>& stepper,
                             const Vector<Scalar>& x0, Scalar t0, Scalar dt, long steps,
                             const SolverOptions<Scalar>& opts = {}, long record_every = 1) {
    if (steps < 0) throw std::invalid_argument("integrate: negative step count");
    if (record_every < 1) throw std::invalid_argument("integrate: record_every must be >= 1");
    opts.validate();
    Trajectory<Scalar> traj;
    traj.times.push_back(t0);
    traj.states.push_back(x0);
    traj.iterations.reserve(static_cast<std::size_t>(steps));
    Vector<Scalar> x = x0;
    for (long n = 0; n < steps; ++n) {
        const Scalar t = t0 + Scalar(n) * dt;
        StepResult<Scalar> r;
        try {
            r = stepper.step(sys, StepContext<Scalar>(t, dt), x, opts);
        } catch (const NonConvergence& e) {
            throw e.at_step(n);
        }
        x = std::move(r.x1);
        traj.iterations.push_back(r.iterations);
        if ((n + 1) % record_every == 0 || n + 1 == steps) {
            traj.times.push_back(t0 + Scalar(n + 1) * dt);
            traj.states.push_back(x);
        }
    }
    return traj;
}

template <typename Scalar>
std::vector<Scalar> invariant_series(const Trajectory<Scalar>& traj,
                                     const InvariantDescriptor<Scalar>& inv) {
    if (traj.empty()) throw std::invalid_argument("invariant_series: empty trajectory");
    std::vector<Scalar> out;
    out.reserve(traj.size());
    for (const auto& x : traj.states) out.push_back(inv.eval(x));
    return out;
}

enum class ResidualMode { KnownEta, AveragedGamma };

inline std::string to_string(ResidualMode mode) {
    return mode == ResidualMode::KnownEta ? "known-eta" : "averaged-gamma";
}

template <typename Scalar = double>
struct ResidualSeries {
    std::string name;
    ResidualMode mode = ResidualMode::KnownEta;
    std::vector<Scalar> values;  // one per consecutive pair of states

    Scalar max_abs() const {
        using std::abs;
        Scalar m = 0;
        for (const auto& v : values) m = std::max<Scalar>(m, abs(v));
        return m;
    }
};

namespace detail {

// ln(I_{n+1} / I_n). The log is meaningful whenever consecutive samples share a
// strict sign; a zero or a sign change is rejected.
template <typename Scalar>
std::vector<Scalar> log_ratios(const std::vector<Scalar>& series, const std::string& name) {
    using std::log;
    std::vector<Scalar> out;
    if (series.empty()) return out;
    if (series.front() == Scalar(0)) throw NonPositiveInvariant(name, 0);
    out.reserve(series.size() - 1);
    for (std::size_t n = 0; n + 1 < series.size(); ++n) {
        const Scalar ratio = series[n + 1] / series[n];
        if (!(ratio > Scalar(0))) throw NonPositiveInvariant(name, static_cast<long>(n + 1));
        out.push_back(log(ratio));
    }
    return out;
}

}  // namespace detail

/// R_I(n) = ln(I(x_{n+1}) / I(x_n)) + int_{t_n}^{t_{n+1}} eta.
template <typename Scalar>
ResidualSeries<Scalar> residual_known_eta(const Trajectory<Scalar>& traj,
                                          const InvariantDescriptor<Scalar>& inv) {
    if (!inv.has_eta()) throw Error("invariant '" + inv.name + "' has no known decay rate");
    ResidualSeries<Scalar> res{inv.name, ResidualMode::KnownEta, {}};
    res.values = detail::log_ratios(invariant_series(traj, inv), inv.name);
    for (std::size_t n = 0; n < res.values.size(); ++n)
        res.values[n] += inv.eta_integral(traj.times[n], traj.times[n + 1]);
    return res;
}

/// R_I(n) = ln(I(x_{n+1}) / I(x_n)) + dt * mean_k D_kk(t_n).
template <typename Scalar>
ResidualSeries<Scalar> residual_averaged(const Trajectory<Scalar>& traj,
                                         const InvariantDescriptor<Scalar>& inv,
                                         const std::function<Vector<Scalar>(Scalar)>& damping_diag) {
    ResidualSeries<Scalar> res{inv.name, ResidualMode::AveragedGamma, {}};
    res.values = detail::log_ratios(invariant_series(traj, inv), inv.name);
    for (std::size_t n = 0; n < res.values.size(); ++n) {
        const Scalar dt = traj.times[n + 1] - traj.times[n];
        res.values[n] += dt * damping_diag(traj.times[n]).mean();
    }
    return res;
}

template <typename Scalar>
ResidualSeries<Scalar> residual_averaged(const Trajectory<Scalar>& traj,
                                         const InvariantDescriptor<Scalar>& inv,
                                         const DampedSystem<Scalar>& sys) {
    return residual_averaged<Scalar>(traj, inv,
                                     [&sys](Scalar t) { return sys.damping_diag(t); });
}

/// Eighth-order (s = 4) trajectory from t0 to t_end with step dt_ref, recorded
/// every `record_dt` (defaults to the end point only).
template <typename Scalar>
Trajectory<Scalar> reference_solution(const DampedSystem<Scalar>& sys, Scalar t0, Scalar t_end,
                                      const Vector<Scalar>& x0, Scalar dt_ref,
                                      const SolverOptions<Scalar>& opts = {},
                                      std::optional<Scalar> record_dt = std::nullopt,
                                      int quadrature_nodes = 8) {
    using std::llround;
    const long steps = static_cast<long>(llround((t_end - t0) / dt_ref));
    long every = steps > 0 ? steps : 1;
    if (record_dt) every = std::max<long>(1, static_cast<long>(llround(*record_dt / dt_ref)));
    const EepcStepper<Scalar> stepper(make_tableau<Scalar>(4, quadrature_nodes));
    return integrate(sys, stepper, x0, t0, dt_ref, steps, opts, every);
}

// Convergence studies ----------------------------------------------------------

struct OrderRow {
    int stages = 0;
    double dt = 0;
    double error = 0;
    double seconds = 0;
    long total_iterations = 0;
};

struct OrderSlope {
    int stages = 0;
    std::optional<double> slope;  // absent with fewer than two usable points
};

struct OrderTable {
    std::vector<OrderRow> rows;
    std::vector<OrderSlope> slopes;

    std::optional<double> slope(int s) const {
        for (const auto& sl : slopes)
            if (sl.stages == s) return sl.slope;
        return std::nullopt;
    }
};

/// Least-squares slope of log(error) against log(dt), ignoring errors below `floor`.
inline std::optional<double> fit_slope(const std::vector<double>& dts,
                                       const std::vector<double>& errors, double floor) {
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < dts.size(); ++i) {
        if (errors[i] >= floor && std::isfinite(errors[i]) && errors[i] > 0.0) {
            lx.push_back(std::log(dts[i]));
            ly.push_back(std::log(errors[i]));
        }
    }
    if (lx.size() < 2) return std::nullopt;
    const Eigen::Map<const VectorXd> x(lx.data(), static_cast<Index>(lx.size()));
    const Eigen::Map<const VectorXd> y(ly.data(), static_cast<Index>(ly.size()));
    const VectorXd xc = x.array() - x.mean();
    const VectorXd yc = y.array() - y.mean();
    return xc.dot(yc) / xc.squaredNorm();
}

/// Global error at T against `x_ref` for each (s, dt). `norm_weight` multiplies
/// the Euclidean norm (sqrt(dx) gives the discrete L2 norm on a grid). Points
/// with error below 100 x opts.tol relative to |x_ref| are excluded from the
/// slope fits, since the solver tolerance is relative as well.
template <typename Scalar>
OrderTable order_study(const DampedSystem<Scalar>& sys, const Vector<Scalar>& x0, Scalar t_end,
                       const std::vector<Scalar>& dt_list, const std::vector<int>& stage_counts,
                       const Vector<Scalar>& x_ref, const SolverOptions<Scalar>& opts = {},
                       Scalar norm_weight = Scalar(1), int quadrature_nodes = 8) {
    using std::abs;
    using std::llround;
    OrderTable table;
    const double floor = 100.0 * static_cast<double>(opts.tol * norm_weight * x_ref.norm());
    for (int s : stage_counts) {
        const EepcStepper<Scalar> stepper(make_tableau<Scalar>(s, quadrature_nodes));
        std::vector<double> dts, errors;
        for (const Scalar& dt : dt_list) {
            const Scalar ratio = t_end / dt;
            const long steps = static_cast<long>(llround(ratio));
            if (abs(ratio - Scalar(steps)) > Scalar(1e-9) * (Scalar(1) + abs(ratio)))
                throw std::invalid_argument("order_study: T / dt must be an integer");
            const auto start = std::chrono::steady_clock::now();
            // Step with t_end / steps so the run lands on t_end exactly.
            const Scalar h = steps > 0 ? t_end / Scalar(steps) : dt;
            const auto traj = integrate(sys, stepper, x0, Scalar(0), h, steps, opts, steps > 0 ? steps : 1);
            const auto stop = std::chrono::steady_clock::now();
            OrderRow row;
            row.stages = s;
            row.dt = static_cast<double>(dt);
            row.error = static_cast<double>(norm_weight * (traj.states.back() - x_ref).norm());
            row.seconds = std::chrono::duration<double>(stop - start).count();
            for (int it : traj.iterations) row.total_iterations += it;
            table.rows.push_back(row);
            dts.push_back(row.dt);
            errors.push_back(row.error);
        }
        table.slopes.push_back({s, fit_slope(dts, errors, floor)});
    }
    return table;
}

}  // namespace eepc
