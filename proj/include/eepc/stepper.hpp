#pragma once

#include "eepc/damped_system.hpp"
#include "eepc/stage_polynomial.hpp"
#include "eepc/tableau.hpp"
#include "eepc/types.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <tuple>
#include <utility>

namespace eepc {

/// One step [t0, t0 + h]; the exponential transform is referenced to the
/// midpoint. h may be negative (adjoint step).
template <typename Scalar = double>
class StepContext {
public:
    StepContext(Scalar t0, Scalar h) : t0_(t0), h_(h), t_ref_(t0 + h / Scalar(2)) {}

    Scalar t0() const { return t0_; }
    Scalar h() const { return h_; }
    Scalar t1() const { return t0_ + h_; }
    Scalar t_ref() const { return t_ref_; }

private:
    Scalar t0_;
    Scalar h_;
    Scalar t_ref_;
};

template <typename Scalar = double>
struct SolverOptions {
    Scalar tol = Scalar(1e-13);
    int max_iter = 100;

    void validate() const {
        if (!(tol > Scalar(0))) throw std::invalid_argument("solver tolerance must be positive");
        if (max_iter < 1) throw std::invalid_argument("max_iter must be >= 1");
    }
};

template <typename Scalar = double>
struct StepResult {
    Vector<Scalar> x1;
    int iterations = 0;
    Scalar last_update = 0;
    StagePolynomial<Scalar> stages;
};

/// Exponential energy-dissipation-preserving collocation stepper.
///
/// Works on the transformed variable w = e^{Y(t)} x, Y(t) = Phi(t) - Phi(t_ref).
/// The node values w_1..w_s of the degree-s interpolant satisfy
///
///   w_j = w_0 + h sum_q omega_q A(tau_j, sigma_q) S grad H(v(sigma_q)),
///
/// which is solved by fixed-point iteration from w_j = w_0. The interpolation
/// and stage-weight matrices are built once per tableau, so a stepper is
/// immutable and may be shared between threads.
template <typename Scalar = double>
class EepcStepper {
public:
    explicit EepcStepper(CollocationTableau<Scalar> tableau) : tab_(std::move(tableau)) {
        const auto& quad = tab_.quadrature;
        interp_ = lagrange_basis(tab_.nodes, quad.nodes).transpose();  // (s+1) x Q
        weights_.resize(tab_.stages + 1, quad.size());
        for (Index j = 0; j <= tab_.stages; ++j)
            for (Index q = 0; q < quad.size(); ++q)
                weights_(j, q) = quad.weights(q) * tab_(tab_.nodes(j), quad.nodes(q));
    }

    const CollocationTableau<Scalar>& tableau() const { return tab_; }

    /// Solves the stage equations for the transformed initial value w0.
    /// Returns the converged interpolant, sweep count and last update size.
    std::tuple<StagePolynomial<Scalar>, int, Scalar> solve_stages_fixed_point(
        const DampedSystem<Scalar>& sys, const StepContext<Scalar>& ctx, const Vector<Scalar>& w0,
        const SolverOptions<Scalar>& opts) const {
        const Index n = w0.size();
        const int s = tab_.stages;
        const Index nq = tab_.quadrature.size();
        const Scalar h = ctx.h();
        const Scalar t_mid = ctx.t0() + h / Scalar(2);
        const Scalar threshold = opts.tol * (Scalar(1) + w0.template lpNorm<Eigen::Infinity>());

        StagePolynomial<Scalar> poly{w0.replicate(1, s + 1), h, ctx.t0()};
        Matrix<Scalar> grads(n, nq);
        Matrix<Scalar> next(n, s + 1);
        Vector<Scalar> x_mid = w0;
        Scalar update = 0;

        for (int it = 1; it <= opts.max_iter; ++it) {
            const Matrix<Scalar> v = poly.node_values * interp_;  // n x Q
            for (Index q = 0; q < nq; ++q) grads.col(q) = sys.grad_h(v.col(q));
            // S is linear once frozen, so weight the gradients before applying it.
            const Matrix<Scalar> weighted = grads * weights_.transpose();  // n x (s+1)
            if (sys.state_dependent_skew())
                x_mid = (poly.node_values.col(0) + poly.node_values.col(s)) / Scalar(2);
            next.col(0) = w0;
            for (Index j = 1; j <= s; ++j)
                next.col(j) = w0 + h * sys.skew_apply(t_mid, x_mid, weighted.col(j));

            // maxCoeff may skip NaN, so a blown-up iterate is caught explicitly.
            if (!next.allFinite())
                throw NonConvergence(std::numeric_limits<double>::infinity(), opts.max_iter);
            update = (next - poly.node_values).cwiseAbs().maxCoeff();
            poly.node_values.swap(next);
            if (update <= threshold) return {std::move(poly), it, update};
        }
        throw NonConvergence(static_cast<double>(update), opts.max_iter);
    }

    StepResult<Scalar> step(const DampedSystem<Scalar>& sys, const StepContext<Scalar>& ctx,
                            const Vector<Scalar>& x0, const SolverOptions<Scalar>& opts = {}) const {
        if (x0.size() != sys.dim()) throw DimensionMismatch(sys.dim(), x0.size());
        const Vector<Scalar> phi_ref = sys.damping_antideriv(ctx.t_ref());
        const Vector<Scalar> y0 = sys.damping_antideriv(ctx.t0()) - phi_ref;
        const Vector<Scalar> y1 = sys.damping_antideriv(ctx.t1()) - phi_ref;

        const Vector<Scalar> w0 = y0.array().exp() * x0.array();
        auto [poly, iterations, update] = solve_stages_fixed_point(sys, ctx, w0, opts);

        StepResult<Scalar> result;
        result.x1 = (-y1.array()).exp() * poly.node_values.col(tab_.stages).array();
        result.iterations = iterations;
        result.last_update = update;
        result.stages = std::move(poly);
        return result;
    }

private:
    CollocationTableau<Scalar> tab_;
    Matrix<Scalar> interp_;   // (s+1) x Q, l_j(sigma_q)
    Matrix<Scalar> weights_;  // (s+1) x Q, omega_q A(tau_j, sigma_q)
};

/// One-shot convenience wrapper; prefer EepcStepper when stepping repeatedly.
template <typename Scalar>
StepResult<Scalar> step_eepc(const DampedSystem<Scalar>& sys, const StepContext<Scalar>& ctx,
                             const Vector<Scalar>& x0, const CollocationTableau<Scalar>& tab,
                             const SolverOptions<Scalar>& opts = {}) {
    return EepcStepper<Scalar>(tab).step(sys, ctx, x0, opts);
}

}  // namespace eepc
