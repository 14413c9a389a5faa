#include "doctest.h"

#include "eepc/diagnostics.hpp"
#include "eepc/linear_rotation.hpp"
#include "eepc/stepper.hpp"
#include "eepc/systems.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>

using namespace eepc;

namespace {

const double kPi = std::acos(-1.0);

// x' = -D x with S = 0 and a bounded, non-trivial energy.
class PureDecay final : public DampedSystem<double> {
public:
    PureDecay(Index n, double rate) : n_(n), rate_(rate) {}
    Index dim() const override { return n_; }
    VectorXd skew_apply(double, const VectorXd&, const VectorXd& z) const override {
        return VectorXd::Zero(z.size());
    }
    VectorXd grad_h(const VectorXd& x) const override { return x.array().sin(); }
    double energy(const VectorXd& x) const override { return -x.array().cos().sum(); }
    VectorXd damping_diag(double) const override { return VectorXd::Constant(n_, rate_); }
    VectorXd damping_antideriv(double t) const override { return VectorXd::Constant(n_, rate_ * t); }

private:
    Index n_;
    double rate_;
};

struct BurgersFixture {
    double dx = kPi / 40;
    Index n = grid_count(kPi, kPi / 40);
    VectorXd x0 = gaussian_profile(periodic_grid(kPi, kPi / 40, grid_count(kPi, kPi / 40)));
};

// Periodic central difference written out densely, separate from build_fd_operators.
MatrixXd dense_d1(Index n, double dx) {
    MatrixXd d = MatrixXd::Zero(n, n);
    for (Index i = 0; i < n; ++i) {
        d(i, (i + 1) % n) = 1.0 / (2 * dx);
        d(i, (i + n - 1) % n) = -1.0 / (2 * dx);
    }
    return d;
}

// Averaged vector field step for undamped Burgers. For H = sum u^3/3 the
// average of grad H over the segment is (a^2 + ab + b^2)/3 elementwise.
VectorXd avf_burgers_step(const VectorXd& x0, double h, double dx) {
    const MatrixXd d1 = dense_d1(x0.size(), dx);
    VectorXd x1 = x0;
    for (int it = 0; it < 500; ++it) {
        const VectorXd avg = (x0.array().square() + x0.array() * x1.array() + x1.array().square()) / 3.0;
        const VectorXd next = x0 - 0.5 * h * d1 * avg;
        const double change = (next - x1).cwiseAbs().maxCoeff();
        x1 = next;
        if (change == 0.0) break;
    }
    return x1;
}

}  // namespace

TEST_CASE("StepContext: reference time is the midpoint, also for negative h") {
    const StepContext<double> fwd(1.0, 0.25);
    CHECK(fwd.t_ref() == 1.125);
    CHECK(fwd.t1() == 1.25);
    const StepContext<double> back(1.25, -0.25);
    CHECK(back.t_ref() == 1.125);
}

TEST_CASE("step_eepc: pure damping is exact exponential decay") {
    const PureDecay sys(3, 0.7);
    VectorXd x0(3);
    x0 << 1.0, -2.0, 0.5;
    for (int s = 1; s <= 4; ++s) {
        const auto r = step_eepc(sys, StepContext<double>(0.3, 0.1), x0, make_tableau(s));
        CHECK((r.x1 - std::exp(-0.07) * x0).cwiseAbs().maxCoeff() < 1e-15);
    }
}

TEST_CASE("step_eepc: damped rotation, s = 2") {
    const double gamma = 0.1, h = 0.01;
    const LinearRotation<double> sys(1.0, gamma);
    VectorXd x0(2);
    x0 << 0.8, -0.3;
    const auto r = step_eepc(sys, StepContext<double>(0.0, h), x0, make_tableau(2));
    CHECK(std::abs(r.x1.norm() - std::exp(-gamma * h) * x0.norm()) < 1e-12);

    Eigen::Matrix2d generator;
    generator << -gamma, 1.0, -1.0, -gamma;
    const Eigen::Vector2d exact = (h * generator).exp() * x0;
    CHECK((r.x1 - exact).norm() < std::pow(h, 5));
    CHECK((sys.exact(h, x0) - exact).norm() < 1e-15);
}

TEST_CASE("step_eepc: s = 1 without damping is the averaged vector field method") {
    BurgersFixture f;
    const auto sys = make_burgers(f.n, f.dx, {DampingKind::ConstantEqual, 0.0});
    const EepcStepper<double> stepper(make_tableau(1));
    VectorXd x = f.x0;
    const double h0 = sys.energy(x);
    for (int n = 0; n < 20; ++n) {
        const auto r = stepper.step(sys, StepContext<double>(n * 0.009, 0.009), x);
        const VectorXd avf = avf_burgers_step(x, 0.009, f.dx);
        CHECK((r.x1 - avf).cwiseAbs().maxCoeff() < 1e-12);
        x = r.x1;
    }
    CHECK(std::abs(sys.energy(x) - h0) < 1e-11);
}

TEST_CASE("solve_stages_fixed_point: iteration counts") {
    SUBCASE("scalar decay converges quickly") {
        const PureDecay sys(1, 1.0);
        VectorXd x0 = VectorXd::Constant(1, 2.0);
        const auto r = step_eepc(sys, StepContext<double>(0.0, 0.1), x0, make_tableau(1));
        CHECK(r.iterations <= 30);
        CHECK(std::abs(r.x1(0) - 2.0 * std::exp(-0.1)) < 1e-15);
    }
    SUBCASE("h = 0 is one sweep and the identity") {
        BurgersFixture f;
        const auto sys = make_burgers(f.n, f.dx, {DampingKind::ConstantEqual, 0.25});
        for (int s = 1; s <= 4; ++s) {
            const auto r = step_eepc(sys, StepContext<double>(2.0, 0.0), f.x0, make_tableau(s));
            CHECK(r.iterations == 1);
            CHECK((r.x1 - f.x0).cwiseAbs().maxCoeff() == 0.0);
        }
    }
    SUBCASE("KdV second form at dt = 0.009 converges") {
        const Index n = grid_count(4.0, 0.0808);
        const auto sys = make_kdv_h2(n, 0.0808, KdvParams{}, {DampingKind::ConstantEqual, 0.01});
        const VectorXd x0 = gaussian_profile(periodic_grid(4.0, 0.0808, n));
        for (int s = 1; s <= 4; ++s) {
            const auto r = step_eepc(sys, StepContext<double>(0.0, 0.009), x0, make_tableau(s));
            CHECK(r.iterations > 1);
            CHECK(r.iterations < SolverOptions<double>{}.max_iter);
        }
    }
}

TEST_CASE("step_eepc: error paths") {
    BurgersFixture f;
    const auto sys = make_burgers(f.n, f.dx, {DampingKind::ConstantEqual, 0.25});
    CHECK_THROWS_AS(step_eepc(sys, StepContext<double>(0.0, 0.01), VectorXd(VectorXd::Ones(f.n + 1)), make_tableau(2)),
                    DimensionMismatch);
    SolverOptions<double> one_sweep;
    one_sweep.max_iter = 1;
    CHECK_THROWS_AS(step_eepc(sys, StepContext<double>(0.0, 0.01), f.x0, make_tableau(2), one_sweep),
                    NonConvergence);
    // A step far beyond the contraction radius diverges. (Very large h is
    // different: the transform shrinks w0 and the iteration contracts again.)
    try {
        step_eepc(sys, StepContext<double>(0.0, 5.0), VectorXd(10.0 * f.x0), make_tableau(2));
        FAIL("expected NonConvergence");
    } catch (const NonConvergence& e) {
        CHECK(e.max_iter == 100);
        CHECK(e.step == -1);
    }
}

TEST_CASE("step_eepc: forward then backward step returns the initial state") {
    BurgersFixture f;
    const Index nk = grid_count(4.0, 0.0808);
    const VectorXd xk = gaussian_profile(periodic_grid(4.0, 0.0808, nk));
    const auto burgers = make_burgers(f.n, f.dx, {DampingKind::ConstantUnequal, 0.25, 0.1, 17u});
    const auto kdv2 = make_kdv_h2(nk, 0.0808, KdvParams{}, {DampingKind::TimeDependentEqual, 0.5});
    const double h = 0.009, t0 = 0.4;
    const SolverOptions<double> opts;
    for (int s = 1; s <= 4; ++s) {
        CAPTURE(s);
        const EepcStepper<double> stepper(make_tableau(s));
        for (const auto* pair : {static_cast<const DampedSystem<double>*>(&burgers),
                                 static_cast<const DampedSystem<double>*>(&kdv2)}) {
            const VectorXd& x0 = pair->dim() == f.n ? f.x0 : xk;
            const auto fwd = stepper.step(*pair, StepContext<double>(t0, h), x0, opts);
            const auto back = stepper.step(*pair, StepContext<double>(t0 + h, -h), fwd.x1, opts);
            CHECK((back.x1 - x0).cwiseAbs().maxCoeff() <= 10 * opts.tol * (1 + x0.cwiseAbs().maxCoeff()));
        }
    }
}

TEST_CASE("step_eepc: transformed energy is conserved for unequal damping") {
    BurgersFixture f;
    const auto sys = make_burgers(f.n, f.dx, {DampingKind::ConstantUnequal, 0.25, 0.1, 5u});
    for (int s = 1; s <= 4; ++s) {
        const auto r = step_eepc(sys, StepContext<double>(1.0, 0.009), f.x0, make_tableau(s));
        const double before = sys.energy(r.stages.node(0));
        const double after = sys.energy(r.stages.node(s));
        CHECK(std::abs(after - before) < 1e-10 * std::abs(before));
        // The physical energy is not conserved at the same level.
        CHECK(std::abs(sys.energy(r.x1) - sys.energy(f.x0)) > 1e-6 * std::abs(before));
    }
}

TEST_CASE("step_eepc: quadratic invariant with equal damping decays at the exact rate") {
    const double gamma = 0.3;
    const LinearRotation<double> sys(2.0, gamma);
    VectorXd x0(2);
    x0 << 0.4, 1.1;
    for (int s = 1; s <= 4; ++s) {
        const auto r = step_eepc(sys, StepContext<double>(0.0, 0.05), x0, make_tableau(s));
        const double residual = std::log(sys.energy(r.x1) / sys.energy(x0)) + 2 * gamma * 0.05;
        CHECK(std::abs(residual) < 1e-10);
    }
}

TEST_CASE("step_eepc: too few quadrature nodes break energy conservation") {
    // Undamped Burgers with s = 4 needs exactness to degree 11; q = 2 only gives 3.
    BurgersFixture f;
    const auto sys = make_burgers(f.n, f.dx, {DampingKind::ConstantEqual, 0.0});
    const VectorXd x0 = 3.0 * f.x0;
    auto drift = [&](int q) {
        const EepcStepper<double> stepper(make_tableau(4, q));
        VectorXd x = x0;
        for (int n = 0; n < 50; ++n) x = stepper.step(sys, StepContext<double>(n * 0.05, 0.05), x).x1;
        return std::abs(sys.energy(x) - sys.energy(x0));
    };
    CHECK(drift(8) < 1e-11);
    CHECK(drift(6) < 1e-11);
    CHECK(drift(2) > 1e-9);
}

TEST_CASE("step_eepc: works in extended precision") {
    const LinearRotation<long double> sys(1.0L, 0.1L);
    Vector<long double> x0(2);
    x0 << 1.0L, 0.5L;
    SolverOptions<long double> opts;
    opts.tol = 1e-17L;
    const auto r = step_eepc(sys, StepContext<long double>(0.0L, 0.01L), x0, make_tableau<long double>(3), opts);
    CHECK(static_cast<double>((r.x1 - sys.exact(0.01L, x0)).norm()) < 1e-17);
}
