#include "doctest.h"

#include "eepc/diagnostics.hpp"
#include "eepc/linear_rotation.hpp"
#include "eepc/systems.hpp"

#include <cmath>

using namespace eepc;

namespace {

const double kPi = std::acos(-1.0);

struct BurgersSetup {
    double dx = kPi / 40;
    Index n = grid_count(kPi, kPi / 40);
    VectorXd x0 = gaussian_profile(periodic_grid(kPi, kPi / 40, grid_count(kPi, kPi / 40)));
};

struct KdvSetup {
    double dx = 0.0808;
    Index n = grid_count(4.0, 0.0808);
    VectorXd x0 = gaussian_profile(periodic_grid(4.0, 0.0808, grid_count(4.0, 0.0808)));
};

}  // namespace

TEST_CASE("integrate: bookkeeping") {
    const LinearRotation<double> sys(1.0, 0.1);
    VectorXd x0(2);
    x0 << 1.0, 0.0;
    const EepcStepper<double> stepper(make_tableau(2));
    const auto traj = integrate<double>(sys, stepper, x0, 0.0, 0.1, 10);
    CHECK(traj.size() == 11);
    CHECK(traj.times.size() == traj.states.size());
    CHECK(traj.iterations.size() == 10);
    for (std::size_t n = 1; n < traj.size(); ++n)
        CHECK(traj.times[n] - traj.times[n - 1] == doctest::Approx(0.1));
    const auto thin = integrate<double>(sys, stepper, x0, 0.0, 0.1, 10, {}, 4);
    CHECK(thin.size() == 4);  // t = 0, 0.4, 0.8, 1.0
    CHECK(thin.times.back() == doctest::Approx(1.0));
    CHECK(integrate<double>(sys, stepper, x0, 0.0, 0.1, 0).size() == 1);
}

TEST_CASE("integrate: non-convergence reports the failing step") {
    BurgersSetup b;
    const auto sys = make_burgers(b.n, b.dx, {DampingKind::ConstantEqual, 0.25});
    const EepcStepper<double> stepper(make_tableau(2));
    SolverOptions<double> opts;
    opts.max_iter = 3;
    try {
        integrate<double>(sys, stepper, b.x0, 0.0, 0.05, 5, opts);
        FAIL("expected NonConvergence");
    } catch (const NonConvergence& e) {
        CHECK(e.step == 0);
    }
}

TEST_CASE("invariant_series: zero state") {
    const LinearRotation<double> sys(1.0, 0.1);
    Trajectory<double> traj{{0.0, 1.0}, {VectorXd::Zero(2), VectorXd::Zero(2)}, {1}};
    for (double v : invariant_series(traj, sys.invariant("H"))) CHECK(v == 0.0);
    CHECK_THROWS(invariant_series(Trajectory<double>{}, sys.invariant("H")));
}

TEST_CASE("Burgers, constant equal damping: mass decays exactly, residual at machine level") {
    BurgersSetup b;
    const double gamma = 0.25, dt = 0.009;
    const auto sys = make_burgers(b.n, b.dx, {DampingKind::ConstantEqual, gamma});
    for (int s = 1; s <= 4; ++s) {
        CAPTURE(s);
        const auto traj = integrate<double>(sys, EepcStepper<double>(make_tableau(s)), b.x0, 0.0, dt, 100);
        const auto mass = invariant_series(traj, sys.invariant("M"));
        for (std::size_t n = 0; n < mass.size(); ++n)
            CHECK(std::abs(mass[n] / (std::exp(-2 * gamma * n * dt) * mass[0]) - 1.0) < 1e-10);
        const auto r = residual_known_eta(traj, sys.invariant("M"));
        CHECK(r.values.size() == traj.size() - 1);
        CHECK(r.max_abs() <= 1e-10);
        // Equal diagonals: the averaged residual is the same series.
        const auto avg = residual_averaged(traj, sys.invariant("M"), sys);
        CHECK(avg.mode == ResidualMode::AveragedGamma);
        for (std::size_t n = 0; n < r.values.size(); ++n) CHECK(std::abs(avg.values[n] - r.values[n]) < 1e-15);
        // Monotone decay of positive conformal invariants.
        for (std::size_t n = 1; n < mass.size(); ++n) CHECK(mass[n] < mass[n - 1]);
    }
}

TEST_CASE("KdV second form: H2 conformal decay for equal damping") {
    KdvSetup k;
    SUBCASE("constant") {
        const double gamma = 0.01, dt = 0.009;
        const auto sys = make_kdv_h2(k.n, k.dx, KdvParams{}, {DampingKind::ConstantEqual, gamma});
        const auto traj = integrate<double>(sys, EepcStepper<double>(make_tableau(2)), k.x0, 0.0, dt, 60);
        const auto h2 = invariant_series(traj, sys.invariant("H2"));
        for (std::size_t n = 0; n < h2.size(); ++n)
            CHECK(std::abs(h2[n] / (std::exp(-4 * gamma * n * dt) * h2[0]) - 1.0) < 1e-10);
    }
    SUBCASE("every s and step size") {
        const auto sys = make_kdv_h2(k.n, k.dx, KdvParams{}, {DampingKind::ConstantEqual, 0.01});
        for (int s = 1; s <= 4; ++s)
            for (double dt : {0.018, 0.009, 0.0045}) {
                CAPTURE(s);
                CAPTURE(dt);
                const auto traj = integrate<double>(sys, EepcStepper<double>(make_tableau(s)), k.x0, 0.0, dt, 40);
                CHECK(residual_known_eta(traj, sys.invariant("H2")).max_abs() <= 1e-10);
            }
    }
    SUBCASE("time dependent") {
        const auto sys = make_kdv_h2(k.n, k.dx, KdvParams{}, {DampingKind::TimeDependentEqual, 0.5});
        const auto traj = integrate<double>(sys, EepcStepper<double>(make_tableau(3)), k.x0, 0.0, 0.009, 60);
        CHECK(residual_known_eta(traj, sys.invariant("H2")).max_abs() <= 1e-10);
        // The registered integral is 2 (e^{-t_n} - e^{-t_{n+1}}).
        const auto h2 = invariant_series(traj, sys.invariant("H2"));
        for (std::size_t n = 0; n + 1 < h2.size(); ++n) {
            const double expected = -2 * (std::exp(-traj.times[n]) - std::exp(-traj.times[n + 1]));
            CHECK(std::abs(std::log(h2[n + 1] / h2[n]) - expected) < 1e-10);
        }
    }
}

TEST_CASE("residuals: undamped conservation and sign errors") {
    BurgersSetup b;
    const auto sys = make_burgers(b.n, b.dx, {DampingKind::ConstantEqual, 0.0});
    const auto traj = integrate<double>(sys, EepcStepper<double>(make_tableau(2)), b.x0, 0.0, 0.009, 50);
    InvariantDescriptor<double> energy{"H", [&](const VectorXd& u) { return sys.energy(u); },
                                       [](double) { return 0.0; }, [](double, double) { return 0.0; }};
    CHECK(residual_known_eta(traj, energy).max_abs() <= 1e-11);
    CHECK_THROWS_AS(residual_known_eta(traj, sys.invariant("H")), Error);  // no eta registered

    Trajectory<double> flips{{0.0, 1.0, 2.0}, {VectorXd::Constant(1, 1.0), VectorXd::Constant(1, -1.0),
                                               VectorXd::Constant(1, -2.0)}, {1, 1}};
    InvariantDescriptor<double> ident{"x", [](const VectorXd& v) { return v(0); }, {}, {}};
    try {
        residual_averaged<double>(flips, ident, [](double) { return VectorXd::Zero(1); });
        FAIL("expected NonPositiveInvariant");
    } catch (const NonPositiveInvariant& e) {
        CHECK(e.index == 1);
    }
    // Consistently negative invariants have a well-defined log ratio.
    Trajectory<double> negative{{0.0, 1.0}, {VectorXd::Constant(1, -1.0), VectorXd::Constant(1, -0.5)}, {1}};
    const auto r = residual_averaged<double>(negative, ident, [](double) { return VectorXd::Zero(1); });
    CHECK(r.values[0] == doctest::Approx(std::log(0.5)));
}

TEST_CASE("Burgers, unequal damping: averaged mass residual is bounded but not machine zero") {
    BurgersSetup b;
    const auto sys = make_burgers(b.n, b.dx, {DampingKind::ConstantUnequal, 0.25, 0.1, 1234u});
    const auto traj = integrate<double>(sys, EepcStepper<double>(make_tableau(1)), b.x0, 0.0, 0.009, 300);
    const auto r = residual_averaged(traj, sys.invariant("M"), sys);
    CHECK(r.max_abs() > 1e-6);
    CHECK(r.max_abs() < 1e-2);
}

TEST_CASE("reference_solution: damped rotation") {
    const LinearRotation<double> sys(1.0, 0.1);
    VectorXd x0(2);
    x0 << 1.0, 0.5;
    const auto ref = reference_solution<double>(sys, 0.0, 1.0, x0, 0.01);
    CHECK(ref.size() == 2);
    CHECK(ref.times.back() == doctest::Approx(1.0));
    CHECK((ref.states.back() - sys.exact(1.0, x0)).norm() < 1e-12);
    const auto finer = reference_solution<double>(sys, 0.0, 1.0, x0, 0.005);
    CHECK((finer.states.back() - ref.states.back()).norm() < 1e-12);
    const auto recorded = reference_solution<double>(sys, 0.0, 1.0, x0, 0.01, {}, 0.25);
    CHECK(recorded.size() == 5);

    const LinearRotation<double> undamped(1.0, 0.0);
    const auto cons = reference_solution<double>(undamped, 0.0, 1.0, x0, 0.01, {}, 0.01);
    for (const auto& x : cons.states) CHECK(std::abs(undamped.energy(x) - undamped.energy(x0)) < 1e-11);
}

TEST_CASE("fit_slope") {
    std::vector<double> dts{0.1, 0.05, 0.025}, errs;
    for (double dt : dts) errs.push_back(3.0 * std::pow(dt, 4));
    CHECK(*fit_slope(dts, errs, 0.0) == doctest::Approx(4.0));
    CHECK_FALSE(fit_slope({0.1}, {1e-3}, 0.0).has_value());
    CHECK_FALSE(fit_slope(dts, errs, 1.0).has_value());  // everything under the floor
}

TEST_CASE("order_study: double precision on the damped rotation") {
    const LinearRotation<double> sys(1.0, 0.1);
    VectorXd x0(2);
    x0 << 1.0, 0.5;
    const std::vector<double> dts{0.1, 0.05, 0.025, 0.0125};
    const auto table = order_study<double>(sys, x0, 1.0, dts, {1, 2}, sys.exact(1.0, x0));
    CHECK(table.rows.size() == 8);
    CHECK(std::abs(*table.slope(1) - 2.0) < 0.2);
    CHECK(std::abs(*table.slope(2) - 4.0) < 0.3);
    for (const auto& row : table.rows) CHECK(row.seconds >= 0.0);

    const auto single = order_study<double>(sys, x0, 1.0, {0.1}, {1}, sys.exact(1.0, x0));
    CHECK_FALSE(single.slope(1).has_value());
    CHECK_THROWS_AS(order_study<double>(sys, x0, 1.0, {0.3}, {1}, sys.exact(1.0, x0)), std::invalid_argument);
}

TEST_CASE("order_study: Burgers against an s = 4 reference") {
    // Without damping the collocation orders 2 and 4 are visible. With damping
    // the midpoint-frozen transform leaves a second-order term for this cubic
    // energy, so every s converges at order two.
    BurgersSetup b;
    const std::vector<double> dts{0.1, 0.05, 0.025, 0.0125};
    for (double gamma : {0.0, 0.25}) {
        CAPTURE(gamma);
        const auto sys = make_burgers(b.n, b.dx, {DampingKind::ConstantEqual, gamma});
        const auto ref = reference_solution<double>(sys, 0.0, 1.0, b.x0, 0.1 / 64);
        const auto table = order_study<double>(sys, b.x0, 1.0, dts, {1, 2}, ref.states.back(), {}, std::sqrt(b.dx));
        CHECK(std::abs(*table.slope(1) - 2.0) < 0.3);
        if (gamma == 0.0) {
            CHECK(std::abs(*table.slope(2) - *table.slope(1) - 2.0) < 0.3);
        } else {
            CHECK(std::abs(*table.slope(2) - 2.0) < 0.3);
        }
    }
}
