#include "eepc/systems.hpp"

#include <cmath>

namespace eepc {

namespace {

// Conformal registration for invariants whose eta is k times the common
// diagonal entry of D.
InvariantDescriptor<double> conformal(std::string name,
                                      std::function<double(const VectorXd&)> eval,
                                      const DampingProfile& damping, double multiple) {
    InvariantDescriptor<double> inv{std::move(name), std::move(eval), {}, {}};
    if (damping.equal_diagonal()) {
        inv.eta = [damping, multiple](double t) { return multiple * damping.rate(t); };
        inv.eta_integral = [damping, multiple](double a, double b) {
            return multiple * damping.rate_integral(a, b);
        };
    }
    return inv;
}

}  // namespace

PeriodicSystem::PeriodicSystem(Index n1, double dx, const DampingCase& damping)
    : ops_(build_fd_operators(n1, dx)), damping_(make_damping(damping, n1)) {}

// Burgers ---------------------------------------------------------------------

BurgersSystem::BurgersSystem(Index n1, double dx, const DampingCase& damping)
    : PeriodicSystem(n1, dx, damping) {
    invariants_.push_back({"H", [](const VectorXd& u) { return u.array().cube().sum() / 3.0; }, {}, {}});
    invariants_.push_back(conformal("M", [](const VectorXd& u) { return u.sum(); }, damping_, 1.0));
}

VectorXd BurgersSystem::skew_apply(double, const VectorXd&, const VectorXd& z) const {
    return -0.5 * (ops_.d1 * z);
}

VectorXd BurgersSystem::grad_h(const VectorXd& u) const { return u.array().square(); }

double BurgersSystem::energy(const VectorXd& u) const { return u.array().cube().sum() / 3.0; }

// KdV, first form -----------------------------------------------------------------

double kdv_h1_energy(const VectorXd& u, const FDOperators& ops, const KdvParams& p) {
    const Index n = u.size();
    double acc = 0.0;
    for (Index j = 0; j < n; ++j) {
        const double du = (u((j + 1) % n) - u(j)) / ops.dx;
        acc += p.alpha / 3.0 * u(j) * u(j) * u(j) + p.rho / 2.0 * u(j) * u(j) - p.nu / 2.0 * du * du;
    }
    return acc;
}

double kdv_h2_energy(const VectorXd& u) { return 0.5 * u.squaredNorm(); }

KdvH1System::KdvH1System(Index n1, double dx, const KdvParams& params, const DampingCase& damping)
    : PeriodicSystem(n1, dx, damping), params_(params) {
    const FDOperators ops = ops_;
    invariants_.push_back(
        {"H1", [ops, params](const VectorXd& u) { return kdv_h1_energy(u, ops, params); }, {}, {}});
    invariants_.push_back({"H2", [](const VectorXd& u) { return kdv_h2_energy(u); }, {}, {}});
}

VectorXd KdvH1System::skew_apply(double, const VectorXd&, const VectorXd& z) const {
    return ops_.d1 * z;
}

VectorXd KdvH1System::grad_h(const VectorXd& u) const {
    return params_.alpha * u.array().square().matrix() + params_.rho * u + params_.nu * (ops_.d2 * u);
}

double KdvH1System::energy(const VectorXd& u) const { return kdv_h1_energy(u, ops_, params_); }

// KdV, second form ----------------------------------------------------------------

KdvH2System::KdvH2System(Index n1, double dx, const KdvParams& params, const DampingCase& damping)
    : PeriodicSystem(n1, dx, damping), params_(params) {
    // d/dt H2 = -grad H2^T D u = -2 D H2 for equal diagonals.
    invariants_.push_back(conformal("H2", [](const VectorXd& u) { return kdv_h2_energy(u); }, damping_, 2.0));
    const FDOperators ops = ops_;
    invariants_.push_back(
        {"H1", [ops, params](const VectorXd& u) { return kdv_h1_energy(u, ops, params); }, {}, {}});
}

VectorXd KdvH2System::skew_apply(double, const VectorXd& x_mid, const VectorXd& z) const {
    VectorXd out = params_.nu * (ops_.d3 * z) + params_.rho * (ops_.d1 * z);
    out += (2.0 * params_.alpha / 3.0) * bracket_apply(x_mid, z, ops_.dx);
    return out;
}

VectorXd KdvH2System::grad_h(const VectorXd& u) const { return u; }

double KdvH2System::energy(const VectorXd& u) const { return kdv_h2_energy(u); }

// Factories -------------------------------------------------------------------------

BurgersSystem make_burgers(Index n1, double dx, const DampingCase& damping) {
    return {n1, dx, damping};
}

KdvH1System make_kdv_h1(Index n1, double dx, const KdvParams& params, const DampingCase& damping) {
    return {n1, dx, params, damping};
}

KdvH2System make_kdv_h2(Index n1, double dx, const KdvParams& params, const DampingCase& damping) {
    return {n1, dx, params, damping};
}

VectorXd gaussian_profile(const VectorXd& grid, double amplitude, double centre, double width) {
    return amplitude * (-(grid.array() - centre).square() / (2.0 * width * width)).exp().matrix();
}

}  // namespace eepc
