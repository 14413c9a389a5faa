#pragma once

#include "eepc/damped_system.hpp"
#include "eepc/damping.hpp"
#include "eepc/fd_operators.hpp"

namespace eepc {

struct KdvParams {
    double alpha = -3.0 / 8.0;
    double rho = -0.1;
    double nu = -1e-5;
};

/// Shared pieces of the periodic semi-discretisations: operators and damping.
class PeriodicSystem : public DampedSystem<double> {
public:
    Index dim() const override { return ops_.size(); }
    VectorXd damping_diag(double t) const override { return damping_.diag(t); }
    VectorXd damping_antideriv(double t) const override { return damping_.antideriv(t); }

    const FDOperators& operators() const { return ops_; }
    const DampingProfile& damping() const { return damping_; }

protected:
    PeriodicSystem(Index n1, double dx, const DampingCase& damping);

    FDOperators ops_;
    DampingProfile damping_;
};

/// Damped Burgers: u' = -1/2 D1 grad H(u) - 2 gamma u,  H(u) = sum u^3 / 3.
/// Registered invariants: H, and mass M(u) = sum u (with eta = D for equal
/// diagonals, since 1^T D1 = 0).
class BurgersSystem final : public PeriodicSystem {
public:
    BurgersSystem(Index n1, double dx, const DampingCase& damping);

    VectorXd skew_apply(double t_mid, const VectorXd& x_mid, const VectorXd& z) const override;
    VectorXd grad_h(const VectorXd& u) const override;
    double energy(const VectorXd& u) const override;
};

/// Damped KdV in its first Hamiltonian form: u' = D1 grad H1(u) - 2 gamma u,
///   H1(u) = sum_j alpha/3 u_j^3 + rho/2 u_j^2 - nu/2 ((u_{j+1} - u_j)/dx)^2,
///   grad H1(u) = alpha u^2 + rho u + nu D2 u.
class KdvH1System final : public PeriodicSystem {
public:
    KdvH1System(Index n1, double dx, const KdvParams& params, const DampingCase& damping);

    VectorXd skew_apply(double t_mid, const VectorXd& x_mid, const VectorXd& z) const override;
    VectorXd grad_h(const VectorXd& u) const override;
    double energy(const VectorXd& u) const override;

    const KdvParams& params() const { return params_; }

private:
    KdvParams params_;
};

/// Damped KdV in its second Hamiltonian form:
///   u' = (nu D3 + 2 alpha/3 A(u) + rho D1) u - 2 gamma u,  H2(u) = sum u^2 / 2.
/// S depends on u and is frozen at the step's transformed midpoint.
class KdvH2System final : public PeriodicSystem {
public:
    KdvH2System(Index n1, double dx, const KdvParams& params, const DampingCase& damping);

    VectorXd skew_apply(double t_mid, const VectorXd& x_mid, const VectorXd& z) const override;
    bool state_dependent_skew() const override { return true; }
    VectorXd grad_h(const VectorXd& u) const override;
    double energy(const VectorXd& u) const override;

    const KdvParams& params() const { return params_; }

private:
    KdvParams params_;
};

double kdv_h1_energy(const VectorXd& u, const FDOperators& ops, const KdvParams& params);
double kdv_h2_energy(const VectorXd& u);

BurgersSystem make_burgers(Index n1, double dx, const DampingCase& damping);
KdvH1System make_kdv_h1(Index n1, double dx, const KdvParams& params, const DampingCase& damping);
KdvH2System make_kdv_h2(Index n1, double dx, const KdvParams& params, const DampingCase& damping);

/// amplitude * exp(-(x - centre)^2 / (2 width^2)); the defaults give the
/// standard normal density.
VectorXd gaussian_profile(const VectorXd& grid, double amplitude = 0.3989422804014327,
                          double centre = 0.0, double width = 1.0);

}  // namespace eepc
