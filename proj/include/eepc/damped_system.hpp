#pragma once

#include "eepc/types.hpp"

#include <functional>
#include <string>
#include <vector>

namespace eepc {

/// A functional I(x) monitored along a trajectory. When the conformal law
/// dI/dt = -eta(t) I is known, `eta` and `eta_integral` are set.
template <typename Scalar = double>
struct InvariantDescriptor {
    std::string name;
    std::function<Scalar(const Vector<Scalar>&)> eval;
    std::function<Scalar(Scalar)> eta;
    std::function<Scalar(Scalar, Scalar)> eta_integral;

    bool has_eta() const { return static_cast<bool>(eta_integral); }
};

/// Damped Hamiltonian system  x' = S(t, x) grad H(x) - D(t) x  with diagonal D.
template <typename Scalar = double>
class DampedSystem {
public:
    using VectorType = Vector<Scalar>;

    virtual ~DampedSystem() = default;

    virtual Index dim() const = 0;

    /// Applies S, frozen at (t_mid, x_mid), to z. For constant S the frozen
    /// arguments are ignored.
    virtual VectorType skew_apply(Scalar t_mid, const VectorType& x_mid,
                                  const VectorType& z) const = 0;

    /// Whether S depends on x (the stepper then re-freezes it every sweep).
    virtual bool state_dependent_skew() const { return false; }

    virtual VectorType grad_h(const VectorType& x) const = 0;
    virtual Scalar energy(const VectorType& x) const = 0;

    /// Diagonal of D(t).
    virtual VectorType damping_diag(Scalar t) const = 0;
    /// Elementwise antiderivative Phi(t) with Phi' = damping_diag.
    virtual VectorType damping_antideriv(Scalar t) const = 0;

    const std::vector<InvariantDescriptor<Scalar>>& invariants() const { return invariants_; }

    const InvariantDescriptor<Scalar>& invariant(const std::string& name) const {
        for (const auto& inv : invariants_)
            if (inv.name == name) return inv;
        throw Error("no invariant named '" + name + "'");
    }

protected:
    std::vector<InvariantDescriptor<Scalar>> invariants_;
};

}  // namespace eepc
