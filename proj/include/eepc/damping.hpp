#pragma once

#include "eepc/types.hpp"

#include <cstdint>
#include <optional>
#include <string>

namespace eepc {

enum class DampingKind { ConstantEqual, ConstantUnequal, TimeDependentEqual };

std::string to_string(DampingKind kind);
DampingKind damping_kind_from_string(const std::string& name);

/// Declarative damping description. `gamma` is the per-mode rate entering the
/// equation as -2 gamma u, so D(t) = 2 gamma(t).
///
///  ConstantEqual       gamma_k = gamma
///  ConstantUnequal     gamma_k = gamma (1 + spread u_k), u_k ~ U[-1, 1) seeded
///  TimeDependentEqual  gamma_k(t) = gamma e^{-t}
struct DampingCase {
    DampingKind kind = DampingKind::ConstantEqual;
    double gamma = 0.0;
    double spread = 0.1;
    std::optional<std::uint64_t> seed;
};

/// Diagonal of D(t) and its elementwise antiderivative.
class DampingProfile {
public:
    DampingProfile() = default;
    DampingProfile(const DampingCase& spec, Index dim);

    Index dim() const { return base_.size(); }
    DampingKind kind() const { return kind_; }

    /// True when all diagonal entries coincide at every t.
    bool equal_diagonal() const { return kind_ != DampingKind::ConstantUnequal; }

    VectorXd diag(double t) const;
    VectorXd antideriv(double t) const;

    /// Common diagonal entry (equal-diagonal profiles only).
    double rate(double t) const;
    /// int_a^b rate(s) ds, evaluated in closed form.
    double rate_integral(double a, double b) const;

    /// Entries of D at t = 0 for constant profiles; D(0) otherwise.
    const VectorXd& base() const { return base_; }

private:
    DampingKind kind_ = DampingKind::ConstantEqual;
    VectorXd base_;  // D entries (constant cases) or amplitude of e^{-t}
};

DampingProfile make_damping(const DampingCase& spec, Index dim);

/// Uniform draws on [-1, 1) from std::mt19937_64, using the top 53 bits of each
/// output so the stream is identical across standard libraries.
VectorXd seeded_uniform(std::uint64_t seed, Index n);

}  // namespace eepc
