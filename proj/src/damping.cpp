#include "eepc/damping.hpp"

#include <cmath>
#include <random>

namespace eepc {

std::string to_string(DampingKind kind) {
    switch (kind) {
        case DampingKind::ConstantEqual: return "constant-equal";
        case DampingKind::ConstantUnequal: return "constant-unequal";
        case DampingKind::TimeDependentEqual: return "time-dependent-equal";
    }
    return "unknown";
}

DampingKind damping_kind_from_string(const std::string& name) {
    if (name == "constant-equal") return DampingKind::ConstantEqual;
    if (name == "constant-unequal") return DampingKind::ConstantUnequal;
    if (name == "time-dependent-equal") return DampingKind::TimeDependentEqual;
    throw Error("unknown damping case '" + name + "'");
}

VectorXd seeded_uniform(std::uint64_t seed, Index n) {
    std::mt19937_64 gen(seed);
    VectorXd out(n);
    for (Index k = 0; k < n; ++k) {
        const double unit = static_cast<double>(gen() >> 11) * 0x1.0p-53;  // [0, 1)
        out(k) = 2.0 * unit - 1.0;
    }
    return out;
}

DampingProfile::DampingProfile(const DampingCase& spec, Index dim) : kind_(spec.kind) {
    switch (spec.kind) {
        case DampingKind::ConstantEqual:
        case DampingKind::TimeDependentEqual:
            base_ = VectorXd::Constant(dim, 2.0 * spec.gamma);
            break;
        case DampingKind::ConstantUnequal:
            if (!spec.seed) throw MissingSeed();
            base_ = 2.0 * spec.gamma *
                    (VectorXd::Ones(dim) + spec.spread * seeded_uniform(*spec.seed, dim));
            break;
    }
}

VectorXd DampingProfile::diag(double t) const {
    if (kind_ == DampingKind::TimeDependentEqual) return base_ * std::exp(-t);
    return base_;
}

VectorXd DampingProfile::antideriv(double t) const {
    if (kind_ == DampingKind::TimeDependentEqual) return -base_ * std::exp(-t);
    return base_ * t;
}

double DampingProfile::rate(double t) const {
    if (!equal_diagonal()) throw Error("damping rate requested for an unequal diagonal");
    return kind_ == DampingKind::TimeDependentEqual ? base_(0) * std::exp(-t) : base_(0);
}

double DampingProfile::rate_integral(double a, double b) const {
    if (!equal_diagonal()) throw Error("damping rate requested for an unequal diagonal");
    if (kind_ == DampingKind::TimeDependentEqual)
        return base_(0) * (std::exp(-a) - std::exp(-b));
    return base_(0) * (b - a);
}

DampingProfile make_damping(const DampingCase& spec, Index dim) { return {spec, dim}; }

}  // namespace eepc
