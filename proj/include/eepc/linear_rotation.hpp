#pragma once

#include "eepc/damped_system.hpp"

#include <cmath>

namespace eepc {

/// x' = omega J x - gamma x on R^2 with J = [[0, 1], [-1, 0]], H = |x|^2 / 2.
/// Closed-form flow: x(t) = e^{-gamma t} R(omega t) x0, the matrix exponential
/// of t (omega J - gamma I).
template <typename Scalar = double>
class LinearRotation final : public DampedSystem<Scalar> {
public:
    using VectorType = Vector<Scalar>;

    LinearRotation(Scalar omega, Scalar gamma) : omega_(omega), gamma_(gamma) {
        const Scalar g = gamma;
        this->invariants_.push_back(
            {"H", [](const VectorType& x) { return x.squaredNorm() / Scalar(2); },
             [g](Scalar) { return Scalar(2) * g; },
             [g](Scalar a, Scalar b) { return Scalar(2) * g * (b - a); }});
    }

    Index dim() const override { return 2; }

    VectorType skew_apply(Scalar, const VectorType&, const VectorType& z) const override {
        VectorType out(2);
        out << omega_ * z(1), -omega_ * z(0);
        return out;
    }

    VectorType grad_h(const VectorType& x) const override { return x; }
    Scalar energy(const VectorType& x) const override { return x.squaredNorm() / Scalar(2); }

    VectorType damping_diag(Scalar) const override { return VectorType::Constant(2, gamma_); }
    VectorType damping_antideriv(Scalar t) const override {
        return VectorType::Constant(2, gamma_ * t);
    }

    VectorType exact(Scalar t, const VectorType& x0) const {
        using std::cos;
        using std::exp;
        using std::sin;
        const Scalar c = cos(omega_ * t), s = sin(omega_ * t), decay = exp(-gamma_ * t);
        VectorType out(2);
        out << c * x0(0) + s * x0(1), -s * x0(0) + c * x0(1);
        return decay * out;
    }

    Scalar omega() const { return omega_; }
    Scalar gamma() const { return gamma_; }

private:
    Scalar omega_;
    Scalar gamma_;
};

}  // namespace eepc
