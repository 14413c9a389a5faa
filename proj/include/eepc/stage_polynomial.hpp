#pragma once

#include "eepc/types.hpp"

namespace eepc {

/// Degree-s interpolant v(t0 + tau h) of the transformed solution through the
/// equispaced node values w_0..w_s (stored column-wise).
template <typename Scalar = double>
struct StagePolynomial {
    Matrix<Scalar> node_values;  // dim x (s+1)
    Scalar h = 0;
    Scalar t0 = 0;

    int stages() const { return static_cast<int>(node_values.cols()) - 1; }

    auto node(Index j) const { return node_values.col(j); }
};

/// Value of the interpolant at t0 + tau h (barycentric-free Lagrange form; s <= 4
/// in practice so the direct product is fine).
template <typename Scalar>
Vector<Scalar> eval_stage_polynomial(const StagePolynomial<Scalar>& p, const Scalar& tau) {
    const Index n = p.node_values.cols();
    const int s = p.stages();
    Vector<Scalar> out = Vector<Scalar>::Zero(p.node_values.rows());
    for (Index j = 0; j < n; ++j) {
        Scalar w = 1;
        const Scalar tj = s == 0 ? Scalar(0) : Scalar(j) / Scalar(s);
        for (Index m = 0; m < n; ++m) {
            if (m == j) continue;
            const Scalar tm = Scalar(m) / Scalar(s);
            w *= (tau - tm) / (tj - tm);
        }
        out += w * p.node_values.col(j);
    }
    return out;
}

}  // namespace eepc
