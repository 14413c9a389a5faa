#pragma once

#include "eepc/types.hpp"

#include <cmath>
#include <limits>

namespace eepc {

/// Quadrature rule on [0, 1].
template <typename Scalar>
struct QuadratureRule {
    Vector<Scalar> nodes;
    Vector<Scalar> weights;

    Index size() const { return nodes.size(); }

    template <typename F>
    auto integrate(F&& f) const {
        auto acc = weights(0) * f(nodes(0));
        for (Index i = 1; i < size(); ++i) acc += weights(i) * f(nodes(i));
        return acc;
    }
};

/// Gauss-Legendre rule with q nodes shifted to [0, 1]; exact up to degree 2q-1.
/// Nodes are found by Newton iteration on the three-term Legendre recurrence,
/// carried out in Scalar so extended-precision types get full accuracy.
template <typename Scalar = double>
QuadratureRule<Scalar> gauss_legendre(int q) {
    using std::abs;
    using std::atan;
    using std::cos;
    if (q < 1) throw std::invalid_argument("gauss_legendre: q must be >= 1");

    const Scalar pi = Scalar(4) * atan(Scalar(1));
    const Scalar eps = std::numeric_limits<Scalar>::epsilon();
    QuadratureRule<Scalar> rule{Vector<Scalar>(q), Vector<Scalar>(q)};

    // Roots are symmetric about zero on [-1, 1]; solve the upper half.
    for (int i = 0; i < (q + 1) / 2; ++i) {
        Scalar x = cos(pi * (Scalar(i) + Scalar(0.75)) / (Scalar(q) + Scalar(0.5)));
        Scalar dp = 0;
        for (int it = 0; it < 100; ++it) {
            Scalar p0 = 1, p1 = x;
            for (int k = 2; k <= q; ++k) {
                Scalar p2 = (Scalar(2 * k - 1) * x * p1 - Scalar(k - 1) * p0) / Scalar(k);
                p0 = p1;
                p1 = p2;
            }
            // p1 = P_q(x), p0 = P_{q-1}(x)
            dp = Scalar(q) * (x * p1 - p0) / (x * x - Scalar(1));
            const Scalar dx = p1 / dp;
            x -= dx;
            if (abs(dx) <= Scalar(2) * eps) break;
        }
        // Recompute the derivative at the converged root.
        {
            Scalar p0 = 1, p1 = x;
            for (int k = 2; k <= q; ++k) {
                Scalar p2 = (Scalar(2 * k - 1) * x * p1 - Scalar(k - 1) * p0) / Scalar(k);
                p0 = p1;
                p1 = p2;
            }
            dp = Scalar(q) * (x * p1 - p0) / (x * x - Scalar(1));
        }
        const Scalar w = Scalar(2) / ((Scalar(1) - x * x) * dp * dp);
        // x is the i-th largest root; map to [0, 1] as increasing abscissae.
        rule.nodes(q - 1 - i) = (Scalar(1) + x) / Scalar(2);
        rule.nodes(i) = (Scalar(1) - x) / Scalar(2);
        rule.weights(q - 1 - i) = w / Scalar(2);
        rule.weights(i) = w / Scalar(2);
    }
    if (q % 2 == 1) rule.nodes(q / 2) = Scalar(1) / Scalar(2);
    return rule;
}

}  // namespace eepc
