#pragma once

#include "eepc/quadrature.hpp"
#include "eepc/types.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace eepc {

/// Continuous-stage Runge-Kutta tableau of an energy-preserving collocation
/// method with s stages (order 2s).
///
/// The coefficient A(tau, sigma) is a bivariate polynomial stored as a dense
/// grid: A(tau, sigma) = sum_{a,b} coeffs(a, b) tau^a sigma^b with
/// a = 0..s and b = 0..s-1. The weights B(sigma) are identically one.
template <typename Scalar = double>
struct CollocationTableau {
    int stages = 0;
    Vector<Scalar> nodes;            // tau_j = j/s, j = 0..s
    Matrix<Scalar> coeffs;           // (s+1) x s
    QuadratureRule<Scalar> quadrature;

    int order() const { return 2 * stages; }

    /// Coefficients of A(tau, .) as a polynomial in sigma.
    Vector<Scalar> sigma_polynomial(const Scalar& tau) const {
        Vector<Scalar> powers(coeffs.rows());
        Scalar p = 1;
        for (Index a = 0; a < powers.size(); ++a, p *= tau) powers(a) = p;
        return coeffs.transpose() * powers;
    }

    Scalar operator()(const Scalar& tau, const Scalar& sigma) const {
        const Vector<Scalar> c = sigma_polynomial(tau);
        Scalar acc = 0;
        for (Index b = c.size() - 1; b >= 0; --b) acc = acc * sigma + c(b);
        return acc;
    }
};

namespace detail {

template <typename Scalar>
CollocationTableau<Scalar> empty_tableau(int s, int q) {
    CollocationTableau<Scalar> tab;
    tab.stages = s;
    tab.nodes.resize(s + 1);
    for (int j = 0; j <= s; ++j) tab.nodes(j) = Scalar(j) / Scalar(s);
    tab.coeffs = Matrix<Scalar>::Zero(s + 1, s);
    tab.quadrature = gauss_legendre<Scalar>(q);
    return tab;
}

}  // namespace detail

/// Closed-form tableaux of orders 2, 4, 6, 8. All coefficients are integers,
/// so the result is exact in any Scalar.
template <typename Scalar = double>
CollocationTableau<Scalar> make_tableau(int s, int quadrature_nodes = 8) {
    if (s < 1 || s > 4) throw UnsupportedStageCount(s);
    auto tab = detail::empty_tableau<Scalar>(s, quadrature_nodes);
    auto& c = tab.coeffs;
    switch (s) {
        case 1:
            // A = tau (averaged vector field)
            c(1, 0) = 1;
            break;
        case 2:
            // A = -6 tau (1 - tau) sigma + tau (4 - 3 tau)
            c(1, 0) = 4;   c(2, 0) = -3;
            c(1, 1) = -6;  c(2, 1) = 6;
            break;
        case 3:
            // A = tau ((9 - 18 tau + 10 tau^2) - 12 (3 - 8 tau + 5 tau^2) sigma
            //          + 30 (1 - 3 tau + 2 tau^2) sigma^2)
            c(1, 0) = 9;    c(2, 0) = -18;  c(3, 0) = 10;
            c(1, 1) = -36;  c(2, 1) = 96;   c(3, 1) = -60;
            c(1, 2) = 30;   c(2, 2) = -90;  c(3, 2) = 60;
            break;
        case 4:
            c(1, 0) = 16;    c(2, 0) = -60;    c(3, 0) = 80;     c(4, 0) = -35;
            c(1, 1) = -120;  c(2, 1) = 600;    c(3, 1) = -900;   c(4, 1) = 420;
            c(1, 2) = 240;   c(2, 2) = -1350;  c(3, 2) = 2160;   c(4, 2) = -1050;
            c(1, 3) = -140;  c(2, 3) = 840;    c(3, 3) = -1400;  c(4, 3) = 700;
            break;
    }
    return tab;
}

namespace detail {

// Monomial coefficients (ascending) of the Lagrange basis polynomial through
// `points` that is one at points(i).
template <typename Scalar>
Vector<Scalar> lagrange_monomial(const Vector<Scalar>& points, Index i) {
    const Index n = points.size();
    Vector<Scalar> poly = Vector<Scalar>::Zero(n);
    poly(0) = 1;
    Scalar denom = 1;
    Index deg = 0;
    for (Index j = 0; j < n; ++j) {
        if (j == i) continue;
        // multiply by (x - points(j))
        for (Index k = deg + 1; k > 0; --k) poly(k) = poly(k - 1) - points(j) * poly(k);
        poly(0) = -points(j) * poly(0);
        ++deg;
        denom *= points(i) - points(j);
    }
    return poly / denom;
}

}  // namespace detail

/// Builds A(tau, sigma) = sum_i (1/b_i) (int_0^tau l_i) l_i(sigma) from
/// Gauss-Legendre collocation points. Cross-validation route for the closed
/// forms; any s >= 1 is accepted.
template <typename Scalar = double>
CollocationTableau<Scalar> make_tableau_general(int s, int quadrature_nodes = 8) {
    if (s < 1) throw UnsupportedStageCount(s);
    auto tab = detail::empty_tableau<Scalar>(s, quadrature_nodes);
    const auto points = gauss_legendre<Scalar>(s);
    for (Index i = 0; i < s; ++i) {
        const Vector<Scalar> ell = detail::lagrange_monomial(points.nodes, i);
        Scalar b = 0;
        Vector<Scalar> antideriv = Vector<Scalar>::Zero(s + 1);
        for (Index k = 0; k < s; ++k) {
            antideriv(k + 1) = ell(k) / Scalar(k + 1);
            b += ell(k) / Scalar(k + 1);
        }
        tab.coeffs += (antideriv * ell.transpose()) / b;
    }
    return tab;
}

/// Lagrange basis through `nodes` evaluated at `points`: result(p, j) = l_j(points(p)).
template <typename Scalar>
Matrix<Scalar> lagrange_basis(const Vector<Scalar>& nodes, const Vector<Scalar>& points) {
    Matrix<Scalar> basis(points.size(), nodes.size());
    for (Index p = 0; p < points.size(); ++p) {
        for (Index j = 0; j < nodes.size(); ++j) {
            Scalar v = 1;
            for (Index m = 0; m < nodes.size(); ++m)
                if (m != j) v *= (points(p) - nodes(m)) / (nodes(j) - nodes(m));
            basis(p, j) = v;
        }
    }
    return basis;
}

// Exact defects by coefficient algebra -----------------------------------------

/// max over tau-powers of | int_0^1 A sigma^{k-1} dsigma - tau^k / k |.
/// k = 1 is the row-sum condition C_tau = tau.
template <typename Scalar>
Scalar order_condition_defect(const CollocationTableau<Scalar>& tab, int k) {
    using std::abs;
    Scalar worst = 0;
    for (Index a = 0; a < tab.coeffs.rows(); ++a) {
        Scalar moment = 0;
        for (Index b = 0; b < tab.coeffs.cols(); ++b)
            moment += tab.coeffs(a, b) / Scalar(b + k);
        const Scalar target = (a == k) ? Scalar(1) / Scalar(k) : Scalar(0);
        worst = std::max<Scalar>(worst, abs(moment - target));
    }
    return worst;
}

/// max | A(tau, sigma) + A(1 - tau, 1 - sigma) - 1 | over an n x n grid on [0,1]^2.
template <typename Scalar>
Scalar symmetry_defect(const CollocationTableau<Scalar>& tab, int n = 20) {
    using std::abs;
    Scalar worst = 0;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const Scalar tau = Scalar(i) / Scalar(n - 1);
            const Scalar sigma = Scalar(j) / Scalar(n - 1);
            const Scalar d = tab(tau, sigma) + tab(Scalar(1) - tau, Scalar(1) - sigma) - Scalar(1);
            worst = std::max<Scalar>(worst, abs(d));
        }
    }
    return worst;
}

/// Largest coefficient-wise difference between two tableaux' A polynomials.
template <typename Scalar>
Scalar coefficient_distance(const CollocationTableau<Scalar>& lhs,
                            const CollocationTableau<Scalar>& rhs) {
    if (lhs.coeffs.rows() != rhs.coeffs.rows() || lhs.coeffs.cols() != rhs.coeffs.cols())
        throw DimensionMismatch(lhs.coeffs.size(), rhs.coeffs.size());
    return (lhs.coeffs - rhs.coeffs).cwiseAbs().maxCoeff();
}

template <typename To, typename From>
CollocationTableau<To> tableau_cast(const CollocationTableau<From>& tab) {
    CollocationTableau<To> out;
    out.stages = tab.stages;
    out.nodes = tab.nodes.template cast<To>();
    out.coeffs = tab.coeffs.template cast<To>();
    out.quadrature = {tab.quadrature.nodes.template cast<To>(),
                      tab.quadrature.weights.template cast<To>()};
    return out;
}

}  // namespace eepc
