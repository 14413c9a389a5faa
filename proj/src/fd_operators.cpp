#include "eepc/fd_operators.hpp"

#include <cmath>
#include <vector>

namespace eepc {

namespace {

SparseMatrixXd circulant(Index n, double left, double centre, double right) {
    std::vector<Eigen::Triplet<double>> entries;
    entries.reserve(3 * n);
    for (Index i = 0; i < n; ++i) {
        if (centre != 0.0) entries.emplace_back(i, i, centre);
        entries.emplace_back(i, (i + 1) % n, right);
        entries.emplace_back(i, (i + n - 1) % n, left);
    }
    SparseMatrixXd m(n, n);
    m.setFromTriplets(entries.begin(), entries.end());
    return m;
}

}  // namespace

FDOperators build_fd_operators(Index n1, double dx) {
    if (n1 < 3) throw GridTooSmall(n1);
    if (!(dx > 0.0)) throw std::invalid_argument("grid spacing must be positive");
    FDOperators ops;
    ops.dx = dx;
    ops.d1 = circulant(n1, -1.0 / (2.0 * dx), 0.0, 1.0 / (2.0 * dx));
    ops.d2 = circulant(n1, 1.0 / (dx * dx), -2.0 / (dx * dx), 1.0 / (dx * dx));
    ops.d3 = (ops.d1 * ops.d2).pruned();
    return ops;
}

VectorXd bracket_apply(const VectorXd& u, const VectorXd& z, double dx) {
    const Index n = u.size();
    if (z.size() != n) throw DimensionMismatch(n, z.size());
    VectorXd out(n);
    const double scale = 1.0 / (2.0 * dx);
    for (Index j = 0; j < n; ++j) {
        const Index up = (j + 1) % n;
        const Index down = (j + n - 1) % n;
        out(j) = scale * ((u(j) + u(up)) * z(up) - (u(j) + u(down)) * z(down));
    }
    return out;
}

SparseMatrixXd bracket_matrix(const VectorXd& u, double dx) {
    const Index n = u.size();
    std::vector<Eigen::Triplet<double>> entries;
    const double scale = 1.0 / (2.0 * dx);
    for (Index j = 0; j < n; ++j) {
        const Index up = (j + 1) % n;
        const Index down = (j + n - 1) % n;
        entries.emplace_back(j, up, scale * (u(j) + u(up)));
        entries.emplace_back(j, down, -scale * (u(j) + u(down)));
    }
    SparseMatrixXd m(n, n);
    m.setFromTriplets(entries.begin(), entries.end());
    return m;
}

VectorXd periodic_grid(double half_length, double dx, Index n1) {
    return VectorXd::NullaryExpr(n1, [&](Index i) { return -half_length + double(i) * dx; });
}

Index grid_count(double half_length, double dx) {
    return static_cast<Index>(std::llround(2.0 * half_length / dx));
}

}  // namespace eepc
