#pragma once

#include "eepc/types.hpp"

#include <Eigen/SparseCore>

namespace eepc {

using SparseMatrixXd = Eigen::SparseMatrix<double, Eigen::RowMajor>;

/// Periodic central-difference circulants on a uniform grid:
///   d1 = first derivative, d2 = second derivative, d3 = d1 * d2.
struct FDOperators {
    SparseMatrixXd d1;
    SparseMatrixXd d2;
    SparseMatrixXd d3;
    double dx = 0;

    Index size() const { return d1.rows(); }
};

FDOperators build_fd_operators(Index n1, double dx);

/// Discretisation of u d/dx + d/dx u:
///   (A(u) z)_j = ((u_j + u_{j+1}) z_{j+1} - (u_j + u_{j-1}) z_{j-1}) / (2 dx), periodic.
VectorXd bracket_apply(const VectorXd& u, const VectorXd& z, double dx);

/// Assembled A(u), used for checks.
SparseMatrixXd bracket_matrix(const VectorXd& u, double dx);

/// Points x_i = -L + i dx, i = 0..n1-1.
VectorXd periodic_grid(double half_length, double dx, Index n1);

/// Number of periodic points covering [-L, L): round(2L / dx).
Index grid_count(double half_length, double dx);

}  // namespace eepc
