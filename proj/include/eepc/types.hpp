#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace eepc {

using Index = Eigen::Index;

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

using VectorXd = Vector<double>;
using MatrixXd = Matrix<double>;

// Errors ---------------------------------------------------------------------

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class UnsupportedStageCount : public Error {
public:
    explicit UnsupportedStageCount(int s)
        : Error("unsupported stage count " + std::to_string(s) + " (expected 1..4)"), stages(s) {}
    int stages;
};

class DimensionMismatch : public Error {
public:
    DimensionMismatch(Index expected, Index got)
        : Error("dimension mismatch: expected " + std::to_string(expected) + ", got " +
                std::to_string(got)),
          expected(expected), got(got) {}
    Index expected;
    Index got;
};

class NonConvergence : public Error {
public:
    NonConvergence(double residual, int max_iter, long step = -1)
        : Error(describe(residual, max_iter, step)), residual(residual), max_iter(max_iter),
          step(step) {}

    NonConvergence at_step(long n) const { return NonConvergence(residual, max_iter, n); }

    double residual;
    int max_iter;
    long step;

private:
    static std::string describe(double residual, int max_iter, long step) {
        std::string msg = "stage iteration did not converge after " + std::to_string(max_iter) +
                          " sweeps (last update " + std::to_string(residual) + ")";
        if (step >= 0) msg += " at step " + std::to_string(step);
        return msg;
    }
};

class GridTooSmall : public Error {
public:
    explicit GridTooSmall(Index n)
        : Error("grid needs at least 3 points, got " + std::to_string(n)) {}
};

class MissingSeed : public Error {
public:
    MissingSeed() : Error("constant-unequal damping requires a seed") {}
};

class NonPositiveInvariant : public Error {
public:
    NonPositiveInvariant(const std::string& name, long index)
        : Error("invariant '" + name + "' changes sign or vanishes at sample " +
                std::to_string(index)),
          name(name), index(index) {}
    std::string name;
    long index;
};

}  // namespace eepc
