#include "doctest.h"

#include "eepc/stage_polynomial.hpp"

#include <random>

using namespace eepc;

TEST_CASE("eval_stage_polynomial: reproduces node values") {
    std::mt19937_64 gen(5);
    std::normal_distribution<double> normal;
    for (int s = 1; s <= 4; ++s) {
        StagePolynomial<double> p{MatrixXd::NullaryExpr(6, s + 1, [&](Index, Index) { return normal(gen); }),
                                  0.1, 0.0};
        CHECK(p.stages() == s);
        for (int j = 0; j <= s; ++j)
            CHECK((eval_stage_polynomial(p, double(j) / s) - p.node(j)).cwiseAbs().maxCoeff() < 1e-14);
    }
}

TEST_CASE("eval_stage_polynomial: linear interpolant midpoint") {
    StagePolynomial<double> p{MatrixXd(2, 2), 0.5, 1.0};
    p.node_values << 1.0, 3.0, -2.0, 4.0;
    const VectorXd mid = eval_stage_polynomial(p, 0.5);
    CHECK(mid(0) == doctest::Approx(2.0));
    CHECK(mid(1) == doctest::Approx(1.0));
}

TEST_CASE("eval_stage_polynomial: quadratic basis value") {
    // l_1 at tau = 1/4 for nodes {0, 1/2, 1}: (1/4)(1/4 - 1) / ((1/2)(-1/2)) = 3/4.
    StagePolynomial<double> p{MatrixXd(1, 3), 0.1, 0.0};
    p.node_values << 0.0, 1.0, 0.0;
    CHECK(eval_stage_polynomial(p, 0.25)(0) == doctest::Approx(0.75).epsilon(1e-15));
}

TEST_CASE("eval_stage_polynomial: exact for polynomials of degree <= s") {
    std::mt19937_64 gen(9);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    for (int s = 1; s <= 4; ++s) {
        VectorXd coeff(s + 1);
        for (Index k = 0; k <= s; ++k) coeff(k) = unit(gen);
        auto poly = [&](double x) {
            double acc = 0;
            for (Index k = s; k >= 0; --k) acc = acc * x + coeff(k);
            return acc;
        };
        StagePolynomial<double> p{MatrixXd(1, s + 1), 0.2, 0.0};
        for (int j = 0; j <= s; ++j) p.node_values(0, j) = poly(double(j) / s);
        for (int trial = 0; trial < 20; ++trial) {
            const double tau = 0.5 * (unit(gen) + 1.0);
            CHECK(std::abs(eval_stage_polynomial(p, tau)(0) - poly(tau)) < 1e-13);
        }
    }
}
