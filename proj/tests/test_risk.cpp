#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "fliu/error.hpp"
#include "fliu/risk.hpp"
#include "support.hpp"

using namespace fliu;
using namespace fliu::risk;
using fliu::testing::random_matrix;
using fliu::testing::random_vector;

namespace {

// Augmented design with an unpenalized intercept and a penalty matching it.
struct Problem {
    Matrix z;
    Matrix q;
    Vector b;
};

Problem random_problem(std::mt19937_64& rng, Eigen::Index n, Eigen::Index m, double lambda) {
    Problem p;
    p.z = Matrix::Ones(n, m + 1);
    p.z.rightCols(m) = random_matrix(rng, n, m);
    p.q = Matrix::Zero(m + 1, m + 1);
    p.q.bottomRightCorner(m, m) = lambda * (Matrix::Identity(m, m) + testing::second_difference(m));
    p.b = random_vector(rng, m + 1);
    return p;
}

}  // namespace

TEST_CASE("hand-computed coefficients") {
    const Matrix s = Matrix::Identity(2, 2);
    Vector b = Vector::Zero(2);
    b[0] = 1.0;
    const RiskProfile p = mse_coefficients(s, s, b, 1.0);
    CHECK(p.c0 == doctest::Approx(0.5));
    CHECK(p.c1 == doctest::Approx(1.0));
    CHECK(p.c2 == doctest::Approx(0.5));
    CHECK(p.c3 == doctest::Approx(0.25));
    CHECK(d_opt(p) == doctest::Approx(-1.0 / 3.0));
    CHECK(p.g(1.0) == doctest::Approx(2.0));
}

TEST_CASE("noise-free risk is minimized at d = 1") {
    std::mt19937_64 rng(1);
    const Problem pr = random_problem(rng, 30, 5, 0.5);
    const RiskProfile p = mse_coefficients(pr.z.transpose() * pr.z, pr.q, pr.b, 0.0);
    CHECK(p.c0 == 0.0);
    CHECK(p.c1 == 0.0);
    CHECK(p.c2 == 0.0);
    CHECK(d_opt(p) == doctest::Approx(1.0));
    CHECK(p.g(1.0) == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("risk at d = 1 is the least-squares risk") {
    std::mt19937_64 rng(2);
    for (int trial = 0; trial < 10; ++trial) {
        const Problem pr = random_problem(rng, testing::uniform_int(rng, 10, 40), testing::uniform_int(rng, 2, 6),
                                          std::pow(10.0, testing::uniform(rng, -2, 2)));
        const Matrix s = pr.z.transpose() * pr.z;
        const double sigma2 = testing::uniform(rng, 0.1, 3.0);
        const RiskProfile p = mse_coefficients(s, pr.q, pr.b, sigma2);
        CHECK(p.g(1.0) == doctest::Approx(sigma2 * numerics::pinv(s).trace()).epsilon(1e-8));
    }
}

TEST_CASE("d_opt is the minimizer of g") {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 20; ++trial) {
        const Problem pr = random_problem(rng, 25, 4, std::pow(10.0, testing::uniform(rng, -1, 1)));
        const RiskProfile p = mse_coefficients(pr.z.transpose() * pr.z, pr.q, pr.b, testing::uniform(rng, 0.1, 5));
        const double best = d_opt(p);
        for (double d = best - 5.0; d <= best + 5.0; d += 0.01) CHECK(p.g(d) >= p.g(best) - 1e-12);
    }
}

TEST_CASE("bias and covariance formulas") {
    std::mt19937_64 rng(4);
    const Problem pr = random_problem(rng, 20, 4, 1.5);
    const Matrix s = pr.z.transpose() * pr.z;
    const Moments mo = fliu_moments(s, pr.q, pr.b, 2.0, -0.7);
    CHECK(mo.formula == BiasFormula::Identifiable);
    CHECK((mo.mean - pr.b - mo.bias).norm() < 1e-10);
    const RiskProfile p = mse_coefficients(s, pr.q, pr.b, 2.0);
    CHECK(mo.bias.squaredNorm() + mo.covariance.trace() == doctest::Approx(p.g(-0.7)).epsilon(1e-10));

    const Problem wide = random_problem(rng, 4, 8, 1.0);
    const Moments gen = fliu_moments(wide.z.transpose() * wide.z, wide.q, wide.b, 1.0, 0.3);
    CHECK(gen.formula == BiasFormula::General);
}

TEST_CASE("Monte Carlo moments agree with the closed form") {
    std::mt19937_64 rng(5);
    const Problem pr = random_problem(rng, 40, 3, 2.0);
    const Matrix s = pr.z.transpose() * pr.z;
    const double sigma2 = 1.5;
    const double d = -2.0;
    const Moments mo = fliu_moments(s, pr.q, pr.b, sigma2, d);
    const EmpiricalMoments emp = monte_carlo_moments(pr.z, pr.q, pr.b, sigma2, d, {.replications = 20000, .seed = 7, .threads = 2});
    const Vector se = (mo.covariance.diagonal() / emp.replications).cwiseSqrt();
    for (Eigen::Index i = 0; i < se.size(); ++i) CHECK(std::abs(emp.mean[i] - mo.mean[i]) < 5.0 * se[i]);
    CHECK(testing::rel_diff(emp.covariance, mo.covariance) < 0.05 * std::max(1.0, mo.covariance.norm()));
}

TEST_CASE("risk scan matches simulation and is reproducible") {
    std::mt19937_64 rng(6);
    const Problem pr = random_problem(rng, 30, 4, 1.0);
    const std::vector<double> grid{-3.0, -1.0, 0.0, 0.5, 1.0};
    const MonteCarloOptions opts{.replications = 20000, .seed = 3, .threads = 3};
    const RiskScan a = risk_scan(pr.z, pr.q, pr.b, 1.0, grid, opts);
    const RiskScan b = risk_scan(pr.z, pr.q, pr.b, 1.0, grid, opts);
    for (std::size_t k = 0; k < grid.size(); ++k) {
        CHECK(std::abs(a.rows[k].mc - a.rows[k].g) < 4.0 * a.rows[k].stderr_);
        CHECK(a.rows[k].mc == b.rows[k].mc);
    }
    CHECK(a.improves_on_ols);
    CHECK(a.best_below_one < a.g_at_one);
}

TEST_CASE("degenerate inputs") {
    const Matrix s = Matrix::Identity(2, 2);
    CHECK_THROWS_AS(mse_coefficients(s, Matrix::Zero(2, 2), Vector::Ones(2), 1.0), Error);
    try {
        (void)d_opt(mse_coefficients(s, s, Vector::Zero(2), 0.0));
        FAIL("expected DegeneratePlugIn");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::DegeneratePlugIn);
    }
    CHECK_THROWS_AS(mse_coefficients(s, s, Vector::Ones(3), 1.0), Error);
    CHECK_THROWS_AS(mse_coefficients(s, s, Vector::Ones(2), -1.0), Error);
}
