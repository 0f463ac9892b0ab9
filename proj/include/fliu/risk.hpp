#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "fliu/numerics.hpp"

namespace fliu::risk {

enum class BiasFormula {
    Identifiable,  // S nonsingular: bias = (d - 1)(S + Q)^{-1} Q b
    General,       // singular S: bias = A_d S^+ S b - b
};

struct Moments {
    Vector mean;
    Vector bias;
    Matrix covariance;
    BiasFormula formula = BiasFormula::Identifiable;
};

/// Mean, bias and covariance of the fLiu estimator for a fixed design Gram
/// S, penalty Q, true coefficients b and noise variance sigma2.
Moments fliu_moments(const Matrix& s, const Matrix& q, const Vector& b, double sigma2, double d);

/// MSE of the fLiu estimator as a quadratic in d:
///   g(d) = (c2 + c3) d^2 + (c1 - 2 c3) d + (c0 + c3)
/// with
///   c0 = sigma2 tr(M S M),  c1 = 2 sigma2 tr(M Q M),
///   c2 = sigma2 tr(M Q S^+ Q M),  c3 = ||M Q b||^2,  M = (S + Q)^{-1}.
struct RiskProfile {
    double c0 = 0.0;
    double c1 = 0.0;
    double c2 = 0.0;
    double c3 = 0.0;
    double sigma2 = 0.0;

    double g(double d) const;
    double quadratic() const { return c2 + c3; }
    double linear() const { return c1 - 2.0 * c3; }
    double constant() const { return c0 + c3; }
};

RiskProfile mse_coefficients(const Matrix& s, const Matrix& q, const Vector& b, double sigma2);

/// (2 c3 - c1) / (2 (c2 + c3)); DegeneratePlugIn when c2 + c3 == 0.
double d_opt(const RiskProfile& profile);

struct MonteCarloOptions {
    int replications = 100000;
    std::uint64_t seed = 20240601;
    int threads = 1;
};

struct RiskRow {
    double d = 0.0;
    double g = 0.0;       // closed form
    double mc = 0.0;      // Monte-Carlo mean of ||b_d - b||^2
    double stderr_ = 0.0; // Monte-Carlo standard error
};

struct RiskScan {
    RiskProfile profile;
    std::vector<RiskRow> rows;
    double g_at_one = 0.0;
    double best_below_one = 0.0;      // min of g over a fine grid of [0, 1)
    double best_d_below_one = 0.0;
    bool improves_on_ols = false;     // best_below_one < g_at_one
};

/// Closed-form risk against a Monte-Carlo estimate that simulates
/// y = Z b + eps, eps ~ N(0, sigma2 I), and applies the estimator directly.
/// `z` is the design whose Gram is S.
RiskScan risk_scan(const Matrix& z, const Matrix& q, const Vector& b, double sigma2,
                   std::span<const double> d_grid, const MonteCarloOptions& options = {});

struct EmpiricalMoments {
    Vector mean;
    Matrix covariance;
    int replications = 0;
};

/// Sample mean and covariance of the fLiu estimator over simulated noise.
EmpiricalMoments monte_carlo_moments(const Matrix& z, const Matrix& q, const Vector& b,
                                     double sigma2, double d, const MonteCarloOptions& options = {});

}  // namespace fliu::risk
