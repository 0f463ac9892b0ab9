#include "fliu/risk.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <thread>

#include "fliu/error.hpp"

namespace fliu::risk {

namespace {

void check_inputs(const Matrix& s, const Matrix& q, const Vector& b, double sigma2) {
    numerics::require_finite(s, "Gram matrix");
    numerics::require_finite(q, "penalty");
    numerics::require_finite(b, "coefficients");
    if (s.rows() != s.cols() || q.rows() != s.rows() || q.cols() != s.cols() || b.size() != s.rows()) {
        throw Error(ErrorCode::DimensionError, "S, Q and b dimensions disagree");
    }
    if (!(sigma2 >= 0.0) || !std::isfinite(sigma2)) {
        throw Error(ErrorCode::InvalidParam, "sigma2 must be finite and nonnegative");
    }
}

Matrix inverse_sym(const Matrix& a) {
    return numerics::solve_sym(a, Matrix(Matrix::Identity(a.rows(), a.cols())));
}

}  // namespace

Moments fliu_moments(const Matrix& s, const Matrix& q, const Vector& b, double sigma2, double d) {
    check_inputs(s, q, b, sigma2);
    const Matrix m = inverse_sym(s + q);
    const Matrix a_d = m * (s + d * q);
    const numerics::SvdFactors f = numerics::svd(s);
    const Matrix s_pinv = numerics::pinv(s);
    Moments out;
    if (f.rank() == s.rows()) {
        out.formula = BiasFormula::Identifiable;
        out.mean = a_d * b;
        out.bias = (d - 1.0) * (m * (q * b));
    } else {
        // E[b_LS] = S^+ S b when S is singular.
        out.formula = BiasFormula::General;
        out.mean = a_d * (s_pinv * (s * b));
        out.bias = out.mean - b;
    }
    out.covariance = sigma2 * a_d * s_pinv * a_d.transpose();
    return out;
}

double RiskProfile::g(double d) const {
    return quadratic() * d * d + linear() * d + constant();
}

RiskProfile mse_coefficients(const Matrix& s, const Matrix& q, const Vector& b, double sigma2) {
    check_inputs(s, q, b, sigma2);
    if (q.cwiseAbs().maxCoeff() == 0.0) {
        throw Error(ErrorCode::DegeneratePlugIn, "zero penalty makes the risk linear in d");
    }
    const Matrix m = inverse_sym(s + q);
    const Matrix mq = m * q;
    const Matrix s_pinv = numerics::pinv(s);
    RiskProfile p;
    p.sigma2 = sigma2;
    p.c0 = sigma2 * (m * s * m).trace();
    p.c1 = 2.0 * sigma2 * (mq * m).trace();
    p.c2 = sigma2 * (mq * s_pinv * mq.transpose()).trace();
    p.c3 = (mq * b).squaredNorm();
    return p;
}

double d_opt(const RiskProfile& profile) {
    const double denom = 2.0 * profile.quadratic();
    if (!(denom > 0.0)) {
        throw Error(ErrorCode::DegeneratePlugIn, "c2 + c3 = 0, the risk has no unique minimizer");
    }
    return (2.0 * profile.c3 - profile.c1) / denom;
}

namespace {

// Per-worker accumulation of ||b_d - b||^2 for every d, plus first and
// second moments of b_d when requested.
struct Accumulator {
    Vector sum;
    Vector sum_sq;
    Vector coef_sum;
    Matrix coef_outer;
};

template <typename Visit>
void simulate(const Matrix& z, const Vector& b, double sigma2, const MonteCarloOptions& options,
              Visit&& make_visitor, std::vector<Accumulator>& acc) {
    const int workers = std::max(1, options.threads);
    acc.resize(static_cast<std::size_t>(workers));
    const Vector mean_y = z * b;
    const double sigma = std::sqrt(sigma2);
    auto run = [&](int w) {
        std::seed_seq seq{static_cast<std::uint64_t>(options.seed), static_cast<std::uint64_t>(w)};
        std::mt19937_64 rng(seq);
        std::normal_distribution<double> normal(0.0, 1.0);
        auto visit = make_visitor(acc[static_cast<std::size_t>(w)]);
        const int lo = options.replications * w / workers;
        const int hi = options.replications * (w + 1) / workers;
        Vector y(z.rows());
        for (int r = lo; r < hi; ++r) {
            for (Eigen::Index i = 0; i < y.size(); ++i) y[i] = mean_y[i] + sigma * normal(rng);
            visit(y);
        }
    };
    if (workers == 1) {
        run(0);
        return;
    }
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(run, w);
    for (auto& t : pool) t.join();
}

}  // namespace

RiskScan risk_scan(const Matrix& z, const Matrix& q, const Vector& b, double sigma2,
                   std::span<const double> d_grid, const MonteCarloOptions& options) {
    numerics::require_finite(z, "design");
    const Matrix s = z.transpose() * z;
    RiskScan out;
    out.profile = mse_coefficients(s, q, b, sigma2);
    if (options.replications < 2) {
        throw Error(ErrorCode::InvalidParam, "Monte Carlo needs at least two replications");
    }

    const Matrix z_pinv = numerics::pinv(z);
    const Matrix m = inverse_sym(s + q);
    const auto nd = static_cast<Eigen::Index>(d_grid.size());
    std::vector<Accumulator> acc;
    simulate(
        z, b, sigma2, options,
        [&](Accumulator& a) {
            a.sum = Vector::Zero(nd);
            a.sum_sq = Vector::Zero(nd);
            return [&, &a = a](const Vector& y) {
                const Vector b_ls = z_pinv * y;
                const Vector base = m * (z.transpose() * y);
                const Vector slope = m * (q * b_ls);
                for (Eigen::Index k = 0; k < nd; ++k) {
                    const double e = (base + d_grid[static_cast<std::size_t>(k)] * slope - b).squaredNorm();
                    a.sum[k] += e;
                    a.sum_sq[k] += e * e;
                }
            };
        },
        acc);

    Vector sum = Vector::Zero(nd);
    Vector sum_sq = Vector::Zero(nd);
    for (const Accumulator& a : acc) {
        sum += a.sum;
        sum_sq += a.sum_sq;
    }
    const double reps = options.replications;
    for (Eigen::Index k = 0; k < nd; ++k) {
        RiskRow row;
        row.d = d_grid[static_cast<std::size_t>(k)];
        row.g = out.profile.g(row.d);
        row.mc = sum[k] / reps;
        const double var = std::max(0.0, (sum_sq[k] - reps * row.mc * row.mc) / (reps - 1.0));
        row.stderr_ = std::sqrt(var / reps);
        out.rows.push_back(row);
    }

    out.g_at_one = out.profile.g(1.0);
    constexpr int kFine = 10000;
    out.best_below_one = out.profile.g(0.0);
    out.best_d_below_one = 0.0;
    for (int i = 1; i < kFine; ++i) {
        const double d = static_cast<double>(i) / kFine;
        const double v = out.profile.g(d);
        if (v < out.best_below_one) {
            out.best_below_one = v;
            out.best_d_below_one = d;
        }
    }
    out.improves_on_ols = out.best_below_one < out.g_at_one;
    return out;
}

EmpiricalMoments monte_carlo_moments(const Matrix& z, const Matrix& q, const Vector& b,
                                     double sigma2, double d, const MonteCarloOptions& options) {
    numerics::require_finite(z, "design");
    if (options.replications < 2) {
        throw Error(ErrorCode::InvalidParam, "Monte Carlo needs at least two replications");
    }
    const Matrix s = z.transpose() * z;
    const Matrix z_pinv = numerics::pinv(z);
    const Matrix m = inverse_sym(s + q);
    const Eigen::Index dim = b.size();
    std::vector<Accumulator> acc;
    simulate(
        z, b, sigma2, options,
        [&](Accumulator& a) {
            a.coef_sum = Vector::Zero(dim);
            a.coef_outer = Matrix::Zero(dim, dim);
            return [&, &a = a](const Vector& y) {
                const Vector b_ls = z_pinv * y;
                const Vector est = m * (z.transpose() * y + d * (q * b_ls));
                a.coef_sum += est;
                a.coef_outer.noalias() += est * est.transpose();
            };
        },
        acc);
    EmpiricalMoments out;
    out.replications = options.replications;
    Vector sum = Vector::Zero(dim);
    Matrix outer = Matrix::Zero(dim, dim);
    for (const Accumulator& a : acc) {
        sum += a.coef_sum;
        outer += a.coef_outer;
    }
    const double reps = options.replications;
    out.mean = sum / reps;
    out.covariance = (outer - reps * out.mean * out.mean.transpose()) / (reps - 1.0);
    return out;
}

}  // namespace fliu::risk
