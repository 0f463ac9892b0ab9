#pragma once

#include <memory>
#include <optional>
#include <string_view>

#include "fliu/basis.hpp"

namespace fliu {

enum class Method { Ols, Ridge, Liu, GenRidge, FLiu };

std::string_view to_string(Method method);
Method parse_method(std::string_view name);

/// Tuning parameters. Fields a method does not use stay empty.
struct PenaltyParams {
    std::optional<double> lambda;  // > 0
    std::optional<double> d;       // any real
    std::optional<double> alpha;   // in [0, 1]
};

/// Which of (lambda, d, alpha) a method exposes.
struct FreeParams {
    bool lambda = false;
    bool d = false;
    bool alpha = false;
};
FreeParams free_params(Method method);

/// Every estimator is a member of the family
///   b = (S + Q)^{-1} (Z~^T y + d Q b_LS),   b_LS = Z~^+ y
/// with method-specific (Q, d); OLS is the d = 1 member.
struct LinearForm {
    Matrix q;
    double d = 0.0;
    bool ols = false;
};

LinearForm linear_form(const DesignBundle& bundle, Method method, const PenaltyParams& params);

struct EstimatorFit {
    Method method = Method::Ols;
    Vector coef;          // length m+1, intercept first
    PenaltyParams params;
    Vector fitted;
    Vector residuals;
    double effective_dof = 0.0;  // tr(H)
    std::shared_ptr<const DesignBundle> design;

    double intercept() const { return coef[0]; }
    /// Basis coefficients of predictor j.
    Vector predictor_coef(std::size_t j) const;
};

/// lambda (alpha I0 + (1 - alpha) R0), where I0 is the identity with the
/// intercept slot zeroed.
Matrix build_q(const DesignBundle& bundle, double lambda, double alpha);

EstimatorFit fit_ols(std::shared_ptr<const DesignBundle> bundle, const Vector& y);
EstimatorFit fit_ridge(std::shared_ptr<const DesignBundle> bundle, const Vector& y, double lambda);
EstimatorFit fit_gen_ridge(std::shared_ptr<const DesignBundle> bundle, const Vector& y, double lambda,
                           double alpha);
/// Liu with Q = I0: d = 0 is ridge at lambda = 1, d = 1 is OLS.
EstimatorFit fit_liu(std::shared_ptr<const DesignBundle> bundle, const Vector& y, double d);
EstimatorFit fit_fliu(std::shared_ptr<const DesignBundle> bundle, const Vector& y, double lambda,
                      double d, double alpha);

/// Dispatch on method; missing parameters are an InvalidParam error.
EstimatorFit fit(std::shared_ptr<const DesignBundle> bundle, const Vector& y, Method method,
                 const PenaltyParams& params);

/// H_d = Z~ (S + Q)^{-1} (I + d Q S^+) Z~^T.
Matrix smoother_matrix(const DesignBundle& bundle, double lambda, double d, double alpha);
Matrix smoother_matrix(const DesignBundle& bundle, Method method, const PenaltyParams& params);
Matrix smoother_matrix(const DesignBundle& bundle, const LinearForm& form);

/// I - H_d written as (I - Z~ Z~^+) + (1 - d) Z~ (S + Q)^{-1} Q Z~^+, which
/// avoids the cancellation of forming H_d first when |d| is large.
Matrix residual_operator(const DesignBundle& bundle, Method method, const PenaltyParams& params);
Matrix residual_operator(const DesignBundle& bundle, const LinearForm& form);

/// Coefficients for a precomputed form; `fit` is a thin wrapper.
Vector solve_coefficients(const DesignBundle& bundle, const Vector& y, const LinearForm& form);

/// rows * coef for augmented rows (leading ones column included).
Vector predict(const EstimatorFit& fit, const Matrix& augmented_rows);

/// Penalized objective ||y - Z~ b||^2 + (b - d b_LS)^T Q (b - d b_LS).
double fliu_objective(const DesignBundle& bundle, const Vector& y, const Matrix& q, double d,
                      const Vector& coef);

}  // namespace fliu
