#include "fliu/estimators.hpp"

#include <cctype>
#include <cmath>
#include <string>

#include "fliu/error.hpp"

namespace fliu {

std::string_view to_string(Method method) {
    switch (method) {
        case Method::Ols: return "ols";
        case Method::Ridge: return "ridge";
        case Method::Liu: return "liu";
        case Method::GenRidge: return "genridge";
        case Method::FLiu: return "fliu";
    }
    return "unknown";
}

Method parse_method(std::string_view name) {
    std::string s;
    for (char c : name) {
        if (c == '-' || c == '_') continue;
        s.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
    if (s == "ols") return Method::Ols;
    if (s == "ridge") return Method::Ridge;
    if (s == "liu") return Method::Liu;
    if (s == "genridge" || s == "generalizedridge") return Method::GenRidge;
    if (s == "fliu") return Method::FLiu;
    throw Error(ErrorCode::InvalidParam, "unknown estimator '" + std::string(name) + "'");
}

FreeParams free_params(Method method) {
    switch (method) {
        case Method::Ols: return {};
        case Method::Ridge: return {.lambda = true};
        case Method::Liu: return {.d = true};
        case Method::GenRidge: return {.lambda = true, .alpha = true};
        case Method::FLiu: return {.lambda = true, .d = true, .alpha = true};
    }
    return {};
}

Vector EstimatorFit::predictor_coef(std::size_t j) const {
    Eigen::Index offset = 1;
    for (std::size_t i = 0; i < j; ++i) offset += design->bases.at(i).size();
    const Eigen::Index k = design->bases.at(j).size();
    return coef.segment(offset, k);
}

Matrix build_q(const DesignBundle& bundle, double lambda, double alpha) {
    if (!(alpha >= 0.0 && alpha <= 1.0)) {
        throw Error(ErrorCode::InvalidParam, "alpha must lie in [0, 1], got " + std::to_string(alpha));
    }
    if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
        throw Error(ErrorCode::InvalidParam, "lambda must be finite and nonnegative");
    }
    Matrix q = (1.0 - alpha) * bundle.r0;
    q.diagonal().tail(bundle.m()).array() += alpha;
    q *= lambda;
    return q;
}

namespace {

double require(const std::optional<double>& v, const char* name, Method method) {
    if (!v) {
        throw Error(ErrorCode::InvalidParam,
                    std::string(to_string(method)) + " needs parameter " + name);
    }
    if (!std::isfinite(*v)) {
        throw Error(ErrorCode::InvalidParam, std::string(name) + " must be finite");
    }
    return *v;
}

Matrix identity0(const DesignBundle& bundle) {
    Matrix q = Matrix::Zero(bundle.dim(), bundle.dim());
    q.diagonal().tail(bundle.m()).setOnes();
    return q;
}

}  // namespace

LinearForm linear_form(const DesignBundle& bundle, Method method, const PenaltyParams& params) {
    LinearForm form;
    switch (method) {
        case Method::Ols:
            form.ols = true;
            form.d = 1.0;
            return form;
        case Method::Ridge: {
            const double lambda = require(params.lambda, "lambda", method);
            if (lambda == 0.0) return linear_form(bundle, Method::Ols, {});
            form.q = build_q(bundle, lambda, 1.0);
            return form;
        }
        case Method::Liu:
            form.q = identity0(bundle);
            form.d = require(params.d, "d", method);
            return form;
        case Method::GenRidge: {
            const double lambda = require(params.lambda, "lambda", method);
            const double alpha = require(params.alpha, "alpha", method);
            if (lambda == 0.0) return linear_form(bundle, Method::Ols, {});
            form.q = build_q(bundle, lambda, alpha);
            return form;
        }
        case Method::FLiu: {
            const double lambda = require(params.lambda, "lambda", method);
            const double alpha = require(params.alpha, "alpha", method);
            const double d = require(params.d, "d", method);
            if (lambda == 0.0) return linear_form(bundle, Method::Ols, {});
            form.q = build_q(bundle, lambda, alpha);
            form.d = d;
            return form;
        }
    }
    throw Error(ErrorCode::InvalidParam, "unknown method");
}

Vector solve_coefficients(const DesignBundle& bundle, const Vector& y, const LinearForm& form) {
    if (y.size() != bundle.n()) {
        throw Error(ErrorCode::DimensionError, "response length does not match design rows");
    }
    const Vector b_ls = bundle.z_aug_pinv * y;
    if (form.ols) return b_ls;
    Vector rhs = bundle.z_aug.transpose() * y;
    if (form.d != 0.0) rhs += form.d * (form.q * b_ls);
    return numerics::solve_sym(bundle.gram + form.q, rhs);
}

Matrix smoother_matrix(const DesignBundle& bundle, const LinearForm& form) {
    if (form.ols) return bundle.z_aug * bundle.z_aug_pinv;
    Matrix inner = bundle.z_aug.transpose();
    if (form.d != 0.0) inner += form.d * (form.q * (bundle.gram_pinv * bundle.z_aug.transpose()));
    return bundle.z_aug * numerics::solve_sym(bundle.gram + form.q, inner);
}

Matrix residual_operator(const DesignBundle& bundle, const LinearForm& form) {
    Matrix out = bundle.complement;
    if (form.ols) return out;
    const Matrix shrink = numerics::solve_sym(bundle.gram + form.q, Matrix(form.q * bundle.z_aug_pinv));
    out.noalias() += (1.0 - form.d) * (bundle.z_aug * shrink);
    return out;
}

Matrix residual_operator(const DesignBundle& bundle, Method method, const PenaltyParams& params) {
    return residual_operator(bundle, linear_form(bundle, method, params));
}

Matrix smoother_matrix(const DesignBundle& bundle, Method method, const PenaltyParams& params) {
    return smoother_matrix(bundle, linear_form(bundle, method, params));
}

Matrix smoother_matrix(const DesignBundle& bundle, double lambda, double d, double alpha) {
    return smoother_matrix(bundle, Method::FLiu, {.lambda = lambda, .d = d, .alpha = alpha});
}

EstimatorFit fit(std::shared_ptr<const DesignBundle> bundle, const Vector& y, Method method,
                 const PenaltyParams& params) {
    numerics::require_finite(y, "response");
    const LinearForm form = linear_form(*bundle, method, params);
    EstimatorFit out;
    out.method = method;
    const FreeParams used = free_params(method);
    if (used.lambda) out.params.lambda = params.lambda;
    if (used.d) out.params.d = params.d;
    if (used.alpha) out.params.alpha = params.alpha;
    out.coef = solve_coefficients(*bundle, y, form);
    out.fitted = bundle->z_aug * out.coef;
    out.residuals = y - out.fitted;
    out.effective_dof = smoother_matrix(*bundle, form).trace();
    out.design = std::move(bundle);
    return out;
}

EstimatorFit fit_ols(std::shared_ptr<const DesignBundle> bundle, const Vector& y) {
    return fit(std::move(bundle), y, Method::Ols, {});
}

EstimatorFit fit_ridge(std::shared_ptr<const DesignBundle> bundle, const Vector& y, double lambda) {
    return fit(std::move(bundle), y, Method::Ridge, {.lambda = lambda});
}

EstimatorFit fit_gen_ridge(std::shared_ptr<const DesignBundle> bundle, const Vector& y, double lambda,
                           double alpha) {
    return fit(std::move(bundle), y, Method::GenRidge, {.lambda = lambda, .alpha = alpha});
}

EstimatorFit fit_liu(std::shared_ptr<const DesignBundle> bundle, const Vector& y, double d) {
    return fit(std::move(bundle), y, Method::Liu, {.d = d});
}

EstimatorFit fit_fliu(std::shared_ptr<const DesignBundle> bundle, const Vector& y, double lambda,
                      double d, double alpha) {
    return fit(std::move(bundle), y, Method::FLiu, {.lambda = lambda, .d = d, .alpha = alpha});
}

Vector predict(const EstimatorFit& fit, const Matrix& augmented_rows) {
    if (augmented_rows.cols() != fit.coef.size()) {
        throw Error(ErrorCode::DimensionError,
                    "prediction rows have " + std::to_string(augmented_rows.cols()) +
                        " columns, expected " + std::to_string(fit.coef.size()));
    }
    return augmented_rows * fit.coef;
}

double fliu_objective(const DesignBundle& bundle, const Vector& y, const Matrix& q, double d,
                      const Vector& coef) {
    const Vector b_ls = bundle.z_aug_pinv * y;
    const Vector shift = coef - d * b_ls;
    return (y - bundle.z_aug * coef).squaredNorm() + shift.dot(q * shift);
}

}  // namespace fliu
