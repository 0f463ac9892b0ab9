#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "fliu/estimators.hpp"

namespace fliu {

enum class Criterion { Gcv, Press };

std::string_view to_string(Criterion criterion);
Criterion parse_criterion(std::string_view name);

/// (||y - H y||^2 / n) / (1 - tr(H)/n)^2. SaturatedSmoother when tr(H) = n.
double gcv(const DesignBundle& bundle, const Vector& y, Method method, const PenaltyParams& params);
double gcv(const DesignBundle& bundle, const Vector& y, double lambda, double d, double alpha);

/// sum_i ((y_i - yhat_i) / (1 - H_ii))^2. LeverageOne when some H_ii = 1.
double press(const DesignBundle& bundle, const Vector& y, Method method, const PenaltyParams& params);
double press(const DesignBundle& bundle, const Vector& y, double lambda, double d, double alpha);

double criterion_value(Criterion criterion, const DesignBundle& bundle, const Vector& y,
                       Method method, const PenaltyParams& params);

double gcv_from_smoother(const Matrix& h, const Vector& y);
double press_from_smoother(const Matrix& h, const Vector& y);

struct TuningBounds {
    double lambda_lo = 1e-6;
    double lambda_hi = 1e6;
    double d_lo = -1000.0;
    double d_hi = 1.0;
    double alpha_lo = 0.0;
    double alpha_hi = 1.0;
    int grid_points = 5;
    int starts = 3;  // grid incumbents refined locally

    void validate() const;
};

struct TraceRecord {
    int iteration = 0;
    std::string_view stage;  // "grid", "refine" or "final"
    PenaltyParams params;
    double score = 0.0;
};

struct PlugIn {
    double c1 = 0.0;
    double c2 = 0.0;
    double c3 = 0.0;
    double d_plug = 0.0;
    double d_proj = 0.0;
};

struct TuningResult {
    Method method = Method::FLiu;
    Criterion criterion = Criterion::Gcv;
    PenaltyParams best;
    double score = 0.0;
    PenaltyParams coarse_best;
    double coarse_score = 0.0;
    int evaluations = 0;
    bool degenerate = false;  // criterion flat in d at the optimum
    std::optional<PlugIn> plug_in;
    std::vector<TraceRecord> trace;
};

using ParamObjective = std::function<double(const PenaltyParams&)>;

/// Coarse grid over the free axes in transformed coordinates (log lambda,
/// d, alpha), then bounded quasi-Newton refinement from the best grid
/// points and any warm starts. Throws TuningFailed if every grid point fails.
TuningResult tune_objective(const ParamObjective& objective, FreeParams free,
                            const TuningBounds& bounds,
                            std::span<const PenaltyParams> warm_starts = {});

/// Minimizes the criterion for one estimator. When the criterion does not
/// move with d at the optimum (relative spread < 1e-10) the result is marked
/// degenerate and d is replaced by the projected plug-in value.
TuningResult tune(const DesignBundle& bundle, const Vector& y, Method method, Criterion criterion,
                  const TuningBounds& bounds = {}, std::span<const PenaltyParams> warm_starts = {});

/// RSS / (n - tr(H)).
double sigma2_hat(const EstimatorFit& fit);

/// Plug-in Liu parameter at fixed (lambda, alpha) from generalized-ridge
/// coefficients and a noise-variance estimate.
PlugIn plug_in_d(const DesignBundle& bundle, const Vector& y, double lambda, double alpha,
                 double sigma2);

/// Plug-in rule with sigma2 taken from the generalized-ridge fit at the same
/// (lambda, alpha); the Liu estimator uses lambda = alpha = 1.
PlugIn plug_in_d(std::shared_ptr<const DesignBundle> bundle, const Vector& y, double lambda,
                 double alpha);

struct DegeneracyReport {
    Eigen::Index n = 0;
    Eigen::Index rank = 0;
    bool full_row_rank = false;
    std::vector<double> d_grid;
    std::vector<double> gcv;    // NaN where undefined
    std::vector<double> press;  // NaN where undefined
    double gcv_spread = 0.0;    // (max - min) / |mean| over defined values
    double press_spread = 0.0;
    double identity_error = 0.0;       // max |H_d - (I - (1-d) B)|, full row rank only
    double gcv_closed_form = 0.0;      // n ||B y||^2 / tr(B)^2
    double press_closed_form = 0.0;    // sum (B y)_i^2 / B_ii^2
    bool degenerate = false;           // gcv_spread < 1e-10
};

DegeneracyReport degeneracy_check(const DesignBundle& bundle, const Vector& y, double lambda,
                                  double alpha, std::span<const double> d_grid);

double relative_spread(std::span<const double> values);

}  // namespace fliu
