#pragma once

#include <map>
#include <optional>
#include <vector>

#include "fliu/dataio.hpp"
#include "fliu/selection.hpp"

namespace fliu {

struct BasisConfig {
    BasisKind kind = BasisKind::Fourier;
    Eigen::Index size = 11;
    std::optional<double> period;  // Fourier; defaults to the grid span plus one spacing
    int order = 4;                 // B-spline
    std::optional<PenaltyMode> penalty;  // defaults: Fourier -> Fourier, B-spline -> Curvature
};

BasisKind parse_basis_kind(std::string_view name);
PenaltyMode parse_penalty_mode(std::string_view name);
std::string_view to_string(PenaltyMode mode);

PenaltyMode penalty_for(const BasisConfig& config);

/// One basis per predictor, all built from the same config.
std::vector<BasisSpec> make_bases(const FunctionalDataset& data, const BasisConfig& config);

struct CompareOptions {
    std::vector<Method> methods{Method::Ols, Method::Ridge, Method::Liu, Method::GenRidge, Method::FLiu};
    Criterion criterion = Criterion::Gcv;
    TuningBounds bounds;
    std::map<Method, PenaltyParams> fixed;  // methods listed here skip tuning
    Eigen::Index beta_points = 101;
};

struct EstimatorRun {
    std::optional<TuningResult> tuning;
    EstimatorFit fit;
    dataio::FitReport report;
};

/// Fits every requested method on `train` (tuning those without fixed
/// parameters) and scores it on `test` when given. `cond_design` is recorded
/// in the reports as the condition number of the full-sample design.
std::vector<EstimatorRun> compare_estimators(const FunctionalDataset& train, const FunctionalDataset* test,
                                             const std::vector<BasisSpec>& bases, PenaltyMode mode,
                                             const CompareOptions& options, double cond_design);

/// Mean squared prediction error of a fit on another dataset in the same bases.
double prediction_loss(const EstimatorFit& fit, const FunctionalDataset& data, PenaltyMode mode);

}  // namespace fliu
