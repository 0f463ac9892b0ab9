#include "fliu/pipeline.hpp"

#include <cctype>
#include <cmath>
#include <limits>
#include <string>

#include "fliu/error.hpp"

namespace fliu {

namespace {

std::string normalize(std::string_view name) {
    std::string s;
    for (char c : name) {
        if (c == '-' || c == ' ') c = '_';
        s.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
    return s;
}

}  // namespace

BasisKind parse_basis_kind(std::string_view name) {
    const std::string s = normalize(name);
    if (s == "fourier") return BasisKind::Fourier;
    if (s == "bspline" || s == "b_spline" || s == "spline") return BasisKind::BSpline;
    throw Error(ErrorCode::InvalidParam, "unknown basis '" + std::string(name) + "'");
}

PenaltyMode parse_penalty_mode(std::string_view name) {
    const std::string s = normalize(name);
    if (s == "fourier") return PenaltyMode::Fourier;
    if (s == "curvature") return PenaltyMode::Curvature;
    if (s == "second_difference" || s == "difference") return PenaltyMode::SecondDifference;
    throw Error(ErrorCode::InvalidParam, "unknown penalty '" + std::string(name) + "'");
}

std::string_view to_string(PenaltyMode mode) {
    switch (mode) {
        case PenaltyMode::Fourier: return "fourier";
        case PenaltyMode::Curvature: return "curvature";
        case PenaltyMode::SecondDifference: return "second_difference";
    }
    return "unknown";
}

PenaltyMode penalty_for(const BasisConfig& config) {
    if (config.penalty) return *config.penalty;
    return config.kind == BasisKind::Fourier ? PenaltyMode::Fourier : PenaltyMode::Curvature;
}

std::vector<BasisSpec> make_bases(const FunctionalDataset& data, const BasisConfig& config) {
    if (data.grid.size() < 2) throw Error(ErrorCode::GridMismatch, "grid needs at least two points");
    const double lo = data.grid.front();
    const double hi = data.grid.back();
    BasisSpec basis;
    if (config.kind == BasisKind::Fourier) {
        const double period = config.period.value_or(hi - lo + (data.grid[1] - data.grid[0]));
        basis = build_fourier_basis(config.size, period);
    } else {
        basis = build_bspline_basis(lo, hi, config.size, config.order);
    }
    return std::vector<BasisSpec>(static_cast<std::size_t>(data.predictor_count()), basis);
}

double prediction_loss(const EstimatorFit& fit, const FunctionalDataset& data, PenaltyMode mode) {
    const DesignBundle design = build_design(data, fit.design->bases, mode);
    const Vector pred = predict(fit, design.z_aug);
    return (data.response - pred).squaredNorm() / static_cast<double>(data.sample_count());
}

std::vector<EstimatorRun> compare_estimators(const FunctionalDataset& train, const FunctionalDataset* test,
                                             const std::vector<BasisSpec>& bases, PenaltyMode mode,
                                             const CompareOptions& options, double cond_design) {
    const auto bundle = std::make_shared<const DesignBundle>(build_design(train, bases, mode));
    const Vector& y = train.response;
    const double cond_train = numerics::cond2(bundle->z_aug);
    constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

    std::vector<EstimatorRun> runs;
    for (Method method : options.methods) {
        EstimatorRun run;
        PenaltyParams params;
        if (const auto it = options.fixed.find(method); it != options.fixed.end()) {
            params = it->second;
        } else if (method != Method::Ols) {
            run.tuning = tune(*bundle, y, method, options.criterion, options.bounds);
            params = run.tuning->best;
        }
        run.fit = fit(bundle, y, method, params);

        dataio::FitReport& r = run.report;
        r.method = method;
        r.params = run.fit.params;
        try {
            r.gcv = gcv(*bundle, y, method, params);
        } catch (const Error&) {
            r.gcv = kNan;
        }
        try {
            r.press = press(*bundle, y, method, params);
        } catch (const Error&) {
            r.press = kNan;
        }
        r.training_loss = run.fit.residuals.squaredNorm() / static_cast<double>(y.size());
        r.n_train = train.sample_count();
        if (test != nullptr) {
            r.testing_loss = prediction_loss(run.fit, *test, mode);
            r.n_test = test->sample_count();
        }
        r.effective_dof = run.fit.effective_dof;
        r.cond_design = cond_design;
        r.cond_train = cond_train;
        if (run.tuning) {
            r.criterion = run.tuning->criterion;
            r.degenerate = run.tuning->degenerate;
            r.plug_in = run.tuning->plug_in;
            r.trace = run.tuning->trace;
        }
        r.coef = run.fit.coef;
        r.residuals = run.fit.residuals;
        for (std::size_t j = 0; j < bases.size(); ++j) {
            dataio::CoefficientSamples s;
            s.predictor = j;
            const double lo = bases[j].domain_lo();
            const double hi = bases[j].domain_hi();
            const Eigen::Index pts = std::max<Eigen::Index>(2, options.beta_points);
            for (Eigen::Index i = 0; i < pts; ++i) {
                s.grid.push_back(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(pts - 1));
            }
            const Vector beta = eval_coefficient_function(run.fit.predictor_coef(j), bases[j], s.grid);
            s.values.assign(beta.data(), beta.data() + beta.size());
            r.beta.push_back(std::move(s));
        }
        runs.push_back(std::move(run));
    }
    return runs;
}

}  // namespace fliu
