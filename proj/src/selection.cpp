#include "fliu/selection.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "fliu/error.hpp"
#include "fliu/optimize.hpp"
#include "fliu/risk.hpp"

namespace fliu {

std::string_view to_string(Criterion criterion) {
    return criterion == Criterion::Gcv ? "gcv" : "press";
}

Criterion parse_criterion(std::string_view name) {
    std::string s;
    for (char c : name) s.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    if (s == "gcv") return Criterion::Gcv;
    if (s == "press" || s == "loo" || s == "cv") return Criterion::Press;
    throw Error(ErrorCode::InvalidParam, "unknown criterion '" + std::string(name) + "'");
}

namespace {

// Both criteria only need the residual operator I - H.
double gcv_from_residual(const Matrix& r, const Vector& y) {
    const double n = static_cast<double>(y.size());
    const double denom = r.trace() / n;
    if (std::abs(denom) <= 1e-10) {
        throw Error(ErrorCode::SaturatedSmoother, "tr(H) equals n, GCV is undefined");
    }
    return ((r * y).squaredNorm() / n) / (denom * denom);
}

double press_from_residual(const Matrix& r, const Vector& y) {
    const Vector resid = r * y;
    double total = 0.0;
    for (Eigen::Index i = 0; i < y.size(); ++i) {
        const double denom = r(i, i);
        if (std::abs(denom) <= 1e-10) {
            throw Error(ErrorCode::LeverageOne,
                        "observation " + std::to_string(i) + " has leverage one");
        }
        const double e = resid[i] / denom;
        total += e * e;
    }
    return total;
}

Matrix residual_operator(const DesignBundle& bundle, double lambda, double d, double alpha) {
    return residual_operator(bundle, Method::FLiu, {.lambda = lambda, .d = d, .alpha = alpha});
}

}  // namespace

double gcv_from_smoother(const Matrix& h, const Vector& y) {
    return gcv_from_residual(Matrix::Identity(h.rows(), h.cols()) - h, y);
}

double press_from_smoother(const Matrix& h, const Vector& y) {
    return press_from_residual(Matrix::Identity(h.rows(), h.cols()) - h, y);
}

double gcv(const DesignBundle& bundle, const Vector& y, Method method, const PenaltyParams& params) {
    return gcv_from_residual(residual_operator(bundle, method, params), y);
}

double gcv(const DesignBundle& bundle, const Vector& y, double lambda, double d, double alpha) {
    return gcv_from_residual(residual_operator(bundle, lambda, d, alpha), y);
}

double press(const DesignBundle& bundle, const Vector& y, Method method, const PenaltyParams& params) {
    return press_from_residual(residual_operator(bundle, method, params), y);
}

double press(const DesignBundle& bundle, const Vector& y, double lambda, double d, double alpha) {
    return press_from_residual(residual_operator(bundle, lambda, d, alpha), y);
}

double criterion_value(Criterion criterion, const DesignBundle& bundle, const Vector& y,
                       Method method, const PenaltyParams& params) {
    if (y.size() != bundle.n()) {
        throw Error(ErrorCode::DimensionError, "response length does not match design rows");
    }
    const Matrix r = residual_operator(bundle, method, params);
    return criterion == Criterion::Gcv ? gcv_from_residual(r, y) : press_from_residual(r, y);
}

void TuningBounds::validate() const {
    auto check = [](double lo, double hi, const char* axis) {
        if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi)) {
            throw Error(ErrorCode::InvalidParam, std::string("empty or non-finite range for ") + axis);
        }
    };
    check(lambda_lo, lambda_hi, "lambda");
    check(d_lo, d_hi, "d");
    check(alpha_lo, alpha_hi, "alpha");
    if (!(lambda_lo > 0.0)) throw Error(ErrorCode::InvalidParam, "lambda range must be positive");
    if (alpha_lo < 0.0 || alpha_hi > 1.0) {
        throw Error(ErrorCode::InvalidParam, "alpha range must lie within [0, 1]");
    }
    if (grid_points < 2) throw Error(ErrorCode::InvalidParam, "need at least 2 grid points per axis");
    if (starts < 1) throw Error(ErrorCode::InvalidParam, "need at least one refinement start");
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

enum class Axis { Lambda, D, Alpha };

// Unit-box coordinates over the free axes: log10(lambda), d and alpha are
// each mapped affinely onto [0, 1].
class Coordinates {
public:
    Coordinates(FreeParams free, const TuningBounds& bounds) : bounds_(bounds) {
        if (free.lambda) axes_.push_back(Axis::Lambda);
        if (free.d) axes_.push_back(Axis::D);
        if (free.alpha) axes_.push_back(Axis::Alpha);
    }

    std::size_t size() const { return axes_.size(); }

    PenaltyParams to_params(std::span<const double> u) const {
        PenaltyParams p;
        for (std::size_t i = 0; i < axes_.size(); ++i) {
            const double t = std::clamp(u[i], 0.0, 1.0);
            switch (axes_[i]) {
                case Axis::Lambda: {
                    const double lo = std::log10(bounds_.lambda_lo);
                    const double hi = std::log10(bounds_.lambda_hi);
                    p.lambda = std::pow(10.0, lo + t * (hi - lo));
                    break;
                }
                case Axis::D: p.d = bounds_.d_lo + t * (bounds_.d_hi - bounds_.d_lo); break;
                case Axis::Alpha:
                    p.alpha = bounds_.alpha_lo + t * (bounds_.alpha_hi - bounds_.alpha_lo);
                    break;
            }
        }
        return p;
    }

    std::vector<double> to_unit(const PenaltyParams& p) const {
        std::vector<double> u;
        for (Axis a : axes_) {
            double t = 0.5;
            switch (a) {
                case Axis::Lambda:
                    if (p.lambda && *p.lambda > 0.0) {
                        const double lo = std::log10(bounds_.lambda_lo);
                        const double hi = std::log10(bounds_.lambda_hi);
                        t = (std::log10(*p.lambda) - lo) / (hi - lo);
                    }
                    break;
                case Axis::D:
                    if (p.d) t = (*p.d - bounds_.d_lo) / (bounds_.d_hi - bounds_.d_lo);
                    break;
                case Axis::Alpha:
                    if (p.alpha) t = (*p.alpha - bounds_.alpha_lo) / (bounds_.alpha_hi - bounds_.alpha_lo);
                    break;
            }
            u.push_back(std::clamp(t, 0.0, 1.0));
        }
        return u;
    }

private:
    std::vector<Axis> axes_;
    const TuningBounds& bounds_;
};

}  // namespace

TuningResult tune_objective(const ParamObjective& objective, FreeParams free,
                            const TuningBounds& bounds, std::span<const PenaltyParams> warm_starts) {
    bounds.validate();
    const Coordinates coords(free, bounds);
    TuningResult out;
    int iteration = 0;

    auto evaluate = [&](const PenaltyParams& p, std::string_view stage) {
        ++out.evaluations;
        double v = kInf;
        try {
            v = objective(p);
            if (!std::isfinite(v)) v = kInf;
        } catch (const Error&) {
            v = kInf;
        }
        if (std::isfinite(v)) out.trace.push_back({iteration++, stage, p, v});
        return v;
    };

    // Coarse grid, odometer order with the first free axis varying slowest.
    const std::size_t k = coords.size();
    const int g = bounds.grid_points;
    std::vector<std::pair<double, std::vector<double>>> grid;
    std::vector<int> idx(k, 0);
    while (true) {
        std::vector<double> u(k);
        for (std::size_t i = 0; i < k; ++i) u[i] = static_cast<double>(idx[i]) / (g - 1);
        const double v = evaluate(coords.to_params(u), "grid");
        if (std::isfinite(v)) grid.emplace_back(v, u);
        std::size_t pos = k;
        while (pos > 0) {
            --pos;
            if (++idx[pos] < g) break;
            idx[pos] = 0;
            if (pos == 0) {
                pos = k + 1;
                break;
            }
        }
        if (k == 0 || pos == k + 1) break;
    }
    if (grid.empty()) throw Error(ErrorCode::TuningFailed, "every grid evaluation failed");

    std::stable_sort(grid.begin(), grid.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    out.coarse_score = grid.front().first;
    out.coarse_best = coords.to_params(grid.front().second);
    out.best = out.coarse_best;
    out.score = out.coarse_score;
    if (k == 0) return out;

    std::vector<std::vector<double>> starts;
    for (std::size_t i = 0; i < grid.size() && i < static_cast<std::size_t>(bounds.starts); ++i) {
        starts.push_back(grid[i].second);
    }
    for (const PenaltyParams& w : warm_starts) starts.push_back(coords.to_unit(w));

    const optimize::Objective unit_objective = [&](std::span<const double> u) {
        return evaluate(coords.to_params(u), "refine");
    };
    for (const auto& x0 : starts) {
        const optimize::BoxResult r = optimize::minimize_unit_box(unit_objective, x0);
        if (r.value < out.score) {
            out.score = r.value;
            out.best = coords.to_params(r.x);
        }
    }
    return out;
}

double relative_spread(std::span<const double> values) {
    double lo = kInf;
    double hi = -kInf;
    double sum = 0.0;
    int count = 0;
    for (double v : values) {
        if (!std::isfinite(v)) continue;
        lo = std::min(lo, v);
        hi = std::max(hi, v);
        sum += v;
        ++count;
    }
    if (count < 2) return 0.0;
    const double level = std::abs(sum / count);
    if (level == 0.0) return hi - lo;
    return (hi - lo) / level;
}

namespace {

std::vector<PenaltyParams> nested_warm_starts(const DesignBundle& bundle, const Vector& y,
                                              Method method, Criterion criterion,
                                              const TuningBounds& bounds) {
    std::vector<PenaltyParams> out;
    if (method == Method::GenRidge) {
        const TuningResult ridge = tune(bundle, y, Method::Ridge, criterion, bounds);
        out.push_back({.lambda = ridge.best.lambda, .alpha = 1.0});
    } else if (method == Method::FLiu) {
        const TuningResult gr = tune(bundle, y, Method::GenRidge, criterion, bounds);
        const TuningResult liu = tune(bundle, y, Method::Liu, criterion, bounds);
        out.push_back({.lambda = gr.best.lambda, .d = 0.0, .alpha = gr.best.alpha});
        out.push_back({.lambda = gr.best.lambda, .d = 1.0, .alpha = gr.best.alpha});
        // Liu is the lambda = alpha = 1 slice.
        out.push_back({.lambda = 1.0, .d = liu.best.d, .alpha = 1.0});
    }
    return out;
}

std::vector<double> probe_grid(const TuningBounds& bounds, double d_star) {
    std::vector<double> d;
    constexpr int kProbe = 9;
    for (int i = 0; i < kProbe; ++i) {
        d.push_back(bounds.d_lo + (bounds.d_hi - bounds.d_lo) * i / (kProbe - 1));
    }
    d.push_back(d_star);
    return d;
}

}  // namespace

TuningResult tune(const DesignBundle& bundle, const Vector& y, Method method, Criterion criterion,
                  const TuningBounds& bounds, std::span<const PenaltyParams> warm_starts) {
    bounds.validate();
    numerics::require_finite(y, "response");
    const ParamObjective objective = [&](const PenaltyParams& p) {
        return criterion_value(criterion, bundle, y, method, p);
    };
    std::vector<PenaltyParams> starts(warm_starts.begin(), warm_starts.end());
    for (const PenaltyParams& p : nested_warm_starts(bundle, y, method, criterion, bounds)) {
        starts.push_back(p);
    }
    TuningResult out = tune_objective(objective, free_params(method), bounds, starts);
    out.method = method;
    out.criterion = criterion;
    if (!free_params(method).d) return out;

    const double lambda = method == Method::Liu ? 1.0 : *out.best.lambda;
    const double alpha = method == Method::Liu ? 1.0 : *out.best.alpha;
    std::vector<double> scores;
    for (double d : probe_grid(bounds, *out.best.d)) {
        PenaltyParams p = out.best;
        p.d = d;
        try {
            scores.push_back(objective(p));
        } catch (const Error&) {
        }
    }
    out.degenerate = scores.size() >= 2 && relative_spread(scores) < 1e-10;

    try {
        const Matrix q = build_q(bundle, lambda, alpha);
        const Vector coef = numerics::solve_sym(Matrix(bundle.gram + q), Vector(bundle.z_aug.transpose() * y));
        const Matrix h = smoother_matrix(bundle, Method::GenRidge, {.lambda = lambda, .alpha = alpha});
        const double dof = bundle.n() - h.trace();
        if (dof > 1e-10) {
            const double s2 = (y - bundle.z_aug * coef).squaredNorm() / dof;
            out.plug_in = plug_in_d(bundle, y, lambda, alpha, s2);
        }
    } catch (const Error&) {
    }

    if (out.degenerate && out.plug_in) {
        out.best.d = out.plug_in->d_proj;
        out.score = objective(out.best);
        out.trace.push_back({static_cast<int>(out.trace.size()), "final", out.best, out.score});
    }
    return out;
}

double sigma2_hat(const EstimatorFit& fit) {
    const double n = static_cast<double>(fit.residuals.size());
    const double dof = n - fit.effective_dof;
    if (!(dof > 1e-10)) {
        throw Error(ErrorCode::InsufficientDof,
                    "n - tr(H) = " + std::to_string(dof) + ", noise variance is not estimable");
    }
    return fit.residuals.squaredNorm() / dof;
}

PlugIn plug_in_d(const DesignBundle& bundle, const Vector& y, double lambda, double alpha,
                 double sigma2) {
    const Matrix q = build_q(bundle, lambda, alpha);
    const Vector coef = numerics::solve_sym(Matrix(bundle.gram + q), Vector(bundle.z_aug.transpose() * y));
    const risk::RiskProfile profile = risk::mse_coefficients(bundle.gram, q, coef, sigma2);
    PlugIn out;
    out.c1 = profile.c1;
    out.c2 = profile.c2;
    out.c3 = profile.c3;
    out.d_plug = risk::d_opt(profile);
    out.d_proj = std::clamp(out.d_plug, 0.0, 1.0);
    return out;
}

PlugIn plug_in_d(std::shared_ptr<const DesignBundle> bundle, const Vector& y, double lambda,
                 double alpha) {
    const EstimatorFit gr = fit_gen_ridge(bundle, y, lambda, alpha);
    return plug_in_d(*bundle, y, lambda, alpha, sigma2_hat(gr));
}

DegeneracyReport degeneracy_check(const DesignBundle& bundle, const Vector& y, double lambda,
                                  double alpha, std::span<const double> d_grid) {
    DegeneracyReport out;
    out.n = bundle.n();
    out.rank = numerics::numeric_rank(bundle.z_aug);
    out.full_row_rank = out.rank == out.n;
    out.d_grid.assign(d_grid.begin(), d_grid.end());
    constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

    const Matrix q = build_q(bundle, lambda, alpha);
    Matrix b;
    if (out.full_row_rank) {
        b = bundle.z_aug * numerics::solve_sym(Matrix(bundle.gram + q), Matrix(q * bundle.z_aug_pinv));
        const Vector by = b * y;
        const double tr = b.trace();
        out.gcv_closed_form = static_cast<double>(out.n) * by.squaredNorm() / (tr * tr);
        out.press_closed_form = 0.0;
        for (Eigen::Index i = 0; i < out.n; ++i) {
            const double r = by[i] / b(i, i);
            out.press_closed_form += r * r;
        }
    }

    const Matrix eye = Matrix::Identity(out.n, out.n);
    for (double d : d_grid) {
        const Matrix h = smoother_matrix(bundle, lambda, d, alpha);
        double g = kNan;
        double p = kNan;
        try {
            g = gcv(bundle, y, lambda, d, alpha);
        } catch (const Error&) {
        }
        try {
            p = press(bundle, y, lambda, d, alpha);
        } catch (const Error&) {
        }
        out.gcv.push_back(g);
        out.press.push_back(p);
        if (out.full_row_rank) {
            const double err = (h - (eye - (1.0 - d) * b)).cwiseAbs().maxCoeff();
            out.identity_error = std::max(out.identity_error, err);
        }
    }
    out.gcv_spread = relative_spread(out.gcv);
    out.press_spread = relative_spread(out.press);
    out.degenerate = out.gcv_spread < 1e-10;
    return out;
}

}  // namespace fliu
