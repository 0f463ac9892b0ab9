// Command-line front end: fit, tune, risk, degeneracy and simulate.
//
// Exit codes
//   0  every requested artifact was written
//   1  unexpected failure
//   2  bad command line or config file
//   3  input data error (parse, join, grid, IO)
//   4  invalid parameter, basis or split
//   5  numerical failure (singular system, saturated smoother, ...)
//   6  tuning failed

#include <chrono>
#include <cmath>
#include <cstdint>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "fliu/dataio.hpp"
#include "fliu/error.hpp"
#include "fliu/pipeline.hpp"
#include "fliu/risk.hpp"
#include "fliu/selection.hpp"

namespace fs = std::filesystem;
using namespace fliu;
using dataio::format_double;

namespace {

struct CliConfig {
    std::vector<std::string> curves;
    std::string response;
    std::string layout = "wide";
    std::string basis = "fourier";
    std::vector<int> k{11};
    double period = 0.0;  // 0: grid span plus one spacing
    int order = 4;
    std::string penalty = "auto";
    std::string estimators = "ols,ridge,liu,genridge,fliu";
    std::string criterion = "gcv";
    std::uint64_t seed = 10;
    std::string split;  // empty: use every sample for training
    std::string out = "out";
    bool log_response = false;

    TuningBounds bounds;
    std::optional<double> lambda;
    std::optional<double> d;
    std::optional<double> alpha;

    int replications = 100000;
    int threads = 1;
    int d_points = 201;
    std::vector<double> d_grid{-1.0, -0.5, 0.0, 0.25, 0.5, 0.75, 1.0};
    std::string truth;

    // simulate
    int n = 50;
    int grid_points = 100;
    int predictors = 1;
    int k_true = 5;
    double sigma2 = 0.01;
    double collinearity = 0.0;
    int m = 6;
};

int exit_code(ErrorCode code) {
    switch (code) {
        case ErrorCode::ParseError:
        case ErrorCode::JoinError:
        case ErrorCode::GridMismatch:
        case ErrorCode::IoError:
            return 3;
        case ErrorCode::InvalidParam:
        case ErrorCode::InvalidBasis:
        case ErrorCode::BasisKindError:
        case ErrorCode::DomainError:
        case ErrorCode::UnderdeterminedCurveFit:
        case ErrorCode::InvalidSplit:
        case ErrorCode::DimensionError:
            return 4;
        case ErrorCode::TuningFailed:
            return 6;
        default:
            return 5;
    }
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

std::string opt_str(const std::optional<double>& v) { return v ? format_double(*v) : std::string(); }

void add_data_options(CLI::App* cmd, CliConfig& c) {
    cmd->add_option("--curves", c.curves, "Curve CSV, one per predictor (repeatable)")->required();
    cmd->add_option("--response", c.response, "Response CSV (id,y)")->required();
    cmd->add_option("--layout", c.layout, "Curve layout: wide or long")->capture_default_str();
    cmd->add_flag("--log-response", c.log_response, "Replace y by log10(y)");
    cmd->add_option("--split", c.split, "train/test sizes (24/11), a train size, or a train fraction");
    cmd->add_option("--seed", c.seed, "Seed for the split")->capture_default_str();
}

void add_basis_options(CLI::App* cmd, CliConfig& c, bool many_k) {
    cmd->add_option("--basis", c.basis, "fourier or bspline")->capture_default_str();
    if (many_k) {
        cmd->add_option("--K", c.k, "Basis sizes (repeatable)")->capture_default_str();
    } else {
        cmd->add_option("--K", c.k, "Basis size")->expected(1)->capture_default_str();
    }
    cmd->add_option("--period", c.period, "Fourier period (0: grid span plus one spacing)")->capture_default_str();
    cmd->add_option("--order", c.order, "B-spline order")->capture_default_str();
    cmd->add_option("--penalty", c.penalty, "auto, fourier, curvature or second_difference")->capture_default_str();
}

void add_tuning_options(CLI::App* cmd, CliConfig& c) {
    cmd->add_option("--estimators", c.estimators, "Comma-separated estimator list")->capture_default_str();
    cmd->add_option("--criterion", c.criterion, "gcv or press")->capture_default_str();
    cmd->add_option("--lambda-min", c.bounds.lambda_lo)->capture_default_str();
    cmd->add_option("--lambda-max", c.bounds.lambda_hi)->capture_default_str();
    cmd->add_option("--d-min", c.bounds.d_lo)->capture_default_str();
    cmd->add_option("--d-max", c.bounds.d_hi)->capture_default_str();
    cmd->add_option("--alpha-min", c.bounds.alpha_lo)->capture_default_str();
    cmd->add_option("--alpha-max", c.bounds.alpha_hi)->capture_default_str();
    cmd->add_option("--grid-points", c.bounds.grid_points, "Coarse grid points per axis")->capture_default_str();
    cmd->add_option("--starts", c.bounds.starts, "Grid points refined locally")->capture_default_str();
}

void add_param_options(CLI::App* cmd, CliConfig& c) {
    cmd->add_option("--lambda", c.lambda, "Fixed lambda");
    cmd->add_option("--d", c.d, "Fixed d");
    cmd->add_option("--alpha", c.alpha, "Fixed alpha");
}

struct Loaded {
    FunctionalDataset full;
    FunctionalDataset train;
    std::optional<FunctionalDataset> test;
};

Loaded load(const CliConfig& c) {
    std::vector<fs::path> paths(c.curves.begin(), c.curves.end());
    Loaded out;
    out.full = dataio::load_dataset(paths, c.response, dataio::parse_layout(c.layout));
    if (c.log_response) {
        for (Eigen::Index i = 0; i < out.full.response.size(); ++i) {
            if (!(out.full.response[i] > 0.0)) {
                throw Error(ErrorCode::DomainError, "--log-response needs positive responses");
            }
            out.full.response[i] = std::log10(out.full.response[i]);
        }
    }
    if (c.split.empty()) {
        out.train = out.full;
    } else {
        dataio::Split s = dataio::split(out.full, dataio::parse_split(c.split, c.seed));
        out.train = std::move(s.train);
        out.test = std::move(s.test);
    }
    return out;
}

BasisConfig basis_config(const CliConfig& c, int k) {
    BasisConfig b;
    b.kind = parse_basis_kind(c.basis);
    b.size = k;
    if (c.period > 0.0) b.period = c.period;
    b.order = c.order;
    if (c.penalty != "auto") b.penalty = parse_penalty_mode(c.penalty);
    return b;
}

std::vector<Method> methods(const CliConfig& c) {
    std::vector<Method> out;
    for (const std::string& s : split_list(c.estimators)) out.push_back(parse_method(s));
    if (out.empty()) throw Error(ErrorCode::InvalidParam, "no estimators requested");
    return out;
}

// A method is fixed when every parameter it uses was given on the command line.
std::map<Method, PenaltyParams> fixed_params(const CliConfig& c, const std::vector<Method>& ms) {
    std::map<Method, PenaltyParams> out;
    for (Method m : ms) {
        const FreeParams f = free_params(m);
        if ((f.lambda && !c.lambda) || (f.d && !c.d) || (f.alpha && !c.alpha)) continue;
        if (m == Method::Ols) continue;
        PenaltyParams p;
        if (f.lambda) p.lambda = c.lambda;
        if (f.d) p.d = c.d;
        if (f.alpha) p.alpha = c.alpha;
        out[m] = p;
    }
    return out;
}

void write_summary(const std::vector<EstimatorRun>& runs, const fs::path& path) {
    std::ostringstream s;
    s << "method,lambda,d,alpha,gcv,press,training_loss,testing_loss,effective_dof,degenerate,d_plug,d_proj\n";
    for (const EstimatorRun& run : runs) {
        const dataio::FitReport& r = run.report;
        s << to_string(r.method) << ',' << opt_str(r.params.lambda) << ',' << opt_str(r.params.d) << ','
          << opt_str(r.params.alpha) << ',' << format_double(r.gcv) << ',' << format_double(r.press) << ','
          << format_double(r.training_loss) << ',' << opt_str(r.testing_loss) << ','
          << format_double(r.effective_dof) << ',' << (r.degenerate ? "true" : "false") << ','
          << (r.plug_in ? format_double(r.plug_in->d_plug) : "") << ','
          << (r.plug_in ? format_double(r.plug_in->d_proj) : "") << '\n';
    }
    dataio::write_text(path, s.str());
}

std::vector<EstimatorRun> run_compare(const CliConfig& c, bool force_tuning) {
    const Loaded data = load(c);
    const BasisConfig bc = basis_config(c, c.k.front());
    const std::vector<BasisSpec> bases = make_bases(data.full, bc);
    const PenaltyMode mode = penalty_for(bc);
    const double cond = numerics::cond2(build_design(data.full, bases, mode).z_aug);
    CompareOptions options;
    options.methods = methods(c);
    options.criterion = parse_criterion(c.criterion);
    options.bounds = c.bounds;
    if (!force_tuning) options.fixed = fixed_params(c, options.methods);
    return compare_estimators(data.train, data.test ? &*data.test : nullptr, bases, mode, options, cond);
}

void cmd_fit(const CliConfig& c) {
    const auto runs = run_compare(c, false);
    const fs::path out(c.out);
    for (const EstimatorRun& run : runs) {
        dataio::FitReport r = run.report;
        r.trace.clear();
        dataio::export_report(r, out, to_string(r.method));
    }
    write_summary(runs, out / "summary.csv");
}

void cmd_tune(const CliConfig& c) {
    const auto runs = run_compare(c, true);
    const fs::path out(c.out);
    std::ostringstream s;
    s << "method,criterion,lambda,d,alpha,score,coarse_lambda,coarse_d,coarse_alpha,coarse_score,evaluations,"
         "degenerate,d_plug,d_proj\n";
    for (const EstimatorRun& run : runs) {
        if (!run.tuning) continue;
        const TuningResult& t = *run.tuning;
        dataio::write_trace(t.trace, out / (std::string(to_string(t.method)) + "_trace.csv"));
        s << to_string(t.method) << ',' << to_string(t.criterion) << ',' << opt_str(t.best.lambda) << ','
          << opt_str(t.best.d) << ',' << opt_str(t.best.alpha) << ',' << format_double(t.score) << ','
          << opt_str(t.coarse_best.lambda) << ',' << opt_str(t.coarse_best.d) << ','
          << opt_str(t.coarse_best.alpha) << ',' << format_double(t.coarse_score) << ',' << t.evaluations << ','
          << (t.degenerate ? "true" : "false") << ',' << (t.plug_in ? format_double(t.plug_in->d_plug) : "")
          << ',' << (t.plug_in ? format_double(t.plug_in->d_proj) : "") << '\n';
    }
    dataio::write_text(out / "tuning.csv", s.str());
}

void cmd_degeneracy(const CliConfig& c) {
    const Loaded data = load(c);
    const fs::path out(c.out);
    if (c.d_points < 2) throw Error(ErrorCode::InvalidParam, "--d-points must be at least 2");
    std::vector<double> grid;
    for (int i = 0; i < c.d_points; ++i) {
        grid.push_back(c.bounds.d_lo + (c.bounds.d_hi - c.bounds.d_lo) * i / (c.d_points - 1));
    }
    for (int k : c.k) {
        const BasisConfig bc = basis_config(c, k);
        const DesignBundle bundle = build_design(data.train, make_bases(data.full, bc), penalty_for(bc));
        double lambda = 0.0;
        double alpha = 0.0;
        if (c.lambda && c.alpha) {
            lambda = *c.lambda;
            alpha = *c.alpha;
        } else {
            const TuningResult t =
                tune(bundle, data.train.response, Method::FLiu, parse_criterion(c.criterion), c.bounds);
            lambda = *t.best.lambda;
            alpha = *t.best.alpha;
        }
        const DegeneracyReport r = degeneracy_check(bundle, data.train.response, lambda, alpha, grid);
        const std::string tag = "K" + std::to_string(k);
        std::ostringstream csv;
        csv << "d,gcv,press\n";
        for (std::size_t i = 0; i < r.d_grid.size(); ++i) {
            csv << format_double(r.d_grid[i]) << ',' << format_double(r.gcv[i]) << ','
                << format_double(r.press[i]) << '\n';
        }
        dataio::write_text(out / ("gcv_vs_d_" + tag + ".csv"), csv.str());
        std::ostringstream kv;
        kv << "K = " << k << "\nlambda = " << format_double(lambda) << "\nalpha = " << format_double(alpha)
           << "\nn = " << r.n << "\nrank = " << r.rank << "\nfull_row_rank = " << (r.full_row_rank ? "true" : "false")
           << "\ngcv_spread = " << format_double(r.gcv_spread) << "\npress_spread = " << format_double(r.press_spread)
           << "\ndegenerate = " << (r.degenerate ? "true" : "false") << '\n';
        if (r.full_row_rank) {
            kv << "identity_error = " << format_double(r.identity_error)
               << "\ngcv_closed_form = " << format_double(r.gcv_closed_form)
               << "\npress_closed_form = " << format_double(r.press_closed_form) << '\n';
        }
        dataio::write_text(out / ("degeneracy_" + tag + ".txt"), kv.str());
    }
}

Vector json_vector(const nlohmann::json& j) {
    Vector v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) v[static_cast<Eigen::Index>(i)] = j[i].get<double>();
    return v;
}

void cmd_risk(const CliConfig& c) {
    Matrix z;
    Matrix q;
    Vector b;
    double sigma2 = c.sigma2;
    std::optional<PlugIn> plug;
    const double lambda = c.lambda.value_or(1.0);
    const double alpha = c.alpha.value_or(0.5);
    if (!c.truth.empty()) {
        std::ifstream in(c.truth);
        if (!in) throw Error(ErrorCode::IoError, "cannot open " + c.truth);
        nlohmann::json truth;
        try {
            in >> truth;
        } catch (const nlohmann::json::exception& e) {
            throw Error(ErrorCode::ParseError, c.truth + ": " + e.what());
        }
        if (c.curves.empty() || c.response.empty()) {
            throw Error(ErrorCode::InvalidParam, "--truth needs --curves and --response for the design");
        }
        const Loaded data = load(c);
        const BasisConfig bc = basis_config(c, c.k.front());
        const auto bundle = std::make_shared<const DesignBundle>(
            build_design(data.train, make_bases(data.full, bc), penalty_for(bc)));
        b = json_vector(truth.at("coef"));
        sigma2 = truth.at("sigma2").get<double>();
        if (b.size() != bundle->dim()) {
            throw Error(ErrorCode::DimensionError, "truth coefficients do not match the design");
        }
        z = bundle->z_aug;
        q = build_q(*bundle, lambda, alpha);
        try {
            plug = plug_in_d(bundle, data.train.response, lambda, alpha);
        } catch (const Error&) {
        }
    } else {
        std::mt19937_64 rng(c.seed);
        std::normal_distribution<double> normal;
        z = Matrix(c.n, c.m + 1);
        for (Eigen::Index i = 0; i < z.rows(); ++i) {
            z(i, 0) = 1.0;
            for (Eigen::Index j = 1; j < z.cols(); ++j) z(i, j) = normal(rng);
        }
        b = Vector(c.m + 1);
        for (Eigen::Index j = 0; j < b.size(); ++j) b[j] = normal(rng);
        Matrix r = Matrix::Zero(c.m, c.m);
        if (c.m >= 3) {
            Matrix d2 = Matrix::Zero(c.m - 2, c.m);
            for (int i = 0; i < c.m - 2; ++i) d2.row(i).segment(i, 3) << 1.0, -2.0, 1.0;
            r = d2.transpose() * d2;
        }
        const DesignBundle bundle = make_bundle(z.rightCols(c.m), r);
        q = build_q(bundle, lambda, alpha);
    }

    std::vector<double> grid = c.d_grid;
    risk::MonteCarloOptions mc;
    mc.replications = c.replications;
    mc.seed = c.seed;
    mc.threads = c.threads;
    const risk::RiskProfile profile = risk::mse_coefficients(z.transpose() * z, q, b, sigma2);
    const double d_opt = risk::d_opt(profile);
    grid.push_back(d_opt);
    const risk::RiskScan scan = risk::risk_scan(z, q, b, sigma2, grid, mc);

    const fs::path out(c.out);
    dataio::write_risk_table(scan.rows, out / "risk.csv");
    std::ostringstream kv;
    kv << "lambda = " << format_double(lambda) << "\nalpha = " << format_double(alpha)
       << "\nsigma2 = " << format_double(sigma2) << "\nc0 = " << format_double(profile.c0)
       << "\nc1 = " << format_double(profile.c1) << "\nc2 = " << format_double(profile.c2)
       << "\nc3 = " << format_double(profile.c3) << "\nd_opt = " << format_double(d_opt)
       << "\ng_at_one = " << format_double(scan.g_at_one) << "\nbest_below_one = " << format_double(scan.best_below_one)
       << "\nbest_d_below_one = " << format_double(scan.best_d_below_one)
       << "\nimproves_on_ols = " << (scan.improves_on_ols ? "true" : "false") << '\n';
    if (plug) kv << "d_plug = " << format_double(plug->d_plug) << "\nd_proj = " << format_double(plug->d_proj) << '\n';
    dataio::write_text(out / "risk_summary.txt", kv.str());
}

void cmd_simulate(const CliConfig& c) {
    if (c.n < 2 || c.grid_points < 2 || c.predictors < 1) {
        throw Error(ErrorCode::InvalidParam, "simulate needs n >= 2, grid points >= 2 and p >= 1");
    }
    if (!(c.collinearity >= 0.0 && c.collinearity < 1.0)) {
        throw Error(ErrorCode::InvalidParam, "--collinearity must lie in [0, 1)");
    }
    if (!(c.sigma2 >= 0.0)) throw Error(ErrorCode::InvalidParam, "--sigma2 must be nonnegative");
    const double period = c.period > 0.0 ? c.period : 1.0;
    const BasisSpec basis = build_fourier_basis(c.k_true, period);
    const Eigen::Index k = basis.size();

    std::mt19937_64 rng(c.seed);
    std::normal_distribution<double> normal;
    FunctionalDataset data;
    for (int j = 0; j < c.grid_points; ++j) data.grid.push_back(period * (j + 0.5) / c.grid_points);
    const Matrix phi = eval_basis(basis, data.grid);

    // Equicorrelated scores: eigenvalues 1 - c and 1 + (K - 1) c.
    Matrix sigma = Matrix::Constant(k, k, c.collinearity);
    sigma.diagonal().setOnes();
    const Matrix chol = Eigen::LLT<Matrix>(sigma).matrixL();

    const Eigen::Index m = k * c.predictors;
    Matrix z(c.n, m);
    for (int p = 0; p < c.predictors; ++p) {
        Matrix raw(c.n, k);
        for (Eigen::Index i = 0; i < raw.rows(); ++i) {
            for (Eigen::Index j = 0; j < k; ++j) raw(i, j) = normal(rng);
        }
        const Matrix scores = raw * chol.transpose();
        z.middleCols(p * k, k) = scores;
        data.curves.push_back(scores * phi.transpose());
    }
    Vector coef(m + 1);
    for (Eigen::Index j = 0; j < coef.size(); ++j) coef[j] = normal(rng);
    data.response = Vector(c.n);
    const double sd = std::sqrt(c.sigma2);
    for (Eigen::Index i = 0; i < c.n; ++i) {
        data.response[i] = coef[0] + z.row(i).dot(coef.tail(m)) + sd * normal(rng);
        data.labels.push_back("s" + std::to_string(i + 1));
    }

    const fs::path out(c.out);
    std::vector<fs::path> curve_paths;
    for (int p = 0; p < c.predictors; ++p) curve_paths.push_back(out / ("curves_" + std::to_string(p + 1) + ".csv"));
    dataio::save_dataset(data, curve_paths, out / "response.csv");

    Matrix z_aug(c.n, m + 1);
    z_aug.col(0).setOnes();
    z_aug.rightCols(m) = z;
    nlohmann::json truth;
    truth["coef"] = std::vector<double>(coef.data(), coef.data() + coef.size());
    truth["sigma2"] = c.sigma2;
    truth["basis"] = {{"kind", "fourier"}, {"K", c.k_true}, {"period", period}};
    truth["predictors"] = c.predictors;
    truth["n"] = c.n;
    truth["grid_points"] = c.grid_points;
    truth["collinearity"] = c.collinearity;
    truth["seed"] = c.seed;
    truth["design_condition_number"] = numerics::cond2(z_aug);
    dataio::write_text(out / "truth.json", truth.dump(2) + "\n");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Functional Liu-type shrinkage for scalar-on-function regression"};
    app.set_config("--config", "", "TOML/INI config file; command-line flags take precedence");
    app.require_subcommand(1);
    CliConfig c;

    CLI::App* fit = app.add_subcommand("fit", "Fit estimators at given or tuned parameters");
    add_data_options(fit, c);
    add_basis_options(fit, c, false);
    add_tuning_options(fit, c);
    add_param_options(fit, c);
    fit->add_option("--out", c.out, "Output directory")->capture_default_str();

    CLI::App* tune_cmd = app.add_subcommand("tune", "Tune every estimator that has parameters");
    add_data_options(tune_cmd, c);
    add_basis_options(tune_cmd, c, false);
    add_tuning_options(tune_cmd, c);
    tune_cmd->add_option("--out", c.out, "Output directory")->capture_default_str();

    CLI::App* degen = app.add_subcommand("degeneracy", "Criterion against d for one or more basis sizes");
    add_data_options(degen, c);
    add_basis_options(degen, c, true);
    add_tuning_options(degen, c);
    add_param_options(degen, c);
    degen->add_option("--d-points", c.d_points, "Points on the d grid")->capture_default_str();
    degen->add_option("--out", c.out, "Output directory")->capture_default_str();

    CLI::App* risk_cmd = app.add_subcommand("risk", "Closed-form risk against Monte Carlo under a planted truth");
    risk_cmd->add_option("--truth", c.truth, "Truth sidecar written by simulate");
    risk_cmd->add_option("--curves", c.curves, "Curve CSV(s) for the design when --truth is given");
    risk_cmd->add_option("--response", c.response, "Response CSV when --truth is given");
    risk_cmd->add_option("--layout", c.layout)->capture_default_str();
    add_basis_options(risk_cmd, c, false);
    add_param_options(risk_cmd, c);
    risk_cmd->add_option("--n", c.n, "Rows of the random design")->capture_default_str();
    risk_cmd->add_option("--m", c.m, "Columns of the random design")->capture_default_str();
    risk_cmd->add_option("--sigma2", c.sigma2, "Noise variance of the random design")->capture_default_str();
    risk_cmd->add_option("--d-grid", c.d_grid, "Values of d to tabulate")->delimiter(',')->capture_default_str();
    risk_cmd->add_option("--replications", c.replications)->capture_default_str();
    risk_cmd->add_option("--threads", c.threads)->capture_default_str();
    risk_cmd->add_option("--seed", c.seed)->capture_default_str();
    risk_cmd->add_option("--out", c.out, "Output directory")->capture_default_str();

    CLI::App* sim = app.add_subcommand("simulate", "Write a synthetic dataset with a planted truth");
    sim->add_option("--n", c.n)->capture_default_str();
    sim->add_option("--T", c.grid_points, "Grid points per curve")->capture_default_str();
    sim->add_option("--p", c.predictors, "Predictors")->capture_default_str();
    sim->add_option("--K-true", c.k_true, "Fourier basis size of the truth")->capture_default_str();
    sim->add_option("--period", c.period, "Domain length (0: 1)")->capture_default_str();
    sim->add_option("--sigma2", c.sigma2)->capture_default_str();
    sim->add_option("--collinearity", c.collinearity, "Score equicorrelation in [0, 1)")->capture_default_str();
    sim->add_option("--seed", c.seed)->capture_default_str();
    sim->add_option("--out", c.out, "Output directory")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    const auto started = std::chrono::system_clock::now();
    try {
        fs::create_directories(c.out);
        for (const CLI::App* sub : app.get_subcommands()) {
            dataio::write_text(fs::path(c.out) / "config.ini",
                               "[" + sub->get_name() + "]\n" + sub->config_to_str(true, false));
        }
        if (fit->parsed()) cmd_fit(c);
        if (tune_cmd->parsed()) cmd_tune(c);
        if (degen->parsed()) cmd_degeneracy(c);
        if (risk_cmd->parsed()) cmd_risk(c);
        if (sim->parsed()) cmd_simulate(c);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_code(e.code());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }

    const std::time_t t = std::chrono::system_clock::to_time_t(started);
    std::ofstream log(fs::path(c.out) / "run.log", std::ios::app);
    log << std::put_time(std::gmtime(&t), "%Y-%m-%dT%H:%M:%SZ");
    for (int i = 0; i < argc; ++i) log << ' ' << argv[i];
    log << '\n';
    return 0;
}
