#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fliu/basis.hpp"
#include "fliu/estimators.hpp"
#include "fliu/risk.hpp"
#include "fliu/selection.hpp"

namespace fliu::dataio {

namespace fs = std::filesystem;

enum class Layout { Wide, Long };
Layout parse_layout(std::string_view name);

/// Shortest round-trippable decimal ("%.17g").
std::string format_double(double value);

/// RFC 4180-style rows (quoted fields, doubled quotes). Blank lines are skipped.
std::vector<std::vector<std::string>> read_csv(const fs::path& path);

struct CurveTable {
    std::vector<std::string> labels;  // empty when the file has no id column
    std::vector<double> grid;
    Matrix values;  // n x T
};

/// Wide: header `id,t1,...,tT` (id column optional). Long: header `id,t,value`.
CurveTable read_curves(const fs::path& path, Layout layout);

struct ResponseTable {
    std::vector<std::string> labels;
    Vector y;
};

/// Header `id,y`, or a single `y` column matched by order.
ResponseTable read_response(const fs::path& path);

/// One curve file per predictor; responses joined by label when both sides
/// carry labels, otherwise by position.
FunctionalDataset load_dataset(std::span<const fs::path> curve_paths, const fs::path& response_path,
                               Layout layout = Layout::Wide);
FunctionalDataset load_dataset(const fs::path& curve_path, const fs::path& response_path,
                               Layout layout = Layout::Wide);

/// Wide layout, one curve file per predictor.
void save_dataset(const FunctionalDataset& data, std::span<const fs::path> curve_paths,
                  const fs::path& response_path);
void write_curves(const FunctionalDataset& data, Eigen::Index predictor, const fs::path& path,
                  Layout layout = Layout::Wide);
void write_response(const FunctionalDataset& data, const fs::path& path);

struct SplitSpec {
    std::optional<double> train_fraction;
    std::optional<Eigen::Index> train_size;
    std::optional<Eigen::Index> test_size;  // defaults to the remainder
    std::vector<Eigen::Index> train_indices;  // explicit lists override the rest
    std::vector<Eigen::Index> test_indices;
    std::uint64_t seed = 1;
    bool shuffle = true;
};

/// "24/11" (train/test sizes), "24" (train size) or "0.7" (train fraction).
SplitSpec parse_split(std::string_view text, std::uint64_t seed);

struct SplitIndices {
    std::vector<Eigen::Index> train;  // ascending
    std::vector<Eigen::Index> test;   // ascending
};

/// Deterministic given the seed; the generator is mt19937_64 with an
/// unbiased bounded draw, so results do not depend on the standard library.
SplitIndices split_indices(Eigen::Index n, const SplitSpec& spec);

struct Split {
    FunctionalDataset train;
    FunctionalDataset test;
    SplitIndices indices;
};

Split split(const FunctionalDataset& data, const SplitSpec& spec);

struct CoefficientSamples {
    std::size_t predictor = 0;
    std::vector<double> grid;
    std::vector<double> values;
};

struct FitReport {
    Method method = Method::Ols;
    PenaltyParams params;
    std::optional<Criterion> criterion;  // set when the parameters were tuned
    double gcv = 0.0;                    // NaN when undefined
    double press = 0.0;
    double training_loss = 0.0;
    std::optional<double> testing_loss;
    Eigen::Index n_train = 0;
    Eigen::Index n_test = 0;
    double effective_dof = 0.0;
    double cond_design = 0.0;
    double cond_train = 0.0;
    bool degenerate = false;
    std::optional<PlugIn> plug_in;
    Vector coef;
    Vector residuals;
    std::vector<CoefficientSamples> beta;
    std::vector<TraceRecord> trace;
    std::vector<risk::RiskRow> risk;
};

/// Writes <dir>/<stem>.txt (key = value) plus <stem>_beta.csv,
/// <stem>_coef.csv, <stem>_residuals.csv and, when present,
/// <stem>_trace.csv and <stem>_risk.csv. Returns every path written.
std::vector<fs::path> export_report(const FitReport& report, const fs::path& dir,
                                    std::string_view stem = "report");

/// Reads back what export_report wrote. Trace stages come back as "grid",
/// "refine" or "final".
FitReport load_report(const fs::path& dir, std::string_view stem = "report");

void write_trace(const std::vector<TraceRecord>& trace, const fs::path& path);
void write_risk_table(const std::vector<risk::RiskRow>& rows, const fs::path& path);

/// Creates parent directories and writes the text, IoError on failure.
void write_text(const fs::path& path, std::string_view text);

}  // namespace fliu::dataio
