#include "fliu/dataio.hpp"

#include <algorithm>
#include <cctype>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <unordered_map>

#include "fliu/error.hpp"

namespace fliu::dataio {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

std::string trim(std::string_view s) {
    std::size_t a = 0;
    std::size_t b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return std::string(s.substr(a, b - a));
}

std::string lower(std::string_view s) {
    std::string out;
    for (char c : s) out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    return out;
}

std::optional<double> try_number(const std::string& cell) {
    const std::string t = trim(cell);
    if (t.empty()) return std::nullopt;
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(t.c_str(), &end);
    if (end != t.c_str() + t.size() || errno == ERANGE) return std::nullopt;
    return v;
}

std::string where(const fs::path& path, std::size_t row, std::size_t col) {
    return path.string() + ": row " + std::to_string(row + 1) + ", column " + std::to_string(col + 1);
}

double number(const std::string& cell, const fs::path& path, std::size_t row, std::size_t col) {
    if (trim(cell).empty()) {
        throw Error(ErrorCode::ParseError, where(path, row, col) + ": missing value");
    }
    const auto v = try_number(cell);
    if (!v || !std::isfinite(*v)) {
        throw Error(ErrorCode::ParseError, where(path, row, col) + ": not a finite number '" + cell + "'");
    }
    return *v;
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out.push_back('"');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

std::ofstream open_out(const fs::path& path) {
    std::error_code ec;
    if (path.has_parent_path()) fs::create_directories(path.parent_path(), ec);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::IoError, "cannot open " + path.string() + " for writing");
    return out;
}

void close_out(std::ofstream& out, const fs::path& path) {
    out.flush();
    if (!out) throw Error(ErrorCode::IoError, "failed writing " + path.string());
}

void require_unique(const std::vector<std::string>& labels, const fs::path& path) {
    std::set<std::string> seen;
    for (const std::string& l : labels) {
        if (!seen.insert(l).second) {
            throw Error(ErrorCode::JoinError, path.string() + ": duplicate id '" + l + "'");
        }
    }
}

}  // namespace

Layout parse_layout(std::string_view name) {
    const std::string s = lower(name);
    if (s == "wide") return Layout::Wide;
    if (s == "long") return Layout::Long;
    throw Error(ErrorCode::InvalidParam, "unknown layout '" + std::string(name) + "'");
}

std::string format_double(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

std::vector<std::vector<std::string>> read_csv(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
    std::stringstream buffer;
    buffer << in.rdbuf();
    const std::string text = buffer.str();

    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> row;
    std::string field;
    bool quoted = false;
    bool field_started = false;
    auto end_row = [&] {
        if (field_started || !row.empty()) {
            row.push_back(field);
            rows.push_back(std::move(row));
        }
        row.clear();
        field.clear();
        field_started = false;
    };
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field.push_back('"');
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                field.push_back(c);
            }
            continue;
        }
        if (c == '"') {
            quoted = true;
            field_started = true;
        } else if (c == ',') {
            row.push_back(field);
            field.clear();
            field_started = true;
        } else if (c == '\n') {
            end_row();
        } else if (c != '\r') {
            field.push_back(c);
            field_started = true;
        }
    }
    if (quoted) throw Error(ErrorCode::ParseError, path.string() + ": unterminated quoted field");
    end_row();
    return rows;
}

namespace {

CurveTable read_wide(const fs::path& path, const std::vector<std::vector<std::string>>& rows) {
    const auto& header = rows.front();
    const bool has_id = !header.empty() && !try_number(header.front());
    const std::size_t first = has_id ? 1 : 0;
    if (header.size() <= first + 1) {
        throw Error(ErrorCode::GridMismatch, path.string() + ": need at least two grid columns");
    }
    CurveTable t;
    for (std::size_t c = first; c < header.size(); ++c) t.grid.push_back(number(header[c], path, 0, c));
    const auto n = static_cast<Eigen::Index>(rows.size() - 1);
    t.values.resize(n, static_cast<Eigen::Index>(t.grid.size()));
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& row = rows[r];
        if (row.size() != header.size()) {
            throw Error(ErrorCode::GridMismatch, path.string() + ": row " + std::to_string(r + 1) + " has " +
                                                     std::to_string(row.size()) + " cells, header has " +
                                                     std::to_string(header.size()));
        }
        if (has_id) t.labels.push_back(trim(row.front()));
        for (std::size_t c = first; c < row.size(); ++c) {
            t.values(static_cast<Eigen::Index>(r - 1), static_cast<Eigen::Index>(c - first)) =
                number(row[c], path, r, c);
        }
    }
    return t;
}

CurveTable read_long(const fs::path& path, const std::vector<std::vector<std::string>>& rows) {
    if (rows.front().size() != 3) {
        throw Error(ErrorCode::ParseError, path.string() + ": long layout needs columns id,t,value");
    }
    std::vector<std::string> order;
    std::unordered_map<std::string, std::map<double, double>> samples;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& row = rows[r];
        if (row.size() != 3) {
            throw Error(ErrorCode::GridMismatch, path.string() + ": row " + std::to_string(r + 1) +
                                                     " does not have 3 cells");
        }
        const std::string id = trim(row[0]);
        const double t = number(row[1], path, r, 1);
        const double v = number(row[2], path, r, 2);
        auto [it, fresh] = samples.try_emplace(id);
        if (fresh) order.push_back(id);
        if (!it->second.emplace(t, v).second) {
            throw Error(ErrorCode::GridMismatch, where(path, r, 1) + ": duplicate time for id '" + id + "'");
        }
    }
    if (order.empty()) throw Error(ErrorCode::ParseError, path.string() + ": no data rows");
    CurveTable out;
    for (const auto& [t, v] : samples[order.front()]) out.grid.push_back(t);
    out.values.resize(static_cast<Eigen::Index>(order.size()), static_cast<Eigen::Index>(out.grid.size()));
    for (std::size_t i = 0; i < order.size(); ++i) {
        const auto& s = samples[order[i]];
        if (s.size() != out.grid.size()) {
            throw Error(ErrorCode::GridMismatch, path.string() + ": id '" + order[i] + "' has " +
                                                     std::to_string(s.size()) + " time points, expected " +
                                                     std::to_string(out.grid.size()));
        }
        Eigen::Index j = 0;
        for (const auto& [t, v] : s) {
            if (t != out.grid[static_cast<std::size_t>(j)]) {
                throw Error(ErrorCode::GridMismatch, path.string() + ": id '" + order[i] + "' is on a different grid");
            }
            out.values(static_cast<Eigen::Index>(i), j++) = v;
        }
    }
    out.labels = order;
    return out;
}

}  // namespace

CurveTable read_curves(const fs::path& path, Layout layout) {
    const auto rows = read_csv(path);
    if (rows.size() < 2) throw Error(ErrorCode::ParseError, path.string() + ": no data rows");
    CurveTable t = layout == Layout::Wide ? read_wide(path, rows) : read_long(path, rows);
    require_unique(t.labels, path);
    return t;
}

ResponseTable read_response(const fs::path& path) {
    const auto rows = read_csv(path);
    if (rows.size() < 2) throw Error(ErrorCode::ParseError, path.string() + ": no data rows");
    const auto& header = rows.front();
    if (header.size() != 1 && header.size() != 2) {
        throw Error(ErrorCode::ParseError, path.string() + ": response file needs columns id,y or y");
    }
    const bool has_id = header.size() == 2;
    ResponseTable t;
    t.y.resize(static_cast<Eigen::Index>(rows.size() - 1));
    for (std::size_t r = 1; r < rows.size(); ++r) {
        if (rows[r].size() != header.size()) {
            throw Error(ErrorCode::ParseError, path.string() + ": row " + std::to_string(r + 1) +
                                                   " has the wrong number of cells");
        }
        if (has_id) t.labels.push_back(trim(rows[r][0]));
        t.y[static_cast<Eigen::Index>(r - 1)] = number(rows[r].back(), path, r, header.size() - 1);
    }
    require_unique(t.labels, path);
    return t;
}

namespace {

// Row positions of `want` inside `have`.
std::vector<Eigen::Index> join(const std::vector<std::string>& want, const std::vector<std::string>& have,
                               const fs::path& path) {
    std::unordered_map<std::string, Eigen::Index> pos;
    for (std::size_t i = 0; i < have.size(); ++i) pos.emplace(have[i], static_cast<Eigen::Index>(i));
    std::vector<Eigen::Index> out;
    for (const std::string& l : want) {
        const auto it = pos.find(l);
        if (it == pos.end()) throw Error(ErrorCode::JoinError, path.string() + ": no entry for id '" + l + "'");
        out.push_back(it->second);
    }
    return out;
}

}  // namespace

FunctionalDataset load_dataset(std::span<const fs::path> curve_paths, const fs::path& response_path,
                               Layout layout) {
    if (curve_paths.empty()) throw Error(ErrorCode::InvalidParam, "no curve files given");
    FunctionalDataset data;
    const CurveTable first = read_curves(curve_paths.front(), layout);
    data.grid = first.grid;
    data.labels = first.labels;
    data.curves.push_back(first.values);
    const auto n = first.values.rows();

    for (std::size_t p = 1; p < curve_paths.size(); ++p) {
        const CurveTable t = read_curves(curve_paths[p], layout);
        if (t.grid != data.grid) {
            throw Error(ErrorCode::GridMismatch, curve_paths[p].string() + ": grid differs from " +
                                                     curve_paths.front().string());
        }
        if (!data.labels.empty() && !t.labels.empty()) {
            if (t.values.rows() != n) {
                throw Error(ErrorCode::JoinError, curve_paths[p].string() + ": sample count differs");
            }
            const auto idx = join(data.labels, t.labels, curve_paths[p]);
            Matrix w(n, t.values.cols());
            for (Eigen::Index i = 0; i < n; ++i) w.row(i) = t.values.row(idx[static_cast<std::size_t>(i)]);
            data.curves.push_back(std::move(w));
        } else {
            if (t.values.rows() != n) {
                throw Error(ErrorCode::JoinError, curve_paths[p].string() + ": sample count differs");
            }
            data.curves.push_back(t.values);
        }
    }

    const ResponseTable resp = read_response(response_path);
    if (!data.labels.empty() && !resp.labels.empty()) {
        const auto idx = join(data.labels, resp.labels, response_path);
        data.response.resize(n);
        for (Eigen::Index i = 0; i < n; ++i) data.response[i] = resp.y[idx[static_cast<std::size_t>(i)]];
    } else {
        if (resp.y.size() != n) {
            throw Error(ErrorCode::JoinError, response_path.string() + ": has " + std::to_string(resp.y.size()) +
                                                  " responses for " + std::to_string(n) + " curves");
        }
        data.response = resp.y;
        if (data.labels.empty()) data.labels = resp.labels;
    }
    data.validate();
    return data;
}

FunctionalDataset load_dataset(const fs::path& curve_path, const fs::path& response_path, Layout layout) {
    return load_dataset(std::span<const fs::path>(&curve_path, 1), response_path, layout);
}

namespace {

std::string label_of(const FunctionalDataset& data, Eigen::Index i) {
    return data.labels.empty() ? std::to_string(i + 1) : data.labels[static_cast<std::size_t>(i)];
}

}  // namespace

void write_curves(const FunctionalDataset& data, Eigen::Index predictor, const fs::path& path, Layout layout) {
    std::ofstream out = open_out(path);
    const Matrix& w = data.curves.at(static_cast<std::size_t>(predictor));
    if (layout == Layout::Wide) {
        out << "id";
        for (double t : data.grid) out << ',' << format_double(t);
        out << '\n';
        for (Eigen::Index i = 0; i < w.rows(); ++i) {
            out << csv_field(label_of(data, i));
            for (Eigen::Index j = 0; j < w.cols(); ++j) out << ',' << format_double(w(i, j));
            out << '\n';
        }
    } else {
        out << "id,t,value\n";
        for (Eigen::Index i = 0; i < w.rows(); ++i) {
            const std::string id = csv_field(label_of(data, i));
            for (Eigen::Index j = 0; j < w.cols(); ++j) {
                out << id << ',' << format_double(data.grid[static_cast<std::size_t>(j)]) << ','
                    << format_double(w(i, j)) << '\n';
            }
        }
    }
    close_out(out, path);
}

void write_response(const FunctionalDataset& data, const fs::path& path) {
    std::ofstream out = open_out(path);
    out << "id,y\n";
    for (Eigen::Index i = 0; i < data.response.size(); ++i) {
        out << csv_field(label_of(data, i)) << ',' << format_double(data.response[i]) << '\n';
    }
    close_out(out, path);
}

void save_dataset(const FunctionalDataset& data, std::span<const fs::path> curve_paths,
                  const fs::path& response_path) {
    if (static_cast<Eigen::Index>(curve_paths.size()) != data.predictor_count()) {
        throw Error(ErrorCode::DimensionError, "need one curve path per predictor");
    }
    for (std::size_t p = 0; p < curve_paths.size(); ++p) {
        write_curves(data, static_cast<Eigen::Index>(p), curve_paths[p]);
    }
    write_response(data, response_path);
}

SplitSpec parse_split(std::string_view text, std::uint64_t seed) {
    SplitSpec spec;
    spec.seed = seed;
    const std::string s = trim(text);
    auto as_size = [&](const std::string& part) {
        const auto v = try_number(part);
        if (!v || *v < 1 || std::floor(*v) != *v) {
            throw Error(ErrorCode::InvalidSplit, "bad split size '" + part + "' in '" + s + "'");
        }
        return static_cast<Eigen::Index>(*v);
    };
    if (const auto slash = s.find('/'); slash != std::string::npos) {
        spec.train_size = as_size(s.substr(0, slash));
        spec.test_size = as_size(s.substr(slash + 1));
        return spec;
    }
    const auto v = try_number(s);
    if (!v) throw Error(ErrorCode::InvalidSplit, "bad split '" + s + "'");
    if (*v > 0.0 && *v < 1.0) {
        spec.train_fraction = *v;
    } else {
        spec.train_size = as_size(s);
    }
    return spec;
}

namespace {

// Unbiased draw from [0, bound) by rejection.
std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t bound) {
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t x;
    do {
        x = rng();
    } while (x >= limit);
    return x % bound;
}

void check_indices(const std::vector<Eigen::Index>& idx, Eigen::Index n, std::set<Eigen::Index>& seen) {
    for (Eigen::Index i : idx) {
        if (i < 0 || i >= n) throw Error(ErrorCode::InvalidSplit, "index " + std::to_string(i) + " out of range");
        if (!seen.insert(i).second) {
            throw Error(ErrorCode::InvalidSplit, "index " + std::to_string(i) + " appears twice");
        }
    }
}

}  // namespace

SplitIndices split_indices(Eigen::Index n, const SplitSpec& spec) {
    SplitIndices out;
    if (!spec.train_indices.empty() || !spec.test_indices.empty()) {
        std::set<Eigen::Index> seen;
        check_indices(spec.train_indices, n, seen);
        check_indices(spec.test_indices, n, seen);
        out.train = spec.train_indices;
        out.test = spec.test_indices;
    } else {
        Eigen::Index n_train = 0;
        if (spec.train_size) {
            n_train = *spec.train_size;
        } else if (spec.train_fraction) {
            const double f = *spec.train_fraction;
            if (!(f > 0.0 && f < 1.0)) throw Error(ErrorCode::InvalidSplit, "train fraction must lie in (0, 1)");
            n_train = static_cast<Eigen::Index>(std::llround(f * static_cast<double>(n)));
        } else {
            throw Error(ErrorCode::InvalidSplit, "split needs a fraction, a size or explicit indices");
        }
        const Eigen::Index n_test = spec.test_size.value_or(n - n_train);
        if (n_train < 0 || n_test < 0 || n_train + n_test > n) {
            throw Error(ErrorCode::InvalidSplit, "split sizes exceed the sample count " + std::to_string(n));
        }
        std::vector<Eigen::Index> perm(static_cast<std::size_t>(n));
        for (Eigen::Index i = 0; i < n; ++i) perm[static_cast<std::size_t>(i)] = i;
        if (spec.shuffle) {
            std::mt19937_64 rng(spec.seed);
            for (std::size_t i = perm.size(); i > 1; --i) {
                std::swap(perm[i - 1], perm[bounded(rng, i)]);
            }
        }
        out.train.assign(perm.begin(), perm.begin() + n_train);
        out.test.assign(perm.begin() + n_train, perm.begin() + n_train + n_test);
    }
    if (out.train.size() < 2) throw Error(ErrorCode::InvalidSplit, "training split needs at least two samples");
    if (out.test.empty()) throw Error(ErrorCode::InvalidSplit, "test split is empty");
    std::sort(out.train.begin(), out.train.end());
    std::sort(out.test.begin(), out.test.end());
    return out;
}

Split split(const FunctionalDataset& data, const SplitSpec& spec) {
    Split out;
    out.indices = split_indices(data.sample_count(), spec);
    out.train = data.subset(out.indices.train);
    out.test = data.subset(out.indices.test);
    return out;
}

void write_text(const fs::path& path, std::string_view text) {
    std::ofstream out = open_out(path);
    out << text;
    close_out(out, path);
}

void write_trace(const std::vector<TraceRecord>& trace, const fs::path& path) {
    std::ofstream out = open_out(path);
    out << "iteration,stage,lambda,d,alpha,score\n";
    auto opt = [](const std::optional<double>& v) { return v ? format_double(*v) : std::string(); };
    for (const TraceRecord& r : trace) {
        out << r.iteration << ',' << r.stage << ',' << opt(r.params.lambda) << ',' << opt(r.params.d) << ','
            << opt(r.params.alpha) << ',' << format_double(r.score) << '\n';
    }
    close_out(out, path);
}

void write_risk_table(const std::vector<risk::RiskRow>& rows, const fs::path& path) {
    std::ofstream out = open_out(path);
    out << "d,g_closed_form,g_mc,mc_stderr\n";
    for (const risk::RiskRow& r : rows) {
        out << format_double(r.d) << ',' << format_double(r.g) << ',' << format_double(r.mc) << ','
            << format_double(r.stderr_) << '\n';
    }
    close_out(out, path);
}

std::vector<fs::path> export_report(const FitReport& report, const fs::path& dir, std::string_view stem) {
    const std::string s(stem);
    std::vector<fs::path> written;

    std::ostringstream kv;
    auto put = [&](std::string_view key, const std::string& value) { kv << key << " = " << value << '\n'; };
    put("method", std::string(to_string(report.method)));
    if (report.params.lambda) put("lambda", format_double(*report.params.lambda));
    if (report.params.d) put("d", format_double(*report.params.d));
    if (report.params.alpha) put("alpha", format_double(*report.params.alpha));
    if (report.criterion) put("criterion", std::string(to_string(*report.criterion)));
    put("gcv", format_double(report.gcv));
    put("press", format_double(report.press));
    put("training_loss", format_double(report.training_loss));
    if (report.testing_loss) put("testing_loss", format_double(*report.testing_loss));
    put("n_train", std::to_string(report.n_train));
    put("n_test", std::to_string(report.n_test));
    put("effective_dof", format_double(report.effective_dof));
    put("cond_design", format_double(report.cond_design));
    put("cond_train", format_double(report.cond_train));
    put("degenerate", report.degenerate ? "true" : "false");
    if (report.plug_in) {
        put("plugin_c1", format_double(report.plug_in->c1));
        put("plugin_c2", format_double(report.plug_in->c2));
        put("plugin_c3", format_double(report.plug_in->c3));
        put("d_plug", format_double(report.plug_in->d_plug));
        put("d_proj", format_double(report.plug_in->d_proj));
    }
    written.push_back(dir / (s + ".txt"));
    write_text(written.back(), kv.str());

    {
        written.push_back(dir / (s + "_coef.csv"));
        std::ofstream out = open_out(written.back());
        out << "index,coef\n";
        for (Eigen::Index i = 0; i < report.coef.size(); ++i) out << i << ',' << format_double(report.coef[i]) << '\n';
        close_out(out, written.back());
    }
    {
        written.push_back(dir / (s + "_residuals.csv"));
        std::ofstream out = open_out(written.back());
        out << "index,residual\n";
        for (Eigen::Index i = 0; i < report.residuals.size(); ++i) {
            out << i << ',' << format_double(report.residuals[i]) << '\n';
        }
        close_out(out, written.back());
    }
    {
        written.push_back(dir / (s + "_beta.csv"));
        std::ofstream out = open_out(written.back());
        out << "predictor,s,beta\n";
        for (const CoefficientSamples& b : report.beta) {
            for (std::size_t i = 0; i < b.grid.size(); ++i) {
                out << b.predictor << ',' << format_double(b.grid[i]) << ',' << format_double(b.values[i]) << '\n';
            }
        }
        close_out(out, written.back());
    }
    if (!report.trace.empty()) {
        written.push_back(dir / (s + "_trace.csv"));
        write_trace(report.trace, written.back());
    }
    if (!report.risk.empty()) {
        written.push_back(dir / (s + "_risk.csv"));
        write_risk_table(report.risk, written.back());
    }
    return written;
}

namespace {

double parse_value(const std::string& v, const fs::path& path) {
    const std::string t = lower(trim(v));
    if (t == "nan") return kNan;
    if (t == "inf") return std::numeric_limits<double>::infinity();
    if (t == "-inf") return -std::numeric_limits<double>::infinity();
    const auto x = try_number(t);
    if (!x) throw Error(ErrorCode::ParseError, path.string() + ": bad number '" + v + "'");
    return *x;
}

std::string_view stage_name(const std::string& s) {
    if (s == "grid") return "grid";
    if (s == "refine") return "refine";
    return "final";
}

}  // namespace

FitReport load_report(const fs::path& dir, std::string_view stem) {
    const std::string s(stem);
    const fs::path main = dir / (s + ".txt");
    std::ifstream in(main);
    if (!in) throw Error(ErrorCode::IoError, "cannot open " + main.string());
    std::map<std::string, std::string> kv;
    std::string line;
    while (std::getline(in, line)) {
        const auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
    auto num = [&](const std::string& key) -> std::optional<double> {
        const auto it = kv.find(key);
        if (it == kv.end()) return std::nullopt;
        return parse_value(it->second, main);
    };

    FitReport r;
    if (!kv.count("method")) throw Error(ErrorCode::ParseError, main.string() + ": no method");
    r.method = parse_method(kv["method"]);
    r.params.lambda = num("lambda");
    r.params.d = num("d");
    r.params.alpha = num("alpha");
    if (kv.count("criterion")) r.criterion = parse_criterion(kv["criterion"]);
    r.gcv = num("gcv").value_or(kNan);
    r.press = num("press").value_or(kNan);
    r.training_loss = num("training_loss").value_or(kNan);
    r.testing_loss = num("testing_loss");
    r.n_train = static_cast<Eigen::Index>(num("n_train").value_or(0));
    r.n_test = static_cast<Eigen::Index>(num("n_test").value_or(0));
    r.effective_dof = num("effective_dof").value_or(kNan);
    r.cond_design = num("cond_design").value_or(kNan);
    r.cond_train = num("cond_train").value_or(kNan);
    r.degenerate = kv["degenerate"] == "true";
    if (kv.count("d_plug")) {
        r.plug_in = PlugIn{*num("plugin_c1"), *num("plugin_c2"), *num("plugin_c3"), *num("d_plug"), *num("d_proj")};
    }

    auto table = [&](const std::string& suffix) {
        const fs::path p = dir / (s + suffix);
        if (!fs::exists(p)) return std::vector<std::vector<std::string>>{};
        auto rows = read_csv(p);
        if (!rows.empty()) rows.erase(rows.begin());
        return rows;
    };
    const auto coef = table("_coef.csv");
    r.coef.resize(static_cast<Eigen::Index>(coef.size()));
    for (std::size_t i = 0; i < coef.size(); ++i) r.coef[static_cast<Eigen::Index>(i)] = parse_value(coef[i].at(1), main);
    const auto resid = table("_residuals.csv");
    r.residuals.resize(static_cast<Eigen::Index>(resid.size()));
    for (std::size_t i = 0; i < resid.size(); ++i) {
        r.residuals[static_cast<Eigen::Index>(i)] = parse_value(resid[i].at(1), main);
    }
    for (const auto& row : table("_beta.csv")) {
        const auto p = static_cast<std::size_t>(parse_value(row.at(0), main));
        if (r.beta.empty() || r.beta.back().predictor != p) r.beta.push_back({p, {}, {}});
        r.beta.back().grid.push_back(parse_value(row.at(1), main));
        r.beta.back().values.push_back(parse_value(row.at(2), main));
    }
    for (const auto& row : table("_trace.csv")) {
        TraceRecord t;
        t.iteration = static_cast<int>(parse_value(row.at(0), main));
        t.stage = stage_name(row.at(1));
        if (!trim(row.at(2)).empty()) t.params.lambda = parse_value(row[2], main);
        if (!trim(row.at(3)).empty()) t.params.d = parse_value(row[3], main);
        if (!trim(row.at(4)).empty()) t.params.alpha = parse_value(row[4], main);
        t.score = parse_value(row.at(5), main);
        r.trace.push_back(t);
    }
    for (const auto& row : table("_risk.csv")) {
        r.risk.push_back({parse_value(row.at(0), main), parse_value(row.at(1), main), parse_value(row.at(2), main),
                          parse_value(row.at(3), main)});
    }
    return r;
}

}  // namespace fliu::dataio
