#include "fliu/basis.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <sstream>

#include "fliu/error.hpp"

namespace fliu {

void FunctionalDataset::validate() const {
    if (grid.size() < 2) {
        throw Error(ErrorCode::GridMismatch, "grid needs at least two points");
    }
    for (std::size_t i = 1; i < grid.size(); ++i) {
        if (!(grid[i] > grid[i - 1])) {
            throw Error(ErrorCode::GridMismatch, "grid is not strictly increasing");
        }
    }
    if (curves.empty()) {
        throw Error(ErrorCode::DimensionError, "dataset has no predictors");
    }
    const Eigen::Index n = response.size();
    if (n < 2) {
        throw Error(ErrorCode::DimensionError, "dataset needs at least two samples");
    }
    for (const Matrix& w : curves) {
        if (w.rows() != n) {
            throw Error(ErrorCode::DimensionError, "curve rows do not match response length");
        }
        if (w.cols() != grid_size()) {
            throw Error(ErrorCode::GridMismatch, "curve columns do not match the grid");
        }
        numerics::require_finite(w, "curves");
    }
    numerics::require_finite(response, "response");
    if (!labels.empty() && static_cast<Eigen::Index>(labels.size()) != n) {
        throw Error(ErrorCode::DimensionError, "label count does not match sample count");
    }
}

FunctionalDataset FunctionalDataset::subset(std::span<const Eigen::Index> rows) const {
    FunctionalDataset out;
    out.grid = grid;
    const auto k = static_cast<Eigen::Index>(rows.size());
    out.response.resize(k);
    for (const Matrix& w : curves) {
        Matrix part(k, w.cols());
        for (Eigen::Index i = 0; i < k; ++i) part.row(i) = w.row(rows[i]);
        out.curves.push_back(std::move(part));
    }
    for (Eigen::Index i = 0; i < k; ++i) {
        out.response[i] = response[rows[i]];
        if (!labels.empty()) out.labels.push_back(labels[static_cast<std::size_t>(rows[i])]);
    }
    return out;
}

double BasisSpec::frequency(Eigen::Index k) const {
    return 2.0 * std::numbers::pi * static_cast<double>(k) / period_;
}

double BasisSpec::domain_lo() const {
    return kind_ == BasisKind::Fourier ? 0.0 : breakpoints_.front();
}

double BasisSpec::domain_hi() const {
    return kind_ == BasisKind::Fourier ? period_ : breakpoints_.back();
}

BasisSpec build_fourier_basis(Eigen::Index count, double period) {
    if (count < 3 || count % 2 == 0) {
        throw Error(ErrorCode::InvalidBasis,
                    "Fourier basis size must be odd and at least 3, got " + std::to_string(count));
    }
    if (!(period > 0.0) || !std::isfinite(period)) {
        throw Error(ErrorCode::InvalidBasis, "Fourier period must be positive");
    }
    BasisSpec b;
    b.kind_ = BasisKind::Fourier;
    b.size_ = count;
    b.period_ = period;
    return b;
}

BasisSpec build_bspline_basis(std::vector<double> breakpoints, int order) {
    if (order < 1) {
        throw Error(ErrorCode::InvalidBasis, "B-spline order must be positive");
    }
    if (breakpoints.size() < 2) {
        throw Error(ErrorCode::InvalidBasis, "B-spline needs at least two breakpoints");
    }
    for (std::size_t i = 1; i < breakpoints.size(); ++i) {
        if (!(breakpoints[i] > breakpoints[i - 1])) {
            throw Error(ErrorCode::InvalidBasis, "B-spline breakpoints must be strictly increasing");
        }
    }
    BasisSpec b;
    b.kind_ = BasisKind::BSpline;
    b.order_ = order;
    b.breakpoints_ = std::move(breakpoints);
    const auto& bp = b.breakpoints_;
    b.knots_.assign(static_cast<std::size_t>(order), bp.front());
    b.knots_.insert(b.knots_.end(), bp.begin() + 1, bp.end() - 1);
    b.knots_.insert(b.knots_.end(), static_cast<std::size_t>(order), bp.back());
    b.size_ = static_cast<Eigen::Index>(bp.size()) - 2 + order;
    return b;
}

BasisSpec build_bspline_basis(double lo, double hi, Eigen::Index count, int order) {
    if (!(hi > lo)) {
        throw Error(ErrorCode::InvalidBasis, "B-spline domain is empty");
    }
    const Eigen::Index interior = count - order;
    if (interior < 0) {
        throw Error(ErrorCode::InvalidBasis, "B-spline size must be at least the order");
    }
    std::vector<double> bp(static_cast<std::size_t>(interior + 2));
    for (Eigen::Index i = 0; i <= interior + 1; ++i) {
        bp[static_cast<std::size_t>(i)] =
            lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(interior + 1);
    }
    bp.back() = hi;
    return build_bspline_basis(std::move(bp), order);
}

namespace {

// Nonzero B-spline values and derivatives at x (Piegl & Tiller A2.3).
// ders(k, j) holds the k-th derivative of basis function span - degree + j.
Matrix bspline_derivs(const std::vector<double>& u, int degree, Eigen::Index span, double x,
                      int nderiv) {
    const int p = degree;
    const auto i = static_cast<std::size_t>(span);
    Matrix ndu(p + 1, p + 1);
    std::vector<double> left(static_cast<std::size_t>(p + 1));
    std::vector<double> right(static_cast<std::size_t>(p + 1));
    ndu(0, 0) = 1.0;
    for (int j = 1; j <= p; ++j) {
        left[j] = x - u[i + 1 - j];
        right[j] = u[i + j] - x;
        double saved = 0.0;
        for (int r = 0; r < j; ++r) {
            ndu(j, r) = right[r + 1] + left[j - r];
            const double temp = ndu(r, j - 1) / ndu(j, r);
            ndu(r, j) = saved + right[r + 1] * temp;
            saved = left[j - r] * temp;
        }
        ndu(j, j) = saved;
    }
    Matrix ders = Matrix::Zero(nderiv + 1, p + 1);
    for (int j = 0; j <= p; ++j) ders(0, j) = ndu(j, p);
    const int n = std::min(nderiv, p);
    Matrix a(2, p + 1);
    for (int r = 0; r <= p; ++r) {
        int s1 = 0;
        int s2 = 1;
        a(0, 0) = 1.0;
        for (int k = 1; k <= n; ++k) {
            double d = 0.0;
            const int rk = r - k;
            const int pk = p - k;
            if (r >= k) {
                a(s2, 0) = a(s1, 0) / ndu(pk + 1, rk);
                d = a(s2, 0) * ndu(rk, pk);
            }
            const int j1 = rk >= -1 ? 1 : -rk;
            const int j2 = (r - 1 <= pk) ? k - 1 : p - r;
            for (int j = j1; j <= j2; ++j) {
                a(s2, j) = (a(s1, j) - a(s1, j - 1)) / ndu(pk + 1, rk + j);
                d += a(s2, j) * ndu(rk + j, pk);
            }
            if (r <= pk) {
                a(s2, k) = -a(s1, k - 1) / ndu(pk + 1, r);
                d += a(s2, k) * ndu(r, pk);
            }
            ders(k, r) = d;
            std::swap(s1, s2);
        }
    }
    double factor = p;
    for (int k = 1; k <= n; ++k) {
        ders.row(k) *= factor;
        factor *= (p - k);
    }
    return ders;
}

Eigen::Index find_span(const BasisSpec& basis, double x) {
    const auto& u = basis.knots();
    const Eigen::Index last = basis.size() - 1;
    if (x >= u[static_cast<std::size_t>(last + 1)]) return last;
    const auto it = std::upper_bound(u.begin(), u.end(), x);
    auto span = static_cast<Eigen::Index>(it - u.begin()) - 1;
    return std::clamp<Eigen::Index>(span, basis.order() - 1, last);
}

void eval_bspline_row(const BasisSpec& basis, double x, int derivative, Eigen::Ref<Eigen::RowVectorXd, 0, Eigen::InnerStride<>> row) {
    const int degree = basis.order() - 1;
    const Eigen::Index span = find_span(basis, x);
    const Matrix ders = bspline_derivs(basis.knots(), degree, span, x, derivative);
    row.setZero();
    for (int j = 0; j <= degree; ++j) {
        row[span - degree + j] = ders(derivative, j);
    }
}

constexpr std::array<double, 5> kGaussNodes = {
    -0.9061798459386640, -0.5384693101056831, 0.0, 0.5384693101056831, 0.9061798459386640};
constexpr std::array<double, 5> kGaussWeights = {
    0.2369268850561891, 0.4786286704993665, 0.5688888888888889, 0.4786286704993665,
    0.2369268850561891};

Matrix scale_penalty(Matrix r, PenaltyScaling scaling) {
    if (scaling == PenaltyScaling::None) return r;
    const double norm = numerics::spectral_norm(r);
    if (norm == 0.0) return r;
    if (scaling == PenaltyScaling::Normalize || norm > 1.0) r /= norm;
    return r;
}

}  // namespace

Matrix eval_basis(const BasisSpec& basis, std::span<const double> grid, int derivative) {
    if (derivative < 0) {
        throw Error(ErrorCode::InvalidParam, "derivative order must be nonnegative");
    }
    const auto t = static_cast<Eigen::Index>(grid.size());
    Matrix out(t, basis.size());
    if (basis.kind() == BasisKind::Fourier) {
        const double period = basis.period();
        const double c0 = 1.0 / std::sqrt(period);
        const double c1 = std::sqrt(2.0 / period);
        const double shift = derivative * std::numbers::pi / 2.0;
        for (Eigen::Index i = 0; i < t; ++i) {
            const double s = grid[static_cast<std::size_t>(i)];
            out(i, 0) = derivative == 0 ? c0 : 0.0;
            for (Eigen::Index k = 1; k <= basis.harmonics(); ++k) {
                const double w = basis.frequency(k);
                const double amp = c1 * std::pow(w, derivative);
                out(i, 2 * k - 1) = amp * std::sin(w * s + shift);
                out(i, 2 * k) = amp * std::cos(w * s + shift);
            }
        }
        return out;
    }
    const double lo = basis.domain_lo();
    const double hi = basis.domain_hi();
    const double slack = 1e-12 * std::max(1.0, hi - lo);
    for (Eigen::Index i = 0; i < t; ++i) {
        double s = grid[static_cast<std::size_t>(i)];
        if (s < lo - slack || s > hi + slack) {
            std::ostringstream msg;
            msg << "grid point " << s << " outside B-spline domain [" << lo << ", " << hi << "]";
            throw Error(ErrorCode::DomainError, msg.str());
        }
        s = std::clamp(s, lo, hi);
        eval_bspline_row(basis, s, derivative, out.row(i));
    }
    return out;
}

Vector trapezoid_weights(std::span<const double> grid) {
    const auto t = static_cast<Eigen::Index>(grid.size());
    Vector w = Vector::Zero(t);
    for (Eigen::Index i = 0; i + 1 < t; ++i) {
        const double h = grid[static_cast<std::size_t>(i + 1)] - grid[static_cast<std::size_t>(i)];
        w[i] += h / 2.0;
        w[i + 1] += h / 2.0;
    }
    return w;
}

Matrix basis_gram(const BasisSpec& basis, int derivative) {
    const Eigen::Index k = basis.size();
    if (basis.kind() == BasisKind::Fourier) {
        Vector diag(k);
        diag[0] = derivative == 0 ? 1.0 : 0.0;
        for (Eigen::Index h = 1; h <= basis.harmonics(); ++h) {
            const double v = std::pow(basis.frequency(h), 2 * derivative);
            diag[2 * h - 1] = v;
            diag[2 * h] = v;
        }
        return diag.asDiagonal();
    }
    Matrix gram = Matrix::Zero(k, k);
    const auto& bp = basis.breakpoints();
    Eigen::RowVectorXd row(k);
    for (std::size_t s = 0; s + 1 < bp.size(); ++s) {
        const double a = bp[s];
        const double b = bp[s + 1];
        const double half = (b - a) / 2.0;
        const double mid = (a + b) / 2.0;
        for (std::size_t q = 0; q < kGaussNodes.size(); ++q) {
            eval_bspline_row(basis, mid + half * kGaussNodes[q], derivative, row);
            gram.noalias() += (kGaussWeights[q] * half) * row.transpose() * row;
        }
    }
    return gram;
}

Matrix curve_scores(const FunctionalDataset& data, const BasisSpec& basis, Eigen::Index predictor) {
    if (predictor < 0 || predictor >= data.predictor_count()) {
        throw Error(ErrorCode::DimensionError, "predictor index out of range");
    }
    if (data.grid_size() < basis.size()) {
        throw Error(ErrorCode::UnderdeterminedCurveFit,
                    "grid has " + std::to_string(data.grid_size()) + " points but the basis has " +
                        std::to_string(basis.size()) + " members");
    }
    const Matrix phi = eval_basis(basis, data.grid);
    const Matrix& w = data.curves[static_cast<std::size_t>(predictor)];
    return w * numerics::pinv(phi).transpose();
}

Matrix fourier_penalty(const BasisSpec& basis, PenaltyScaling scaling) {
    if (basis.kind() != BasisKind::Fourier) {
        throw Error(ErrorCode::BasisKindError, "Fourier penalty needs a Fourier basis");
    }
    Vector diag(basis.size());
    diag[0] = 0.0;
    for (Eigen::Index h = 1; h <= basis.harmonics(); ++h) {
        const double w = basis.frequency(h);
        diag[2 * h - 1] = w * w;
        diag[2 * h] = w * w;
    }
    return scale_penalty(diag.asDiagonal(), scaling);
}

Matrix bspline_penalty(const BasisSpec& basis, PenaltyMode mode, PenaltyScaling scaling) {
    if (basis.kind() != BasisKind::BSpline) {
        throw Error(ErrorCode::BasisKindError, "spline penalty needs a B-spline basis");
    }
    const Eigen::Index k = basis.size();
    switch (mode) {
        case PenaltyMode::Curvature: {
            if (basis.order() < 3) {
                throw Error(ErrorCode::InvalidBasis, "curvature penalty needs order >= 3");
            }
            Matrix r = basis_gram(basis, 2);
            r = (r + r.transpose()) / 2.0;
            return scale_penalty(std::move(r), scaling);
        }
        case PenaltyMode::SecondDifference: {
            if (k < 3) {
                throw Error(ErrorCode::InvalidBasis, "second-difference penalty needs K >= 3");
            }
            Matrix d2 = Matrix::Zero(k - 2, k);
            for (Eigen::Index i = 0; i < k - 2; ++i) {
                d2(i, i) = 1.0;
                d2(i, i + 1) = -2.0;
                d2(i, i + 2) = 1.0;
            }
            return scale_penalty(d2.transpose() * d2, scaling);
        }
        case PenaltyMode::Fourier:
            break;
    }
    throw Error(ErrorCode::BasisKindError, "Fourier penalty mode needs a Fourier basis");
}

Matrix roughness_penalty(const BasisSpec& basis, PenaltyMode mode) {
    if (basis.kind() == BasisKind::Fourier) {
        if (mode == PenaltyMode::SecondDifference) {
            throw Error(ErrorCode::BasisKindError, "second-difference penalty needs a B-spline basis");
        }
        return fourier_penalty(basis);
    }
    return bspline_penalty(basis, mode);
}

DesignBundle DesignBundle::rows(std::span<const Eigen::Index> idx) const {
    Matrix sub(static_cast<Eigen::Index>(idx.size()), z.cols());
    for (std::size_t i = 0; i < idx.size(); ++i) sub.row(static_cast<Eigen::Index>(i)) = z.row(idx[i]);
    return make_bundle(std::move(sub), r, bases, quadrature);
}

DesignBundle make_bundle(Matrix z, Matrix r, std::vector<BasisSpec> bases, std::string quadrature) {
    numerics::require_finite(z, "score design");
    numerics::require_finite(r, "penalty");
    if (r.rows() != z.cols() || r.cols() != z.cols()) {
        throw Error(ErrorCode::DimensionError, "penalty must be m x m for an n x m design");
    }
    if (!numerics::is_symmetric(r)) {
        throw Error(ErrorCode::DimensionError, "penalty is not symmetric");
    }
    DesignBundle out;
    out.r = scale_penalty(std::move(r), PenaltyScaling::Contract);
    const Eigen::Index n = z.rows();
    const Eigen::Index m = z.cols();
    out.z_aug.resize(n, m + 1);
    out.z_aug.col(0).setOnes();
    out.z_aug.rightCols(m) = z;
    out.z = std::move(z);
    out.r0 = Matrix::Zero(m + 1, m + 1);
    out.r0.bottomRightCorner(m, m) = out.r;
    out.gram = out.z_aug.transpose() * out.z_aug;
    const numerics::SvdFactors f = numerics::svd(out.z_aug);
    const Eigen::Index rank = f.rank();
    out.z_aug_pinv = f.v.leftCols(rank) * f.singular_values.head(rank).cwiseInverse().asDiagonal() *
                     f.u.leftCols(rank).transpose();
    // Exactly zero when the rows are independent.
    out.complement = Matrix::Zero(n, n);
    if (rank < n) out.complement = Matrix::Identity(n, n) - f.u.leftCols(rank) * f.u.leftCols(rank).transpose();
    out.gram_pinv = numerics::pinv(out.gram);
    out.bases = std::move(bases);
    out.quadrature = std::move(quadrature);
    return out;
}

DesignBundle build_design(const FunctionalDataset& data, const std::vector<BasisSpec>& bases,
                          PenaltyMode mode) {
    data.validate();
    if (static_cast<Eigen::Index>(bases.size()) != data.predictor_count()) {
        throw Error(ErrorCode::DimensionError, "need one basis per predictor");
    }
    Eigen::Index m = 0;
    for (const BasisSpec& b : bases) m += b.size();
    Matrix z(data.sample_count(), m);
    Matrix r = Matrix::Zero(m, m);
    bool any_spline = false;
    Eigen::Index offset = 0;
    for (std::size_t j = 0; j < bases.size(); ++j) {
        const BasisSpec& b = bases[j];
        const Eigen::Index k = b.size();
        Matrix scores = curve_scores(data, b, static_cast<Eigen::Index>(j));
        if (!b.orthonormal()) {
            scores = scores * basis_gram(b);
            any_spline = true;
        }
        z.middleCols(offset, k) = scores;
        r.block(offset, offset, k, k) = roughness_penalty(b, mode);
        offset += k;
    }
    std::string quad = any_spline ? "least-squares scores; gauss-legendre-5 gram"
                                  : "least-squares scores";
    return make_bundle(std::move(z), std::move(r), bases, std::move(quad));
}

Vector eval_coefficient_function(const Vector& coef, const BasisSpec& basis,
                                 std::span<const double> grid) {
    if (coef.size() != basis.size()) {
        throw Error(ErrorCode::DimensionError, "coefficient length " + std::to_string(coef.size()) +
                                                   " does not match basis size " +
                                                   std::to_string(basis.size()));
    }
    return eval_basis(basis, grid) * coef;
}

}  // namespace fliu
