#include "fliu/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "fliu/error.hpp"

namespace fliu {

namespace numerics {

void require_finite(const Matrix& m, std::string_view what) {
    if (m.rows() == 0 || m.cols() == 0) {
        throw Error(ErrorCode::DimensionError, std::string(what) + " has an empty dimension");
    }
    if (!m.allFinite()) {
        throw Error(ErrorCode::NonFinite, std::string(what) + " contains NaN or Inf");
    }
}

void require_finite(const Vector& v, std::string_view what) {
    if (v.size() == 0) {
        throw Error(ErrorCode::DimensionError, std::string(what) + " is empty");
    }
    if (!v.allFinite()) {
        throw Error(ErrorCode::NonFinite, std::string(what) + " contains NaN or Inf");
    }
}

double default_rtol(const Matrix& m) {
    return static_cast<double>(std::max(m.rows(), m.cols())) *
           std::numeric_limits<double>::epsilon();
}

Eigen::Index SvdFactors::rank() const {
    Eigen::Index r = 0;
    for (Eigen::Index i = 0; i < singular_values.size(); ++i) {
        if (singular_values[i] > tolerance) ++r;
    }
    return r;
}

SvdFactors svd(const Matrix& m, std::optional<double> rtol) {
    require_finite(m, "svd input");
    const double rel = rtol.value_or(default_rtol(m));
    if (!(rel > 0.0)) {
        throw Error(ErrorCode::InvalidParam, "rank tolerance must be positive");
    }
    Eigen::BDCSVD<Matrix> dec(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    SvdFactors out;
    out.u = dec.matrixU();
    out.singular_values = dec.singularValues();
    out.v = dec.matrixV();
    const double smax = out.singular_values.size() > 0 ? out.singular_values[0] : 0.0;
    out.tolerance = rel * smax;
    return out;
}

Matrix pinv(const Matrix& m, std::optional<double> rtol) {
    const SvdFactors f = svd(m, rtol);
    const Eigen::Index r = f.rank();
    if (r == 0) return Matrix::Zero(m.cols(), m.rows());
    const Vector inv = f.singular_values.head(r).cwiseInverse();
    return f.v.leftCols(r) * inv.asDiagonal() * f.u.leftCols(r).transpose();
}

Eigen::Index numeric_rank(const Matrix& m, std::optional<double> rtol) {
    return svd(m, rtol).rank();
}

bool is_symmetric(const Matrix& m, double tol) {
    if (m.rows() != m.cols()) return false;
    const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    return (m - m.transpose()).cwiseAbs().maxCoeff() <= tol * scale;
}

namespace {

void check_solvable(const Matrix& a) {
    require_finite(a, "system matrix");
    if (!is_symmetric(a)) {
        throw Error(ErrorCode::DimensionError, "system matrix is not symmetric");
    }
    Eigen::SelfAdjointEigenSolver<Matrix> eig(a, Eigen::EigenvaluesOnly);
    const Vector mags = eig.eigenvalues().cwiseAbs();
    const double hi = mags.maxCoeff();
    const double lo = mags.minCoeff();
    if (hi == 0.0 || lo / hi <= 1e-12) {
        std::ostringstream msg;
        msg << "sigma_min/sigma_max = " << (hi == 0.0 ? 0.0 : lo / hi) << " (sigma_min = " << lo
            << ", sigma_max = " << hi << ")";
        throw Error(ErrorCode::SingularSystem, msg.str());
    }
}

template <typename Rhs>
Rhs ldlt_solve(const Matrix& a, const Rhs& b) {
    Eigen::LDLT<Matrix> ldlt(a);
    Rhs x = ldlt.solve(b);
    // one round of iterative refinement
    const Rhs residual = b - a * x;
    x += ldlt.solve(residual);
    return x;
}

}  // namespace

Matrix solve_sym(const Matrix& a, const Matrix& b) {
    check_solvable(a);
    if (b.rows() != a.rows()) {
        throw Error(ErrorCode::DimensionError, "right-hand side row count does not match system");
    }
    return ldlt_solve(a, b);
}

Vector solve_sym(const Matrix& a, const Vector& b) {
    check_solvable(a);
    if (b.size() != a.rows()) {
        throw Error(ErrorCode::DimensionError, "right-hand side length does not match system");
    }
    return ldlt_solve(a, b);
}

double cond2(const Matrix& m) {
    const SvdFactors f = svd(m);
    const Eigen::Index r = f.rank();
    if (r == 0) {
        throw Error(ErrorCode::DegenerateInput, "condition number of a zero matrix");
    }
    return f.singular_values[0] / f.singular_values[r - 1];
}

double spectral_norm(const Matrix& m) {
    require_finite(m, "spectral_norm input");
    Eigen::BDCSVD<Matrix> dec(m);
    return dec.singularValues().size() > 0 ? dec.singularValues()[0] : 0.0;
}

}  // namespace numerics
}  // namespace fliu
