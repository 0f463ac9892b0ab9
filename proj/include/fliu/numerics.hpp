#pragma once

#include <optional>
#include <string_view>

#include <Eigen/Dense>

namespace fliu {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

namespace numerics {

/// Throws ErrorCode::NonFinite when any entry is NaN or infinite, and
/// ErrorCode::DimensionError when the matrix is empty.
void require_finite(const Matrix& m, std::string_view what = "matrix");
void require_finite(const Vector& v, std::string_view what = "vector");

/// max(rows, cols) * machine epsilon.
double default_rtol(const Matrix& m);

struct SvdFactors {
    Matrix u;                 // rows x r, orthonormal columns
    Vector singular_values;   // nonincreasing, nonnegative
    Matrix v;                 // cols x r, orthonormal columns
    double tolerance = 0.0;   // absolute cutoff: rtol * sigma_max

    /// Number of singular values strictly above the cutoff.
    Eigen::Index rank() const;
};

SvdFactors svd(const Matrix& m, std::optional<double> rtol = std::nullopt);

/// Moore-Penrose pseudo-inverse; singular values at or below rtol * sigma_max
/// are treated as zero.
Matrix pinv(const Matrix& m, std::optional<double> rtol = std::nullopt);

Eigen::Index numeric_rank(const Matrix& m, std::optional<double> rtol = std::nullopt);

bool is_symmetric(const Matrix& m, double tol = 1e-10);

/// Solves A X = B for symmetric, numerically nonsingular A without forming
/// the inverse. Throws ErrorCode::SingularSystem when
/// |lambda|_min / |lambda|_max <= 1e-12.
Matrix solve_sym(const Matrix& a, const Matrix& b);
Vector solve_sym(const Matrix& a, const Vector& b);

/// sigma_max / smallest singular value above the pinv cutoff.
double cond2(const Matrix& m);

double spectral_norm(const Matrix& m);

}  // namespace numerics
}  // namespace fliu
