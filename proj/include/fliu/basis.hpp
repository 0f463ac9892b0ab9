#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "fliu/numerics.hpp"

namespace fliu {

/// Curves for p predictors sampled on one shared, strictly increasing grid,
/// plus one scalar response per sample.
struct FunctionalDataset {
    std::vector<double> grid;
    std::vector<Matrix> curves;       // one n x T matrix per predictor
    Vector response;                  // length n
    std::vector<std::string> labels;  // empty or length n

    Eigen::Index sample_count() const { return response.size(); }
    Eigen::Index grid_size() const { return static_cast<Eigen::Index>(grid.size()); }
    Eigen::Index predictor_count() const { return static_cast<Eigen::Index>(curves.size()); }

    /// Throws GridMismatch / DimensionError when the pieces disagree.
    void validate() const;

    /// Row subset in the given order.
    FunctionalDataset subset(std::span<const Eigen::Index> rows) const;
};

enum class BasisKind { Fourier, BSpline };

class BasisSpec {
public:
    BasisKind kind() const { return kind_; }
    Eigen::Index size() const { return size_; }

    // Fourier
    double period() const { return period_; }
    Eigen::Index harmonics() const { return (size_ - 1) / 2; }
    double frequency(Eigen::Index k) const;

    // B-spline
    int order() const { return order_; }
    const std::vector<double>& knots() const { return knots_; }
    const std::vector<double>& breakpoints() const { return breakpoints_; }

    double domain_lo() const;
    double domain_hi() const;

    bool orthonormal() const { return kind_ == BasisKind::Fourier; }

private:
    friend BasisSpec build_fourier_basis(Eigen::Index count, double period);
    friend BasisSpec build_bspline_basis(std::vector<double> breakpoints, int order);

    BasisKind kind_ = BasisKind::Fourier;
    Eigen::Index size_ = 0;
    double period_ = 0.0;
    int order_ = 0;
    std::vector<double> breakpoints_;
    std::vector<double> knots_;
};

/// Constant plus sin/cos pairs, ordered [1, sin w1, cos w1, sin w2, ...] and
/// normalized to be orthonormal on [0, period].
BasisSpec build_fourier_basis(Eigen::Index count, double period);

/// B-splines of the given order (4 = cubic) on strictly increasing breakpoints
/// that include both boundary points; boundary knots are repeated `order`
/// times so size = (breakpoints - 2) + order.
BasisSpec build_bspline_basis(std::vector<double> breakpoints, int order = 4);

/// Uniform breakpoints over [lo, hi] chosen so the basis has `count` members.
BasisSpec build_bspline_basis(double lo, double hi, Eigen::Index count, int order = 4);

/// T x K matrix of basis values (or derivatives) on the grid.
Matrix eval_basis(const BasisSpec& basis, std::span<const double> grid, int derivative = 0);

/// Composite-trapezoid weights for a strictly increasing grid.
Vector trapezoid_weights(std::span<const double> grid);

/// Exact Gram matrix of the basis over its domain. Fourier: identity.
/// B-spline: Gauss-Legendre, 5 nodes per knot span.
Matrix basis_gram(const BasisSpec& basis, int derivative = 0);

/// Least-squares basis coefficients of every curve of one predictor (n x K).
Matrix curve_scores(const FunctionalDataset& data, const BasisSpec& basis, Eigen::Index predictor = 0);

enum class PenaltyMode { Fourier, Curvature, SecondDifference };

enum class PenaltyScaling {
    None,       // raw quadratic form
    Contract,   // divide by the spectral norm only when it exceeds 1
    Normalize,  // divide by the spectral norm unconditionally
};

/// diag(0, w1^2, w1^2, ..., wKbar^2, wKbar^2); Normalize makes the largest entry 1.
Matrix fourier_penalty(const BasisSpec& basis, PenaltyScaling scaling = PenaltyScaling::Normalize);

/// Curvature: Gram of second derivatives. SecondDifference: D2^T D2.
Matrix bspline_penalty(const BasisSpec& basis, PenaltyMode mode,
                       PenaltyScaling scaling = PenaltyScaling::Contract);

/// Penalty for a basis under the given mode, with that mode's default scaling.
Matrix roughness_penalty(const BasisSpec& basis, PenaltyMode mode);

/// Score design, augmented design and penalties for one dataset.
///
/// Columns of `z` are predictor-major: [predictor 0 basis 0..K0-1,
/// predictor 1 basis 0..K1-1, ...]. `z_aug` prepends a column of ones and
/// `r0` pads `r` with a zero intercept row/column. The pseudo-inverses of
/// `z_aug` and `gram` are cached since every estimator needs them.
struct DesignBundle {
    Matrix z;
    Matrix z_aug;
    Matrix gram;        // z_aug^T z_aug
    Matrix r;           // m x m, spectral norm <= 1
    Matrix r0;          // (m+1) x (m+1)
    Matrix z_aug_pinv;
    Matrix complement;  // I - z_aug z_aug^+, projector onto the left null space
    Matrix gram_pinv;
    std::vector<BasisSpec> bases;
    std::string quadrature;

    Eigen::Index n() const { return z_aug.rows(); }
    Eigen::Index m() const { return z.cols(); }
    Eigen::Index dim() const { return z_aug.cols(); }

    /// Same design restricted to a subset of rows; penalties are shared.
    DesignBundle rows(std::span<const Eigen::Index> idx) const;
};

/// Assembles a bundle directly from scores and an m x m penalty (scaled by
/// its spectral norm when that exceeds 1).
DesignBundle make_bundle(Matrix z, Matrix r, std::vector<BasisSpec> bases = {},
                         std::string quadrature = "none");

/// Fourier bases use the scores directly; B-spline bases use scores times
/// the basis Gram. Penalties are block-diagonal across predictors.
DesignBundle build_design(const FunctionalDataset& data, const std::vector<BasisSpec>& bases,
                          PenaltyMode mode);

/// beta(s) = sum_k b_k phi_k(s) on the grid.
Vector eval_coefficient_function(const Vector& coef, const BasisSpec& basis,
                                 std::span<const double> grid);

}  // namespace fliu
