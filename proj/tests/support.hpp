#pragma once

#include <cstdint>
#include <random>

#include "fliu/basis.hpp"
#include "fliu/numerics.hpp"

namespace fliu::testing {

inline Matrix random_matrix(std::mt19937_64& rng, Eigen::Index rows, Eigen::Index cols) {
    std::normal_distribution<double> normal;
    Matrix m(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j) {
        for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = normal(rng);
    }
    return m;
}

inline Vector random_vector(std::mt19937_64& rng, Eigen::Index n) {
    return random_matrix(rng, n, 1).col(0);
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline int uniform_int(std::mt19937_64& rng, int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng);
}

inline Matrix random_spd(std::mt19937_64& rng, Eigen::Index n) {
    const Matrix a = random_matrix(rng, n, n);
    return a * a.transpose() + 0.5 * Matrix::Identity(n, n);
}

// Second-difference penalty on m coefficients, the usual smoothness prior.
inline Matrix second_difference(Eigen::Index m) {
    Matrix d = Matrix::Zero(m - 2, m);
    for (Eigen::Index i = 0; i + 2 < m; ++i) d.row(i).segment(i, 3) << 1.0, -2.0, 1.0;
    return d.transpose() * d;
}

inline DesignBundle random_bundle(std::mt19937_64& rng, Eigen::Index n, Eigen::Index m) {
    return make_bundle(random_matrix(rng, n, m), second_difference(m));
}

inline double rel_diff(const Matrix& a, const Matrix& b) {
    return (a - b).norm() / std::max(1.0, b.norm());
}

}  // namespace fliu::testing
