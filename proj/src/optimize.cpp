#include "fliu/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Dense>

namespace fliu::optimize {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Eigen::VectorXd clip(Eigen::VectorXd x) { return x.cwiseMax(0.0).cwiseMin(1.0); }

class Evaluator {
public:
    Evaluator(const Objective& f, const BoxOptions& options) : f_(f), options_(options) {}

    double operator()(const Eigen::VectorXd& x) {
        ++count;
        try {
            const double v = f_(std::span<const double>(x.data(), static_cast<std::size_t>(x.size())));
            return std::isfinite(v) ? v : kInf;
        } catch (...) {
            return kInf;
        }
    }

    Eigen::VectorXd gradient(const Eigen::VectorXd& x, double fx) {
        const Eigen::Index k = x.size();
        Eigen::VectorXd g(k);
        const double h = options_.fd_step;
        for (Eigen::Index i = 0; i < k; ++i) {
            Eigen::VectorXd xp = x;
            Eigen::VectorXd xm = x;
            xp[i] = std::min(1.0, x[i] + h);
            xm[i] = std::max(0.0, x[i] - h);
            double fp = (*this)(xp);
            double fm = (*this)(xm);
            if (!std::isfinite(fp)) {
                xp[i] = x[i];
                fp = fx;
            }
            if (!std::isfinite(fm)) {
                xm[i] = x[i];
                fm = fx;
            }
            const double width = xp[i] - xm[i];
            g[i] = width > 0.0 ? (fp - fm) / width : 0.0;
        }
        return g;
    }

    int count = 0;

private:
    const Objective& f_;
    const BoxOptions& options_;
};

Eigen::VectorXd free_mask(const Eigen::VectorXd& x, const Eigen::VectorXd& g) {
    Eigen::VectorXd mask = Eigen::VectorXd::Ones(x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        if ((x[i] <= 0.0 && g[i] > 0.0) || (x[i] >= 1.0 && g[i] < 0.0)) mask[i] = 0.0;
    }
    return mask;
}

}  // namespace

BoxResult minimize_unit_box(const Objective& f, std::vector<double> x0, const BoxOptions& options) {
    Evaluator eval(f, options);
    const auto k = static_cast<Eigen::Index>(x0.size());
    Eigen::VectorXd x = clip(Eigen::Map<Eigen::VectorXd>(x0.data(), k));
    double fx = eval(x);

    BoxResult out;
    auto finish = [&] {
        out.x.assign(x.data(), x.data() + x.size());
        out.value = fx;
        out.evaluations = eval.count;
        return out;
    };
    if (k == 0 || !std::isfinite(fx)) return finish();

    Eigen::MatrixXd hinv = Eigen::MatrixXd::Identity(k, k);
    bool scaled = false;
    Eigen::VectorXd g = eval.gradient(x, fx);
    int stalls = 0;

    for (int it = 0; it < options.max_iterations; ++it) {
        out.iterations = it + 1;
        const Eigen::VectorXd mask = free_mask(x, g);
        const Eigen::VectorXd gf = g.cwiseProduct(mask);
        if (gf.norm() < options.gradient_tol) break;

        bool steepest = false;
        Eigen::VectorXd p = -(mask.asDiagonal() * hinv * mask.asDiagonal()) * g;
        if (!(g.dot(p) < 0.0)) {
            p = -gf;
            steepest = true;
        }

        Eigen::VectorXd xn;
        double fn = kInf;
        bool accepted = false;
        for (int attempt = 0; attempt < 2 && !accepted; ++attempt) {
            double t = 1.0;
            for (int ls = 0; ls < 50; ++ls, t *= 0.5) {
                xn = clip(x + t * p);
                const Eigen::VectorXd step = xn - x;
                if (step.norm() == 0.0) break;
                fn = eval(xn);
                if (fn <= fx + 1e-4 * g.dot(step)) {
                    accepted = true;
                    break;
                }
            }
            if (!accepted && !steepest) {
                hinv.setIdentity();
                scaled = false;
                p = -gf;
                steepest = true;
            } else {
                break;
            }
        }
        if (!accepted) break;

        const Eigen::VectorXd gn = eval.gradient(xn, fn);
        const Eigen::VectorXd s = xn - x;
        const Eigen::VectorXd yv = gn - g;
        const double sy = s.dot(yv);
        if (sy > 1e-12 * s.norm() * yv.norm()) {
            if (!scaled) {
                hinv *= sy / yv.squaredNorm();
                scaled = true;
            }
            const double rho = 1.0 / sy;
            const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(k, k);
            hinv = (eye - rho * s * yv.transpose()) * hinv * (eye - rho * yv * s.transpose()) +
                   rho * s * s.transpose();
        }

        const double drop = fx - fn;
        x = xn;
        g = gn;
        fx = fn;
        stalls = drop <= options.value_tol * (1.0 + std::abs(fx)) ? stalls + 1 : 0;
        if (stalls >= 3) break;
    }
    return finish();
}

}  // namespace fliu::optimize
