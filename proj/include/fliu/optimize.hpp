#pragma once

#include <functional>
#include <span>
#include <vector>

namespace fliu::optimize {

struct BoxOptions {
    double fd_step = 1e-6;
    int max_iterations = 200;
    double gradient_tol = 1e-9;
    double value_tol = 1e-13;
};

struct BoxResult {
    std::vector<double> x;
    double value = 0.0;
    int evaluations = 0;
    int iterations = 0;
};

using Objective = std::function<double(std::span<const double>)>;

/// Projected quasi-Newton (BFGS) descent on the unit box [0, 1]^k with
/// central finite-difference gradients. Evaluations that throw count as +inf.
/// Never returns a point worse than x0.
BoxResult minimize_unit_box(const Objective& f, std::vector<double> x0, const BoxOptions& options = {});

}  // namespace fliu::optimize
