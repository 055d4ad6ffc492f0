#pragma once

#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace rydpmp {

struct BfgsOptions {
    int max_iters = 200;
    double grad_tol = 1e-8;      // on the gradient infinity norm
    double fd_step = 1e-6;       // central differences when no gradient is supplied
    double armijo_c = 1e-4;
    double shrink = 0.5;
    int max_backtracks = 50;
    /// Stops after this many consecutive accepted steps that lower the value by at most f_tol:
    /// the objective has hit its rounding floor. 0 disables the check.
    int stall_iters = 5;
    double f_tol = 1e-15;
};

struct BfgsResult {
    Eigen::VectorXd x;
    double value = 0.0;
    int iterations = 0;
    int evaluations = 0;
    bool converged = false;
    std::string stop_reason;
};

using Objective = std::function<double(const Eigen::VectorXd&)>;
/// Returns the value and writes the gradient.
using ObjectiveWithGradient = std::function<double(const Eigen::VectorXd&, Eigen::VectorXd&)>;
/// Called after every accepted step with (iteration, x, value); returning false stops the run.
using IterationCallback = std::function<bool(int, const Eigen::VectorXd&, double)>;

/// Central-difference gradient. A non-finite side falls back to the one-sided difference;
/// both sides non-finite gives a zero component.
Eigen::VectorXd fd_gradient(const Objective& f, const Eigen::VectorXd& x, double fx, double h,
                            int* evaluations = nullptr);

/// Inverse-Hessian BFGS with backtracking Armijo line search. Non-finite objective values are
/// treated as infeasible and make the line search shrink.
BfgsResult bfgs_minimize(const Objective& f, const Eigen::VectorXd& x0, const BfgsOptions& opts = {},
                         const IterationCallback& callback = {});
BfgsResult bfgs_minimize(const ObjectiveWithGradient& fg, const Eigen::VectorXd& x0,
                         const BfgsOptions& opts = {}, const IterationCallback& callback = {});

}  // namespace rydpmp
