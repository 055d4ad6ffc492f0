#include "rydpmp/bfgs.hpp"

#include <cmath>
#include <stdexcept>

namespace rydpmp {

Eigen::VectorXd fd_gradient(const Objective& f, const Eigen::VectorXd& x, double fx, double h,
                            int* evaluations) {
    Eigen::VectorXd g(x.size());
    Eigen::VectorXd probe = x;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        probe[i] = x[i] + h;
        const double fp = f(probe);
        probe[i] = x[i] - h;
        const double fm = f(probe);
        probe[i] = x[i];
        if (evaluations) *evaluations += 2;
        const bool ok_p = std::isfinite(fp);
        const bool ok_m = std::isfinite(fm);
        if (ok_p && ok_m) {
            g[i] = (fp - fm) / (2.0 * h);
        } else if (ok_p) {
            g[i] = (fp - fx) / h;
        } else if (ok_m) {
            g[i] = (fx - fm) / h;
        } else {
            g[i] = 0.0;
        }
    }
    return g;
}

namespace {

using ValueFn = std::function<double(const Eigen::VectorXd&)>;
using GradFn = std::function<Eigen::VectorXd(const Eigen::VectorXd&, double)>;

// The gradient is only requested at accepted points, so line-search trials cost one evaluation.
BfgsResult minimize(const ValueFn& value, const GradFn& gradient, const Eigen::VectorXd& x0,
                    const BfgsOptions& opts, const IterationCallback& callback) {
    const Eigen::Index n = x0.size();
    BfgsResult r;
    r.x = x0;
    r.value = value(r.x);
    if (!std::isfinite(r.value)) {
        r.stop_reason = "infeasible start";
        return r;
    }
    Eigen::VectorXd g = gradient(r.x, r.value);
    Eigen::MatrixXd H = Eigen::MatrixXd::Identity(n, n);
    int flat_steps = 0;
    for (r.iterations = 0; r.iterations < opts.max_iters; ++r.iterations) {
        if (g.lpNorm<Eigen::Infinity>() < opts.grad_tol) {
            r.converged = true;
            r.stop_reason = "gradient tolerance";
            return r;
        }
        Eigen::VectorXd p = -H * g;
        double slope = g.dot(p);
        if (!(slope < 0.0)) {
            H.setIdentity();
            p = -g;
            slope = -g.squaredNorm();
        }
        double step = 1.0;
        Eigen::VectorXd x_new;
        double f_new = 0.0;
        bool accepted = false;
        for (int bt = 0; bt < opts.max_backtracks; ++bt) {
            x_new = r.x + step * p;
            f_new = value(x_new);
            if (std::isfinite(f_new) && f_new <= r.value + opts.armijo_c * step * slope) {
                accepted = true;
                break;
            }
            step *= opts.shrink;
        }
        if (!accepted) {
            r.stop_reason = "line search failed";
            return r;
        }
        const Eigen::VectorXd g_new = gradient(x_new, f_new);
        const Eigen::VectorXd s = x_new - r.x;
        const Eigen::VectorXd y = g_new - g;
        const double sy = s.dot(y);
        if (sy > 1e-14 * s.norm() * y.norm()) {
            const double rho = 1.0 / sy;
            const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(n, n);
            H = (I - rho * s * y.transpose()) * H * (I - rho * y * s.transpose()) + rho * s * s.transpose();
        }
        flat_steps = r.value - f_new <= opts.f_tol ? flat_steps + 1 : 0;
        r.x = x_new;
        r.value = f_new;
        g = g_new;
        if (callback && !callback(r.iterations + 1, r.x, r.value)) {
            ++r.iterations;
            r.stop_reason = "stopped by callback";
            return r;
        }
        if (opts.stall_iters > 0 && flat_steps >= opts.stall_iters) {
            ++r.iterations;
            r.stop_reason = "no progress";
            return r;
        }
    }
    r.converged = g.lpNorm<Eigen::Infinity>() < opts.grad_tol;
    r.stop_reason = r.converged ? "gradient tolerance" : "iteration limit";
    return r;
}

}  // namespace

BfgsResult bfgs_minimize(const Objective& f, const Eigen::VectorXd& x0, const BfgsOptions& opts,
                         const IterationCallback& callback) {
    int evals = 0;
    auto value = [&](const Eigen::VectorXd& x) {
        ++evals;
        return f(x);
    };
    auto gradient = [&](const Eigen::VectorXd& x, double fx) { return fd_gradient(f, x, fx, opts.fd_step, &evals); };
    BfgsResult r = minimize(value, gradient, x0, opts, callback);
    r.evaluations = evals;
    return r;
}

BfgsResult bfgs_minimize(const ObjectiveWithGradient& fg, const Eigen::VectorXd& x0,
                         const BfgsOptions& opts, const IterationCallback& callback) {
    int evals = 0;
    // Value and gradient come together; keep the gradient of the last evaluated point.
    Eigen::VectorXd last_x;
    Eigen::VectorXd last_g;
    auto value = [&](const Eigen::VectorXd& x) {
        ++evals;
        const double v = fg(x, last_g);
        last_x = x;
        return v;
    };
    auto gradient = [&](const Eigen::VectorXd& x, double) {
        if (last_x.size() != x.size() || last_x != x) {
            ++evals;
            fg(x, last_g);
            last_x = x;
        }
        return last_g;
    };
    BfgsResult r = minimize(value, gradient, x0, opts, callback);
    r.evaluations = evals;
    return r;
}

}  // namespace rydpmp
