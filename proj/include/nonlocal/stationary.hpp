#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <vector>

#include "nonlocal/config.hpp"
#include "nonlocal/grid.hpp"
#include "nonlocal/operator.hpp"

namespace nonlocal {

/// Stationarity defect ||-a u + f(T u)||_inf.
inline double residual(const Field& u, const Kernel& kernel, double a,
                       const ResponseFunction& f,
                       BoundaryMode boundary = BoundaryMode::ZeroExtension) {
    Field Tu = apply_T(kernel, u, boundary);
    double worst = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i)
        worst = std::max(worst, std::abs(-a * u[i] + f(Tu[i])));
    return worst;
}

struct NewtonResult {
    Field field;
    double residual = 0.0;
    int iterations = 0;
    bool converged = false;
    bool used_fallback = false;
};

/// Damped Newton iteration on F(u) = -a u + f(T u), with the Jacobian
/// -a I + diag(f'(T u)) H. Steps are accepted only when they reduce the
/// residual, so the result is never worse than the input; if the linear
/// solve degenerates the iteration falls back to u <- f(T u) / a.
inline NewtonResult newton_refine(const Field& start, const Kernel& kernel, double a,
                                  const ResponseFunction& f, int max_iters = 20,
                                  double tol = 1e-12,
                                  BoundaryMode boundary = BoundaryMode::ZeroExtension) {
    const OperatorMatrix M = build_operator_matrix(kernel, start.grid, boundary);
    const std::size_t N = start.size();

    auto defect = [&](const Field& u, Eigen::VectorXd& Tu_out) {
        Eigen::Map<const Eigen::VectorXd> x(u.values.data(), N);
        Tu_out = M.entries * x;
        Eigen::VectorXd F(N);
        for (std::size_t i = 0; i < N; ++i) F(i) = -a * u[i] + f(Tu_out(i));
        return F;
    };

    NewtonResult best{start};
    Eigen::VectorXd Tu;
    Eigen::VectorXd F = defect(best.field, Tu);
    best.residual = F.lpNorm<Eigen::Infinity>();

    Field u = start;
    double res = best.residual;
    for (int it = 0; it < max_iters && res > tol; ++it) {
        Eigen::MatrixXd J = Eigen::MatrixXd::Zero(N, N);
        for (std::size_t i = 0; i < N; ++i) {
            const double d = f.derivative(Tu(i));
            if (d != 0.0) J.row(i) = d * M.entries.row(i);
            J(i, i) -= a;
        }
        Eigen::PartialPivLU<Eigen::MatrixXd> lu(J);
        Eigen::VectorXd delta = lu.solve(-F);
        const double solve_defect = (J * delta + F).lpNorm<Eigen::Infinity>();

        bool stepped = false;
        if (std::isfinite(delta.lpNorm<Eigen::Infinity>()) &&
            solve_defect <= 1e-8 * (F.lpNorm<Eigen::Infinity>() + 1.0)) {
            double alpha = 1.0;
            for (int back = 0; back < 40; ++back, alpha *= 0.5) {
                Field trial = u;
                for (std::size_t i = 0; i < N; ++i) trial[i] += alpha * delta(i);
                Eigen::VectorXd Tu_trial;
                Eigen::VectorXd F_trial = defect(trial, Tu_trial);
                const double res_trial = F_trial.lpNorm<Eigen::Infinity>();
                if (res_trial < res) {
                    u = std::move(trial);
                    F = std::move(F_trial);
                    Tu = std::move(Tu_trial);
                    res = res_trial;
                    stepped = true;
                    break;
                }
            }
        }
        if (!stepped) {
            // Degenerate or stagnant Jacobian step: one fixed-point sweep.
            best.used_fallback = true;
            Field trial(u.grid);
            for (std::size_t i = 0; i < N; ++i) trial[i] = f(Tu(i)) / a;
            Eigen::VectorXd Tu_trial;
            Eigen::VectorXd F_trial = defect(trial, Tu_trial);
            const double res_trial = F_trial.lpNorm<Eigen::Infinity>();
            if (res_trial >= res) {
                best.iterations = it + 1;
                break;  // no progress in either direction
            }
            u = std::move(trial);
            F = std::move(F_trial);
            Tu = std::move(Tu_trial);
            res = res_trial;
        }
        best.iterations = it + 1;
        if (res < best.residual) {
            best.field = u;
            best.residual = res;
        }
    }
    best.converged = best.residual <= tol;
    return best;
}

}  // namespace nonlocal
