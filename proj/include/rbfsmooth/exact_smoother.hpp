#pragma once

#include "rbfsmooth/model.hpp"

namespace rbfs {

// Minimizer of J_e[f] = rho |f|^2 + (1/N) sum |f(x_i) - y_i|^2. Requires rho > 0;
// use fit_interpolant for the rho = 0 limit.
FittedModel fit_exact(const KernelSpec& spec, const PolyFrame& frame, const PointSet& X, const Vector& y, double rho);

// J_e[f] for any model, with the seminorm taken from its coefficients.
double smoothing_functional(const FittedModel& f, const PointSet& X, const Vector& y, double rho);

struct SmootherDiagnostics {
    double J_e = 0.0;
    double seminorm_sq = 0.0;
    double residual_ms = 0.0;  // (1/N) sum |s(x_k) - y_k|^2

    // 2 rho |s|^2 + (1/N) sum |s - y|^2 + (1/N) sum |s|^2 - (1/N) sum |y|^2
    double energy_gap = 0.0;
    // rho |s|^2 - (1/N) sum s (y - s)
    double seminorm_gap = 0.0;
    // J_e - (1/N) sum (y - s) y
    double functional_gap = 0.0;
    // ||P_X^T (s_X - y)||_inf
    double moment_gap = 0.0;

    bool energy_ok = false;
    bool seminorm_ok = false;
    bool functional_ok = false;
    bool moment_ok = false;

    bool ok() const { return energy_ok && seminorm_ok && functional_ok && moment_ok; }
};

inline constexpr double kIdentityTolerance = 1e-8;

// Evaluates the optimality identities of an exact smoother fit on (X, y).
// Gaps are judged relative to (1/N) sum |y|^2 (moments: relative to
// ||P_X||_max ||y||_1); violations set flags and never throw.
SmootherDiagnostics diagnostics(const FittedModel& model, const PointSet& X, const Vector& y,
                                double tol = kIdentityTolerance);

}  // namespace rbfs
