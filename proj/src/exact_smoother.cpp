#include "rbfsmooth/exact_smoother.hpp"

#include <cmath>

#include "rbfsmooth/assembly.hpp"
#include "rbfsmooth/errors.hpp"

namespace rbfs {

FittedModel fit_exact(const KernelSpec& spec, const PolyFrame& frame, const PointSet& X, const Vector& y, double rho) {
    if (!(rho > 0.0) || !std::isfinite(rho))
        throw ParameterError("exact smoother needs rho > 0 (use the interpolant for rho = 0)");
    const BlockSystem sys = exact_system(spec, frame, X, y, rho);
    const Vector sol = solve_block(sys);
    FittedModel m;
    m.spec = spec;
    m.frame = frame;
    m.centers = X;
    m.v = sol.head(X.rows());
    m.beta = sol.tail(frame.size());
    m.kind = ModelKind::ExactSmoother;
    m.rho = rho;
    return m;
}

double smoothing_functional(const FittedModel& f, const PointSet& X, const Vector& y, double rho) {
    if (y.size() != X.rows()) throw InputError("data values and points differ in length");
    const Vector r = eval_model(f, X) - y;
    const double ms = r.squaredNorm() / static_cast<double>(X.rows());
    return rho == 0.0 ? ms : rho * seminorm_sq(f) + ms;
}

SmootherDiagnostics diagnostics(const FittedModel& model, const PointSet& X, const Vector& y, double tol) {
    if (y.size() != X.rows()) throw InputError("data values and points differ in length");
    const double N = static_cast<double>(X.rows());
    const double rho = model.rho;
    const Vector s = eval_model(model, X);
    const Vector r = s - y;

    SmootherDiagnostics dg;
    dg.seminorm_sq = seminorm_sq(model);
    dg.residual_ms = r.squaredNorm() / N;
    dg.J_e = rho * dg.seminorm_sq + dg.residual_ms;

    const double y_ms = y.squaredNorm() / N;
    const double scale = y_ms > 0.0 ? y_ms : 1.0;
    dg.energy_gap = 2.0 * rho * dg.seminorm_sq + dg.residual_ms + s.squaredNorm() / N - y_ms;
    dg.seminorm_gap = rho * dg.seminorm_sq + s.dot(r) / N;
    dg.functional_gap = dg.J_e + r.dot(y) / N;

    const Matrix P = unisolvency_matrix(model.frame, X);
    dg.moment_gap = (P.transpose() * r).lpNorm<Eigen::Infinity>();
    const double moment_scale = std::max(1.0, P.cwiseAbs().maxCoeff()) * std::max(y.lpNorm<1>(), 1e-300);

    dg.energy_ok = std::abs(dg.energy_gap) <= tol * scale;
    dg.seminorm_ok = std::abs(dg.seminorm_gap) <= tol * scale;
    dg.functional_ok = std::abs(dg.functional_gap) <= tol * scale;
    dg.moment_ok = dg.moment_gap <= tol * moment_scale;
    return dg;
}

}  // namespace rbfs
