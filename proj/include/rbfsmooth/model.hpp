#pragma once

#include <iosfwd>
#include <string>
#include <string_view>

#include "rbfsmooth/kernels.hpp"
#include "rbfsmooth/polyspace.hpp"
#include "rbfsmooth/types.hpp"

namespace rbfs {

enum class ModelKind { Interpolant, ExactSmoother, ApproxSmoother };

std::string_view kind_name(ModelKind k);
ModelKind kind_from_name(std::string_view name);

// f(x) = sum_i v_i G(x - z_i) + sum_j beta_j x^{alpha_j}, with P_Z^T v = 0.
struct FittedModel {
    KernelSpec spec;
    PolyFrame frame{1, 1};
    PointSet centers;
    Vector v;
    Vector beta;
    ModelKind kind = ModelKind::Interpolant;
    double rho = 0.0;

    double operator()(PointRef x) const;
};

double eval_point(const FittedModel& model, PointRef x);
Vector eval_model(const FittedModel& model, const PointSet& X);

// ||P_Z^T v||_inf relative to (||v||_1 + ||beta||_1) max(1, max|P_Z|); zero when v = 0.
double constraint_defect(const FittedModel& model);
inline constexpr double kConstraintTolerance = 1e-8;

// Minimal-seminorm interpolant of (X, y).
FittedModel fit_interpolant(const KernelSpec& spec, const PolyFrame& frame, const PointSet& X, const Vector& y);

// |f|^2 = (2pi)^{d/2} v^T G_ZZ v. Throws ContractError if P_Z^T v != 0.
double seminorm_sq(const FittedModel& model);

// <f, g> = (2pi)^{d/2} v_f^T G_{Z_f, Z_g} v_g
double seminorm_inner(const FittedModel& f, const FittedModel& g);

// |f - g|^2 over the merged center set; coincident centers have their
// coefficients added.
double seminorm_sq_diff(const FittedModel& f, const FittedModel& g);

// Versioned text format, 17 significant digits.
void save_model(const FittedModel& model, std::ostream& os);
void save_model(const FittedModel& model, const std::string& path);
FittedModel load_model(std::istream& is);
FittedModel load_model(const std::string& path);

}  // namespace rbfs
