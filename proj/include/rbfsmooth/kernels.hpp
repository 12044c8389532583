#pragma once

#include <string>
#include <string_view>

#include "rbfsmooth/polyspace.hpp"
#include "rbfsmooth/types.hpp"

namespace rbfs {

enum class Family { ThinPlate, ShiftedThinPlate, Multiquadric, InverseMultiquadric, Gaussian };

std::string_view family_name(Family f);
Family family_from_name(std::string_view name);

// A radial basis function of order theta on R^d.
//
//   ThinPlate(s)            (-1)^{ceil s} r^{2s},               s not an integer
//                           (-1)^{s+1} r^{2s} log r,            s = 1, 2, ...
//   ShiftedThinPlate(s, a)  (-1)^{ceil s} (a^2+r^2)^s,          s not an integer
//                           (-1)^{s+1}/2 (a^2+r^2)^s log(a^2+r^2)
//   Multiquadric(a)         -(a^2+r^2)^{1/2}
//   InverseMultiquadric(a)  (a^2+r^2)^{-1/2}
//   Gaussian                exp(-r^2)
//
// The sign factors make each function conditionally positive definite of
// order theta, given the parameter ranges enforced by validate().
struct KernelSpec {
    Family family = Family::Gaussian;
    int theta = 1;
    int dim = 1;
    double s = 0.0;
    double a = 0.0;

    static KernelSpec thin_plate(double s, int theta, int dim);
    static KernelSpec shifted_thin_plate(double s, double a, int theta, int dim);
    static KernelSpec multiquadric(double a, int theta, int dim);
    static KernelSpec inverse_multiquadric(double a, int theta, int dim);
    static KernelSpec gaussian(int theta, int dim);

    friend bool operator==(const KernelSpec&, const KernelSpec&) = default;
};

// Throws ParameterError when the family's parameter range is violated.
void validate(const KernelSpec& spec);

// Parses the text syntax `thinplate:s=1.5`, `shifted-tps:s=1,a=0.5`, `mq:a=1`,
// `imq:a=1`, `gauss`. Order and dimension are supplied separately.
KernelSpec parse_kernel(std::string_view text, int theta, int dim);
std::string format_kernel(const KernelSpec& spec);

// G as a function of the squared radius; the hot path for matrix assembly.
double kernel_radial(const KernelSpec& spec, double r2);

// G(x); rejects NaN coordinates.
double kernel_eval(const KernelSpec& spec, PointRef x);

// G(x - y)
double kernel_between(const KernelSpec& spec, PointRef x, PointRef y);

struct OrderPrediction {
    double eta = 0.0;
    double delta_G = 0.0;
    double eta_G() const { return eta + delta_G; }
};

// Predicted pointwise convergence orders of the interpolant and smoothers.
OrderPrediction predicted_orders(const KernelSpec& spec);

// Riesz representer R_x(y) built from the minimal unisolvent set of uf.
double riesz_representer(const KernelSpec& spec, const UnisolventFrame& uf, PointRef x, PointRef y);

// r_x(y) = R_x(y) - sum_j l_j(x) l_j(y)
double semi_riesz(const KernelSpec& spec, const UnisolventFrame& uf, PointRef x, PointRef y);

}  // namespace rbfs
