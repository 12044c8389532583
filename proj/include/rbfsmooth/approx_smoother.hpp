#pragma once

#include <vector>

#include "rbfsmooth/assembly.hpp"
#include "rbfsmooth/model.hpp"

namespace rbfs {

// Regular rectangular grid with counts[i] nodes a_i + h_i k, k = 0..counts[i]-1,
// where counts[i] * h_i = b_i - a_i. The far corner b is not a node.
struct GridSpec {
    Vector a;
    Vector b;
    std::vector<int> counts;

    int dim() const { return static_cast<int>(a.size()); }
    Vector steps() const;
    long total() const;
    double volume() const;

    // Throws ParameterError unless b > a componentwise and every count >= 1.
    void validate() const;
};

// Parses `a1,...,ad:b1,...,bd:n1,...,nd`.
GridSpec parse_grid(const std::string& text);

// Grid whose nodes run from lo to hi inclusive, counts[i] nodes per axis.
GridSpec closed_grid(const Vector& lo, const Vector& hi, const std::vector<int>& counts);

struct Grid {
    PointSet points;                 // row-major: last dimension varies fastest
    bool unisolvent_guaranteed = false;  // every count >= theta
};

Grid make_grid(const GridSpec& gs, int theta);

// h_X' from d^{d/2} vol = N' h^d.
double grid_density(const GridSpec& gs);

// Minimizer of J_e over W_{G,X'} with the centers X' fixed.
FittedModel fit_approx(const KernelSpec& spec, const PolyFrame& frame, const PointSet& X, const Vector& y,
                       const PointSet& centers, double rho);

// Same, reusing an assembly of the N-dependent products.
FittedModel fit_approx(const ApproxAssembly& assembly, const KernelSpec& spec, const PolyFrame& frame, double rho);

// rho |s_e - s_a|^2 + (1/N) sum |s_e(x_k) - s_a(x_k)|^2 = J_e[s_a] - J_e[s_e]
struct SmootherComparison {
    double lhs = 0.0;
    double rhs = 0.0;
    double gap = 0.0;
    double J_exact = 0.0;
    double J_approx = 0.0;
    double seminorm_sq_diff = 0.0;
    double mean_sq_diff = 0.0;
    bool within_tolerance = false;  // |gap| <= 1e-7 (1 + J_e[s_a])
};

SmootherComparison compare(const FittedModel& exact, const FittedModel& approx, const PointSet& X, const Vector& y,
                           double rho);

}  // namespace rbfs
