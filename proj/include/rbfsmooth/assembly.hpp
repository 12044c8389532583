#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rbfsmooth/kernels.hpp"
#include "rbfsmooth/polyspace.hpp"
#include "rbfsmooth/types.hpp"

namespace rbfs {

enum class SystemKind { Interpolation, ExactSmoothing, ApproxSmoothing, Other };

struct Block {
    std::string name;
    Eigen::Index size;
};

// A square saddle-point system with a named block partition of its unknowns.
struct BlockSystem {
    Matrix matrix;
    Vector rhs;
    std::vector<Block> layout;
    SystemKind kind = SystemKind::Other;

    Eigen::Index rows() const { return matrix.rows(); }
    // Offset of the named block in the unknown vector.
    Eigen::Index offset(const std::string& name) const;
};

// max |A - A^T| / max |A|
double symmetry_defect(const Matrix& m);

// G_{Y,Z}(i, j) = G(y_i - z_j)
Matrix basis_matrix(const KernelSpec& spec, const PointSet& Y, const PointSet& Z);

// [[G_XX, P_X], [P_X^T, 0]] [v; beta] = [y; 0]
BlockSystem interp_system(const KernelSpec& spec, const PolyFrame& frame, const PointSet& X, const Vector& y);

// [[(2pi)^{d/2} N rho I + G_XX, P_X], [P_X^T, 0]] [v; beta] = [y; 0]
BlockSystem exact_system(const KernelSpec& spec, const PolyFrame& frame, const PointSet& X, const Vector& y,
                         double rho);

// The N-dependent products of the approximate smoother system, accumulated by
// streaming over the data in row chunks. Memory is O(N' * chunk) beyond the
// inputs; system(rho) then costs nothing that depends on N.
class ApproxAssembly {
public:
    static constexpr Eigen::Index kDefaultChunk = 4096;

    ApproxAssembly(const KernelSpec& spec, const PolyFrame& frame, const PointSet& X, const Vector& y,
                   const PointSet& centers, Eigen::Index chunk = kDefaultChunk);

    //  [ (2pi)^{d/2} N rho G_X'X' + G_X'X G_XX'   G_X'X P_X   P_X' ] [alpha]   [G_X'X y]
    //  [ P_X^T G_XX'                              P_X^T P_X   0    ] [beta ] = [P_X^T y]
    //  [ P_X'^T                                   0           0    ] [gamma]   [0      ]
    BlockSystem system(double rho) const;

    Eigen::Index data_size() const noexcept { return n_data_; }
    const PointSet& centers() const noexcept { return centers_; }

private:
    KernelSpec spec_;
    PolyFrame frame_;
    PointSet centers_;
    Eigen::Index n_data_;
    Matrix G_cc_;   // G_X'X'
    Matrix GtG_;    // G_X'X G_XX'
    Matrix GtP_;    // G_X'X P_X
    Matrix PtP_;    // P_X^T P_X
    Matrix P_c_;    // P_X'
    Vector Gty_;    // G_X'X y
    Vector Pty_;    // P_X^T y
};

ApproxAssembly approx_system(const KernelSpec& spec, const PolyFrame& frame, const PointSet& X, const Vector& y,
                             const PointSet& centers, Eigen::Index chunk = ApproxAssembly::kDefaultChunk);

inline constexpr double kSolveTolerance = 1e-8;

// Bunch-Kaufman LDL^T of a dense symmetric (indefinite) matrix with iterative
// refinement. Throws SolveError when the relative residual ||Ax - b|| / ||b||
// stays above tol.
Vector solve_symmetric(const Matrix& A, const Vector& b, double tol = kSolveTolerance);

Vector solve_block(const BlockSystem& sys, double tol = kSolveTolerance);

// Samples `trials` random nonzero v with P_X^T v = 0 and checks v^T G_XX v > 0,
// allowing slack of 1e-10 ||v||^2. Vacuously true when null(P_X^T) = {0}.
bool cpd_check(const KernelSpec& spec, const PolyFrame& frame, const PointSet& X, int trials, std::uint64_t seed);

}  // namespace rbfs
