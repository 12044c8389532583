#pragma once

#include <vector>

#include "rbfsmooth/types.hpp"

namespace rbfs {

using MultiIndex = std::vector<int>;

int degree(const MultiIndex& alpha);

// All multi-indices with |alpha| < theta in graded-lexicographic order.
// Within a degree, higher powers of earlier coordinates come first, so for
// d = 2 the order is (0,0), (1,0), (0,1), (2,0), (1,1), (0,2), ...
std::vector<MultiIndex> enumerate_multi_indices(int d, int theta);

// The polynomial space P_theta of total order theta (degree < theta) on R^d,
// spanned by monomials in graded-lex order.
class PolyFrame {
public:
    PolyFrame(int d, int theta);

    int dim() const noexcept { return d_; }
    int theta() const noexcept { return theta_; }
    int size() const noexcept { return static_cast<int>(indices_.size()); }
    const std::vector<MultiIndex>& indices() const noexcept { return indices_; }

    // Monomial values x^{alpha_k}, k = 0..M-1.
    Vector monomials(PointRef x) const;

    friend bool operator==(const PolyFrame& a, const PolyFrame& b) {
        return a.d_ == b.d_ && a.theta_ == b.theta_;
    }

private:
    int d_;
    int theta_;
    std::vector<MultiIndex> indices_;
};

// N x M matrix with entry (i, j) = monomial_j(x_i).
Matrix unisolvency_matrix(const PolyFrame& frame, const PointSet& X);

// Numerical rank with singular values below rel_tol * sigma_max treated as zero.
int numerical_rank(const Matrix& m, double rel_tol = 1e-10);

// Throws InputError when X contains a repeated point.
void require_distinct(const PointSet& X);

bool is_unisolvent(const PolyFrame& frame, const PointSet& X);

// Minimal unisolvent set A with its cardinal basis l_j(x) = sum_k C(j,k) x^{alpha_k}.
class UnisolventFrame {
public:
    UnisolventFrame(PolyFrame frame, PointSet points);

    const PolyFrame& frame() const noexcept { return frame_; }
    const PointSet& points() const noexcept { return points_; }
    const Matrix& cardinal() const noexcept { return cardinal_; }
    int size() const noexcept { return frame_.size(); }

    // (l_1(x), ..., l_M(x))
    Vector cardinal_values(PointRef x) const;

private:
    PolyFrame frame_;
    PointSet points_;
    Matrix cardinal_;
};

struct UnisolventSubset {
    std::vector<int> indices;  // rows of X forming A, in scan order
    UnisolventFrame frame;
};

// Scans X in input order and keeps a point iff it raises the rank of the
// accumulated unisolvency rows. Throws UnisolvencyError if X is not unisolvent.
UnisolventSubset minimal_unisolvent_subset(const PolyFrame& frame, const PointSet& X);

struct LagrangeValue {
    double Pf;
    double Qf;  // f(x) - Pf(x); NaN unless f(x) was supplied
};

// Pf(x) = sum_i f(a_i) l_i(x).
LagrangeValue lagrange_apply(const UnisolventFrame& uf, const Vector& samples,
                             PointRef x);
LagrangeValue lagrange_apply(const UnisolventFrame& uf, const Vector& samples,
                             PointRef x, double fx);

}  // namespace rbfs
