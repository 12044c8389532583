#include "rbfsmooth/polyspace.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "rbfsmooth/errors.hpp"

namespace rbfs {

double two_pi_pow_half_d(int d) { return std::pow(2.0 * kPi, 0.5 * d); }

int degree(const MultiIndex& alpha) { return std::accumulate(alpha.begin(), alpha.end(), 0); }

namespace {

// Appends every multi-index of length d with total degree n, earlier
// coordinates taking the larger powers first.
void append_degree(int d, int n, MultiIndex& prefix, std::vector<MultiIndex>& out) {
    const int pos = static_cast<int>(prefix.size());
    if (pos == d - 1) {
        prefix.push_back(n);
        out.push_back(prefix);
        prefix.pop_back();
        return;
    }
    for (int k = n; k >= 0; --k) {
        prefix.push_back(k);
        append_degree(d, n - k, prefix, out);
        prefix.pop_back();
    }
}

}  // namespace

std::vector<MultiIndex> enumerate_multi_indices(int d, int theta) {
    if (d < 1) throw ParameterError("dimension must be >= 1");
    if (theta < 1) throw ParameterError("order theta must be >= 1");
    std::vector<MultiIndex> out;
    MultiIndex prefix;
    for (int n = 0; n < theta; ++n) append_degree(d, n, prefix, out);
    return out;
}

PolyFrame::PolyFrame(int d, int theta)
    : d_(d), theta_(theta), indices_(enumerate_multi_indices(d, theta)) {}

Vector PolyFrame::monomials(PointRef x) const {
    if (x.size() != d_) throw InputError("point dimension does not match the polynomial frame");
    // powers(i, p) = x_i^p for p < theta
    Matrix powers(d_, theta_);
    for (int i = 0; i < d_; ++i) {
        powers(i, 0) = 1.0;
        for (int p = 1; p < theta_; ++p) powers(i, p) = powers(i, p - 1) * x(i);
    }
    Vector m(size());
    for (int k = 0; k < size(); ++k) {
        double v = 1.0;
        for (int i = 0; i < d_; ++i) v *= powers(i, indices_[k][i]);
        m(k) = v;
    }
    return m;
}

Matrix unisolvency_matrix(const PolyFrame& frame, const PointSet& X) {
    if (X.cols() != frame.dim()) throw InputError("point set dimension does not match the polynomial frame");
    Matrix P(X.rows(), frame.size());
    for (Eigen::Index i = 0; i < X.rows(); ++i) P.row(i) = frame.monomials(X.row(i)).transpose();
    return P;
}

int numerical_rank(const Matrix& m, double rel_tol) {
    if (m.size() == 0) return 0;
    Eigen::JacobiSVD<Matrix> svd(m);
    const auto& sv = svd.singularValues();
    if (sv.size() == 0 || sv(0) == 0.0) return 0;
    const double cut = rel_tol * sv(0);
    int rank = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) > cut) ++rank;
    return rank;
}

void require_distinct(const PointSet& X) {
    std::vector<Eigen::Index> order(X.rows());
    std::iota(order.begin(), order.end(), 0);
    auto less = [&](Eigen::Index a, Eigen::Index b) {
        for (Eigen::Index j = 0; j < X.cols(); ++j) {
            if (X(a, j) < X(b, j)) return true;
            if (X(a, j) > X(b, j)) return false;
        }
        return false;
    };
    std::sort(order.begin(), order.end(), less);
    for (std::size_t k = 1; k < order.size(); ++k) {
        if (X.row(order[k]) == X.row(order[k - 1]))
            throw InputError("duplicate point at rows " + std::to_string(std::min(order[k], order[k - 1])) + " and " +
                             std::to_string(std::max(order[k], order[k - 1])));
    }
}

bool is_unisolvent(const PolyFrame& frame, const PointSet& X) {
    if (X.cols() != frame.dim()) throw InputError("point set dimension does not match the polynomial frame");
    if (X.rows() < frame.size()) return false;
    require_distinct(X);
    return numerical_rank(unisolvency_matrix(frame, X)) == frame.size();
}

UnisolventFrame::UnisolventFrame(PolyFrame frame, PointSet points)
    : frame_(std::move(frame)), points_(std::move(points)) {
    if (points_.rows() != frame_.size())
        throw UnisolvencyError("a minimal unisolvent set needs exactly M = " + std::to_string(frame_.size()) +
                               " points");
    const Matrix PA = unisolvency_matrix(frame_, points_);
    if (numerical_rank(PA) < frame_.size()) throw UnisolvencyError("point set is not unisolvent");
    // l_j(a_i) = (P_A C^T)(i, j) = delta_ij  =>  C = P_A^{-T}
    cardinal_ = PA.fullPivLu().inverse().transpose();
}

Vector UnisolventFrame::cardinal_values(PointRef x) const { return cardinal_ * frame_.monomials(x); }

UnisolventSubset minimal_unisolvent_subset(const PolyFrame& frame, const PointSet& X) {
    if (X.cols() != frame.dim()) throw InputError("point set dimension does not match the polynomial frame");
    require_distinct(X);
    const int M = frame.size();
    std::vector<int> kept;
    Matrix rows(0, M);
    for (Eigen::Index i = 0; i < X.rows() && static_cast<int>(kept.size()) < M; ++i) {
        Matrix trial(rows.rows() + 1, M);
        trial.topRows(rows.rows()) = rows;
        trial.row(rows.rows()) = frame.monomials(X.row(i)).transpose();
        if (numerical_rank(trial) > static_cast<int>(rows.rows())) {
            rows = std::move(trial);
            kept.push_back(static_cast<int>(i));
        }
    }
    if (static_cast<int>(kept.size()) < M)
        throw UnisolvencyError("point set is not unisolvent for order " + std::to_string(frame.theta()) +
                               " (rank " + std::to_string(kept.size()) + " < " + std::to_string(M) + ")");
    PointSet A(M, X.cols());
    for (int k = 0; k < M; ++k) A.row(k) = X.row(kept[k]);
    return UnisolventSubset{std::move(kept), UnisolventFrame(frame, std::move(A))};
}

LagrangeValue lagrange_apply(const UnisolventFrame& uf, const Vector& samples, PointRef x) {
    if (samples.size() != uf.size())
        throw InputError("expected " + std::to_string(uf.size()) + " samples on the unisolvent set, got " +
                         std::to_string(samples.size()));
    return {uf.cardinal_values(x).dot(samples), std::numeric_limits<double>::quiet_NaN()};
}

LagrangeValue lagrange_apply(const UnisolventFrame& uf, const Vector& samples, PointRef x, double fx) {
    LagrangeValue r = lagrange_apply(uf, samples, x);
    r.Qf = fx - r.Pf;
    return r;
}

}  // namespace rbfs
