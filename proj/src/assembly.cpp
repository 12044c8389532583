#include "rbfsmooth/assembly.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>

#include "rbfsmooth/errors.hpp"

extern "C" {
void dsytrf_(const char* uplo, const int* n, double* a, const int* lda, int* ipiv, double* work, const int* lwork,
             int* info, std::size_t uplo_len);
void dsytrs_(const char* uplo, const int* n, const int* nrhs, const double* a, const int* lda, const int* ipiv,
             double* b, const int* ldb, int* info, std::size_t uplo_len);
}

namespace rbfs {

namespace {

void require_unisolvent(const PolyFrame& frame, const PointSet& X, const char* which) {
    if (!is_unisolvent(frame, X))
        throw UnisolvencyError(std::string(which) + " is not unisolvent for order " + std::to_string(frame.theta()));
}

void require_dims(const KernelSpec& spec, const PolyFrame& frame, const PointSet& X) {
    if (frame.dim() != spec.dim || frame.theta() != spec.theta)
        throw ParameterError("polynomial frame does not match the kernel order and dimension");
    if (X.cols() != spec.dim) throw InputError("point set dimension does not match the kernel dimension");
}

BlockSystem saddle(const KernelSpec& spec, const PolyFrame& frame, const PointSet& X, const Vector& y,
                   double diag_shift, SystemKind kind) {
    require_dims(spec, frame, X);
    if (y.size() != X.rows()) throw InputError("data values and points differ in length");
    require_unisolvent(frame, X, "data set");
    const Eigen::Index N = X.rows();
    const Eigen::Index M = frame.size();
    BlockSystem sys;
    sys.matrix = Matrix::Zero(N + M, N + M);
    sys.matrix.topLeftCorner(N, N) = basis_matrix(spec, X, X);
    if (diag_shift != 0.0) sys.matrix.topLeftCorner(N, N).diagonal().array() += diag_shift;
    const Matrix P = unisolvency_matrix(frame, X);
    sys.matrix.topRightCorner(N, M) = P;
    sys.matrix.bottomLeftCorner(M, N) = P.transpose();
    sys.rhs = Vector::Zero(N + M);
    sys.rhs.head(N) = y;
    sys.layout = {{"v", N}, {"beta", M}};
    sys.kind = kind;
    return sys;
}

}  // namespace

Eigen::Index BlockSystem::offset(const std::string& name) const {
    Eigen::Index off = 0;
    for (const auto& b : layout) {
        if (b.name == name) return off;
        off += b.size;
    }
    throw InputError("no block named '" + name + "'");
}

double symmetry_defect(const Matrix& m) {
    const double scale = m.cwiseAbs().maxCoeff();
    if (scale == 0.0) return 0.0;
    return (m - m.transpose()).cwiseAbs().maxCoeff() / scale;
}

Matrix basis_matrix(const KernelSpec& spec, const PointSet& Y, const PointSet& Z) {
    if (Y.cols() != spec.dim || Z.cols() != spec.dim)
        throw InputError("point set dimension does not match the kernel dimension");
    Matrix G(Y.rows(), Z.rows());
    for (Eigen::Index j = 0; j < Z.rows(); ++j)
        for (Eigen::Index i = 0; i < Y.rows(); ++i) G(i, j) = kernel_radial(spec, (Y.row(i) - Z.row(j)).squaredNorm());
    return G;
}

BlockSystem interp_system(const KernelSpec& spec, const PolyFrame& frame, const PointSet& X, const Vector& y) {
    return saddle(spec, frame, X, y, 0.0, SystemKind::Interpolation);
}

BlockSystem exact_system(const KernelSpec& spec, const PolyFrame& frame, const PointSet& X, const Vector& y,
                         double rho) {
    if (!(rho >= 0.0) || !std::isfinite(rho)) throw ParameterError("smoothing parameter rho must be >= 0");
    const double shift = two_pi_pow_half_d(spec.dim) * static_cast<double>(X.rows()) * rho;
    return saddle(spec, frame, X, y, shift, SystemKind::ExactSmoothing);
}

ApproxAssembly::ApproxAssembly(const KernelSpec& spec, const PolyFrame& frame, const PointSet& X, const Vector& y,
                               const PointSet& centers, Eigen::Index chunk)
    : spec_(spec), frame_(frame), centers_(centers), n_data_(X.rows()) {
    require_dims(spec, frame, X);
    if (centers.cols() != spec.dim) throw InputError("center set dimension does not match the kernel dimension");
    if (y.size() != X.rows()) throw InputError("data values and points differ in length");
    if (chunk < 1) throw ParameterError("chunk size must be positive");
    require_unisolvent(frame, X, "data set");
    require_unisolvent(frame, centers, "center set");

    const Eigen::Index Nc = centers.rows();
    const Eigen::Index M = frame.size();
    G_cc_ = basis_matrix(spec, centers, centers);
    P_c_ = unisolvency_matrix(frame, centers);
    GtG_ = Matrix::Zero(Nc, Nc);
    GtP_ = Matrix::Zero(Nc, M);
    PtP_ = Matrix::Zero(M, M);
    Gty_ = Vector::Zero(Nc);
    Pty_ = Vector::Zero(M);

    for (Eigen::Index start = 0; start < X.rows(); start += chunk) {
        const Eigen::Index rows = std::min(chunk, X.rows() - start);
        const PointSet Xc = X.middleRows(start, rows);
        const Matrix B = basis_matrix(spec, Xc, centers);  // G_{Xc,X'}
        const Matrix Pc = unisolvency_matrix(frame, Xc);
        const auto yc = y.segment(start, rows);
        GtG_.selfadjointView<Eigen::Lower>().rankUpdate(B.transpose());
        GtP_.noalias() += B.transpose() * Pc;
        PtP_.noalias() += Pc.transpose() * Pc;
        Gty_.noalias() += B.transpose() * yc;
        Pty_.noalias() += Pc.transpose() * yc;
    }
    GtG_ = GtG_.selfadjointView<Eigen::Lower>();
}

BlockSystem ApproxAssembly::system(double rho) const {
    if (!(rho >= 0.0) || !std::isfinite(rho)) throw ParameterError("smoothing parameter rho must be >= 0");
    const Eigen::Index Nc = centers_.rows();
    const Eigen::Index M = frame_.size();
    const double scale = two_pi_pow_half_d(spec_.dim) * static_cast<double>(n_data_) * rho;
    BlockSystem sys;
    sys.matrix = Matrix::Zero(Nc + 2 * M, Nc + 2 * M);
    sys.matrix.topLeftCorner(Nc, Nc) = scale * G_cc_ + GtG_;
    sys.matrix.block(0, Nc, Nc, M) = GtP_;
    sys.matrix.block(0, Nc + M, Nc, M) = P_c_;
    sys.matrix.block(Nc, 0, M, Nc) = GtP_.transpose();
    sys.matrix.block(Nc, Nc, M, M) = PtP_;
    sys.matrix.block(Nc + M, 0, M, Nc) = P_c_.transpose();
    sys.rhs = Vector::Zero(Nc + 2 * M);
    sys.rhs.head(Nc) = Gty_;
    sys.rhs.segment(Nc, M) = Pty_;
    sys.layout = {{"alpha", Nc}, {"beta", M}, {"gamma", M}};
    sys.kind = SystemKind::ApproxSmoothing;
    return sys;
}

ApproxAssembly approx_system(const KernelSpec& spec, const PolyFrame& frame, const PointSet& X, const Vector& y,
                             const PointSet& centers, Eigen::Index chunk) {
    return ApproxAssembly(spec, frame, X, y, centers, chunk);
}

Vector solve_symmetric(const Matrix& A, const Vector& b, double tol) {
    if (A.rows() != A.cols()) throw InputError("system matrix is not square");
    if (b.size() != A.rows()) throw InputError("right-hand side length does not match the system");
    const int n = static_cast<int>(A.rows());
    if (n == 0) return Vector();
    const double bnorm = b.norm();
    if (bnorm == 0.0) return Vector::Zero(n);

    Matrix LD = A;
    std::vector<int> ipiv(n);
    int info = 0;
    int lwork = -1;
    double query = 0.0;
    const char uplo = 'L';
    dsytrf_(&uplo, &n, LD.data(), &n, ipiv.data(), &query, &lwork, &info, 1);
    lwork = std::max(1, static_cast<int>(query));
    std::vector<double> work(lwork);
    dsytrf_(&uplo, &n, LD.data(), &n, ipiv.data(), work.data(), &lwork, &info, 1);
    if (info > 0) throw SolveError("symmetric factorization hit an exactly singular pivot", INFINITY);
    if (info < 0) throw SolveError("symmetric factorization rejected its arguments", INFINITY);

    auto apply_inverse = [&](Vector rhs) {
        const int nrhs = 1;
        int inf = 0;
        dsytrs_(&uplo, &n, &nrhs, LD.data(), &n, ipiv.data(), rhs.data(), &n, &inf, 1);
        return rhs;
    };

    Vector x = apply_inverse(b);
    Vector r = b - A * x;
    double res = r.norm() / bnorm;
    for (int step = 0; step < 4 && res > 1e-14; ++step) {
        const Vector candidate = x + apply_inverse(r);
        const Vector rc = b - A * candidate;
        const double rc_norm = rc.norm() / bnorm;
        if (!(rc_norm < res)) break;
        x = candidate;
        r = rc;
        res = rc_norm;
    }
    if (!std::isfinite(res) || res > tol)
    {
        char msg[96];
        std::snprintf(msg, sizeof msg, "relative residual %.3e exceeds %.3e", res, tol);
        throw SolveError(msg, res);
    }
    return x;
}

Vector solve_block(const BlockSystem& sys, double tol) { return solve_symmetric(sys.matrix, sys.rhs, tol); }

bool cpd_check(const KernelSpec& spec, const PolyFrame& frame, const PointSet& X, int trials, std::uint64_t seed) {
    require_dims(spec, frame, X);
    if (trials < 1) throw ParameterError("cpd_check needs at least one trial");
    require_unisolvent(frame, X, "data set");
    const Eigen::Index N = X.rows();
    const Eigen::Index M = frame.size();
    if (N == M) return true;

    const Matrix G = basis_matrix(spec, X, X);
    const Eigen::HouseholderQR<Matrix> qr(unisolvency_matrix(frame, X));
    const Matrix Q = qr.householderQ() * Matrix::Identity(N, M);

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    for (int t = 0; t < trials; ++t) {
        Vector v(N);
        for (Eigen::Index i = 0; i < N; ++i) v(i) = normal(rng);
        v -= Q * (Q.transpose() * v);
        const double vv = v.squaredNorm();
        if (vv == 0.0) continue;
        const double quad = v.dot(G * v);
        if (quad < -1e-10 * vv) return false;
    }
    return true;
}

}  // namespace rbfs
