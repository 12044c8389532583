#pragma once

#include <cmath>

#include "rbfsmooth/study.hpp"

namespace testing {

using namespace rbfs;

inline Region box(int d, double half) { return {Vector::Constant(d, -half), Vector::Constant(d, half)}; }

inline PointSet rows(std::initializer_list<std::initializer_list<double>> pts) {
    PointSet X(pts.size(), pts.begin()->size());
    int i = 0;
    for (const auto& p : pts) {
        int j = 0;
        for (double v : p) X(i, j++) = v;
        ++i;
    }
    return X;
}

inline Vector vec(std::initializer_list<double> v) {
    Vector out(v.size());
    int i = 0;
    for (double x : v) out(i++) = x;
    return out;
}

inline Vector sin_samples(const PointSet& X) {
    Vector y(X.rows());
    for (Eigen::Index i = 0; i < X.rows(); ++i) {
        double p = 1.0;
        for (Eigen::Index j = 0; j < X.cols(); ++j) p *= std::sin(X(i, j));
        y(i) = p;
    }
    return y;
}

inline Vector uniform_vector(Eigen::Index n, std::uint64_t seed, double lo = -1.0, double hi = 1.0) {
    Rng rng(seed);
    Vector v(n);
    for (Eigen::Index i = 0; i < n; ++i) v(i) = lo + (hi - lo) * rng.uniform();
    return v;
}

// One representative of every family for order theta in dimension d.
inline std::vector<KernelSpec> all_kernels(int theta, int d) {
    const double tps_s = theta == 1 ? 0.5 : theta == 2 ? 1.5 : 2.0;
    return {KernelSpec::thin_plate(tps_s, theta, d), KernelSpec::shifted_thin_plate(theta - 0.5, 0.8, theta, d),
            KernelSpec::multiquadric(1.0, theta, d), KernelSpec::inverse_multiquadric(1.0, theta, d),
            KernelSpec::gaussian(theta, d)};
}

}  // namespace testing
