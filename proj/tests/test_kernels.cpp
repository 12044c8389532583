#include <doctest.h>

#include <cmath>

#include "rbfsmooth/errors.hpp"
#include "rbfsmooth/kernels.hpp"
#include "support.hpp"

using namespace rbfs;
using namespace testing;

namespace {

// Closed forms written out per family, independent of kernel_radial.
double oracle(const KernelSpec& k, double r) {
    const double s = k.s, a = k.a;
    switch (k.family) {
        case Family::ThinPlate:
            if (r == 0.0) return 0.0;
            if (s == std::floor(s)) return std::pow(-1.0, s + 1) * std::pow(r, 2 * s) * std::log(r);
            return std::pow(-1.0, std::ceil(s)) * std::pow(r, 2 * s);
        case Family::ShiftedThinPlate: {
            const double q = a * a + r * r;
            if (s == std::floor(s)) return std::pow(-1.0, s + 1) / 2 * std::pow(q, s) * std::log(q);
            return std::pow(-1.0, std::ceil(s)) * std::pow(q, s);
        }
        case Family::Multiquadric: return -std::sqrt(a * a + r * r);
        case Family::InverseMultiquadric: return 1.0 / std::sqrt(a * a + r * r);
        case Family::Gaussian: return std::exp(-r * r);
    }
    return NAN;
}

// Direct transcription of the representer formula.
double oracle_riesz(const KernelSpec& k, const UnisolventFrame& uf, const Vector& x, const Vector& y, bool semi) {
    const int M = uf.size();
    const PointSet& A = uf.points();
    const Vector lx = uf.cardinal_values(x), ly = uf.cardinal_values(y);
    auto G = [&](const Vector& z) { return oracle(k, z.norm()); };
    double acc = G(y - x);
    for (int i = 0; i < M; ++i) acc -= lx(i) * G(y - A.row(i).transpose());
    for (int j = 0; j < M; ++j) acc -= ly(j) * G(A.row(j).transpose() - x);
    for (int i = 0; i < M; ++i)
        for (int j = 0; j < M; ++j) acc += lx(i) * G(A.row(j).transpose() - A.row(i).transpose()) * ly(j);
    acc /= std::pow(2 * kPi, k.dim / 2.0);
    if (!semi) acc += lx.dot(ly);
    return acc;
}

}  // namespace

TEST_CASE("kernel spot values") {
    CHECK(kernel_eval(KernelSpec::thin_plate(1.0, 2, 2), vec({1, 0})) == 0.0);
    CHECK(kernel_eval(KernelSpec::multiquadric(1.0, 1, 2), vec({0, 0})) == doctest::Approx(-1.0));
    CHECK(kernel_eval(KernelSpec::gaussian(1, 3), vec({0.6, 0.8, 0})) == doctest::Approx(0.367879441171442));
    CHECK(kernel_eval(KernelSpec::shifted_thin_plate(1.0, 1.0, 2, 1), vec({0})) == 0.0);
    CHECK(kernel_eval(KernelSpec::thin_plate(1.5, 2, 1), vec({2})) == doctest::Approx(8.0));
    CHECK(kernel_eval(KernelSpec::inverse_multiquadric(2.0, 1, 2), vec({0, 0})) == doctest::Approx(0.5));
}

TEST_CASE("kernels match their closed forms") {
    const std::vector<KernelSpec> specs = {
        KernelSpec::thin_plate(0.5, 1, 2),          KernelSpec::thin_plate(1.0, 2, 2),
        KernelSpec::thin_plate(1.5, 2, 1),          KernelSpec::thin_plate(2.0, 3, 3),
        KernelSpec::thin_plate(2.5, 3, 1),          KernelSpec::shifted_thin_plate(0.5, 0.3, 1, 1),
        KernelSpec::shifted_thin_plate(1.0, 0.7, 2, 2), KernelSpec::shifted_thin_plate(-0.5, 1.2, 1, 2),
        KernelSpec::shifted_thin_plate(2.5, 0.4, 3, 1), KernelSpec::multiquadric(0.9, 1, 2),
        KernelSpec::inverse_multiquadric(1.1, 1, 3), KernelSpec::gaussian(2, 2)};
    for (const auto& k : specs)
        for (double r : {0.0, 1e-3, 0.37, 1.0, 2.2, 7.5}) {
            Vector x = Vector::Zero(k.dim);
            x(0) = r;
            const double want = oracle(k, r);
            CHECK(kernel_eval(k, x) == doctest::Approx(want).epsilon(1e-13).scale(1e-14));
        }
}

TEST_CASE("kernels are even and radial") {
    for (int d = 1; d <= 3; ++d)
        for (const auto& k : all_kernels(2, d)) {
            const PointSet P = gen_uniform(box(d, 2.0), 10, 7 + d);
            for (Eigen::Index i = 0; i < P.rows(); ++i) {
                const Vector x = P.row(i).transpose();
                CHECK(kernel_eval(k, x) == kernel_eval(k, -x));
                if (d >= 2) {
                    // rotate the first two coordinates by an arbitrary angle
                    Vector y = x;
                    const double c = std::cos(0.7), s = std::sin(0.7);
                    y(0) = c * x(0) - s * x(1);
                    y(1) = s * x(0) + c * x(1);
                    CHECK(std::abs(kernel_eval(k, x) - kernel_eval(k, y)) <= 1e-12 * std::max(1.0, std::abs(kernel_eval(k, x))));
                }
            }
        }
}

TEST_CASE("thin plate splines are continuous at the origin") {
    for (double s : {1.0, 1.5, 2.0, 2.5})
        CHECK(std::abs(kernel_eval(KernelSpec::thin_plate(s, 3, 2), vec({1e-8, 0}))) <= 1e-12);
}

TEST_CASE("parameter ranges are enforced") {
    CHECK_THROWS_AS(KernelSpec::thin_plate(0.0, 2, 1), ParameterError);
    CHECK_THROWS_AS(KernelSpec::thin_plate(2.0, 2, 1), ParameterError);
    CHECK_THROWS_AS(KernelSpec::shifted_thin_plate(1.0, 0.0, 2, 1), ParameterError);
    CHECK_THROWS_AS(KernelSpec::shifted_thin_plate(-1.0, 1.0, 2, 2), ParameterError);
    CHECK_NOTHROW(KernelSpec::shifted_thin_plate(-0.4, 1.0, 2, 1));
    CHECK_THROWS_AS(KernelSpec::multiquadric(-1.0, 1, 2), ParameterError);
    CHECK_THROWS_AS(KernelSpec::inverse_multiquadric(0.0, 1, 2), ParameterError);
    CHECK_THROWS_AS(KernelSpec::gaussian(0, 1), ParameterError);
    CHECK_THROWS_AS(KernelSpec::gaussian(1, 0), ParameterError);
}

TEST_CASE("kernel evaluation rejects NaN and dimension mismatch") {
    const auto k = KernelSpec::gaussian(1, 2);
    CHECK_THROWS_AS(kernel_eval(k, vec({NAN, 0})), InputError);
    CHECK_THROWS_AS(kernel_eval(k, vec({0})), InputError);
}

TEST_CASE("kernel text syntax") {
    CHECK(parse_kernel("thinplate:s=1.5", 2, 1) == KernelSpec::thin_plate(1.5, 2, 1));
    CHECK(parse_kernel("shifted-tps:s=1,a=0.5", 2, 2) == KernelSpec::shifted_thin_plate(1.0, 0.5, 2, 2));
    CHECK(parse_kernel("shifted-tps:a=0.5,s=1", 2, 2) == KernelSpec::shifted_thin_plate(1.0, 0.5, 2, 2));
    CHECK(parse_kernel("mq:a=1", 1, 2) == KernelSpec::multiquadric(1.0, 1, 2));
    CHECK(parse_kernel("imq:a=1", 1, 2) == KernelSpec::inverse_multiquadric(1.0, 1, 2));
    CHECK(parse_kernel("gauss", 2, 3) == KernelSpec::gaussian(2, 3));
    for (const char* bad : {"thinplate", "thinplate:s=", "thinplate:s=x", "mq:b=1", "gauss:a=1", "spline:s=1",
                            "thinplate:s=1.5,s=1.5", "thinplate:s=3", "thinplate:s=1.5,a=1", "mq:a=1,s=1"})
        CHECK_THROWS_AS(parse_kernel(bad, 2, 1), ParameterError);
    for (const auto& k : all_kernels(3, 2)) CHECK(parse_kernel(format_kernel(k), 3, 2) == k);
}

TEST_CASE("predicted orders") {
    const auto tps = predicted_orders(KernelSpec::thin_plate(1.5, 2, 1));
    CHECK(tps.eta == doctest::Approx(1.0));
    CHECK(tps.delta_G == doctest::Approx(0.0));
    CHECK(tps.eta_G() == doctest::Approx(1.0));
    const auto sh = predicted_orders(KernelSpec::shifted_thin_plate(1.0, 1.0, 2, 1));
    CHECK(sh.eta == 2.0);
    CHECK(sh.delta_G == 0.5);
    CHECK(sh.eta_G() == 2.5);
    const auto g = predicted_orders(KernelSpec::gaussian(2, 1));
    CHECK(g.eta == 2.0);
    CHECK(g.delta_G == 0.0);
    const auto t1 = predicted_orders(KernelSpec::thin_plate(1.0, 2, 1));
    CHECK(t1.eta == doctest::Approx(0.5));
    CHECK(t1.delta_G == doctest::Approx(0.5 - 1e-6));
    const auto t07 = predicted_orders(KernelSpec::thin_plate(0.7, 2, 1));
    CHECK(t07.eta == doctest::Approx(0.5));
    CHECK(t07.delta_G == doctest::Approx(0.2));
    CHECK(predicted_orders(KernelSpec::multiquadric(1.0, 1, 2)).eta_G() == 1.5);
}

TEST_CASE("Riesz representer matches its defining expansion") {
    for (int d = 1; d <= 2; ++d)
        for (const auto& k : all_kernels(2, d)) {
            const auto sub = minimal_unisolvent_subset(PolyFrame(d, 2), gen_uniform(box(d, 1.0), 8, 21 + d));
            const PointSet P = gen_uniform(box(d, 1.5), 20, 30 + d);
            const PointSet Q = gen_uniform(box(d, 1.5), 20, 40 + d);
            for (Eigen::Index i = 0; i < P.rows(); ++i) {
                const Vector x = P.row(i).transpose(), y = Q.row(i).transpose();
                const double R = riesz_representer(k, sub.frame, x, y);
                const double r = semi_riesz(k, sub.frame, x, y);
                CHECK(R == doctest::Approx(oracle_riesz(k, sub.frame, x, y, false)).epsilon(1e-10).scale(1e-10));
                CHECK(r == doctest::Approx(oracle_riesz(k, sub.frame, x, y, true)).epsilon(1e-10).scale(1e-10));
                CHECK(std::abs(R - riesz_representer(k, sub.frame, y, x)) <= 1e-10);
                CHECK(std::abs(r - semi_riesz(k, sub.frame, y, x)) <= 1e-10);
                CHECK(semi_riesz(k, sub.frame, x, x) >= -1e-10);
                const Vector lx = sub.frame.cardinal_values(x);
                for (int j = 0; j < sub.frame.size(); ++j) {
                    CHECK(std::abs(riesz_representer(k, sub.frame, x, sub.frame.points().row(j)) - lx(j)) <= 1e-10);
                    CHECK(std::abs(semi_riesz(k, sub.frame, x, sub.frame.points().row(j))) <= 1e-10);
                }
            }
        }
}

TEST_CASE("representer spot values") {
    const UnisolventFrame uf(PolyFrame(1, 1), rows({{0}}));
    const auto g = KernelSpec::gaussian(1, 1);
    CHECK(semi_riesz(g, uf, vec({1}), vec({1})) == doctest::Approx(2 * (1 - std::exp(-1.0)) / std::sqrt(2 * kPi)));
    CHECK(riesz_representer(g, uf, vec({0}), vec({0})) == doctest::Approx(1.0));
    CHECK_THROWS_AS(semi_riesz(KernelSpec::gaussian(2, 1), uf, vec({1}), vec({1})), ParameterError);
}
