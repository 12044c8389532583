#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <set>

#include "rbfsmooth/errors.hpp"
#include "rbfsmooth/polyspace.hpp"
#include "support.hpp"

using namespace rbfs;
using namespace testing;

namespace {

long binomial(long n, long k) {
    long r = 1;
    for (long i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

// Brute force: every tuple in [0, theta)^d with total degree < theta.
std::set<MultiIndex> brute_indices(int d, int theta) {
    std::set<MultiIndex> out;
    MultiIndex a(d, 0);
    for (;;) {
        if (std::accumulate(a.begin(), a.end(), 0) < theta) out.insert(a);
        int j = 0;
        while (j < d && ++a[j] == theta) a[j++] = 0;
        if (j == d) break;
    }
    return out;
}

}  // namespace

TEST_CASE("multi-index enumeration examples") {
    CHECK(enumerate_multi_indices(1, 2) == std::vector<MultiIndex>{{0}, {1}});
    CHECK(enumerate_multi_indices(2, 2) == std::vector<MultiIndex>{{0, 0}, {1, 0}, {0, 1}});
    CHECK(enumerate_multi_indices(2, 3).size() == 6);
    CHECK(enumerate_multi_indices(2, 3) ==
          std::vector<MultiIndex>{{0, 0}, {1, 0}, {0, 1}, {2, 0}, {1, 1}, {0, 2}});
}

TEST_CASE("multi-index count matches binomial and brute force") {
    for (int d = 1; d <= 4; ++d)
        for (int theta = 1; theta <= 5; ++theta) {
            const auto idx = enumerate_multi_indices(d, theta);
            CHECK(static_cast<long>(idx.size()) == binomial(theta - 1 + d, d));
            CHECK(std::set<MultiIndex>(idx.begin(), idx.end()) == brute_indices(d, theta));
            for (std::size_t k = 1; k < idx.size(); ++k) CHECK(degree(idx[k - 1]) <= degree(idx[k]));
        }
}

TEST_CASE("multi-index enumeration rejects bad arguments") {
    CHECK_THROWS_AS(enumerate_multi_indices(0, 2), ParameterError);
    CHECK_THROWS_AS(enumerate_multi_indices(2, 0), ParameterError);
}

TEST_CASE("unisolvency matrix examples") {
    const Matrix P1 = unisolvency_matrix(PolyFrame(1, 2), rows({{0}, {1}}));
    CHECK(P1.isApprox(Matrix{{1, 0}, {1, 1}}));
    CHECK(unisolvency_matrix(PolyFrame(1, 2), rows({{2}})).isApprox(Matrix{{1, 2}}));
    const Matrix P2 = unisolvency_matrix(PolyFrame(2, 2), rows({{0, 0}, {1, 0}, {0, 1}}));
    CHECK(P2.isApprox(Matrix{{1, 0, 0}, {1, 1, 0}, {1, 0, 1}}));
}

TEST_CASE("unisolvency matrix matches direct monomial evaluation") {
    const PolyFrame f(2, 4);
    const PointSet X = gen_uniform(box(2, 1.0), 7, 3);
    const Matrix P = unisolvency_matrix(f, X);
    for (Eigen::Index i = 0; i < X.rows(); ++i)
        for (int j = 0; j < f.size(); ++j) {
            const auto& a = f.indices()[j];
            CHECK(P(i, j) == doctest::Approx(std::pow(X(i, 0), a[0]) * std::pow(X(i, 1), a[1])).epsilon(1e-14));
        }
}

TEST_CASE("is_unisolvent examples") {
    CHECK(is_unisolvent(PolyFrame(1, 2), rows({{0}, {1}})));
    CHECK_FALSE(is_unisolvent(PolyFrame(2, 2), rows({{0, 0}, {1, 0}, {2, 0}})));
    CHECK_FALSE(is_unisolvent(PolyFrame(1, 3), rows({{0}, {1}})));
}

TEST_CASE("duplicate points are an input error") {
    CHECK_THROWS_AS(is_unisolvent(PolyFrame(1, 2), rows({{0}, {1}, {0}})), InputError);
}

TEST_CASE("numerical rank uses a relative tolerance") {
    Matrix m = Matrix::Identity(3, 3);
    m(2, 2) = 1e-11;
    CHECK(numerical_rank(m) == 2);
    m(2, 2) = 1e-9;
    CHECK(numerical_rank(m) == 3);
}

TEST_CASE("minimal unisolvent subset examples") {
    {
        const auto s = minimal_unisolvent_subset(PolyFrame(1, 2), rows({{0}, {1}, {2}}));
        CHECK(s.indices == std::vector<int>{0, 1});
        // l1 = 1 - x, l2 = x
        for (double x : {-0.7, 0.3, 2.5}) {
            const Vector l = s.frame.cardinal_values(vec({x}));
            CHECK(l(0) == doctest::Approx(1 - x));
            CHECK(l(1) == doctest::Approx(x));
        }
    }
    {
        const auto s = minimal_unisolvent_subset(PolyFrame(1, 1), rows({{5}}));
        CHECK(s.indices == std::vector<int>{0});
        CHECK(s.frame.cardinal_values(vec({-3}))(0) == doctest::Approx(1.0));
    }
    {
        const auto s = minimal_unisolvent_subset(PolyFrame(2, 2), rows({{0, 0}, {1, 0}, {2, 0}, {0, 1}}));
        CHECK(s.indices == std::vector<int>{0, 1, 3});
    }
    CHECK_THROWS_AS(minimal_unisolvent_subset(PolyFrame(2, 2), rows({{0, 0}, {1, 1}, {2, 2}})), UnisolvencyError);
}

TEST_CASE("minimal subsets are unisolvent with exactly M points and a cardinal basis") {
    for (int d = 1; d <= 3; ++d)
        for (int theta = 1; theta <= 4; ++theta) {
            const PolyFrame f(d, theta);
            const PointSet X = gen_uniform(box(d, 1.0), f.size() + 10, 10 * d + theta);
            const auto s = minimal_unisolvent_subset(f, X);
            CHECK(static_cast<int>(s.indices.size()) == f.size());
            CHECK(is_unisolvent(f, s.frame.points()));
            for (int i = 0; i < f.size(); ++i) {
                const Vector l = s.frame.cardinal_values(s.frame.points().row(i));
                for (int j = 0; j < f.size(); ++j) CHECK(std::abs(l(j) - (i == j)) <= 1e-10);
            }
        }
}

TEST_CASE("Lagrange operator examples") {
    const UnisolventFrame uf(PolyFrame(1, 2), rows({{0}, {1}}));
    CHECK(lagrange_apply(uf, vec({3, 5}), vec({0.5})).Pf == doctest::Approx(4.0));
    CHECK(lagrange_apply(uf, vec({0, 0}), vec({0.25})).Pf == 0.0);
    const LagrangeValue lv = lagrange_apply(uf, vec({3, 5}), vec({0.5}), 10.0);
    CHECK(lv.Qf == doctest::Approx(6.0));
    CHECK(std::isnan(lagrange_apply(uf, vec({3, 5}), vec({0.5})).Qf));
}

TEST_CASE("P reproduces polynomials, is a projection and ignores the order of A") {
    for (int d = 1; d <= 2; ++d)
        for (int theta = 1; theta <= 3; ++theta) {
            const PolyFrame f(d, theta);
            const auto sub = minimal_unisolvent_subset(f, gen_uniform(box(d, 1.0), f.size() + 5, 40 + theta));
            const UnisolventFrame& uf = sub.frame;
            const Vector c = uniform_vector(f.size(), 50 + theta);
            auto p = [&](PointRef x) { return f.monomials(x).dot(c); };
            Vector samples(f.size());
            for (int i = 0; i < f.size(); ++i) samples(i) = p(uf.points().row(i));

            // an arbitrary function, its projection, and the projection of the projection
            auto g = [](PointRef x) { return std::exp(x(0)) + std::cos(3 * x(x.size() - 1)); };
            Vector gs(f.size());
            for (int i = 0; i < f.size(); ++i) gs(i) = g(uf.points().row(i));
            Vector pgs(f.size());
            for (int i = 0; i < f.size(); ++i) pgs(i) = lagrange_apply(uf, gs, uf.points().row(i)).Pf;

            // reversed A with samples reversed identically
            PointSet Arev = uf.points().colwise().reverse();
            const UnisolventFrame ufr(f, Arev);
            const Vector gsr = gs.reverse();

            const PointSet probes = gen_uniform(box(d, 1.0), 20, 60 + theta);
            for (Eigen::Index k = 0; k < probes.rows(); ++k) {
                const auto x = probes.row(k);
                CHECK(std::abs(lagrange_apply(uf, samples, x).Pf - p(x)) <= 1e-10);
                const double Pg = lagrange_apply(uf, gs, x).Pf;
                CHECK(std::abs(lagrange_apply(uf, pgs, x).Pf - Pg) <= 1e-10);
                const double Qg = lagrange_apply(uf, gs, x, g(x)).Qf;
                // Q(Qg) = Qg: Qg vanishes on A, so its projection is zero
                CHECK(std::abs(Qg - (g(x) - Pg)) <= 1e-12);
                CHECK(std::abs(lagrange_apply(ufr, gsr, x).Pf - Pg) <= 1e-10);
            }
            Vector qgs(f.size());
            for (int i = 0; i < f.size(); ++i) qgs(i) = lagrange_apply(uf, gs, uf.points().row(i), gs(i)).Qf;
            CHECK(qgs.lpNorm<Eigen::Infinity>() <= 1e-10);
        }
}
