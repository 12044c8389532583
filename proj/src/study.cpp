#include "rbfsmooth/study.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iomanip>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>

#include "rbfsmooth/approx_smoother.hpp"
#include "rbfsmooth/exact_smoother.hpp"

namespace rbfs {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::uint64_t splitmix64(std::uint64_t& x) {
    std::uint64_t z = (x += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

}  // namespace

// ---- regions and sampling ------------------------------------------------

void Region::validate() const {
    if (lo.size() == 0 || lo.size() != hi.size()) throw ParameterError("region corners disagree in dimension");
    for (Eigen::Index i = 0; i < lo.size(); ++i)
        if (!(hi(i) > lo(i))) throw ParameterError("region needs hi > lo in every dimension");
}

Region Region::shrunk(double fraction) const {
    const Vector w = hi - lo;
    return {lo + fraction * w, hi - fraction * w};
}

Region Region::scaled(double factor) const { return {factor * lo, factor * hi}; }

Region parse_region(const std::string& text) {
    const auto colon = text.find(':');
    if (colon == std::string::npos || text.find(':', colon + 1) != std::string::npos)
        throw ParameterError("box must look like a1,..,ad:b1,..,bd, got '" + text + "'");
    auto parse_list = [&](const std::string& s) {
        std::vector<double> out;
        std::stringstream ss(s);
        for (std::string tok; std::getline(ss, tok, ',');) {
            std::size_t used = 0;
            double x = 0.0;
            try {
                x = std::stod(tok, &used);
            } catch (const std::exception&) {
                used = 0;
            }
            if (tok.empty() || used != tok.size()) throw ParameterError("box corner '" + tok + "' is not a number");
            out.push_back(x);
        }
        return out;
    };
    const auto a = parse_list(text.substr(0, colon));
    const auto b = parse_list(text.substr(colon + 1));
    if (a.size() != b.size() || a.empty()) throw ParameterError("box corners disagree in dimension");
    Region r{Eigen::Map<const Vector>(a.data(), a.size()), Eigen::Map<const Vector>(b.data(), b.size())};
    r.validate();
    return r;
}

Rng::Rng(std::uint64_t seed) {
    for (auto& s : s_) s = splitmix64(seed);
}

std::uint64_t Rng::next() {
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
}

double Rng::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

PointSet gen_uniform(const Region& region, long N, std::uint64_t seed) {
    return gen_uniform_avoiding(region, N, seed, PointSet(0, region.dim()));
}

PointSet gen_uniform_avoiding(const Region& region, long N, std::uint64_t seed, const PointSet& avoid,
                              double min_gap) {
    region.validate();
    if (N < 1) throw ParameterError("sample size must be >= 1");
    const int d = region.dim();
    const Vector w = region.hi - region.lo;
    Rng rng(seed);
    PointSet X(N, d);
    for (long i = 0; i < N; ++i) {
        for (;;) {
            for (int j = 0; j < d; ++j) X(i, j) = region.lo(j) + w(j) * rng.uniform();
            bool clash = false;
            for (Eigen::Index k = 0; k < avoid.rows() && !clash; ++k)
                clash = (X.row(i) - avoid.row(k)).norm() < min_gap;
            if (!clash) break;
        }
    }
    return X;
}

PointSet probe_grid(const Region& region, int per_axis) {
    region.validate();
    if (per_axis < 2) throw ParameterError("probe grid needs at least 2 points per axis");
    const int d = region.dim();
    long total = 1;
    for (int i = 0; i < d; ++i) total *= per_axis;
    PointSet P(total, d);
    std::vector<int> idx(d, 0);
    for (long row = 0; row < total; ++row) {
        for (int j = 0; j < d; ++j)
            P(row, j) = region.lo(j) + (region.hi(j) - region.lo(j)) * idx[j] / static_cast<double>(per_axis - 1);
        for (int j = d - 1; j >= 0; --j) {
            if (++idx[j] < per_axis) break;
            idx[j] = 0;
        }
    }
    return P;
}

int default_density_resolution(int d) {
    if (d == 1) return 10000;
    if (d == 2) return 256;
    return 32;
}

Vector nearest_distances(const PointSet& Q, const PointSet& X) {
    if (X.rows() == 0) throw InputError("distance to an empty point set");
    if (Q.cols() != X.cols()) throw InputError("point sets differ in dimension");
    Vector out(Q.rows());
    if (X.cols() == 1) {
        std::vector<double> xs(X.data(), X.data() + X.rows());
        std::sort(xs.begin(), xs.end());
        for (Eigen::Index i = 0; i < Q.rows(); ++i) {
            const double q = Q(i, 0);
            auto it = std::lower_bound(xs.begin(), xs.end(), q);
            double best = std::numeric_limits<double>::infinity();
            if (it != xs.end()) best = *it - q;
            if (it != xs.begin()) best = std::min(best, q - *(it - 1));
            out(i) = best;
        }
        return out;
    }
    for (Eigen::Index i = 0; i < Q.rows(); ++i)
        out(i) = std::sqrt((X.rowwise() - Q.row(i)).rowwise().squaredNorm().minCoeff());
    return out;
}

double cavity_density(const Region& region, const PointSet& X, int probe_per_axis) {
    if (X.rows() == 0) throw InputError("cavity density of an empty point set");
    return nearest_distances(probe_grid(region, probe_per_axis), X).maxCoeff();
}

// ---- density law ---------------------------------------------------------

LineFit ols(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) throw InputError("least squares needs at least two points");
    const double n = static_cast<double>(x.size());
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx == 0.0) throw InputError("least squares needs distinct abscissae");
    LineFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    f.r2 = syy == 0.0 ? 1.0 : (sxy * sxy) / (sxx * syy);
    return f;
}

DensityFit fit_density(std::vector<DensityRow> rows) {
    std::vector<double> lx, ly;
    for (const auto& r : rows) {
        lx.push_back(std::log10(static_cast<double>(r.N)));
        ly.push_back(std::log10(r.h));
    }
    const LineFit f = ols(lx, ly);
    DensityFit out;
    out.rows = std::move(rows);
    out.h1 = std::pow(10.0, f.intercept);
    out.a_exp = -f.slope;
    out.r2 = f.r2;
    return out;
}

std::vector<long> exponential_sizes(long max, int count, double multiplier) {
    if (max < 1 || count < 1 || !(multiplier > 1.0)) throw ParameterError("invalid exponential size schedule");
    std::vector<long> sizes;
    for (int k = count - 1; k >= 0; --k) {
        const long n = std::max(1L, std::lround(static_cast<double>(max) / std::pow(multiplier, k)));
        if (sizes.empty() || n > sizes.back()) sizes.push_back(n);
    }
    return sizes;
}

DensityFit density_law(const Region& region, const std::vector<long>& sizes, std::uint64_t seed, int probe_per_axis) {
    if (sizes.size() < 2) throw ParameterError("density law needs at least two sizes");
    for (std::size_t i = 1; i < sizes.size(); ++i)
        if (sizes[i] <= sizes[i - 1]) throw ParameterError("density law sizes must be strictly increasing");
    const int res = probe_per_axis > 0 ? probe_per_axis : default_density_resolution(region.dim());
    const PointSet probes = probe_grid(region, res);
    std::vector<DensityRow> rows;
    for (std::size_t k = 0; k < sizes.size(); ++k) {
        const PointSet X = gen_uniform(region, sizes[k], seed + k);
        rows.push_back({sizes[k], nearest_distances(probes, X).maxCoeff()});
    }
    return fit_density(std::move(rows));
}

// ---- convergence sweeps --------------------------------------------------

std::string_view sweep_mode_name(SweepMode m) {
    switch (m) {
        case SweepMode::Interpolant: return "interpolant";
        case SweepMode::Exact: return "exact";
        case SweepMode::Approx: return "approx";
    }
    return "?";
}

SweepMode sweep_mode_from_name(std::string_view name) {
    for (SweepMode m : {SweepMode::Interpolant, SweepMode::Exact, SweepMode::Approx})
        if (sweep_mode_name(m) == name) return m;
    throw ParameterError("unknown sweep mode '" + std::string(name) + "'");
}

double RhoCoupling::rho(double h, double eta_G) const {
    const double sqrt_rho = (A / B) * (2.0 * a * eta_G / std::pow(h1, 1.0 / (2.0 * a))) *
                            std::pow(h, eta_G + 1.0 / (2.0 * a));
    return sqrt_rho * sqrt_rho;
}

namespace {

int error_probe_resolution(int d) {
    if (d == 1) return 1000;
    if (d == 2) return 64;
    return 16;
}

PointSet approx_centers(const Region& region, int theta, long N, int per_axis) {
    const int d = region.dim();
    int n = per_axis;
    if (n <= 0) {
        const double root = std::pow(static_cast<double>(N), 1.0 / d);
        n = std::max(theta + 1, static_cast<int>(std::min(200.0, std::floor(root / 4.0))));
    }
    const GridSpec gs = closed_grid(region.lo, region.hi, std::vector<int>(d, std::max(n, 2)));
    return make_grid(gs, theta).points;
}

}  // namespace

StudyReport convergence_sweep(const KernelSpec& spec, const PolyFrame& frame, const Region& region,
                              const DataFunction& data_fn, SweepMode mode, const SweepConfig& cfg) {
    region.validate();
    if (region.dim() != spec.dim) throw ParameterError("region dimension does not match the kernel");
    if (cfg.sizes.size() < 2) throw ParameterError("a sweep needs at least two sizes");
    for (std::size_t i = 1; i < cfg.sizes.size(); ++i)
        if (cfg.sizes[i] <= cfg.sizes[i - 1]) throw ParameterError("sweep sizes must be increasing");

    const int d = region.dim();
    const PointSet probes = probe_grid(region.shrunk(cfg.interior_shrink),
                                       cfg.error_probes_per_axis > 0 ? cfg.error_probes_per_axis
                                                                     : error_probe_resolution(d));
    Vector truth(probes.rows());
    for (Eigen::Index i = 0; i < probes.rows(); ++i) truth(i) = data_fn(probes.row(i));
    const PointSet density_probes = probe_grid(
        region, cfg.density_probes_per_axis > 0 ? cfg.density_probes_per_axis : default_density_resolution(d));

    StudyReport report;
    report.predicted = predicted_orders(spec);
    const double eta_G = cfg.coupling.eta_G.value_or(report.predicted.eta_G());

    std::vector<double> log_h, log_err;
    double max_err = 0.0;
    for (std::size_t k = 0; k < cfg.sizes.size(); ++k) {
        SweepRow row;
        row.N = cfg.sizes[k];
        const std::uint64_t row_seed = cfg.seed + k;
        const PointSet X = gen_uniform_avoiding(region, row.N, row_seed, probes);
        Vector y(row.N);
        for (long i = 0; i < row.N; ++i) y(i) = data_fn(X.row(i));
        if (cfg.noise > 0.0) {
            Rng noise_rng(row_seed ^ 0x5bd1e995ULL);
            for (long i = 0; i < row.N; ++i) y(i) += cfg.noise * (2.0 * noise_rng.uniform() - 1.0);
        }
        row.h = nearest_distances(density_probes, X).maxCoeff();
        row.rho = mode == SweepMode::Interpolant ? 0.0 : cfg.rho_fixed.value_or(cfg.coupling.rho(row.h, eta_G));
        try {
            FittedModel m;
            switch (mode) {
                case SweepMode::Interpolant: m = fit_interpolant(spec, frame, X, y); break;
                case SweepMode::Exact: m = fit_exact(spec, frame, X, y, row.rho); break;
                case SweepMode::Approx:
                    m = fit_approx(spec, frame, X, y, approx_centers(region, spec.theta, row.N, cfg.approx_grid_per_axis),
                                   row.rho);
                    break;
            }
            row.err_max = (eval_model(m, probes) - truth).lpNorm<Eigen::Infinity>();
            row.Je = smoothing_functional(m, X, y, row.rho);
        } catch (const std::exception& e) {
            row.ok = false;
            row.failure = e.what();
            row.err_max = kNaN;
            row.Je = kNaN;
        }
        if (row.ok) {
            max_err = std::max(max_err, row.err_max);
            log_h.push_back(std::log(row.h));
            log_err.push_back(std::log(std::max(row.err_max, std::numeric_limits<double>::min())));
        }
        row.slope_partial = log_h.size() >= 2 ? ols(log_h, log_err).slope : kNaN;
        report.rows.push_back(row);
    }
    report.slope_defined = log_h.size() >= 2 && max_err > 1e-8;
    report.slope = report.slope_defined ? ols(log_h, log_err).slope : kNaN;
    return report;
}

void write_report_csv(const StudyReport& report, std::ostream& os) {
    os << "N,h,err_max,rho,Je,slope_partial\n";
    os << std::setprecision(10);
    for (const auto& r : report.rows)
        os << r.N << ',' << r.h << ',' << r.err_max << ',' << r.rho << ',' << r.Je << ',' << r.slope_partial << '\n';
}

// ---- representer data ----------------------------------------------------

double RepresenterData::operator()(PointRef x) const {
    double acc = 0.0;
    for (Eigen::Index k = 0; k < centers.rows(); ++k)
        if (beta(k) != 0.0) acc += beta(k) * riesz_representer(spec, uf, centers.row(k), x);
    return acc;
}

RepresenterData representer_data(const KernelSpec& spec, const UnisolventFrame& uf, const PointSet& centers,
                                 const Vector& beta) {
    if (uf.frame().dim() != spec.dim || uf.frame().theta() != spec.theta)
        throw ParameterError("unisolvent frame does not match the kernel order and dimension");
    if (centers.cols() != spec.dim) throw InputError("representer centers have the wrong dimension");
    if (beta.size() != centers.rows()) throw InputError("one coefficient per representer center is required");

    const Eigen::Index K = centers.rows();
    const int M = uf.size();
    const PointSet& A = uf.points();
    const double c = 1.0 / two_pi_pow_half_d(spec.dim);
    const Matrix G_AA = basis_matrix(spec, A, A);
    const Matrix G_AX = basis_matrix(spec, A, centers);  // G(a_j - x_k)

    RepresenterData r{spec, uf, centers, beta, {}, 0.0};
    FittedModel& m = r.expansion;
    m.spec = spec;
    m.frame = uf.frame();
    m.kind = ModelKind::Interpolant;
    m.centers.resize(K + M, spec.dim);
    m.centers.topRows(K) = centers;
    m.centers.bottomRows(M) = A;
    m.v = Vector::Zero(K + M);
    Vector q = Vector::Zero(M);  // coefficients on the cardinal basis l_j
    for (Eigen::Index k = 0; k < K; ++k) {
        const Vector lx = uf.cardinal_values(centers.row(k));
        m.v(k) += c * beta(k);
        m.v.tail(M) -= c * beta(k) * lx;
        q += beta(k) * (-c * G_AX.col(k) + c * G_AA * lx + lx);
    }
    m.beta = uf.cardinal().transpose() * q;

    for (Eigen::Index j = 0; j < K; ++j)
        for (Eigen::Index k = 0; k < K; ++k)
            r.seminorm_sq += beta(j) * beta(k) * semi_riesz(spec, uf, centers.row(k), centers.row(j));
    return r;
}

// ---- rho search ----------------------------------------------------------

ErrorFunction delta1_error(Fitter fitter, DataFunction truth, PointSet error_grid) {
    Vector t(error_grid.rows());
    for (Eigen::Index i = 0; i < error_grid.rows(); ++i) t(i) = truth(error_grid.row(i));
    return [fitter = std::move(fitter), grid = std::move(error_grid), t](double rho) {
        return (eval_model(fitter(rho), grid) - t).squaredNorm();
    };
}

ErrorFunction delta2_error(Fitter fitter, PointSet X, Vector y) {
    return [fitter = std::move(fitter), X = std::move(X), y = std::move(y)](double rho) {
        return (eval_model(fitter(rho), X) - y).squaredNorm();
    };
}

namespace {

std::string format_rho(double rho) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", rho);
    return buf;
}

}  // namespace

RhoSearchResult rho_search(const ErrorFunction& error_fn, const RhoSearchOptions& opt) {
    if (!(opt.rho0 > 0.0)) throw ParameterError("rho search needs rho0 > 0");
    if (!(opt.factor > 1.0)) throw ParameterError("rho search needs factor > 1");
    RhoSearchResult res;
    auto evaluate = [&](int iter, double rho) {
        double e = kNaN;
        try {
            e = error_fn(rho);
        } catch (const NumericalError& ex) {
            res.trace.push_back({iter, rho, kNaN});
            throw SearchError("error function failed at rho = " + format_rho(rho) + ": " + ex.what(),
                              res.trace);
        }
        res.trace.push_back({iter, rho, e});
        if (!std::isfinite(e))
            throw SearchError("error function is not finite at rho = " + format_rho(rho), res.trace);
        return e;
    };
    auto relative = [](double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); };

    double rho = opt.rho0;
    double err = evaluate(0, rho);
    double step = opt.factor;
    for (int it = 1; it <= opt.max_iter; ++it) {
        res.iterations = it;
        const double up = evaluate(it, rho * step);
        const double down = evaluate(it, rho / step);
        const bool go_down = down < up;
        const double best = go_down ? down : up;
        const double err_change = relative(best, err);
        if (best < err) {
            rho = go_down ? rho / step : rho * step;
            err = best;
        } else {
            step = std::sqrt(step);
        }
        if (err_change < opt.error_tol) {
            res.stop = RhoStop::ErrorChange;
            break;
        }
        if (step - 1.0 < opt.rho_tol) {
            res.stop = RhoStop::RhoChange;
            break;
        }
    }
    res.rho = rho;
    res.error = err;
    return res;
}

}  // namespace rbfs
