#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "rbfsmooth/errors.hpp"
#include "rbfsmooth/kernels.hpp"
#include "rbfsmooth/model.hpp"

namespace rbfs {

// Axis-aligned box [lo, hi].
struct Region {
    Vector lo;
    Vector hi;

    int dim() const { return static_cast<int>(lo.size()); }
    void validate() const;
    Region shrunk(double fraction) const;  // pulls each face in by fraction * width
    Region scaled(double factor) const;    // multiplies both corners by factor
};

// Parses `a1,...,ad:b1,...,bd`.
Region parse_region(const std::string& text);

// splitmix64 seeding a xoshiro256** stream; uniform doubles use the top 53 bits.
class Rng {
public:
    explicit Rng(std::uint64_t seed);
    std::uint64_t next();
    double uniform();  // [0, 1)

private:
    std::uint64_t s_[4];
};

// N i.i.d. uniform points in the box; identical for identical seeds.
PointSet gen_uniform(const Region& region, long N, std::uint64_t seed);

// Same, redrawing any point within `min_gap` of a row of `avoid`.
PointSet gen_uniform_avoiding(const Region& region, long N, std::uint64_t seed, const PointSet& avoid,
                              double min_gap = 1e-12);

// per_axis^d points spanning the closed box, last dimension fastest.
PointSet probe_grid(const Region& region, int per_axis);

// 10^4 probes in d = 1, 256^2 in d = 2, 32^d beyond.
int default_density_resolution(int d);

// Distance from each query row to its nearest row of X.
Vector nearest_distances(const PointSet& queries, const PointSet& X);

// h_X = max over a probe grid of dist(probe, X).
double cavity_density(const Region& region, const PointSet& X, int probe_per_axis);

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
};

// Ordinary least squares y = intercept + slope x.
LineFit ols(const std::vector<double>& x, const std::vector<double>& y);

struct DensityRow {
    long N;
    double h;
};

// h_X ~ h1 N^{-a_exp}, fitted on (log10 N, log10 h).
struct DensityFit {
    std::vector<DensityRow> rows;
    double h1 = 0.0;
    double a_exp = 0.0;
    double r2 = 0.0;
};

DensityFit fit_density(std::vector<DensityRow> rows);

// `count` sizes max / multiplier^k, rounded and strictly increasing.
std::vector<long> exponential_sizes(long max, int count, double multiplier);

DensityFit density_law(const Region& region, const std::vector<long>& sizes, std::uint64_t seed,
                       int probe_per_axis = 0);

using DataFunction = std::function<double(PointRef)>;

enum class SweepMode { Interpolant, Exact, Approx };

std::string_view sweep_mode_name(SweepMode m);
SweepMode sweep_mode_from_name(std::string_view name);

// sqrt(rho) = (A/B) (2 a eta_G / h1^{1/(2a)}) h^{eta_G + 1/(2a)}, i.e. rho ~ h^{2 eta_G + 1/a}.
struct RhoCoupling {
    double A = 1.0;
    double B = 1.0;
    double h1 = 3.09;
    double a = 0.81;
    std::optional<double> eta_G;  // defaults to predicted_orders(spec).eta_G()

    double rho(double h, double eta_G) const;
};

struct SweepConfig {
    std::vector<long> sizes;
    std::uint64_t seed = 1;
    std::optional<double> rho_fixed;  // used by exact/approx modes when set
    RhoCoupling coupling;             // used otherwise
    int error_probes_per_axis = 0;    // 0: 1000 in d = 1, 64 in d = 2, 16 beyond
    int density_probes_per_axis = 0;  // 0: default_density_resolution(d)
    double interior_shrink = 0.05;
    int approx_grid_per_axis = 0;     // 0: max(theta + 1, min(200, N / 4)) in d = 1
    double noise = 0.0;               // uniform perturbation amplitude added to y
};

struct SweepRow {
    long N = 0;
    double h = 0.0;
    double err_max = 0.0;
    double rho = 0.0;
    double Je = 0.0;
    double slope_partial = 0.0;  // NaN until two rows succeed
    bool ok = true;
    std::string failure;
};

struct StudyReport {
    std::vector<SweepRow> rows;
    double slope = 0.0;
    bool slope_defined = false;
    OrderPrediction predicted;
};

StudyReport convergence_sweep(const KernelSpec& spec, const PolyFrame& frame, const Region& region,
                              const DataFunction& data_fn, SweepMode mode, const SweepConfig& config);

// CSV columns N,h,err_max,rho,Je,slope_partial.
void write_report_csv(const StudyReport& report, std::ostream& os);

// f_d = sum_k beta_k R_{x_k}, with the same function expanded as a model in
// W_G over the centers X'' followed by A.
struct RepresenterData {
    KernelSpec spec;
    UnisolventFrame uf;
    PointSet centers;
    Vector beta;
    FittedModel expansion;
    double seminorm_sq = 0.0;  // sum_{j,k} beta_j beta_k r_{x_k}(x_j)

    double operator()(PointRef x) const;
};

RepresenterData representer_data(const KernelSpec& spec, const UnisolventFrame& uf, const PointSet& centers,
                                 const Vector& beta);

using ErrorFunction = std::function<double(double rho)>;
using Fitter = std::function<FittedModel(double rho)>;

// delta_1: sum of squared errors against a known data function on an error grid.
ErrorFunction delta1_error(Fitter fitter, DataFunction truth, PointSet error_grid);
// delta_2: sum of squared residuals at the data points.
ErrorFunction delta2_error(Fitter fitter, PointSet X, Vector y);

struct RhoSearchOptions {
    double rho0 = 1e-3;
    double factor = 10.0;
    double error_tol = 0.01;  // relative change of the error
    double rho_tol = 0.01;    // relative change of rho
    int max_iter = 60;
};

struct RhoTraceEntry {
    int iter;
    double rho;
    double error;
};

enum class RhoStop { ErrorChange, RhoChange, MaxIterations };

struct RhoSearchResult {
    double rho = 0.0;
    double error = 0.0;
    RhoStop stop = RhoStop::MaxIterations;
    int iterations = 0;
    std::vector<RhoTraceEntry> trace;
};

class SearchError : public NumericalError {
public:
    SearchError(const std::string& what, std::vector<RhoTraceEntry> trace)
        : NumericalError(what), trace_(std::move(trace)) {}
    const std::vector<RhoTraceEntry>& trace() const noexcept { return trace_; }

private:
    std::vector<RhoTraceEntry> trace_;
};

// Multiplies and divides rho by a factor, moving to whichever neighbor has the
// smaller error; when neither improves, the factor is square-rooted.
RhoSearchResult rho_search(const ErrorFunction& error_fn, const RhoSearchOptions& options);

}  // namespace rbfs
