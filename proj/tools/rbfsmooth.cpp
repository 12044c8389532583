// rbfsmooth: fit, evaluate and study radial basis function interpolants and smoothers.
//
// Exit codes: 0 success, 2 bad input (flags, files, parameters), 3 numerical failure.

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>

#include "rbfsmooth/approx_smoother.hpp"
#include "rbfsmooth/errors.hpp"
#include "rbfsmooth/exact_smoother.hpp"
#include "rbfsmooth/io.hpp"
#include "rbfsmooth/study.hpp"

namespace {

using namespace rbfs;

struct Globals {
    std::uint64_t seed = 1;
    std::string out;
    bool quiet = false;
};

struct FitArgs {
    std::string data;
    std::string kernel;
    int theta = 0;
    std::string delimiter = "auto";
    std::string columns;
    std::string eval;
    std::string save;
};

// Reruns f, prefixing input errors with the flag that supplied the value.
template <class F>
auto for_flag(const std::string& flag, F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const InputError& e) {
        throw InputError(flag + ": " + e.what());
    }
}

class Output {
public:
    explicit Output(const std::string& path) {
        if (!path.empty()) {
            file_.open(path);
            if (!file_) throw InputError("--out: cannot open '" + path + "' for writing");
        }
    }
    std::ostream& stream() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }

private:
    std::ofstream file_;
};

CsvOptions csv_options(const FitArgs& a) {
    CsvOptions o;
    o.delimiter = for_flag("--delimiter", [&] { return delimiter_from_name(a.delimiter); });
    if (!a.columns.empty()) o.columns = for_flag("--columns", [&] { return parse_columns(a.columns); });
    return o;
}

struct Problem {
    DataTable data;
    KernelSpec spec;
    PolyFrame frame{1, 1};
};

Problem load_problem(const FitArgs& a) {
    Problem p;
    p.data = for_flag("--data", [&] { return read_csv(a.data, csv_options(a)); });
    p.spec = for_flag("--kernel", [&] { return parse_kernel(a.kernel, a.theta, p.data.d); });
    p.frame = PolyFrame(p.data.d, a.theta);
    return p;
}

// A grid spec when the text is not an existing file.
PointSet eval_points(const std::string& text, int d, const CsvOptions& opt, int theta) {
    if (std::filesystem::exists(text)) return for_flag("--eval", [&] { return read_points(text, d, opt); });
    return for_flag("--eval", [&] {
        const GridSpec gs = parse_grid(text);
        if (gs.dim() != d) throw InputError("grid has dimension " + std::to_string(gs.dim()) + ", data has " +
                                            std::to_string(d));
        return make_grid(gs, theta).points;
    });
}

void emit(const Globals& g, const FittedModel& m, const Problem& p, const FitArgs& a) {
    if (!a.save.empty()) for_flag("--save", [&] { save_model(m, a.save); });
    const PointSet P = a.eval.empty() ? p.data.X : eval_points(a.eval, p.data.d, CsvOptions{}, p.spec.theta);
    Output out(g.out);
    write_predictions(out.stream(), P, eval_model(m, P));
}

void summarize(const Globals& g, const FittedModel& m, const Problem& p) {
    if (g.quiet) return;
    std::cerr << std::setprecision(6) << kind_name(m.kind) << ": N = " << p.data.X.rows() << ", centers = "
              << m.centers.rows() << ", kernel = " << format_kernel(m.spec) << ", theta = " << m.spec.theta
              << ", rho = " << m.rho << ", max|v| = " << m.v.lpNorm<Eigen::Infinity>() << '\n';
}

void add_fit_options(CLI::App* cmd, FitArgs& a) {
    cmd->add_option("--data", a.data, "CSV of x_1..x_d,y rows")->required();
    cmd->add_option("--kernel", a.kernel, "thinplate:s=S | shifted-tps:s=S,a=A | mq:a=A | imq:a=A | gauss")
        ->required();
    cmd->add_option("--theta", a.theta, "order of the basis function")->required();
    cmd->add_option("--delimiter", a.delimiter, "auto, comma, tab or whitespace");
    cmd->add_option("--columns", a.columns, "0-based field ids to read; the last one is y");
    cmd->add_option("--eval", a.eval, "grid a:b:n or a point file; defaults to the data points");
    cmd->add_option("--save", a.save, "write the fitted model to this file");
}

double require_rho(double rho, bool positive) {
    if (!std::isfinite(rho) || rho < 0.0 || (positive && rho == 0.0))
        throw InputError("--rho: must be " + std::string(positive ? "> 0" : ">= 0"));
    return rho;
}

// ---- study helpers -------------------------------------------------------

DataFunction named_function(const std::string& name) {
    if (name == "sin")
        return [](PointRef x) {
            double p = 1.0;
            for (Eigen::Index i = 0; i < x.size(); ++i) p *= std::sin(x(i));
            return p;
        };
    if (name == "cos")
        return [](PointRef x) {
            double p = 1.0;
            for (Eigen::Index i = 0; i < x.size(); ++i) p *= std::cos(x(i));
            return p;
        };
    if (name == "bump") return [](PointRef x) { return std::exp(-x.squaredNorm()); };
    throw InputError("--function: unknown data function '" + name + "' (sin, cos, bump)");
}

std::vector<long> parse_sizes(const std::string& text) {
    std::vector<long> out;
    std::stringstream ss(text);
    for (std::string tok; std::getline(ss, tok, ',');) {
        try {
            std::size_t used = 0;
            const long n = std::stol(tok, &used);
            if (used != tok.size() || n < 1) throw std::invalid_argument(tok);
            out.push_back(n);
        } catch (const std::exception&) {
            throw InputError("--sizes: '" + tok + "' is not a positive integer");
        }
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Radial basis function interpolation and smoothing"};
    app.require_subcommand(1);
    app.fallthrough();
    Globals g;
    app.add_option("--seed", g.seed, "random seed for generated data");
    app.add_option("--out", g.out, "output file (default: stdout)");
    app.add_flag("--quiet", g.quiet, "suppress the summary on stderr");

    FitArgs interp_args;
    auto* interp = app.add_subcommand("interpolate", "fit the minimal-seminorm interpolant");
    add_fit_options(interp, interp_args);

    FitArgs exact_args;
    double exact_rho = -1.0;
    bool exact_diag = false;
    auto* exact = app.add_subcommand("smooth-exact", "fit the exact smoother");
    add_fit_options(exact, exact_args);
    exact->add_option("--rho", exact_rho, "smoothing parameter")->required();
    exact->add_flag("--diagnostics", exact_diag, "print the optimality identities");

    FitArgs approx_args;
    double approx_rho = -1.0;
    std::string approx_grid;
    bool approx_compare = false;
    auto* approx = app.add_subcommand("smooth-approx", "fit the approximate smoother on a regular grid of centers");
    add_fit_options(approx, approx_args);
    approx->add_option("--rho", approx_rho, "smoothing parameter")->required();
    approx->add_option("--grid", approx_grid, "centers a1,..,ad:b1,..,bd:n1,..,nd")->required();
    approx->add_flag("--compare-exact", approx_compare, "also fit the exact smoother and print the gap identity");

    std::string eval_model_path, eval_points_path, eval_grid;
    auto* evalc = app.add_subcommand("eval", "evaluate a saved model");
    evalc->add_option("--model", eval_model_path, "model file")->required();
    auto* eval_pts_opt = evalc->add_option("--points", eval_points_path, "CSV of points");
    evalc->add_option("--eval", eval_grid, "grid a:b:n or a point file")->excludes(eval_pts_opt);

    auto* study = app.add_subcommand("study", "numerical studies");
    study->require_subcommand(1);
    study->fallthrough();

    std::string dens_box = "-1.5:1.5";
    long dens_max = 5000;
    int dens_count = 20, dens_probes = 0;
    double dens_mult = 1.2;
    auto* dens = study->add_subcommand("density", "fit h_X ~ h1 N^-a over uniform random sets");
    dens->add_option("--box", dens_box, "region a1,..:b1,..");
    dens->add_option("--max-n", dens_max, "largest sample size");
    dens->add_option("--count", dens_count, "number of sizes");
    dens->add_option("--multiplier", dens_mult, "ratio between consecutive sizes");
    dens->add_option("--probes", dens_probes, "probe grid points per axis (0: default)");

    std::string conv_kernel, conv_box = "-1.5:1.5", conv_sizes = "50,100,200,400,800,1600", conv_mode = "interpolant",
                                conv_fn = "sin";
    int conv_theta = 0, conv_probes = 0, conv_grid = 0;
    std::optional<double> conv_rho;
    RhoCoupling coupling;
    double conv_noise = 0.0;
    auto* conv = study->add_subcommand("convergence", "error against cavity density over a size sweep");
    conv->add_option("--kernel", conv_kernel, "kernel spec")->required();
    conv->add_option("--theta", conv_theta, "order")->required();
    conv->add_option("--box", conv_box, "region a1,..:b1,..");
    conv->add_option("--sizes", conv_sizes, "comma-separated increasing sizes");
    conv->add_option("--mode", conv_mode, "interpolant, exact or approx");
    conv->add_option("--function", conv_fn, "data function: sin, cos or bump");
    conv->add_option("--rho", conv_rho, "fixed smoothing parameter (default: coupled to h)");
    conv->add_option("--coupling-A", coupling.A, "coupling constant A");
    conv->add_option("--coupling-B", coupling.B, "coupling constant B");
    conv->add_option("--h1", coupling.h1, "density law prefactor");
    conv->add_option("--a", coupling.a, "density law exponent");
    conv->add_option("--probes", conv_probes, "error probes per axis (0: default)");
    conv->add_option("--grid-n", conv_grid, "approx mode: centers per axis (0: automatic)");
    conv->add_option("--noise", conv_noise, "uniform noise amplitude added to y");

    FitArgs rs_args;
    std::string rs_mode = "exact", rs_criterion, rs_fn, rs_box, rs_grid;
    int rs_probes = 0;
    long rs_n = 200;
    double rs_noise = 0.0;
    RhoSearchOptions rs_opt;
    auto* rs = study->add_subcommand("rho-search", "search for the smoothing parameter");
    rs->add_option("--data", rs_args.data, "CSV data (or use --function with --box)");
    rs->add_option("--kernel", rs_args.kernel, "kernel spec")->required();
    rs->add_option("--theta", rs_args.theta, "order")->required();
    rs->add_option("--delimiter", rs_args.delimiter, "auto, comma, tab or whitespace");
    rs->add_option("--columns", rs_args.columns, "0-based field ids to read; the last one is y");
    rs->add_option("--mode", rs_mode, "exact or approx");
    rs->add_option("--grid", rs_grid, "approx mode: centers a:b:n");
    rs->add_option("--criterion", rs_criterion, "delta1 (error grid, needs --function and --box) or delta2 (residuals); default delta1 when possible");
    rs->add_option("--function", rs_fn, "known data function: sin, cos or bump");
    rs->add_option("--box", rs_box, "region for generated data and the error grid");
    rs->add_option("--n", rs_n, "generated sample size");
    rs->add_option("--noise", rs_noise, "uniform noise amplitude added to generated y");
    rs->add_option("--probes", rs_probes, "error grid points per axis (0: default)");
    rs->add_option("--rho0", rs_opt.rho0, "starting rho");
    rs->add_option("--factor", rs_opt.factor, "initial multiplicative step");
    rs->add_option("--error-tol", rs_opt.error_tol, "relative error change threshold");
    rs->add_option("--rho-tol", rs_opt.rho_tol, "relative rho change threshold");
    rs->add_option("--max-iter", rs_opt.max_iter, "iteration cap");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (*interp) {
            const Problem p = load_problem(interp_args);
            const FittedModel m = fit_interpolant(p.spec, p.frame, p.data.X, p.data.y);
            summarize(g, m, p);
            emit(g, m, p, interp_args);
        } else if (*exact) {
            const Problem p = load_problem(exact_args);
            const FittedModel m = fit_exact(p.spec, p.frame, p.data.X, p.data.y, require_rho(exact_rho, true));
            summarize(g, m, p);
            if (exact_diag) {
                const SmootherDiagnostics dg = diagnostics(m, p.data.X, p.data.y);
                std::cerr << std::setprecision(6) << "J_e = " << dg.J_e << ", |s|^2 = " << dg.seminorm_sq
                          << ", residual ms = " << dg.residual_ms << '\n'
                          << "energy identity gap   " << dg.energy_gap << (dg.energy_ok ? " ok" : " FAIL") << '\n'
                          << "seminorm identity gap " << dg.seminorm_gap << (dg.seminorm_ok ? " ok" : " FAIL") << '\n'
                          << "functional gap        " << dg.functional_gap << (dg.functional_ok ? " ok" : " FAIL")
                          << '\n'
                          << "moment gap            " << dg.moment_gap << (dg.moment_ok ? " ok" : " FAIL") << '\n';
            }
            emit(g, m, p, exact_args);
        } else if (*approx) {
            const Problem p = load_problem(approx_args);
            const double rho = require_rho(approx_rho, false);
            const Grid grid = for_flag("--grid", [&] {
                const GridSpec gs = parse_grid(approx_grid);
                if (gs.dim() != p.data.d)
                    throw InputError("grid has dimension " + std::to_string(gs.dim()) + ", data has " +
                                     std::to_string(p.data.d));
                return make_grid(gs, p.spec.theta);
            });
            const FittedModel m = fit_approx(p.spec, p.frame, p.data.X, p.data.y, grid.points, rho);
            summarize(g, m, p);
            if (approx_compare) {
                const FittedModel e = fit_exact(p.spec, p.frame, p.data.X, p.data.y, require_rho(rho, true));
                const SmootherComparison c = compare(e, m, p.data.X, p.data.y, rho);
                std::cerr << std::setprecision(10) << "rho|s_e-s_a|^2 + ms(s_e-s_a) = " << c.lhs
                          << "\nJ_e[s_a] - J_e[s_e] = " << c.rhs << "\ngap = " << c.gap << "\nJ_e[s_e] = " << c.J_exact
                          << "\nJ_e[s_a] = " << c.J_approx << (c.within_tolerance ? "\nidentity ok\n" : "\nidentity FAIL\n");
            }
            emit(g, m, p, approx_args);
        } else if (*evalc) {
            const FittedModel m = for_flag("--model", [&] { return load_model(eval_model_path); });
            PointSet P;
            if (!eval_points_path.empty())
                P = for_flag("--points", [&] { return read_points(eval_points_path, m.spec.dim); });
            else if (!eval_grid.empty())
                P = eval_points(eval_grid, m.spec.dim, CsvOptions{}, m.spec.theta);
            else
                P = m.centers;
            Output out(g.out);
            write_predictions(out.stream(), P, eval_model(m, P));
        } else if (*dens) {
            const Region region = for_flag("--box", [&] { return parse_region(dens_box); });
            const auto sizes = for_flag("--count", [&] { return exponential_sizes(dens_max, dens_count, dens_mult); });
            const DensityFit fit = density_law(region, sizes, g.seed, dens_probes);
            Output out(g.out);
            out.stream() << "N,h\n" << std::setprecision(10);
            for (const auto& r : fit.rows) out.stream() << r.N << ',' << r.h << '\n';
            if (!g.quiet)
                std::cerr << std::setprecision(6) << "h_X ~ " << fit.h1 << " N^-" << fit.a_exp << "  (r^2 = " << fit.r2
                          << ")\n";
        } else if (*conv) {
            const Region region = for_flag("--box", [&] { return parse_region(conv_box); });
            const KernelSpec spec = for_flag("--kernel", [&] { return parse_kernel(conv_kernel, conv_theta, region.dim()); });
            SweepConfig cfg;
            cfg.sizes = parse_sizes(conv_sizes);
            cfg.seed = g.seed;
            cfg.rho_fixed = conv_rho;
            cfg.coupling = coupling;
            cfg.error_probes_per_axis = conv_probes;
            cfg.approx_grid_per_axis = conv_grid;
            cfg.noise = conv_noise;
            const SweepMode mode = for_flag("--mode", [&] { return sweep_mode_from_name(conv_mode); });
            const StudyReport rep =
                for_flag("--sizes", [&] {
                    return convergence_sweep(spec, PolyFrame(spec.dim, spec.theta), region, named_function(conv_fn),
                                             mode, cfg);
                });
            Output out(g.out);
            write_report_csv(rep, out.stream());
            if (!g.quiet) {
                for (const auto& r : rep.rows)
                    if (!r.ok) std::cerr << "N = " << r.N << " failed: " << r.failure << '\n';
                std::cerr << std::setprecision(4) << "slope = "
                          << (rep.slope_defined ? std::to_string(rep.slope) : std::string("undefined"))
                          << ", predicted eta_G = " << rep.predicted.eta_G() << '\n';
            }
        } else if (*rs) {
            PointSet X;
            Vector y;
            int d = 0;
            std::optional<Region> region;
            if (!rs_box.empty()) region = for_flag("--box", [&] { return parse_region(rs_box); });
            const DataFunction truth = rs_fn.empty() ? DataFunction{} : named_function(rs_fn);
            if (!rs_args.data.empty()) {
                const DataTable t = for_flag("--data", [&] { return read_csv(rs_args.data, csv_options(rs_args)); });
                X = t.X;
                y = t.y;
                d = t.d;
            } else {
                if (!region || !truth) throw InputError("--data: give a data file or --function with --box");
                d = region->dim();
                X = for_flag("--n", [&] { return gen_uniform(*region, rs_n, g.seed); });
                y.resize(X.rows());
                Rng noise(g.seed ^ 0x5bd1e995ULL);
                for (Eigen::Index i = 0; i < X.rows(); ++i)
                    y(i) = truth(X.row(i)) + (rs_noise > 0.0 ? rs_noise * (2.0 * noise.uniform() - 1.0) : 0.0);
            }
            const KernelSpec spec = for_flag("--kernel", [&] { return parse_kernel(rs_args.kernel, rs_args.theta, d); });
            const PolyFrame frame(d, rs_args.theta);
            Fitter fitter;
            if (rs_mode == "exact") {
                fitter = [&](double rho) { return fit_exact(spec, frame, X, y, rho); };
            } else if (rs_mode == "approx") {
                if (rs_grid.empty()) throw InputError("--grid: required when --mode approx");
                const Grid grid = for_flag("--grid", [&] { return make_grid(parse_grid(rs_grid), spec.theta); });
                auto assembly = std::make_shared<ApproxAssembly>(spec, frame, X, y, grid.points);
                fitter = [assembly, spec, frame](double rho) { return fit_approx(*assembly, spec, frame, rho); };
            } else {
                throw InputError("--mode: expected exact or approx, got '" + rs_mode + "'");
            }
            ErrorFunction err;
            if (rs_criterion.empty()) rs_criterion = truth && region ? "delta1" : "delta2";
            if (rs_criterion == "delta1") {
                if (!truth || !region) throw InputError("--criterion: delta1 needs --function and --box");
                const int per_axis = rs_probes > 0 ? rs_probes : (d == 1 ? 1000 : d == 2 ? 64 : 16);
                err = delta1_error(fitter, truth, probe_grid(*region, per_axis));
            } else if (rs_criterion == "delta2") {
                err = delta2_error(fitter, X, y);
            } else {
                throw InputError("--criterion: expected delta1 or delta2, got '" + rs_criterion + "'");
            }
            RhoSearchResult res;
            try {
                res = rho_search(err, rs_opt);
            } catch (const SearchError& e) {
                std::cerr << "trace before failure:\n";
                for (const auto& t : e.trace()) std::cerr << t.iter << ',' << t.rho << ',' << t.error << '\n';
                throw;
            }
            Output out(g.out);
            out.stream() << "iter,rho,error\n" << std::setprecision(10);
            for (const auto& t : res.trace) out.stream() << t.iter << ',' << t.rho << ',' << t.error << '\n';
            if (!g.quiet) {
                static const char* stops[] = {"error change", "rho change", "iteration cap"};
                std::cerr << std::setprecision(6) << "rho* = " << res.rho << ", error = " << res.error << ", "
                          << res.iterations << " iterations, stopped on " << stops[static_cast<int>(res.stop)]
                          << '\n';
            }
        }
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return 3;
    }
    return 0;
}
