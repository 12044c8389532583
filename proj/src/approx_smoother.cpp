#include "rbfsmooth/approx_smoother.hpp"

#include <cmath>
#include <sstream>

#include "rbfsmooth/errors.hpp"
#include "rbfsmooth/exact_smoother.hpp"

namespace rbfs {

Vector GridSpec::steps() const {
    Vector h(a.size());
    for (Eigen::Index i = 0; i < a.size(); ++i) h(i) = (b(i) - a(i)) / counts[i];
    return h;
}

long GridSpec::total() const {
    long n = 1;
    for (int c : counts) n *= c;
    return n;
}

double GridSpec::volume() const { return (b - a).prod(); }

void GridSpec::validate() const {
    if (a.size() == 0) throw ParameterError("grid has no dimensions");
    if (b.size() != a.size() || static_cast<Eigen::Index>(counts.size()) != a.size())
        throw ParameterError("grid corners and counts disagree in dimension");
    for (Eigen::Index i = 0; i < a.size(); ++i) {
        if (!(b(i) > a(i))) throw ParameterError("grid needs b > a in every dimension");
        if (counts[i] < 1) throw ParameterError("grid counts must be positive");
    }
}

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream ss(s);
    while (std::getline(ss, cur, sep)) out.push_back(cur);
    if (!s.empty() && s.back() == sep) out.emplace_back();
    return out;
}

double parse_number(const std::string& tok, const std::string& what) {
    std::size_t used = 0;
    double x = 0.0;
    try {
        x = std::stod(tok, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (tok.empty() || used != tok.size()) throw ParameterError("grid " + what + " '" + tok + "' is not a number");
    return x;
}

}  // namespace

GridSpec parse_grid(const std::string& text) {
    const auto parts = split(text, ':');
    if (parts.size() != 3) throw ParameterError("grid must look like a1,..,ad:b1,..,bd:n1,..,nd, got '" + text + "'");
    const auto as = split(parts[0], ',');
    const auto bs = split(parts[1], ',');
    const auto ns = split(parts[2], ',');
    if (as.size() != bs.size() || as.size() != ns.size())
        throw ParameterError("grid corners and counts disagree in dimension: '" + text + "'");
    GridSpec gs;
    gs.a.resize(as.size());
    gs.b.resize(as.size());
    for (std::size_t i = 0; i < as.size(); ++i) {
        gs.a(i) = parse_number(as[i], "corner");
        gs.b(i) = parse_number(bs[i], "corner");
        const double n = parse_number(ns[i], "count");
        if (n != std::floor(n)) throw ParameterError("grid count '" + ns[i] + "' is not an integer");
        gs.counts.push_back(static_cast<int>(n));
    }
    gs.validate();
    return gs;
}

GridSpec closed_grid(const Vector& lo, const Vector& hi, const std::vector<int>& counts) {
    GridSpec gs{lo, hi, counts};
    for (Eigen::Index i = 0; i < lo.size(); ++i) {
        if (counts[i] < 2) throw ParameterError("a closed grid needs at least two nodes per axis");
        gs.b(i) = hi(i) + (hi(i) - lo(i)) / (counts[i] - 1);
    }
    gs.validate();
    return gs;
}

Grid make_grid(const GridSpec& gs, int theta) {
    gs.validate();
    const int d = gs.dim();
    const Vector h = gs.steps();
    Grid g;
    g.points.resize(gs.total(), d);
    std::vector<int> alpha(d, 0);
    for (long row = 0; row < gs.total(); ++row) {
        for (int i = 0; i < d; ++i) g.points(row, i) = gs.a(i) + h(i) * alpha[i];
        for (int i = d - 1; i >= 0; --i) {
            if (++alpha[i] < gs.counts[i]) break;
            alpha[i] = 0;
        }
    }
    g.unisolvent_guaranteed = true;
    for (int c : gs.counts)
        if (c < theta) g.unisolvent_guaranteed = false;
    return g;
}

double grid_density(const GridSpec& gs) {
    gs.validate();
    const double d = gs.dim();
    return std::pow(std::pow(d, 0.5 * d) * gs.volume() / static_cast<double>(gs.total()), 1.0 / d);
}

FittedModel fit_approx(const ApproxAssembly& assembly, const KernelSpec& spec, const PolyFrame& frame, double rho) {
    if (!(rho > 0.0) || !std::isfinite(rho)) throw ParameterError("approximate smoother needs rho > 0");
    const BlockSystem sys = assembly.system(rho);
    const Vector sol = solve_block(sys);
    const Eigen::Index Nc = assembly.centers().rows();
    FittedModel m;
    m.spec = spec;
    m.frame = frame;
    m.centers = assembly.centers();
    m.v = sol.head(Nc);
    m.beta = sol.segment(Nc, frame.size());
    m.kind = ModelKind::ApproxSmoother;
    m.rho = rho;
    return m;
}

FittedModel fit_approx(const KernelSpec& spec, const PolyFrame& frame, const PointSet& X, const Vector& y,
                       const PointSet& centers, double rho) {
    if (!(rho > 0.0) || !std::isfinite(rho)) throw ParameterError("approximate smoother needs rho > 0");
    return fit_approx(approx_system(spec, frame, X, y, centers), spec, frame, rho);
}

SmootherComparison compare(const FittedModel& exact, const FittedModel& approx, const PointSet& X, const Vector& y,
                           double rho) {
    SmootherComparison c;
    const Vector delta = eval_model(exact, X) - eval_model(approx, X);
    c.seminorm_sq_diff = seminorm_sq_diff(exact, approx);
    c.mean_sq_diff = delta.squaredNorm() / static_cast<double>(X.rows());
    c.J_exact = smoothing_functional(exact, X, y, rho);
    c.J_approx = smoothing_functional(approx, X, y, rho);
    c.lhs = rho * c.seminorm_sq_diff + c.mean_sq_diff;
    c.rhs = c.J_approx - c.J_exact;
    c.gap = c.lhs - c.rhs;
    c.within_tolerance = std::abs(c.gap) <= 1e-7 * (1.0 + c.J_approx);
    return c;
}

}  // namespace rbfs
