#include "rbfsmooth/model.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>
#include <vector>

#include "rbfsmooth/assembly.hpp"
#include "rbfsmooth/errors.hpp"

namespace rbfs {

std::string_view kind_name(ModelKind k) {
    switch (k) {
        case ModelKind::Interpolant: return "interpolant";
        case ModelKind::ExactSmoother: return "exact_smoother";
        case ModelKind::ApproxSmoother: return "approx_smoother";
    }
    return "?";
}

ModelKind kind_from_name(std::string_view name) {
    for (ModelKind k : {ModelKind::Interpolant, ModelKind::ExactSmoother, ModelKind::ApproxSmoother})
        if (kind_name(k) == name) return k;
    throw InputError("unknown model kind '" + std::string(name) + "'");
}

double FittedModel::operator()(PointRef x) const { return eval_point(*this, x); }

double eval_point(const FittedModel& m, PointRef x) {
    if (x.size() != m.spec.dim) throw InputError("point dimension does not match the model dimension");
    double acc = 0.0;
    for (Eigen::Index i = 0; i < m.centers.rows(); ++i)
        acc += m.v(i) * kernel_radial(m.spec, (x - m.centers.row(i)).squaredNorm());
    return acc + m.frame.monomials(x).dot(m.beta);
}

Vector eval_model(const FittedModel& m, const PointSet& X) {
    Vector out(X.rows());
    for (Eigen::Index i = 0; i < X.rows(); ++i) out(i) = eval_point(m, X.row(i));
    return out;
}

double constraint_defect(const FittedModel& m) {
    const double vnorm = m.v.lpNorm<1>();
    if (vnorm == 0.0) return 0.0;
    const double scale = vnorm + m.beta.lpNorm<1>();
    const Matrix P = unisolvency_matrix(m.frame, m.centers);
    const double pscale = std::max(1.0, P.cwiseAbs().maxCoeff());
    return (P.transpose() * m.v).lpNorm<Eigen::Infinity>() / (scale * pscale);
}

FittedModel fit_interpolant(const KernelSpec& spec, const PolyFrame& frame, const PointSet& X, const Vector& y) {
    const BlockSystem sys = interp_system(spec, frame, X, y);
    const Vector sol = solve_block(sys);
    FittedModel m;
    m.spec = spec;
    m.frame = frame;
    m.centers = X;
    m.v = sol.head(X.rows());
    m.beta = sol.tail(frame.size());
    m.kind = ModelKind::Interpolant;
    m.rho = 0.0;
    return m;
}

namespace {

void require_constraint(const FittedModel& m) {
    const double defect = constraint_defect(m);
    if (defect > kConstraintTolerance)
        throw ContractError("model coefficients violate P_Z^T v = 0 (relative defect " + std::to_string(defect) + ")");
}

void require_same_kernel(const FittedModel& f, const FittedModel& g) {
    if (!(f.spec == g.spec)) throw ParameterError("models use different kernels");
}

}  // namespace

double seminorm_sq(const FittedModel& m) {
    require_constraint(m);
    const double q = m.v.dot(basis_matrix(m.spec, m.centers, m.centers) * m.v);
    return std::max(0.0, two_pi_pow_half_d(m.spec.dim) * q);
}

double seminorm_inner(const FittedModel& f, const FittedModel& g) {
    require_same_kernel(f, g);
    require_constraint(f);
    require_constraint(g);
    return two_pi_pow_half_d(f.spec.dim) * f.v.dot(basis_matrix(f.spec, f.centers, g.centers) * g.v);
}

double seminorm_sq_diff(const FittedModel& f, const FittedModel& g) {
    require_same_kernel(f, g);
    require_constraint(f);
    require_constraint(g);
    const Eigen::Index d = f.centers.cols();
    std::map<std::vector<double>, Eigen::Index> slot;
    std::vector<std::vector<double>> points;
    std::vector<double> coef;
    auto add = [&](const FittedModel& m, double sign) {
        for (Eigen::Index i = 0; i < m.centers.rows(); ++i) {
            std::vector<double> key(d);
            for (Eigen::Index j = 0; j < d; ++j) key[j] = m.centers(i, j);
            auto [it, inserted] = slot.try_emplace(key, static_cast<Eigen::Index>(points.size()));
            if (inserted) {
                points.push_back(key);
                coef.push_back(0.0);
            }
            coef[it->second] += sign * m.v(i);
        }
    };
    add(f, 1.0);
    add(g, -1.0);
    PointSet Z(points.size(), d);
    Vector w(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
        for (Eigen::Index j = 0; j < d; ++j) Z(i, j) = points[i][j];
        w(i) = coef[i];
    }
    const double q = w.dot(basis_matrix(f.spec, Z, Z) * w);
    return std::max(0.0, two_pi_pow_half_d(f.spec.dim) * q);
}

// ---- persistence ---------------------------------------------------------

namespace {

constexpr int kFormatVersion = 1;
constexpr const char* kMagic = "rbfsmooth-model";

class LineReader {
public:
    explicit LineReader(std::istream& is) : is_(is) {}

    // Next non-empty line, split on whitespace.
    std::vector<std::string> fields() {
        std::string line;
        while (std::getline(is_, line)) {
            ++line_;
            std::istringstream ss(line);
            std::vector<std::string> out;
            for (std::string tok; ss >> tok;) out.push_back(tok);
            if (!out.empty()) return out;
        }
        throw ParseError("unexpected end of model file", line_);
    }

    std::string keyed(const std::string& key) {
        auto f = fields();
        if (f.size() != 2 || f[0] != key) throw ParseError("expected '" + key + " <value>'", line_);
        return f[1];
    }

    double number(const std::string& tok) {
        std::size_t used = 0;
        double x = 0.0;
        try {
            x = std::stod(tok, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != tok.size()) throw ParseError("non-numeric value '" + tok + "'", line_);
        return x;
    }

    long count(const std::string& tok) {
        const double x = number(tok);
        if (x < 0 || x != std::floor(x)) throw ParseError("expected a non-negative integer, got '" + tok + "'", line_);
        return static_cast<long>(x);
    }

    std::size_t line() const { return line_; }

private:
    std::istream& is_;
    std::size_t line_ = 0;
};

}  // namespace

void save_model(const FittedModel& m, std::ostream& os) {
    os << std::setprecision(17);
    os << kMagic << '\n';
    os << "version " << kFormatVersion << '\n';
    os << "kind " << kind_name(m.kind) << '\n';
    os << "family " << family_name(m.spec.family) << '\n';
    os << "s " << m.spec.s << '\n';
    os << "a " << m.spec.a << '\n';
    os << "theta " << m.spec.theta << '\n';
    os << "d " << m.spec.dim << '\n';
    os << "rho " << m.rho << '\n';
    os << "centers " << m.centers.rows() << '\n';
    for (Eigen::Index i = 0; i < m.centers.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.centers.cols(); ++j) os << (j ? " " : "") << m.centers(i, j);
        os << '\n';
    }
    os << "v " << m.v.size() << '\n';
    for (Eigen::Index i = 0; i < m.v.size(); ++i) os << m.v(i) << '\n';
    os << "beta " << m.beta.size() << '\n';
    for (Eigen::Index i = 0; i < m.beta.size(); ++i) os << m.beta(i) << '\n';
}

void save_model(const FittedModel& m, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw InputError("cannot open '" + path + "' for writing");
    save_model(m, os);
    if (!os) throw InputError("failed writing model to '" + path + "'");
}

FittedModel load_model(std::istream& is) {
    LineReader in(is);
    {
        auto f = in.fields();
        if (f.size() != 1 || f[0] != kMagic) throw ParseError("not a model file", in.line());
    }
    if (in.count(in.keyed("version")) != kFormatVersion) throw ParseError("unsupported model version", in.line());
    FittedModel m;
    m.kind = kind_from_name(in.keyed("kind"));
    KernelSpec spec;
    spec.family = family_from_name(in.keyed("family"));
    spec.s = in.number(in.keyed("s"));
    spec.a = in.number(in.keyed("a"));
    spec.theta = static_cast<int>(in.count(in.keyed("theta")));
    spec.dim = static_cast<int>(in.count(in.keyed("d")));
    validate(spec);
    m.spec = spec;
    m.frame = PolyFrame(spec.dim, spec.theta);
    m.rho = in.number(in.keyed("rho"));

    const long n = in.count(in.keyed("centers"));
    m.centers.resize(n, spec.dim);
    for (long i = 0; i < n; ++i) {
        auto f = in.fields();
        if (static_cast<int>(f.size()) != spec.dim)
            throw ParseError("center has " + std::to_string(f.size()) + " coordinates, expected " +
                                 std::to_string(spec.dim),
                             in.line());
        for (int j = 0; j < spec.dim; ++j) m.centers(i, j) = in.number(f[j]);
    }
    auto read_vector = [&](const std::string& key, long expected) {
        const long len = in.count(in.keyed(key));
        if (len != expected)
            throw ParseError(key + " has length " + std::to_string(len) + ", expected " + std::to_string(expected),
                             in.line());
        Vector out(len);
        for (long i = 0; i < len; ++i) {
            auto f = in.fields();
            if (f.size() != 1) throw ParseError("expected one value per line", in.line());
            out(i) = in.number(f[0]);
        }
        return out;
    };
    m.v = read_vector("v", n);
    m.beta = read_vector("beta", m.frame.size());
    return m;
}

FittedModel load_model(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw InputError("cannot open model file '" + path + "'");
    return load_model(is);
}

}  // namespace rbfs
