#include "rbfsmooth/kernels.hpp"

#include <charconv>
#include <cmath>
#include <sstream>
#include <vector>

#include "rbfsmooth/errors.hpp"

namespace rbfs {

namespace {

bool is_integer(double s) { return std::abs(s - std::round(s)) < 1e-12; }

// (-1)^n for integer-valued n
double parity_sign(double n) { return (static_cast<long long>(std::llround(n)) % 2 == 0) ? 1.0 : -1.0; }

// Coefficient for (a^2 + r^2)^s or r^{2s} in the non-integer branch.
double power_sign(double s) { return parity_sign(std::ceil(s)); }

// Coefficient for the log branch, s = 1, 2, ...
double log_sign(double s) { return parity_sign(s + 1.0); }

// Smallest delta_G strictly below 1/2, used where every value in [0, 1/2) is admissible.
constexpr double kHalfOpen = 0.5 - 1e-6;

}  // namespace

std::string_view family_name(Family f) {
    switch (f) {
        case Family::ThinPlate: return "thinplate";
        case Family::ShiftedThinPlate: return "shifted-tps";
        case Family::Multiquadric: return "mq";
        case Family::InverseMultiquadric: return "imq";
        case Family::Gaussian: return "gauss";
    }
    return "?";
}

Family family_from_name(std::string_view name) {
    for (Family f : {Family::ThinPlate, Family::ShiftedThinPlate, Family::Multiquadric,
                     Family::InverseMultiquadric, Family::Gaussian})
        if (family_name(f) == name) return f;
    throw ParameterError("unknown kernel family '" + std::string(name) + "'");
}

KernelSpec KernelSpec::thin_plate(double s, int theta, int dim) {
    KernelSpec k{Family::ThinPlate, theta, dim, s, 0.0};
    validate(k);
    return k;
}

KernelSpec KernelSpec::shifted_thin_plate(double s, double a, int theta, int dim) {
    KernelSpec k{Family::ShiftedThinPlate, theta, dim, s, a};
    validate(k);
    return k;
}

KernelSpec KernelSpec::multiquadric(double a, int theta, int dim) {
    KernelSpec k{Family::Multiquadric, theta, dim, 0.5, a};
    validate(k);
    return k;
}

KernelSpec KernelSpec::inverse_multiquadric(double a, int theta, int dim) {
    KernelSpec k{Family::InverseMultiquadric, theta, dim, -0.5, a};
    validate(k);
    return k;
}

KernelSpec KernelSpec::gaussian(int theta, int dim) {
    KernelSpec k{Family::Gaussian, theta, dim, 0.0, 0.0};
    validate(k);
    return k;
}

void validate(const KernelSpec& k) {
    if (k.theta < 1) throw ParameterError("order theta must be >= 1");
    if (k.dim < 1) throw ParameterError("dimension must be >= 1");
    if (!std::isfinite(k.s) || !std::isfinite(k.a)) throw ParameterError("kernel parameters must be finite");
    const double theta = k.theta;
    switch (k.family) {
        case Family::ThinPlate:
            if (!(k.s > 0.0 && k.s < theta))
                throw ParameterError("thin-plate spline needs 0 < s < theta (s = " + std::to_string(k.s) +
                                     ", theta = " + std::to_string(k.theta) + ")");
            break;
        case Family::ShiftedThinPlate:
            if (!(k.a > 0.0)) throw ParameterError("shifted thin-plate spline needs a > 0");
            if (!(k.s > -0.5 * k.dim && k.s < theta))
                throw ParameterError("shifted thin-plate spline needs -d/2 < s < theta");
            break;
        case Family::Multiquadric:
            if (!(k.a > 0.0)) throw ParameterError("multiquadric needs a > 0");
            if (k.s != 0.5) throw ParameterError("multiquadric has fixed exponent s = 1/2");
            break;
        case Family::InverseMultiquadric:
            if (!(k.a > 0.0)) throw ParameterError("inverse multiquadric needs a > 0");
            if (k.s != -0.5) throw ParameterError("inverse multiquadric has fixed exponent s = -1/2");
            break;
        case Family::Gaussian:
            break;
    }
}

KernelSpec parse_kernel(std::string_view text, int theta, int dim) {
    const auto colon = text.find(':');
    const std::string name(text.substr(0, colon));
    double s = std::nan(""), a = std::nan("");
    if (colon != std::string_view::npos) {
        std::string_view rest = text.substr(colon + 1);
        while (!rest.empty()) {
            const auto comma = rest.find(',');
            const std::string_view item = rest.substr(0, comma);
            const auto eq = item.find('=');
            if (eq == std::string_view::npos)
                throw ParameterError("kernel parameter '" + std::string(item) + "' is not of the form key=value");
            const std::string_view key = item.substr(0, eq);
            const std::string_view val = item.substr(eq + 1);
            double x = 0.0;
            auto [ptr, ec] = std::from_chars(val.data(), val.data() + val.size(), x);
            if (ec != std::errc() || ptr != val.data() + val.size())
                throw ParameterError("kernel parameter '" + std::string(key) + "' has non-numeric value '" +
                                     std::string(val) + "'");
            double* slot = key == "s" ? &s : key == "a" ? &a : nullptr;
            if (!slot) throw ParameterError("unknown kernel parameter '" + std::string(key) + "'");
            if (!std::isnan(*slot)) throw ParameterError("kernel parameter '" + std::string(key) + "' given twice");
            *slot = x;
            if (comma == std::string_view::npos) break;
            rest = rest.substr(comma + 1);
        }
    }
    auto need = [&](double v, const char* what) {
        if (std::isnan(v)) throw ParameterError("kernel '" + name + "' requires parameter " + what);
        return v;
    };
    auto unused = [&](double v, const char* what) {
        if (!std::isnan(v)) throw ParameterError("kernel '" + name + "' takes no parameter " + what);
    };
    const Family fam = family_from_name(name);
    if (fam == Family::ThinPlate) unused(a, "a");
    if (fam == Family::Multiquadric || fam == Family::InverseMultiquadric || fam == Family::Gaussian) unused(s, "s");
    if (fam == Family::Gaussian) unused(a, "a");
    switch (fam) {
        case Family::ThinPlate: return KernelSpec::thin_plate(need(s, "s"), theta, dim);
        case Family::ShiftedThinPlate: return KernelSpec::shifted_thin_plate(need(s, "s"), need(a, "a"), theta, dim);
        case Family::Multiquadric: return KernelSpec::multiquadric(need(a, "a"), theta, dim);
        case Family::InverseMultiquadric: return KernelSpec::inverse_multiquadric(need(a, "a"), theta, dim);
        case Family::Gaussian: return KernelSpec::gaussian(theta, dim);
    }
    throw ParameterError("unreachable kernel family");
}

std::string format_kernel(const KernelSpec& k) {
    std::ostringstream os;
    os.precision(17);
    os << family_name(k.family);
    switch (k.family) {
        case Family::ThinPlate: os << ":s=" << k.s; break;
        case Family::ShiftedThinPlate: os << ":s=" << k.s << ",a=" << k.a; break;
        case Family::Multiquadric:
        case Family::InverseMultiquadric: os << ":a=" << k.a; break;
        case Family::Gaussian: break;
    }
    return os.str();
}

double kernel_radial(const KernelSpec& k, double r2) {
    switch (k.family) {
        case Family::ThinPlate:
            if (is_integer(k.s)) {
                if (r2 == 0.0) return 0.0;
                return log_sign(k.s) * std::pow(r2, k.s) * 0.5 * std::log(r2);
            }
            return power_sign(k.s) * std::pow(r2, k.s);
        case Family::ShiftedThinPlate: {
            const double q = k.a * k.a + r2;
            if (is_integer(k.s)) return 0.5 * log_sign(k.s) * std::pow(q, k.s) * std::log(q);
            return power_sign(k.s) * std::pow(q, k.s);
        }
        case Family::Multiquadric: return -std::sqrt(k.a * k.a + r2);
        case Family::InverseMultiquadric: return 1.0 / std::sqrt(k.a * k.a + r2);
        case Family::Gaussian: return std::exp(-r2);
    }
    return 0.0;
}

double kernel_eval(const KernelSpec& spec, PointRef x) {
    if (x.size() != spec.dim) throw InputError("point dimension does not match the kernel dimension");
    if (x.hasNaN()) throw InputError("kernel evaluated at a NaN point");
    return kernel_radial(spec, x.squaredNorm());
}

double kernel_between(const KernelSpec& spec, PointRef x, PointRef y) {
    return kernel_radial(spec, (x - y).squaredNorm());
}

OrderPrediction predicted_orders(const KernelSpec& k) {
    const double theta = k.theta;
    switch (k.family) {
        case Family::ThinPlate: {
            const double s = k.s;
            const double half_floor = 0.5 * std::floor(2.0 * s + 1e-12);
            if (is_integer(s)) return {std::min(theta, s - 0.5), kHalfOpen};
            if (is_integer(2.0 * s)) return {std::min(theta, s - 0.5), s - half_floor};
            return {std::min(theta, half_floor), s - half_floor};
        }
        case Family::ShiftedThinPlate:
        case Family::Multiquadric:
        case Family::InverseMultiquadric: return {theta, 0.5};
        case Family::Gaussian: return {theta, 0.0};
    }
    return {};
}

double riesz_representer(const KernelSpec& spec, const UnisolventFrame& uf, PointRef x, PointRef y) {
    const double qx_qy = semi_riesz(spec, uf, x, y);
    return qx_qy + uf.cardinal_values(x).dot(uf.cardinal_values(y));
}

double semi_riesz(const KernelSpec& spec, const UnisolventFrame& uf, PointRef x, PointRef y) {
    if (uf.frame().dim() != spec.dim || uf.frame().theta() != spec.theta)
        throw ParameterError("unisolvent frame does not match the kernel order and dimension");
    const PointSet& A = uf.points();
    const int M = uf.size();
    const Vector lx = uf.cardinal_values(x);
    const Vector ly = uf.cardinal_values(y);
    double acc = kernel_between(spec, y, x);
    for (int i = 0; i < M; ++i) {
        acc -= lx(i) * kernel_between(spec, y, A.row(i));
        acc -= ly(i) * kernel_between(spec, A.row(i), x);
    }
    for (int i = 0; i < M; ++i)
        for (int j = 0; j < M; ++j) acc += lx(i) * kernel_between(spec, A.row(j), A.row(i)) * ly(j);
    return acc / two_pi_pow_half_d(spec.dim);
}

}  // namespace rbfs
