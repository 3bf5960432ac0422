#include "crisislda/distributions.hpp"

#include <cmath>
#include <limits>

namespace crisislda {

namespace {

constexpr double kEulerGamma = 0.57721566490153286060651209;

// Treat |xi| below this as the xi -> 0 limit for GEV/GPD.
constexpr double kShapeZeroTol = 1e-12;

}  // namespace

double digamma(double x) {
    if (x <= 0.0 && x == std::floor(x)) return std::numeric_limits<double>::quiet_NaN();
    double result = 0.0;
    while (x < 6.0) {
        result -= 1.0 / x;
        x += 1.0;
    }
    const double inv = 1.0 / x;
    const double inv2 = inv * inv;
    result += std::log(x) - 0.5 * inv -
              inv2 * (1.0 / 12.0 - inv2 * (1.0 / 120.0 - inv2 * (1.0 / 252.0 - inv2 / 240.0)));
    return result;
}

double trigamma(double x) {
    double result = 0.0;
    while (x < 6.0) {
        result += 1.0 / (x * x);
        x += 1.0;
    }
    const double inv = 1.0 / x;
    const double inv2 = inv * inv;
    result += inv * (1.0 + 0.5 * inv +
                     inv2 * (1.0 / 6.0 - inv2 * (1.0 / 30.0 - inv2 * (1.0 / 42.0 - inv2 / 30.0))));
    return result;
}

double gamma_p(double a, double x) {
    if (x < 0.0 || a <= 0.0) return std::numeric_limits<double>::quiet_NaN();
    if (x == 0.0) return 0.0;
    const double lg = std::lgamma(a);
    if (x < a + 1.0) {
        // series representation
        double term = 1.0 / a;
        double sum = term;
        double ap = a;
        for (int n = 0; n < 1000; ++n) {
            ap += 1.0;
            term *= x / ap;
            sum += term;
            if (std::fabs(term) < std::fabs(sum) * 1e-16) break;
        }
        return sum * std::exp(-x + a * std::log(x) - lg);
    }
    // continued fraction for Q(a, x)
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= 1000; ++i) {
        const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < 1e-16) break;
    }
    const double q = std::exp(-x + a * std::log(x) - lg) * h;
    return 1.0 - q;
}

double gamma_p_inv(double a, double p) {
    if (p <= 0.0) return 0.0;
    if (p >= 1.0) return std::numeric_limits<double>::infinity();
    // Wilson-Hilferty start, then Newton with bisection safeguard
    const double z = normal_quantile(p);
    double x = a * std::pow(1.0 - 1.0 / (9.0 * a) + z / (3.0 * std::sqrt(a)), 3.0);
    if (!(x > 0.0) || !std::isfinite(x)) x = a;
    double lo = 0.0, hi = std::numeric_limits<double>::infinity();
    const double lg = std::lgamma(a);
    for (int it = 0; it < 200; ++it) {
        const double f = gamma_p(a, x) - p;
        if (f > 0.0) hi = x;
        else lo = x;
        const double logpdf = -x + (a - 1.0) * std::log(x) - lg;
        const double deriv = std::exp(logpdf);
        double step = deriv > 0.0 ? f / deriv : 0.0;
        double next = x - step;
        if (!(next > lo) || !(next < hi) || deriv == 0.0) {
            next = std::isfinite(hi) ? 0.5 * (lo + hi) : 2.0 * x;
        }
        if (std::fabs(next - x) <= 1e-14 * (std::fabs(x) + 1e-300)) return next;
        x = next;
    }
    return x;
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

double normal_quantile(double p) {
    // Acklam's rational approximation with one Halley refinement.
    if (p <= 0.0) return -std::numeric_limits<double>::infinity();
    if (p >= 1.0) return std::numeric_limits<double>::infinity();
    static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                               -2.759285104469687e+02, 1.383577518672690e+02,
                               -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                               -1.556989798598866e+02, 6.680131188771972e+01,
                               -1.328068155288572e+01};
    static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                               -2.400758277161838e+00, -2.549732539343734e+00,
                               4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                               2.445134137142996e+00, 3.754408661907416e+00};
    const double plow = 0.02425;
    double x;
    if (p < plow) {
        const double q = std::sqrt(-2.0 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else if (p <= 1.0 - plow) {
        const double q = p - 0.5;
        const double r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    } else {
        const double q = std::sqrt(-2.0 * std::log(1.0 - p));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    const double e = normal_cdf(x) - p;
    const double u = e * std::sqrt(2.0 * M_PI) * std::exp(x * x / 2.0);
    return x - u / (1.0 + x * u / 2.0);
}

std::string to_string(SeverityFamily f) {
    switch (f) {
        case SeverityFamily::Gamma: return "gamma";
        case SeverityFamily::Exponential: return "exponential";
        case SeverityFamily::GEV: return "gev";
        case SeverityFamily::GeneralizedPareto: return "gpd";
        case SeverityFamily::LogNormal: return "lognormal";
        case SeverityFamily::Weibull: return "weibull";
    }
    return "?";
}

std::optional<SeverityFamily> parse_severity_family(const std::string& input) {
    std::string s;
    s.reserve(input.size());
    for (char c : input) s.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    if (s == "gamma") return SeverityFamily::Gamma;
    if (s == "exponential" || s == "exp") return SeverityFamily::Exponential;
    if (s == "gev") return SeverityFamily::GEV;
    if (s == "gpd" || s == "pareto" || s == "generalized_pareto")
        return SeverityFamily::GeneralizedPareto;
    if (s == "lognormal") return SeverityFamily::LogNormal;
    if (s == "weibull") return SeverityFamily::Weibull;
    return std::nullopt;
}

bool SeverityDist::in_support(double x) const {
    switch (family) {
        case SeverityFamily::Gamma:
        case SeverityFamily::Exponential:
        case SeverityFamily::LogNormal:
        case SeverityFamily::Weibull:
            return x > 0.0;
        case SeverityFamily::GeneralizedPareto: {
            const double xi = params[0], sigma = params[1];
            if (x < 0.0) return false;
            if (xi < -kShapeZeroTol) return x < -sigma / xi;
            return true;
        }
        case SeverityFamily::GEV: {
            const double xi = params[0], mu = params[1], sigma = params[2];
            if (std::fabs(xi) <= kShapeZeroTol) return true;
            const double t = 1.0 + xi * (x - mu) / sigma;
            return t > 0.0;
        }
    }
    return false;
}

double SeverityDist::log_pdf(double x) const {
    if (!in_support(x)) return -std::numeric_limits<double>::infinity();
    switch (family) {
        case SeverityFamily::Gamma: {
            const double k = params[0], theta = params[1];
            return (k - 1.0) * std::log(x) - x / theta - std::lgamma(k) - k * std::log(theta);
        }
        case SeverityFamily::Exponential: {
            const double m = params[0];
            return -std::log(m) - x / m;
        }
        case SeverityFamily::GEV: {
            const double xi = params[0], mu = params[1], sigma = params[2];
            const double z = (x - mu) / sigma;
            if (std::fabs(xi) <= kShapeZeroTol) {
                return -std::log(sigma) - z - std::exp(-z);
            }
            const double lt = -std::log1p(xi * z) / xi;  // log t
            return -std::log(sigma) + (xi + 1.0) * lt - std::exp(lt);
        }
        case SeverityFamily::GeneralizedPareto: {
            const double xi = params[0], sigma = params[1];
            if (std::fabs(xi) <= kShapeZeroTol) return -std::log(sigma) - x / sigma;
            return -std::log(sigma) - (1.0 / xi + 1.0) * std::log1p(xi * x / sigma);
        }
        case SeverityFamily::LogNormal: {
            const double mu = params[0], s = params[1];
            const double z = (std::log(x) - mu) / s;
            return -std::log(x * s) - 0.5 * std::log(2.0 * M_PI) - 0.5 * z * z;
        }
        case SeverityFamily::Weibull: {
            const double k = params[0], lam = params[1];
            const double z = x / lam;
            return std::log(k / lam) + (k - 1.0) * std::log(z) - std::pow(z, k);
        }
    }
    return -std::numeric_limits<double>::infinity();
}

double SeverityDist::pdf(double x) const { return std::exp(log_pdf(x)); }

double SeverityDist::cdf(double x) const {
    switch (family) {
        case SeverityFamily::Gamma: {
            if (x <= 0.0) return 0.0;
            return gamma_p(params[0], x / params[1]);
        }
        case SeverityFamily::Exponential:
            return x <= 0.0 ? 0.0 : -std::expm1(-x / params[0]);
        case SeverityFamily::GEV: {
            const double xi = params[0], mu = params[1], sigma = params[2];
            const double z = (x - mu) / sigma;
            double t;
            if (std::fabs(xi) <= kShapeZeroTol) {
                t = std::exp(-z);
            } else {
                const double base = 1.0 + xi * z;
                if (base <= 0.0) return xi > 0.0 ? 0.0 : 1.0;
                t = std::pow(base, -1.0 / xi);
            }
            return std::exp(-t);
        }
        case SeverityFamily::GeneralizedPareto: {
            const double xi = params[0], sigma = params[1];
            if (x <= 0.0) return 0.0;
            if (std::fabs(xi) <= kShapeZeroTol) return -std::expm1(-x / sigma);
            const double base = 1.0 + xi * x / sigma;
            if (base <= 0.0) return 1.0;
            return 1.0 - std::pow(base, -1.0 / xi);
        }
        case SeverityFamily::LogNormal: {
            if (x <= 0.0) return 0.0;
            return normal_cdf((std::log(x) - params[0]) / params[1]);
        }
        case SeverityFamily::Weibull: {
            if (x <= 0.0) return 0.0;
            return -std::expm1(-std::pow(x / params[1], params[0]));
        }
    }
    return 0.0;
}

double SeverityDist::quantile(double p) const {
    if (p < 0.0 || p > 1.0) throw ValidationError("quantile: p outside [0,1]");
    switch (family) {
        case SeverityFamily::Gamma:
            return params[1] * gamma_p_inv(params[0], p);
        case SeverityFamily::Exponential:
            return -params[0] * std::log1p(-p);
        case SeverityFamily::GEV: {
            const double xi = params[0], mu = params[1], sigma = params[2];
            if (p == 0.0 || p == 1.0) {
                return p == 0.0 ? (xi > 0 ? mu - sigma / xi
                                          : -std::numeric_limits<double>::infinity())
                                : (xi < 0 ? mu - sigma / xi
                                          : std::numeric_limits<double>::infinity());
            }
            if (std::fabs(xi) <= kShapeZeroTol) return mu - sigma * std::log(-std::log(p));
            return mu + sigma * (std::pow(-std::log(p), -xi) - 1.0) / xi;
        }
        case SeverityFamily::GeneralizedPareto: {
            const double xi = params[0], sigma = params[1];
            if (std::fabs(xi) <= kShapeZeroTol) return -sigma * std::log1p(-p);
            return sigma * (std::pow(1.0 - p, -xi) - 1.0) / xi;
        }
        case SeverityFamily::LogNormal:
            return std::exp(params[0] + params[1] * normal_quantile(p));
        case SeverityFamily::Weibull:
            return params[1] * std::pow(-std::log1p(-p), 1.0 / params[0]);
    }
    return 0.0;
}

double SeverityDist::mean() const {
    switch (family) {
        case SeverityFamily::Gamma: return params[0] * params[1];
        case SeverityFamily::Exponential: return params[0];
        case SeverityFamily::GEV: {
            const double xi = params[0], mu = params[1], sigma = params[2];
            if (std::fabs(xi) <= kShapeZeroTol) return mu + sigma * kEulerGamma;
            if (xi >= 1.0) return std::numeric_limits<double>::infinity();
            return mu + sigma * (std::tgamma(1.0 - xi) - 1.0) / xi;
        }
        case SeverityFamily::GeneralizedPareto: {
            const double xi = params[0], sigma = params[1];
            if (xi >= 1.0) return std::numeric_limits<double>::infinity();
            return sigma / (1.0 - xi);
        }
        case SeverityFamily::LogNormal:
            return std::exp(params[0] + 0.5 * params[1] * params[1]);
        case SeverityFamily::Weibull:
            return params[1] * std::tgamma(1.0 + 1.0 / params[0]);
    }
    return 0.0;
}

std::string to_string(FrequencyFamily f) {
    return f == FrequencyFamily::Poisson ? "poisson" : "negbin";
}

double FrequencyDist::log_pmf(unsigned n) const {
    const double nd = static_cast<double>(n);
    if (family == FrequencyFamily::Poisson) {
        return nd * std::log(lambda) - lambda - std::lgamma(nd + 1.0);
    }
    return std::lgamma(nd + r) - std::lgamma(r) - std::lgamma(nd + 1.0) + r * std::log(p) +
           nd * std::log1p(-p);
}

double FrequencyDist::pmf(unsigned n) const { return std::exp(log_pmf(n)); }

double FrequencyDist::mean() const {
    return family == FrequencyFamily::Poisson ? lambda : r * (1.0 - p) / p;
}

}  // namespace crisislda
