#pragma once

#include <string>
#include <vector>

#include "crisislda/types.hpp"

namespace crisislda {

// Special functions used by the fitters and samplers.
double digamma(double x);
double trigamma(double x);
// Regularized lower incomplete gamma P(a, x).
double gamma_p(double a, double x);
double gamma_p_inv(double a, double p);
double normal_cdf(double z);
double normal_quantile(double p);

enum class SeverityFamily { Gamma, Exponential, GEV, GeneralizedPareto, LogNormal, Weibull };

std::string to_string(SeverityFamily f);
std::optional<SeverityFamily> parse_severity_family(const std::string& s);

// Parameter layout per family:
//   Gamma:            shape k > 0, scale theta > 0
//   Exponential:      mean > 0
//   GEV:              shape xi, location mu, scale sigma > 0
//   GeneralizedPareto: shape xi, scale sigma > 0 (threshold 0)
//   LogNormal:        mu, sigma > 0 (log scale)
//   Weibull:          shape k > 0, scale lambda > 0
struct SeverityDist {
    SeverityFamily family;
    std::vector<double> params;

    double pdf(double x) const;
    double log_pdf(double x) const;
    double cdf(double x) const;
    double quantile(double p) const;
    double mean() const;
    // True when x lies in the distribution's support.
    bool in_support(double x) const;
};

enum class FrequencyFamily { Poisson, NegativeBinomial };

std::string to_string(FrequencyFamily f);

// Poisson: rate lambda. NegBin: size r > 0, success prob p in (0,1), with
// pmf C(n+r-1, n) p^r (1-p)^n so the mean is r(1-p)/p.
struct FrequencyDist {
    FrequencyFamily family;
    double lambda = 0.0;  // Poisson
    double r = 0.0;       // NegBin
    double p = 0.0;       // NegBin

    double pmf(unsigned n) const;
    double log_pmf(unsigned n) const;
    double mean() const;
};

}  // namespace crisislda
