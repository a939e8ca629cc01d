#include "cak/bessel.hpp"

#include <cmath>
#include <limits>

namespace cak {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

bool isNegativeInteger(double x) { return x < -0.5 && std::abs(x - std::round(x)) < 1e-12; }

bool isHalfIntegerOrder(double nu) {
    double two = 2.0 * nu;
    return std::abs(two - std::round(two)) < 1e-12 && (static_cast<long>(std::llround(two)) % 2 != 0);
}

/// Half-integer orders terminate the Hankel expansion exactly (the Rayleigh
/// closed forms), so the asymptotic branch takes over as soon as its own
/// small-s cancellation is harmless. Generic orders switch where the series
/// roundoff and the asymptotic tail floor cross (~1e-11 at |s| ~ 13).
double switchRadius(double nu) { return isHalfIntegerOrder(nu) ? 1.0 : 13.0; }

/// Entire part of the series: sqrt(2 pi s) J_nu(s) = (s/2)^{nu+1/2} * reduced(nu, s),
/// reduced(nu, s) = 2 sqrt(pi) sum_k (-1)^k (s^2/4)^k / (k! Gamma(nu+k+1)).
std::complex<double> seriesReduced(double nu, std::complex<double> s) {
    std::complex<double> q = 0.25 * s * s;
    std::complex<double> term = 1.0 / std::tgamma(nu + 1.0);
    std::complex<double> sum = term;
    for (int k = 0; k < 300; ++k) {
        term *= -q / ((k + 1.0) * (nu + k + 1.0));
        sum += term;
        if (std::abs(term) < 1e-18 * (1.0 + std::abs(sum))) return 2.0 * std::sqrt(kPi) * sum;
    }
    throw NonConvergence("bessel series did not converge");
}

std::complex<double> seriesBesselSqrt(double nu, std::complex<double> s) {
    if (s == std::complex<double>(0.0)) {
        if (nu + 0.5 > 0.0) return 0.0;
        if (nu == -0.5) return 2.0 * std::sqrt(kPi) / std::tgamma(0.5);  // = 2
        throw std::domain_error("besselSqrtJ: singular at s = 0 for nu < -1/2");
    }
    return std::pow(0.5 * s, nu + 0.5) * seriesReduced(nu, s);
}

/// Hankel expansion. Terminates exactly when 2nu is an odd integer (the
/// Rayleigh closed forms); otherwise asymptotic, truncated at the smallest term.
std::complex<double> asymptoticBesselSqrt(double nu, std::complex<double> s) {
    double mu = 4.0 * nu * nu;
    bool terminating = isHalfIntegerOrder(nu);
    std::complex<double> omega = s - (0.5 * nu + 0.25) * kPi;
    std::complex<double> P = 1.0, Q = 0.0;
    double ak = 1.0;
    std::complex<double> spow = 1.0;
    double prevMag = std::numeric_limits<double>::max();
    for (int k = 1; k <= 64; ++k) {
        double odd = 2.0 * k - 1.0;
        ak *= (mu - odd * odd) / (8.0 * k);
        if (ak == 0.0) break;
        spow /= s;
        std::complex<double> term = ak * spow;
        double mag = std::abs(term);
        if (!terminating) {
            if (mag > prevMag) break;  // asymptotic tail started growing
            prevMag = mag;
        }
        int phase = k % 4;  // signs: (-1)^m on a_{2m} (P) and a_{2m+1} (Q)
        if (phase == 0)
            P += term;
        else if (phase == 1)
            Q += term;
        else if (phase == 2)
            P -= term;
        else
            Q -= term;
        if (!terminating && mag < 1e-18) break;
    }
    return 2.0 * (P * std::cos(omega) - Q * std::sin(omega));
}

}  // namespace

std::complex<double> besselSqrtJ(double nu, std::complex<double> s) {
    if (isNegativeInteger(nu)) {
        double m = std::round(-nu);
        double sign = (static_cast<long>(m) % 2 == 0) ? 1.0 : -1.0;
        return sign * besselSqrtJ(m, s);
    }
    if (std::abs(s) < switchRadius(nu)) return seriesBesselSqrt(nu, s);
    return asymptoticBesselSqrt(nu, s);
}

namespace {

void validateSwitchover(double nu, double g) {
    double r0 = switchRadius(nu);
    for (double dr : {-0.2, 0.0, 0.2}) {
        for (double th : {-0.5, 0.0, 0.5}) {
            std::complex<double> s = std::polar(r0 + dr, th);
            std::complex<double> a = seriesBesselSqrt(nu, s);
            std::complex<double> b = asymptoticBesselSqrt(nu, s);
            if (std::abs(a - b) > 1e-10 * std::max(1.0, std::abs(a)))
                throw NonConvergence("bessel switchover handshake failed at g=" + std::to_string(g));
        }
    }
}

}  // namespace

BesselScattering::BesselScattering(double g) : g_(g) {
    if (!(g >= 0.0) || !std::isfinite(g)) throw std::domain_error("BesselScattering: g must be >= 0");
    double nu = g - 0.5;
    if (isNegativeInteger(nu)) nu = -nu;
    validateSwitchover(nu, g);
}

std::complex<double> BesselScattering::h(std::complex<double> s) const {
    return besselSqrtJ(g_ - 0.5, s);
}

std::complex<double> BesselScattering::hReduced(std::complex<double> s) const {
    if (std::abs(s) < switchRadius(g_ - 0.5)) return seriesReduced(g_ - 0.5, s);
    return asymptoticBesselSqrt(g_ - 0.5, s) / std::pow(0.5 * s, g_);
}

std::complex<double> BesselScattering::hPrime(std::complex<double> s) const {
    return besselSqrtJ(g_ - 1.5, s) + ((1.0 - g_) / s) * h(s);
}

std::complex<double> BesselScattering::irregular(std::complex<double> s) const {
    return besselSqrtJ(0.5 - g_, s);
}

std::complex<double> BesselScattering::irregularPrime(std::complex<double> s) const {
    // d/ds [sqrt(2 pi s) J_{1/2-g}(s)] = sqrt(2 pi s) J_{-1/2-g}(s) + (g/s) sqrt(2 pi s) J_{1/2-g}(s)
    return besselSqrtJ(-0.5 - g_, s) + (g_ / s) * irregular(s);
}

std::complex<double> besselScattering2Body(double g, std::complex<double> s) {
    BesselScattering b(g);
    return b.h(s);
}

}  // namespace cak
