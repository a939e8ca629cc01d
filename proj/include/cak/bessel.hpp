#ifndef CAK_BESSEL_HPP
#define CAK_BESSEL_HPP

#include <complex>
#include <stdexcept>

namespace cak {

struct NonConvergence : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// sqrt(2 pi s) J_nu(s) for real order and complex argument: power series for
/// small |s|, Hankel asymptotics beyond (which terminates exactly at
/// half-integer orders, i.e. integer coupling). Principal powers throughout;
/// callers keep Re s > 0.
std::complex<double> besselSqrtJ(double nu, std::complex<double> s);

/// Scattering solution h_g and friends for the relative 2-body problem.
/// h_g(s) = sqrt(2 pi s) J_{g-1/2}(s): behaves like s^g at the origin, reduces
/// to 2cos s / 2sin s at g = 0 / 1. The switchover between the series and the
/// asymptotic branch is validated on an overlap annulus at construction.
class BesselScattering {
  public:
    explicit BesselScattering(double g);

    double coupling() const { return g_; }

    std::complex<double> h(std::complex<double> s) const;
    /// h_g(s) / (s/2)^g: entire and even; the natural integrand factor for
    /// half-line quadrature with the x^{2g} weight split off.
    std::complex<double> hReduced(std::complex<double> s) const;
    /// d/ds h_g(s) via h_{g-1}(s) + (1-g)/s h_g(s).
    std::complex<double> hPrime(std::complex<double> s) const;

    /// Second (irregular) solution sqrt(2 pi s) J_{1/2-g}(s) ~ s^{1-g} and its derivative.
    std::complex<double> irregular(std::complex<double> s) const;
    std::complex<double> irregularPrime(std::complex<double> s) const;

  private:
    double g_;
};

/// Free-function entry point: h_g(s) at real coupling g >= 0.
std::complex<double> besselScattering2Body(double g, std::complex<double> s);

}  // namespace cak

#endif
