#ifndef CAK_CALOGERO_HPP
#define CAK_CALOGERO_HPP

#include <string>
#include <vector>

#include "cak/exchange.hpp"
#include "cak/expression.hpp"

namespace cak {

struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Harmonic Calogero eigenstate (omega = 1). `body` carries the Gaussian e^{-[x^2]/2}
/// and all rational prefactors of the rescaled definition; the irrational pi^{-N/2}
/// normalization is kept as a half-power exponent and applied at numeric evaluation.
struct CalogeroState {
    int n = 0;
    Rational g;
    std::vector<int> ell;       // nondecreasing quantum numbers
    Expression body;            // symbolic wavefunction, Gaussian tag rate 1/2
    Rational energy;            // sum(ell) + g N(N-1)/2 + N/2
    int normPiHalfPower = 0;    // body is implicitly multiplied by pi^{normPiHalfPower/2}

    std::complex<double> evalNumeric(const std::vector<double>& xs) const;
};

/// Ground state psi_0 = Delta_x^g e^{-[x^2]/2} (wedge convention x_1 < ... < x_N,
/// polynomial continuation elsewhere). Integer g >= 0.
CalogeroState groundState(int n, int g);

/// Creation operator a_i^+ applied through the Gaussian-conjugation identity:
/// shift the Gaussian rate by +1/2, apply the Dunkl operator, shift back.
/// Every term of the input must carry a Gaussian tag.
Expression raise(const Expression& e, int i, const Rational& g);

/// Lowering operator a_i = -Pi_i - x_i (annihilates the ground state).
Expression lower(const Expression& e, int i, const Rational& g);

/// Excited state via the rescaled definition
///   psi_ell = 2^{g N(N-1)/2} pi^{-N/2} sum_pi prod_i (i a_{pi(i)}^+)^{ell_i} psi_0.
/// ell must be nondecreasing and nonnegative; integer g >= 0.
CalogeroState buildState(int n, int g, const std::vector<int>& ell);

/// Spectrum at omega=1: sum(ell) + g N(N-1)/2 + N/2.
Rational calogeroEnergy(int n, const Rational& g, const std::vector<int>& ell);

/// Deformed Hermite polynomial H_{2l,g}(x/sqrt(2)) in exact rational coefficients:
/// even polynomial of degree 2l, equal to the classical Hermite H_{2l}(x/sqrt(2))
/// at g = 0; satisfies the relative eigenvalue relation with energy 2l + g + 1/2.
struct DeformedHermite {
    int ell = 0;
    Rational g;
    std::vector<Rational> evenCoeffs;  // coefficient of x^{2k} at index k

    double eval(double x) const;
    std::complex<double> eval(std::complex<double> x) const;
    double evalDeriv(double x) const;
};

DeformedHermite deformedHermite(int ell, const Rational& g);

/// Classical Hermite H_m(x/sqrt(2)) as exact coefficients of x^k (test oracle lives
/// in the test suite; this is the production evaluator used by the free-case kernel).
std::vector<Rational> classicalHermiteScaled(int m);

std::string calogeroStateToJson(const CalogeroState& s, int indent = 2);
CalogeroState calogeroStateFromJson(const std::string& json);

}  // namespace cak

#endif
