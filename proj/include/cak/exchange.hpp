#ifndef CAK_EXCHANGE_HPP
#define CAK_EXCHANGE_HPP

#include <stdexcept>

#include "cak/expression.hpp"

namespace cak {

struct NotSymmetric : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NotDivisible : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// M_ij: swap particles i and j (0-based). Involutive.
Expression applyExchange(const Expression& e, int i, int j);

/// Dunkl exchange operator Pi_i = d/dx_i + sum_{j != i} g/(x_i-x_j) M_ij.
/// The exchange acts first, then the 1/(x_i-x_j) factor multiplies; the ring
/// is closed so no error cases arise beyond index range.
Expression applyDunkl(const Expression& e, int i, const Rational& g);

/// Bosonic projector S = sum_{pi in S_N} M_pi. N <= 6 enforced by the budget on N.
Expression symmetrize(const Expression& e);

/// Exchange parity of an expression: +1 symmetric, -1 antisymmetric, 0 neither.
int exchangeParity(const Expression& e);

/// Vandermonde intertwiner: applies prod_{i>j}(Pi_i - Pi_j) at coupling g
/// directly to e. Requires definite exchange parity (the image of a bosonic
/// state is fermionic and vice versa, so chained applications alternate).
/// Output parity is minus the input parity.
Expression applyVandermondeBar(const Expression& e, const Rational& g);

/// Exact quotient e / (v_i - v_j) for polynomial input (no tags or denominators
/// allowed); throws NotDivisible when a remainder survives.
Expression divideByDifference(const Expression& e, VarFamily fam, int i, int j);

/// General in-ring division by the descending Vandermonde prod_{i>j}(v_i-v_j)^g:
/// always exact in the extended ring, surviving factors land in the denominators.
Expression divideByVandermonde(const Expression& e, VarFamily fam, int g);

/// Harmonic Calogero Hamiltonian at omega=1:
///   -1/2 sum d^2/dx_i^2 + sum_{i<j} g(g-1)/(x_i-x_j)^2 + 1/2 sum x_i^2.
Expression applyHarmonicCalogero(const Expression& e, const Rational& g);

/// Scattering (trap-free) Calogero Hamiltonian: same with the well removed.
Expression applyScatteringCalogero(const Expression& e, const Rational& g);

}  // namespace cak

#endif
