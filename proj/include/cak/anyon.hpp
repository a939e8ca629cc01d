#ifndef CAK_ANYON_HPP
#define CAK_ANYON_HPP

#include <string>
#include <vector>

#include "cak/calogero.hpp"
#include "cak/expression.hpp"

namespace cak {

/// Trap / magnetic-field parameters for the spectrum formulas.
struct SpectrumParams {
    double omega = 1.0;   // trap frequency, >= 0
    double omegaC = 0.0;  // half cyclotron frequency, >= 0

    double omegaT() const;  // sqrt(omegaC^2 + omega^2)
    void validate() const;
};

/// Linear (LLL-induced) anyon state. `symPart` is the symmetrized monomial
/// sum; the monodromy factor prod_{k<l}(z_k-z_l)^alpha is expanded into `body`
/// for integer alpha and kept as an opaque exponent label otherwise.
struct AnyonState {
    int n = 0;
    Rational alpha;          // statistical parameter in [0,1] (or coupling g when mapped)
    std::vector<int> ell;    // nondecreasing quantum numbers
    Expression symPart;      // sum_pi prod_i z_{pi(i)}^{ell_i}
    Expression body;         // expanded ? Delta_z^alpha * symPart : symPart
    bool expanded = false;   // true iff alpha is a nonnegative integer

    /// Total angular momentum sum(ell) + alpha N(N-1)/2.
    Rational angularMomentum() const;
};

/// Constructs the linear state; expands the monodromy factor for integer alpha >= 0.
AnyonState lllState(int n, const Rational& alpha, const std::vector<int>& ell);

/// Linear-state spectrum. Without field (omegaC = 0):
///   E = omega [sum(ell) + alpha N(N-1)/2] + N omega;
/// with field:
///   E = (omega_t - omega_c)[sum(ell) + alpha N(N-1)/2 + N] + N omega_t.
double anyonEnergy(int n, double alpha, const std::vector<int>& ell, const SpectrumParams& params);

/// Symbolic action of the anyon Hamiltonian on the holomorphic body at
/// omega = 1, omegaC = 0; the dbar terms annihilate holomorphic input, leaving
/// the Euler operator plus constants. Result equals energy * body exactly.
Expression applyAnyonHamiltonian(const AnyonState& s);

/// Euler operator sum_k z_k d/dz_k.
Expression eulerOperatorZ(const Expression& e);

/// Number of nondecreasing N-tuples with the given excitation total
/// (= partitions of the total into at most N parts).
long countDegeneracy(int n, int totalExcitation);

std::string anyonStateToJson(const AnyonState& s, int indent = 2);
AnyonState anyonStateFromJson(const std::string& json);

}  // namespace cak

#endif
