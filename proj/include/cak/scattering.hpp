#ifndef CAK_SCATTERING_HPP
#define CAK_SCATTERING_HPP

#include <complex>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "cak/bessel.hpp"
#include "cak/exchange.hpp"
#include "cak/expression.hpp"

namespace cak {

/// Scattering Calogero eigenstate with asymptotic momenta z. Symbolic form for
/// integer coupling (exact Expression in the extended ring); the 2-body Bessel
/// form covers arbitrary real coupling numerically.
struct ScatteringState {
    int n = 0;
    Rational g;
    std::variant<Expression, double> form;  // Expression = symbolic, double = Bessel 2-body coupling

    bool symbolic() const { return std::holds_alternative<Expression>(form); }
    const Expression& expr() const { return std::get<Expression>(form); }
};

/// h_g[x,z] = (-1)^{g N(N-1)/2} Delta_z^{-g} VB_{g-1} ... VB_0 S e^{i sum x_i z_i}.
/// Integer g >= 0, n <= 4. For g = 0 this is the symmetrized plane wave itself.
ScatteringState buildScatteringSymbolic(int n, int g);

/// 2-body Bessel wrapper as a state object.
ScatteringState besselScatteringState(double g);

struct EigenReport {
    bool pass = false;
    std::size_t residualTerms = 0;  // 0 iff pass
    Expression residual;
};

/// H_bar_g h - 1/2 [z^2] h, reported with the exact residual.
EigenReport checkEigen(const ScatteringState& h);

struct SwapReport {
    bool pass = false;
    bool swapExact = false;   // h[x,z] - h[z,x] == 0
    bool sStructure = false;  // every prefactor is a constant combination of s_ij products
};

SwapReport checkSwapSymmetry(const ScatteringState& h);

/// Exact check that each plane-wave coefficient of e is a rational-constant
/// combination of products of 1/s_ij with s_ij = (x_i-x_j)(z_i-z_j).
bool sProductStructure(const Expression& e);

/// Asymptotic phases e^{-i pi N(N-1) g/4} e^{i pi g c(pi)} per permutation,
/// with c(pi) the inversion count (minimal crossing number).
std::vector<std::pair<Permutation, std::complex<double>>> asymptoticPhases(int n, double g);

std::string scatteringStateToJson(const ScatteringState& s, int indent = 2);
ScatteringState scatteringStateFromJson(const std::string& json);

}  // namespace cak

#endif
