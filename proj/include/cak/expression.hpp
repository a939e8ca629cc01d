#ifndef CAK_EXPRESSION_HPP
#define CAK_EXPRESSION_HPP

#include <array>
#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cak/permutation.hpp"
#include "cak/rational.hpp"

namespace cak {

inline constexpr int kMaxPairs = kMaxN * (kMaxN - 1) / 2;

/// Index of the ordered pair (i<j) in a flat 15-slot table (i,j are 0-based).
inline int pairIndex(int i, int j) {
    static constexpr int off[kMaxN] = {0, 5, 9, 12, 14, 0};
    return off[i] + (j - i - 1);
}

struct PairRef {
    int i, j;  // 0-based, i < j
};

/// Inverse of pairIndex.
inline PairRef pairFromIndex(int idx) {
    for (int i = 0; i < kMaxN - 1; ++i)
        for (int j = i + 1; j < kMaxN; ++j)
            if (pairIndex(i, j) == idx) return {i, j};
    throw std::out_of_range("pairFromIndex");
}

enum class VarFamily : std::uint8_t { X, Z };

/// Laurent monomial in x_1..x_N, z_1..z_N.
/// x exponents stay non-negative (x-singularities live in DiffDenominator);
/// z exponents may in principle go negative, though no current operation produces that.
struct Monomial {
    std::array<std::int16_t, kMaxN> xe{};
    std::array<std::int16_t, kMaxN> ze{};

    friend bool operator==(const Monomial& a, const Monomial& b) { return a.xe == b.xe && a.ze == b.ze; }
};

/// Negative powers of coordinate differences: product over stored pairs (i<j) of
/// (x_i-x_j)^{-xp} (z_i-z_j)^{-zp}. Zero powers are simply zero entries.
struct DiffDenominator {
    std::array<std::uint8_t, kMaxPairs> xp{};
    std::array<std::uint8_t, kMaxPairs> zp{};

    bool trivial() const {
        for (int k = 0; k < kMaxPairs; ++k)
            if (xp[k] || zp[k]) return false;
        return true;
    }
    friend bool operator==(const DiffDenominator& a, const DiffDenominator& b) {
        return a.xp == b.xp && a.zp == b.zp;
    }
};

enum class TagKind : std::uint8_t { None = 0, PlaneWave = 1, Gaussian = 2 };

/// Exponential factor on a term: none, e^{i sum_k x_{pi(k)} z_k}, or e^{-c [x^2]}.
struct ExponentialTag {
    TagKind kind = TagKind::None;
    Permutation perm;  // PlaneWave only
    Rational rate;     // Gaussian only, the c in e^{-c [x^2]}

    static ExponentialTag none() { return {}; }
    static ExponentialTag planeWave(const Permutation& p) {
        ExponentialTag t;
        t.kind = TagKind::PlaneWave;
        t.perm = p;
        return t;
    }
    static ExponentialTag gaussian(Rational c) {
        ExponentialTag t;
        t.kind = TagKind::Gaussian;
        t.rate = std::move(c);
        return t;
    }

    friend bool operator==(const ExponentialTag& a, const ExponentialTag& b) {
        if (a.kind != b.kind) return false;
        switch (a.kind) {
            case TagKind::None: return true;
            case TagKind::PlaneWave: return a.perm == b.perm;
            case TagKind::Gaussian: return a.rate == b.rate;
        }
        return false;
    }
    friend bool operator<(const ExponentialTag& a, const ExponentialTag& b) {
        if (a.kind != b.kind) return a.kind < b.kind;
        switch (a.kind) {
            case TagKind::None: return false;
            case TagKind::PlaneWave: return a.perm < b.perm;
            case TagKind::Gaussian: return a.rate < b.rate;
        }
        return false;
    }
};

struct Term {
    ComplexRational coeff;
    Monomial mono;
    DiffDenominator denom;
    ExponentialTag tag;
};

/// Canonical term order: (tag, xExponents, zExponents, denom).
inline bool termKeyLess(const Term& a, const Term& b) {
    if (!(a.tag == b.tag)) return a.tag < b.tag;
    if (a.mono.xe != b.mono.xe) return a.mono.xe < b.mono.xe;
    if (a.mono.ze != b.mono.ze) return a.mono.ze < b.mono.ze;
    if (a.denom.xp != b.denom.xp) return a.denom.xp < b.denom.xp;
    return a.denom.zp < b.denom.zp;
}

inline bool termKeyEqual(const Term& a, const Term& b) {
    return a.tag == b.tag && a.mono == b.mono && a.denom == b.denom;
}

/// Exact symbolic sum of terms over x_1..x_N, z_1..z_N: the carrier for every
/// state and operator image in the package. Immutable value semantics; all
/// operations return fresh expressions in canonical (sorted, merged) term order.
class Expression {
  public:
    Expression() : n_(0) {}
    explicit Expression(int n);

    static Expression zero(int n) { return Expression(n); }
    static Expression constant(int n, ComplexRational c);
    /// Single variable x_i or z_i (0-based index).
    static Expression variable(int n, VarFamily fam, int i);
    /// Bare exponential tag with unit coefficient.
    static Expression tagged(int n, const ExponentialTag& tag);

    int n() const { return n_; }
    const std::vector<Term>& terms() const { return terms_; }
    bool isStructurallyZero() const { return terms_.empty(); }
    std::size_t termCount() const { return terms_.size(); }

    Expression operator-() const;
    friend Expression operator+(const Expression& a, const Expression& b);
    friend Expression operator-(const Expression& a, const Expression& b);
    friend Expression operator*(const Expression& a, const Expression& b);

    Expression scaled(const ComplexRational& c) const;
    /// Multiply by x_i^k or z_i^k (k >= 0).
    Expression timesVarPower(VarFamily fam, int i, int k) const;
    /// Multiply by (v_i - v_j)^{-1} for i < j (denominator power bump).
    Expression timesInverseDifference(VarFamily fam, int i, int j) const;
    /// Multiply by (v_i - v_j), i < j, as a polynomial factor.
    Expression timesDifference(VarFamily fam, int i, int j) const;
    /// Multiply every Gaussian tag rate by adding delta (all terms must carry Gaussian tags).
    Expression shiftedGaussianRate(const Rational& delta) const;

    /// Sum of x_k^2 or z_k^2 times this.
    Expression timesSquareSum(VarFamily fam) const;

    /// d/dx_i or d/dz_i, acting on monomials, denominators and tags.
    Expression derivative(VarFamily fam, int i) const;

    /// Action of the coordinate permutation operator M_sigma (x-coordinates only;
    /// z are spectral labels). Plane-wave tags compose, Gaussian tags are fixed.
    Expression permuted(const Permutation& sigma) const;

    /// Swap the roles of x and z everywhere (monomials, denominators, plane waves).
    /// Gaussian tags are not swappable; throws if one is present.
    Expression xzSwapped() const;

    /// Canonical rational normal form: per exponential tag, all terms are brought
    /// over one common denominator which is then reduced to minimal binomial powers.
    /// Mathematically-zero expressions normalize to the empty expression, which is
    /// what every exact-zero acceptance check relies on.
    Expression rationalNormalForm() const;

    bool isZero() const { return rationalNormalForm().isStructurallyZero(); }
    friend bool equivalent(const Expression& a, const Expression& b) { return (a - b).isZero(); }

    /// Floating-point evaluation in canonical term order. xs real, zs complex.
    /// Throws on exactly coincident x at a live x-denominator.
    std::complex<double> evalNumeric(const std::vector<double>& xs,
                                     const std::vector<std::complex<double>>& zs) const;

    /// As evalNumeric but with every Gaussian tag factor skipped; the caller folds
    /// the (single, uniform) Gaussian rate into its quadrature weight. Returns the
    /// rate through `rateOut` (0 if untagged). Throws if rates are mixed.
    std::complex<double> evalNumericSansGaussian(const std::vector<double>& xs,
                                                 const std::vector<std::complex<double>>& zs,
                                                 Rational* rateOut = nullptr) const;

    /// Uniform Gaussian rate across all terms (None counts as no constraint);
    /// nullopt if terms disagree.
    std::optional<Rational> uniformGaussianRate() const;

    std::string toString() const;

    /// Terms arriving unsorted/duplicated; sorts, merges, strips zeros.
    static Expression fromTerms(int n, std::vector<Term> terms);

  private:
    int n_;
    std::vector<Term> terms_;  // canonical order, coeff != 0
    void canonicalize();
};

/// Product of (v_q - v_p) over all pairs p < q: the descending Vandermonde
/// prod_{i>j}(v_i - v_j), positive on the wedge v_1 < ... < v_N.
Expression vandermonde(int n, VarFamily fam, int power = 1);

/// Numeric counterpart of `vandermonde` at a sample point.
std::complex<double> vandermondeValue(const std::vector<std::complex<double>>& v, int power = 1);

/// JSON (de)serialization with stable field order and exact rational strings.
std::string expressionToJson(const Expression& e, int indent = -1);
Expression expressionFromJson(const std::string& json);

/// Sum of terms exceeding the configured budget.
struct BudgetExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Global term-count budget for symbolic constructions (default 10^6).
std::size_t termBudget();
void setTermBudget(std::size_t budget);
void checkBudget(std::size_t candidate);

}  // namespace cak

#endif
