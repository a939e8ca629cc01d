#ifndef CAK_TEST_SUPPORT_HPP
#define CAK_TEST_SUPPORT_HPP

#include <algorithm>
#include <complex>
#include <random>
#include <vector>

#include "cak/exchange.hpp"
#include "cak/expression.hpp"

namespace cak::testing {

inline double relErr(std::complex<double> got, std::complex<double> want) {
    double scale = std::max(1e-300, std::abs(want));
    return std::abs(got - want) / scale;
}

/// Random in-ring expressions for property tests: small polynomials with
/// optional difference denominators and an optional exponential tag.
class ExprGen {
  public:
    explicit ExprGen(unsigned seed) : rng_(seed) {}

    Expression randomExpression(int n, bool allowDenom = true, bool allowTag = true) {
        std::uniform_int_distribution<int> nterms(1, 4);
        std::vector<Term> terms;
        int tagChoice = allowTag ? pick(0, 2) : 0;
        ExponentialTag tag = ExponentialTag::none();
        if (tagChoice == 1) tag = ExponentialTag::planeWave(randomPerm(n));
        if (tagChoice == 2) tag = ExponentialTag::gaussian(Rational(1, 2));
        int count = nterms(rng_);
        for (int t = 0; t < count; ++t) {
            Term term;
            term.coeff = ComplexRational(Rational(pick(-3, 3)), Rational(pick(-2, 2)));
            if (term.coeff.isZero()) term.coeff = ComplexRational(1);
            for (int k = 0; k < n; ++k) {
                term.mono.xe[k] = static_cast<std::int16_t>(pick(0, 2));
                term.mono.ze[k] = static_cast<std::int16_t>(pick(0, 1));
            }
            if (allowDenom && pick(0, 3) == 0) {
                int p = pick(0, n - 2);
                int q = pick(p + 1, n - 1);
                term.denom.xp[pairIndex(p, q)] = 1;
            }
            term.tag = tag;
            terms.push_back(std::move(term));
        }
        return Expression::fromTerms(n, std::move(terms));
    }

    Permutation randomPerm(int n) {
        std::vector<int> img(n);
        for (int k = 0; k < n; ++k) img[k] = k;
        std::shuffle(img.begin(), img.end(), rng_);
        return Permutation::fromImages(img);
    }

    int pick(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

    std::mt19937& rng() { return rng_; }

  private:
    std::mt19937 rng_;
};

}  // namespace cak::testing

#endif
