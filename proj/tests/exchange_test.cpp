#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "cak/exchange.hpp"
#include "cak/expression.hpp"
#include "test_support.hpp"

using namespace cak;
using cak::testing::ExprGen;

namespace {

Expression xvar(int n, int i) { return Expression::variable(n, VarFamily::X, i); }
Expression zvar(int n, int i) { return Expression::variable(n, VarFamily::Z, i); }
Expression one(int n) { return Expression::constant(n, ComplexRational(1)); }
Expression planeWaveId(int n) {
    return Expression::tagged(n, ExponentialTag::planeWave(Permutation::identity(n)));
}

}  // namespace

TEST_CASE("exchange acts on monomials, denominators and plane waves") {
    int n = 2;
    // M_12 x1^2 z1 = x2^2 z1
    Expression e = xvar(n, 0) * xvar(n, 0) * zvar(n, 0);
    Expression want = xvar(n, 1) * xvar(n, 1) * zvar(n, 0);
    CHECK((applyExchange(e, 0, 1) - want).isStructurallyZero());

    // M_12 1/(x1-x2) = -1/(x1-x2)
    Expression inv = one(n).timesInverseDifference(VarFamily::X, 0, 1);
    CHECK((applyExchange(inv, 0, 1) + inv).isStructurallyZero());

    // M_12 e^{i(x1 z1 + x2 z2)} = e^{i(x2 z1 + x1 z2)}
    Expression pw = planeWaveId(n);
    Expression swapped = Expression::tagged(n, ExponentialTag::planeWave(Permutation::transposition(n, 0, 1)));
    CHECK((applyExchange(pw, 0, 1) - swapped).isStructurallyZero());

    // Gaussian tag is fixed
    Expression g = Expression::tagged(n, ExponentialTag::gaussian(Rational(1, 2)));
    CHECK((applyExchange(g, 0, 1) - g).isStructurallyZero());
}

TEST_CASE("exchange is involutive and permutations compose (property)") {
    ExprGen gen(11);
    for (int trial = 0; trial < 25; ++trial) {
        int n = gen.pick(2, 4);
        Expression e = gen.randomExpression(n);
        int i = gen.pick(0, n - 2), j = gen.pick(i + 1, n - 1);
        CHECK((applyExchange(applyExchange(e, i, j), i, j) - e).isStructurallyZero());

        Permutation s = gen.randomPerm(n), t = gen.randomPerm(n);
        CHECK((e.permuted(t).permuted(s) - e.permuted(s * t)).isStructurallyZero());
    }
}

TEST_CASE("Dunkl operator: worked examples") {
    int n = 2;
    // Pi_1 1 = g/(x1-x2) for g=1
    Expression d = applyDunkl(one(n), 0, Rational(1));
    Expression want = one(n).timesInverseDifference(VarFamily::X, 0, 1);
    CHECK((d - want).isStructurallyZero());

    // [Pi_1, Pi_2] x1 = 0 at several couplings
    for (Rational g : {Rational(1, 2), Rational(1), Rational(2)}) {
        Expression e = xvar(n, 0);
        Expression ab = applyDunkl(applyDunkl(e, 0, g), 1, g);
        Expression ba = applyDunkl(applyDunkl(e, 1, g), 0, g);
        CHECK((ab - ba).isZero());
    }

    // Pi_1 e^{i(x1z1+x2z2)} at g=0 is i z1 times the plane wave
    Expression pw = planeWaveId(n);
    Expression want2 = pw.timesVarPower(VarFamily::Z, 0, 1).scaled(ComplexRational::i());
    CHECK((applyDunkl(pw, 0, Rational(0)) - want2).isStructurallyZero());
}

TEST_CASE("Dunkl operators commute on random ring elements (property)") {
    ExprGen gen(13);
    const Rational couplings[] = {Rational(1, 2), Rational(1), Rational(2)};
    for (int trial = 0; trial < 12; ++trial) {
        int n = gen.pick(2, 4);
        Expression e = gen.randomExpression(n);
        const Rational& g = couplings[trial % 3];
        int i = gen.pick(0, n - 2), j = gen.pick(i + 1, n - 1);
        Expression ab = applyDunkl(applyDunkl(e, i, g), j, g);
        Expression ba = applyDunkl(applyDunkl(e, j, g), i, g);
        CHECK((ab - ba).isZero());
    }
}

TEST_CASE("exchange algebra: M_ij Pi_i M_ij = Pi_j (property)") {
    ExprGen gen(17);
    for (int trial = 0; trial < 12; ++trial) {
        int n = gen.pick(2, 4);
        Expression e = gen.randomExpression(n);
        Rational g(trial % 2 ? 1 : 2);
        int i = gen.pick(0, n - 2), j = gen.pick(i + 1, n - 1);
        Expression lhs = applyExchange(applyDunkl(applyExchange(e, i, j), i, g), i, j);
        Expression rhs = applyDunkl(e, j, g);
        CHECK((lhs - rhs).isZero());
    }
}

TEST_CASE("symmetrize: worked examples") {
    int n = 2;
    Expression pw = planeWaveId(n);
    Expression sym = symmetrize(pw);
    Expression want =
        pw + Expression::tagged(n, ExponentialTag::planeWave(Permutation::transposition(n, 0, 1)));
    CHECK((sym - want).isStructurallyZero());

    CHECK(symmetrize(xvar(n, 0) - xvar(n, 1)).isStructurallyZero());
    CHECK((symmetrize(xvar(n, 0)) - (xvar(n, 0) + xvar(n, 1))).isStructurallyZero());
}

TEST_CASE("Vandermonde intertwiner on the Gaussian (N=2)") {
    int n = 2;
    Expression gauss = Expression::tagged(n, ExponentialTag::gaussian(Rational(1)));

    // g=0: (d_2 - d_1) e^{-[x^2]} = -2 (x2-x1) e^{-[x^2]} = (-2)^{N(N-1)/2} Delta_x e^{-[x^2]}
    Expression got = applyVandermondeBar(gauss, Rational(0));
    Expression want = (vandermonde(n, VarFamily::X) * gauss).scaled(ComplexRational(-2));
    CHECK((got - want).isZero());

    // any integer g: VB_g(Delta^g e^{-[x^2]}) = (-2) Delta^{g+1} e^{-[x^2]}
    for (int g = 0; g <= 3; ++g) {
        Expression in = vandermonde(n, VarFamily::X, g) * gauss;
        Expression out = applyVandermondeBar(in, Rational(g));
        Expression expect = (vandermonde(n, VarFamily::X, g + 1) * gauss).scaled(ComplexRational(-2));
        CHECK((out - expect).isZero());
    }
}

TEST_CASE("Vandermonde intertwiner on the symmetrized plane wave (N=2, g=0)") {
    int n = 2;
    Expression sym = symmetrize(planeWaveId(n));
    Expression got = applyVandermondeBar(sym, Rational(0));
    // (d_2 - d_1) [e^{iA} + e^{iB}] = i(z2-z1) e^{iA} + i(z1-z2) e^{iB}
    Expression pwA = planeWaveId(n);
    Expression pwB = Expression::tagged(n, ExponentialTag::planeWave(Permutation::transposition(n, 0, 1)));
    Expression zdiff = zvar(n, 1) - zvar(n, 0);
    Expression want = (zdiff * pwA - zdiff * pwB).scaled(ComplexRational::i());
    CHECK((got - want).isZero());
}

TEST_CASE("Vandermonde intertwiner output is antisymmetric on symmetric input") {
    ExprGen gen(23);
    for (int trial = 0; trial < 6; ++trial) {
        int n = gen.pick(2, 3);
        Expression e = symmetrize(gen.randomExpression(n, /*allowDenom=*/false, /*allowTag=*/false));
        if (e.isStructurallyZero()) continue;
        Rational g(trial % 3);
        Expression f = applyVandermondeBar(e, g);
        for (int i = 0; i + 1 < n; ++i) CHECK((applyExchange(f, i, i + 1) + f).isZero());
    }
    // indefinite parity is rejected
    Expression bad = xvar(2, 0);
    CHECK_THROWS_AS(applyVandermondeBar(bad, Rational(1)), NotSymmetric);
}

TEST_CASE("harmonic Calogero operator on simple inputs") {
    // N=1, g=0: H e^{-x^2/2} = 1/2 e^{-x^2/2}
    int n = 1;
    Expression gauss = Expression::tagged(n, ExponentialTag::gaussian(Rational(1, 2)));
    Expression r = applyHarmonicCalogero(gauss, Rational(0)) - gauss.scaled(ComplexRational(Rational(1, 2)));
    CHECK(r.isZero());
}
