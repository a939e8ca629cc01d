#include "cak/calogero.hpp"

#include <cmath>

#include "json.hpp"

namespace cak {

namespace {

void validateEll(int n, const std::vector<int>& ell) {
    if (static_cast<int>(ell.size()) != n) throw ValidationError("ell must have length n");
    int prev = 0;
    for (int v : ell) {
        if (v < 0) throw ValidationError("ell entries must be nonnegative");
        if (v < prev) throw ValidationError("ell must be nondecreasing");
        prev = v;
    }
}

/// Coupling the ladder operators carry when acting on the polynomial
/// continuation of the wedge state: the ground state's exchange parity is
/// (-1)^g, which fixes the sign (see applyVandermondeBar).
Rational ladderCoupling(int g) { return (g % 2 == 1) ? Rational(g) : Rational(-g); }

}  // namespace

std::complex<double> CalogeroState::evalNumeric(const std::vector<double>& xs) const {
    std::vector<std::complex<double>> zs(n, 0.0);
    std::complex<double> v = body.evalNumeric(xs, zs);
    return v * std::pow(M_PI, 0.5 * normPiHalfPower);
}

CalogeroState groundState(int n, int g) {
    if (n < 1 || n > kMaxN) throw ValidationError("groundState: n out of range");
    if (g < 0) throw ValidationError("groundState: g must be a nonnegative integer");
    CalogeroState s;
    s.n = n;
    s.g = Rational(g);
    s.ell.assign(n, 0);
    s.body = vandermonde(n, VarFamily::X, g) *
             Expression::tagged(n, ExponentialTag::gaussian(Rational(1, 2)));
    s.energy = calogeroEnergy(n, Rational(g), s.ell);
    return s;
}

Expression raise(const Expression& e, int i, const Rational& g) {
    Expression inner = e.shiftedGaussianRate(Rational(1, 2));
    return applyDunkl(inner, i, g).shiftedGaussianRate(Rational(-1, 2));
}

Expression lower(const Expression& e, int i, const Rational& g) {
    return -applyDunkl(e, i, g) - e.timesVarPower(VarFamily::X, i, 1);
}

Rational calogeroEnergy(int n, const Rational& g, const std::vector<int>& ell) {
    long sum = 0;
    for (int v : ell) sum += v;
    return Rational(sum) + g * Rational(static_cast<long>(n) * (n - 1) / 2) + ratFromLong(n, 2);
}

CalogeroState buildState(int n, int g, const std::vector<int>& ell) {
    if (n < 1 || n > kMaxN) throw ValidationError("buildState: n out of range");
    if (g < 0) throw ValidationError("buildState: g must be a nonnegative integer");
    validateEll(n, ell);

    CalogeroState gs = groundState(n, g);
    Rational gEff = ladderCoupling(g);
    long total = 0;
    for (int v : ell) total += v;

    Expression sum(n);
    for (const auto& pi : Permutation::all(n)) {
        Expression branch = gs.body;
        for (int i = 0; i < n; ++i)
            for (int rep = 0; rep < ell[i]; ++rep) branch = raise(branch, pi[i], gEff).rationalNormalForm();
        sum = sum + branch;
    }
    sum = sum.rationalNormalForm();
    for (const auto& t : sum.terms())
        if (!t.denom.trivial()) throw std::logic_error("buildState: non-polynomial residue survived");

    ComplexRational scale = ComplexRational::iPow(total) *
                            ComplexRational(ratPow(Rational(2), static_cast<long>(g) * n * (n - 1) / 2));

    CalogeroState s;
    s.n = n;
    s.g = Rational(g);
    s.ell = ell;
    s.body = sum.scaled(scale);
    s.energy = calogeroEnergy(n, Rational(g), ell);
    s.normPiHalfPower = -n;
    return s;
}

DeformedHermite deformedHermite(int ell, const Rational& g) {
    if (ell < 0) throw ValidationError("deformedHermite: ell must be nonnegative");
    // One ladder step in the even-polynomial representation p(x) (the x^g and
    // Gaussian factors handled analytically):
    //   p -> p'' + 2g p'/x - 2x p' + (x^2 - (2g+1)) p
    std::vector<Rational> c = {Rational(1)};
    for (int step = 0; step < ell; ++step) {
        std::vector<Rational> next(c.size() + 1, Rational(0));
        for (std::size_t k = 0; k < c.size(); ++k) {
            long m = static_cast<long>(k);
            next[k + 1] += c[k];                                 // x^2 p
            next[k] += c[k] * (Rational(-4 * m) - (2 * g + 1));  // -2x p' - (2g+1) p
        }
        for (std::size_t k = 1; k < c.size(); ++k) {
            long m = static_cast<long>(k);
            next[k - 1] += c[k] * Rational(2 * m) * (Rational(2 * m - 1) + 2 * g);  // p'' + 2g p'/x
        }
        c = std::move(next);
    }
    DeformedHermite h;
    h.ell = ell;
    h.g = g;
    h.evenCoeffs = std::move(c);
    Rational two = ratPow(Rational(2), ell);
    for (auto& v : h.evenCoeffs) v *= two;
    return h;
}

double DeformedHermite::eval(double x) const {
    double x2 = x * x, acc = 0.0;
    for (std::size_t k = evenCoeffs.size(); k-- > 0;) acc = acc * x2 + evenCoeffs[k].get_d();
    return acc;
}

std::complex<double> DeformedHermite::eval(std::complex<double> x) const {
    std::complex<double> x2 = x * x, acc = 0.0;
    for (std::size_t k = evenCoeffs.size(); k-- > 0;) acc = acc * x2 + evenCoeffs[k].get_d();
    return acc;
}

double DeformedHermite::evalDeriv(double x) const {
    double x2 = x * x, acc = 0.0;
    for (std::size_t k = evenCoeffs.size(); k-- > 1;)
        acc = acc * x2 + 2.0 * static_cast<double>(k) * evenCoeffs[k].get_d();
    return acc * x;
}

std::vector<Rational> classicalHermiteScaled(int m) {
    if (m < 0 || m % 2 != 0) throw ValidationError("classicalHermiteScaled: even order required");
    // H_m(y) integer coefficients by recurrence, then y = x/sqrt(2):
    // coefficient of x^{2j} is H-coeff of y^{2j} divided by 2^j.
    std::vector<std::vector<Rational>> H(m + 1);
    H[0] = {Rational(1)};
    if (m >= 1) H[1] = {Rational(0), Rational(2)};
    for (int k = 2; k <= m; ++k) {
        std::vector<Rational> cur(k + 1, Rational(0));
        for (std::size_t j = 0; j < H[k - 1].size(); ++j) cur[j + 1] += 2 * H[k - 1][j];
        for (std::size_t j = 0; j < H[k - 2].size(); ++j) cur[j] -= Rational(2 * (k - 1)) * H[k - 2][j];
        H[k] = std::move(cur);
    }
    std::vector<Rational> even(m / 2 + 1, Rational(0));
    for (int j = 0; j <= m / 2; ++j) even[j] = H[m][2 * j] / ratPow(Rational(2), j);
    return even;
}

// ---------------------------------------------------------------------------

using OrderedJson = nlohmann::ordered_json;

std::string calogeroStateToJson(const CalogeroState& s, int indent) {
    OrderedJson j;
    j["model"] = "calogero";
    j["n"] = s.n;
    j["g"] = ratToString(s.g);
    j["ell"] = s.ell;
    j["energy"] = ratToString(s.energy);
    j["norm_pi_half_power"] = s.normPiHalfPower;
    j["body"] = OrderedJson::parse(expressionToJson(s.body));
    return j.dump(indent);
}

CalogeroState calogeroStateFromJson(const std::string& json) {
    OrderedJson j = OrderedJson::parse(json);
    CalogeroState s;
    s.n = j.at("n").get<int>();
    s.g = ratParse(j.at("g").get<std::string>());
    s.ell = j.at("ell").get<std::vector<int>>();
    s.energy = ratParse(j.at("energy").get<std::string>());
    s.normPiHalfPower = j.at("norm_pi_half_power").get<int>();
    s.body = expressionFromJson(j.at("body").dump());
    return s;
}

}  // namespace cak
