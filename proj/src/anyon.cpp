#include "cak/anyon.hpp"

#include <cmath>

#include "json.hpp"

namespace cak {

double SpectrumParams::omegaT() const { return std::sqrt(omegaC * omegaC + omega * omega); }

void SpectrumParams::validate() const {
    if (omega < 0 || omegaC < 0 || !std::isfinite(omega) || !std::isfinite(omegaC))
        throw ValidationError("SpectrumParams: frequencies must be finite and nonnegative");
}

Rational AnyonState::angularMomentum() const {
    long sum = 0;
    for (int v : ell) sum += v;
    return Rational(sum) + alpha * Rational(static_cast<long>(n) * (n - 1) / 2);
}

AnyonState lllState(int n, const Rational& alpha, const std::vector<int>& ell) {
    if (n < 1 || n > kMaxN) throw ValidationError("lllState: n out of range");
    if (alpha < 0) throw ValidationError("lllState: alpha must be nonnegative");
    if (static_cast<int>(ell.size()) != n) throw ValidationError("lllState: ell must have length n");
    int prev = 0;
    for (int v : ell) {
        if (v < 0 || v < prev) throw ValidationError("lllState: ell must be nondecreasing, nonnegative");
        prev = v;
    }

    AnyonState s;
    s.n = n;
    s.alpha = alpha;
    s.ell = ell;

    std::vector<Term> terms;
    for (const auto& pi : Permutation::all(n)) {
        Term t;
        t.coeff = ComplexRational(1);
        for (int i = 0; i < n; ++i)
            t.mono.ze[pi[i]] = static_cast<std::int16_t>(t.mono.ze[pi[i]] + ell[i]);
        terms.push_back(std::move(t));
    }
    s.symPart = Expression::fromTerms(n, std::move(terms));

    if (ratIsInteger(alpha)) {
        s.expanded = true;
        long a = alpha.get_num().get_si();
        // monodromy factor in the ascending presentation prod_{k<l}(z_k - z_l)^alpha
        Expression delta = Expression::constant(n, ComplexRational(1));
        for (long rep = 0; rep < a; ++rep)
            for (int p = 0; p < n; ++p)
                for (int q = p + 1; q < n; ++q) delta = delta.timesDifference(VarFamily::Z, p, q);
        s.body = delta * s.symPart;
    } else {
        s.expanded = false;
        s.body = s.symPart;
    }
    return s;
}

double anyonEnergy(int n, double alpha, const std::vector<int>& ell, const SpectrumParams& params) {
    params.validate();
    long sum = 0;
    for (int v : ell) sum += v;
    double pairs = 0.5 * n * (n - 1);
    double bracket = sum + alpha * pairs;
    if (params.omegaC == 0.0) return params.omega * bracket + n * params.omega;
    double wt = params.omegaT();
    return (wt - params.omegaC) * (bracket + n) + n * wt;
}

Expression eulerOperatorZ(const Expression& e) {
    Expression acc(e.n());
    for (int k = 0; k < e.n(); ++k)
        acc = acc + e.derivative(VarFamily::Z, k).timesVarPower(VarFamily::Z, k, 1);
    return acc;
}

Expression applyAnyonHamiltonian(const AnyonState& s) {
    for (const auto& t : s.body.terms()) {
        bool xfree = t.tag.kind == TagKind::None;
        for (int k = 0; k < kMaxN && xfree; ++k) xfree = (t.mono.xe[k] == 0);
        for (int k = 0; k < kMaxPairs && xfree; ++k) xfree = (t.denom.xp[k] == 0 && t.denom.zp[k] == 0);
        if (!xfree) throw ValidationError("applyAnyonHamiltonian: body must be holomorphic in z");
    }
    // omega = 1, no field: H = Euler + alpha N(N-1)/2 + N on the monomial part;
    // an expanded monodromy factor contributes its degree through Euler instead.
    Rational constant = Rational(s.n);
    if (!s.expanded) constant += s.alpha * Rational(static_cast<long>(s.n) * (s.n - 1) / 2);
    return eulerOperatorZ(s.body) + s.body.scaled(ComplexRational(constant));
}

long countDegeneracy(int n, int totalExcitation) {
    if (n < 1) throw ValidationError("countDegeneracy: n must be positive");
    if (totalExcitation < 0) throw ValidationError("countDegeneracy: total must be nonnegative");
    // partitions of t into parts of size <= n (conjugate of "at most n parts")
    std::vector<long> ways(totalExcitation + 1, 0);
    ways[0] = 1;
    for (int part = 1; part <= n; ++part)
        for (int t = part; t <= totalExcitation; ++t) ways[t] += ways[t - part];
    return ways[totalExcitation];
}

using OrderedJson = nlohmann::ordered_json;

std::string anyonStateToJson(const AnyonState& s, int indent) {
    OrderedJson j;
    j["model"] = "anyon";
    j["n"] = s.n;
    j["alpha"] = ratToString(s.alpha);
    j["ell"] = s.ell;
    j["angular_momentum"] = ratToString(s.angularMomentum());
    j["expanded"] = s.expanded;
    j["body"] = OrderedJson::parse(expressionToJson(s.body));
    j["sym_part"] = OrderedJson::parse(expressionToJson(s.symPart));
    return j.dump(indent);
}

AnyonState anyonStateFromJson(const std::string& json) {
    OrderedJson j = OrderedJson::parse(json);
    AnyonState s;
    s.n = j.at("n").get<int>();
    s.alpha = ratParse(j.at("alpha").get<std::string>());
    s.ell = j.at("ell").get<std::vector<int>>();
    s.expanded = j.at("expanded").get<bool>();
    s.body = expressionFromJson(j.at("body").dump());
    s.symPart = expressionFromJson(j.at("sym_part").dump());
    return s;
}

}  // namespace cak
