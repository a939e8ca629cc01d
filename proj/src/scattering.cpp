#include "cak/scattering.hpp"

#include <cmath>
#include <map>

#include "cak/calogero.hpp"
#include "json.hpp"

namespace cak {

ScatteringState buildScatteringSymbolic(int n, int g) {
    if (n < 2 || n > 4) throw ValidationError("buildScatteringSymbolic: n must be 2..4");
    if (g < 0) throw ValidationError("buildScatteringSymbolic: integer g >= 0 required");

    Expression e = symmetrize(Expression::tagged(n, ExponentialTag::planeWave(Permutation::identity(n))));
    for (int k = 0; k < g; ++k) e = applyVandermondeBar(e, Rational(k));

    long pairs = static_cast<long>(n) * (n - 1) / 2;
    if ((g * pairs) % 2 != 0) e = -e;  // (-1)^{g N(N-1)/2}
    e = divideByVandermonde(e, VarFamily::Z, g);

    // divisibility is guaranteed by theory: surviving z-poles must pair with
    // x-poles (the s_ij structure), never exceed g, and never stand alone
    for (const auto& t : e.terms()) {
        for (int k = 0; k < kMaxPairs; ++k) {
            if (t.denom.zp[k] > g || (t.denom.zp[k] > 0 && t.denom.xp[k] == 0))
                throw std::logic_error("buildScatteringSymbolic: division left an unpaired z-pole");
        }
    }

    ScatteringState s;
    s.n = n;
    s.g = Rational(g);
    s.form = std::move(e);
    return s;
}

ScatteringState besselScatteringState(double g) {
    ScatteringState s;
    s.n = 2;
    s.g = Rational(0);
    s.form = g;
    return s;
}

EigenReport checkEigen(const ScatteringState& h) {
    if (!h.symbolic()) throw ValidationError("checkEigen: symbolic form required");
    const Expression& e = h.expr();
    Expression residual = applyScatteringCalogero(e, h.g) -
                          e.timesSquareSum(VarFamily::Z).scaled(ComplexRational(Rational(1, 2)));
    residual = residual.rationalNormalForm();
    EigenReport r;
    r.residual = residual;
    r.residualTerms = residual.termCount();
    r.pass = residual.isStructurallyZero();
    return r;
}

namespace {

/// Monomial-map helpers for the exact s_ij-structure solve.
struct Mono {
    std::array<std::int16_t, kMaxN> xe{};
    std::array<std::int16_t, kMaxN> ze{};
    friend bool operator<(const Mono& a, const Mono& b) {
        if (a.xe != b.xe) return a.xe < b.xe;
        return a.ze < b.ze;
    }
};
using PolyMap = std::map<Mono, ComplexRational>;

void polyAdd(PolyMap& m, const Mono& k, const ComplexRational& c) {
    auto it = m.find(k);
    if (it == m.end()) {
        if (!c.isZero()) m.emplace(k, c);
    } else {
        it->second += c;
        if (it->second.isZero()) m.erase(it);
    }
}

/// acc *= (v_i - v_j) in the chosen family.
PolyMap mulDifference(const PolyMap& acc, VarFamily fam, int i, int j) {
    PolyMap out;
    for (const auto& [k, c] : acc) {
        Mono a = k;
        if (fam == VarFamily::X)
            a.xe[i] = static_cast<std::int16_t>(a.xe[i] + 1);
        else
            a.ze[i] = static_cast<std::int16_t>(a.ze[i] + 1);
        polyAdd(out, a, c);
        Mono b = k;
        if (fam == VarFamily::X)
            b.xe[j] = static_cast<std::int16_t>(b.xe[j] + 1);
        else
            b.ze[j] = static_cast<std::int16_t>(b.ze[j] + 1);
        polyAdd(out, b, -c);
    }
    return out;
}

}  // namespace

bool sProductStructure(const Expression& e) {
    int n = e.n();
    // normalized groups share one denominator per tag; solve numerator ==
    // sum_e c_e prod_pq (x_pq z_pq)^{e_pq} exactly, 0 <= e_pq <= m_pq
    Expression norm = e.rationalNormalForm();
    const auto& terms = norm.terms();
    std::size_t lo = 0;
    while (lo < terms.size()) {
        std::size_t hi = lo;
        while (hi < terms.size() && terms[hi].tag == terms[lo].tag) ++hi;

        std::array<int, kMaxPairs> mpow{};
        for (std::size_t t = lo; t < hi; ++t)
            for (int k = 0; k < kMaxPairs; ++k)
                mpow[k] = std::max({mpow[k], static_cast<int>(terms[t].denom.xp[k]),
                                    static_cast<int>(terms[t].denom.zp[k])});

        // Q = numerator * prod (x_pq)^{m-a} (z_pq)^{m-b}
        PolyMap q;
        for (std::size_t t = lo; t < hi; ++t) {
            PolyMap part;
            Mono base;
            base.xe = terms[t].mono.xe;
            base.ze = terms[t].mono.ze;
            part.emplace(base, terms[t].coeff);
            for (int p = 0; p < n; ++p)
                for (int pq = p + 1; pq < n; ++pq) {
                    int idx = pairIndex(p, pq);
                    for (int r = terms[t].denom.xp[idx]; r < mpow[idx]; ++r)
                        part = mulDifference(part, VarFamily::X, p, pq);
                    for (int r = terms[t].denom.zp[idx]; r < mpow[idx]; ++r)
                        part = mulDifference(part, VarFamily::Z, p, pq);
                }
            for (const auto& [k, c] : part) polyAdd(q, k, c);
        }

        // Enumerate the s-product basis: after lifting by prod s^m the candidate
        // monomials are prod s_pq^{e_pq} with e >= 0 and total s-degree of the
        // prefactor nonpositive, i.e. sum(e) <= sum(m). Positive powers on one
        // pair balanced by inverse powers elsewhere are legitimate (the
        // prefactors are dimensionless, not pairwise-inverse).
        int totalM = 0;
        for (int k = 0; k < kMaxPairs; ++k) totalM += mpow[k];
        std::vector<int> livePairs;
        for (int p = 0; p < n; ++p)
            for (int pq = p + 1; pq < n; ++pq) livePairs.push_back(pairIndex(p, pq));
        std::vector<std::array<int, kMaxPairs>> expos;
        std::array<int, kMaxPairs> cur{};
        auto enumerate = [&](auto&& self, std::size_t pos, int left) -> void {
            if (pos == livePairs.size()) {
                expos.push_back(cur);
                return;
            }
            for (int v = 0; v <= left; ++v) {
                cur[livePairs[pos]] = v;
                self(self, pos + 1, left - v);
            }
        };
        enumerate(enumerate, 0, totalM);

        // For a plane wave e^{i sum x_{pi(k)} z_k} the coordinate x_i pairs with
        // z_{pi^{-1}(i)}, so its dimensionless variables are
        // s_pq = (x_p - x_q)(z_{pi^{-1}(p)} - z_{pi^{-1}(q)}).
        Permutation inv = (terms[lo].tag.kind == TagKind::PlaneWave)
                              ? terms[lo].tag.perm.inverse()
                              : Permutation::identity(n);
        std::vector<PolyMap> basis;
        for (const auto& ex : expos) {
            PolyMap b;
            b.emplace(Mono{}, ComplexRational(1));
            for (int k = 0; k < kMaxPairs; ++k) {
                if (ex[k] == 0) continue;
                auto [p, pq] = pairFromIndex(k);
                for (int r = 0; r < ex[k]; ++r) {
                    b = mulDifference(b, VarFamily::X, p, pq);
                    b = mulDifference(b, VarFamily::Z, inv[p], inv[pq]);
                }
            }
            basis.push_back(std::move(b));
        }

        // exact least-structure solve by Gaussian elimination on the monomial rows
        std::map<Mono, std::size_t> rowIndex;
        auto rowOf = [&rowIndex](const Mono& m) {
            auto [it, inserted] = rowIndex.emplace(m, rowIndex.size());
            return it->second;
        };
        for (const auto& b : basis)
            for (const auto& [k, c] : b) rowOf(k);
        for (const auto& [k, c] : q) rowOf(k);

        std::size_t rows = rowIndex.size(), cols = basis.size();
        std::vector<std::vector<ComplexRational>> A(rows, std::vector<ComplexRational>(cols));
        std::vector<ComplexRational> rhs(rows);
        for (std::size_t c = 0; c < cols; ++c)
            for (const auto& [k, v] : basis[c]) A[rowOf(k)][c] = v;
        for (const auto& [k, v] : q) rhs[rowOf(k)] = v;

        std::size_t rank = 0;
        for (std::size_t col = 0; col < cols && rank < rows; ++col) {
            std::size_t pivot = rank;
            while (pivot < rows && A[pivot][col].isZero()) ++pivot;
            if (pivot == rows) continue;
            std::swap(A[pivot], A[rank]);
            std::swap(rhs[pivot], rhs[rank]);
            ComplexRational inv = ComplexRational(1) / A[rank][col];
            for (std::size_t c = col; c < cols; ++c) A[rank][c] *= inv;
            rhs[rank] *= inv;
            for (std::size_t r = 0; r < rows; ++r) {
                if (r == rank || A[r][col].isZero()) continue;
                ComplexRational f = A[r][col];
                for (std::size_t c = col; c < cols; ++c) A[r][c] -= f * A[rank][c];
                rhs[r] -= f * rhs[rank];
            }
            ++rank;
        }
        // consistency: any zero-row must have zero rhs
        for (std::size_t r = rank; r < rows; ++r)
            if (!rhs[r].isZero()) return false;

        lo = hi;
    }
    return true;
}

SwapReport checkSwapSymmetry(const ScatteringState& h) {
    if (!h.symbolic()) throw ValidationError("checkSwapSymmetry: symbolic form required");
    const Expression& e = h.expr();
    SwapReport r;
    r.swapExact = (e - e.xzSwapped()).isZero();
    r.sStructure = sProductStructure(e);
    r.pass = r.swapExact && r.sStructure;
    return r;
}

std::vector<std::pair<Permutation, std::complex<double>>> asymptoticPhases(int n, double g) {
    constexpr double pi = 3.141592653589793238462643383279502884;
    std::vector<std::pair<Permutation, std::complex<double>>> out;
    double overall = -pi * n * (n - 1) * g / 4.0;
    for (const auto& p : Permutation::all(n)) {
        double phase = overall + pi * g * p.inversions();
        out.emplace_back(p, std::polar(1.0, phase));
    }
    return out;
}

using OrderedJson = nlohmann::ordered_json;

std::string scatteringStateToJson(const ScatteringState& s, int indent) {
    OrderedJson j;
    j["n"] = s.n;
    if (s.symbolic()) {
        j["g"] = ratToString(s.g);
        j["form"] = "symbolic";
        j["body"] = OrderedJson::parse(expressionToJson(s.expr()));
    } else {
        j["g"] = std::get<double>(s.form);
        j["form"] = "bessel2body";
    }
    return j.dump(indent);
}

ScatteringState scatteringStateFromJson(const std::string& json) {
    OrderedJson j = OrderedJson::parse(json);
    ScatteringState s;
    s.n = j.at("n").get<int>();
    std::string form = j.at("form").get<std::string>();
    if (form == "symbolic") {
        s.g = ratParse(j.at("g").get<std::string>());
        s.form = expressionFromJson(j.at("body").dump());
    } else if (form == "bessel2body") {
        s.form = j.at("g").get<double>();
    } else {
        throw ValidationError("unknown scattering form: " + form);
    }
    return s;
}

}  // namespace cak
