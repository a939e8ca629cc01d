#include "cak/expression.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <map>
#include <sstream>
#include <unordered_map>

#include "json.hpp"

namespace cak {

namespace {

std::size_t g_termBudget = 1'000'000;

std::complex<double> ipow(std::complex<double> b, int e) {
    if (e < 0) return 1.0 / ipow(b, -e);
    std::complex<double> acc = 1.0;
    while (e) {
        if (e & 1) acc *= b;
        b *= b;
        e >>= 1;
    }
    return acc;
}

double ipow(double b, int e) {
    if (e < 0) return 1.0 / ipow(b, -e);
    double acc = 1.0;
    while (e) {
        if (e & 1) acc *= b;
        b *= b;
        e >>= 1;
    }
    return acc;
}

/// Monomial key for the normal-form accumulation maps.
struct MonoKey {
    std::array<std::int16_t, kMaxN> xe{};
    std::array<std::int16_t, kMaxN> ze{};
    friend bool operator==(const MonoKey& a, const MonoKey& b) { return a.xe == b.xe && a.ze == b.ze; }
    friend bool operator<(const MonoKey& a, const MonoKey& b) {
        if (a.xe != b.xe) return a.xe < b.xe;
        return a.ze < b.ze;
    }
};

struct MonoKeyHash {
    std::size_t operator()(const MonoKey& k) const {
        std::uint64_t h = 1469598103934665603ull;
        auto mix = [&h](std::uint64_t v) {
            h ^= v;
            h *= 1099511628211ull;
        };
        for (int i = 0; i < kMaxN; ++i) mix(static_cast<std::uint16_t>(k.xe[i]));
        for (int i = 0; i < kMaxN; ++i) mix(static_cast<std::uint16_t>(k.ze[i]) + 0x9e37);
        return static_cast<std::size_t>(h);
    }
};

using MonoMap = std::unordered_map<MonoKey, ComplexRational, MonoKeyHash>;

void addTo(MonoMap& m, const MonoKey& k, const ComplexRational& c) {
    auto it = m.find(k);
    if (it == m.end()) {
        if (!c.isZero()) m.emplace(k, c);
        return;
    }
    it->second += c;
    if (it->second.isZero()) m.erase(it);
}

std::int16_t& exponentOf(MonoKey& k, VarFamily fam, int i) {
    return fam == VarFamily::X ? k.xe[i] : k.ze[i];
}
std::int16_t exponentOf(const MonoKey& k, VarFamily fam, int i) {
    return fam == VarFamily::X ? k.xe[i] : k.ze[i];
}

/// Exact division of a polynomial monomial-map by (v_i - v_j), i < j.
/// Returns false (leaving `out` unspecified) when not divisible.
bool divideMapByDifference(const MonoMap& p, VarFamily fam, int i, int j, MonoMap& out) {
    // Bucket by the exponent of v_i.
    std::map<int, MonoMap> byExp;
    for (const auto& [k, c] : p) {
        int e = exponentOf(k, fam, i);
        MonoKey base = k;
        exponentOf(base, fam, i) = 0;
        addTo(byExp[e], base, c);
    }
    if (byExp.empty()) {
        out.clear();
        return true;
    }
    if (byExp.begin()->first < 0) return false;  // Laurent tails never arise here
    int top = byExp.rbegin()->first;

    // p = (v_i - v_j) q  =>  q_{e-1} = p_e + v_j q_e, remainder p_0 + v_j q_0 = 0.
    MonoMap qCur;  // q_e while descending
    out.clear();
    for (int e = top; e >= 1; --e) {
        MonoMap qNext;  // becomes q_{e-1}
        auto itP = byExp.find(e);
        if (itP != byExp.end()) qNext = itP->second;
        for (const auto& [k, c] : qCur) {
            MonoKey shifted = k;
            exponentOf(shifted, fam, j) += 1;
            addTo(qNext, shifted, c);
        }
        for (const auto& [k, c] : qNext) {
            MonoKey full = k;
            exponentOf(full, fam, i) = static_cast<std::int16_t>(e - 1);
            addTo(out, full, c);
        }
        qCur = std::move(qNext);
    }
    // remainder check
    MonoMap rem;
    auto itP0 = byExp.find(0);
    if (itP0 != byExp.end()) rem = itP0->second;
    for (const auto& [k, c] : qCur) {
        MonoKey shifted = k;
        exponentOf(shifted, fam, j) += 1;
        addTo(rem, shifted, c);
    }
    return rem.empty();
}

/// (v_i - v_j)^k as a list of (i-exponent, j-exponent, coefficient), k >= 0.
struct BinomialRow {
    int ei, ej;
    Rational c;
};
std::vector<BinomialRow> binomialPower(int k) {
    std::vector<BinomialRow> rows;
    rows.reserve(k + 1);
    mpz_class binom = 1;
    for (int m = k; m >= 0; --m) {
        // coefficient of v_i^m v_j^{k-m}: C(k,m) (-1)^{k-m}
        Rational c(binom);
        if ((k - m) % 2 != 0) c = -c;
        rows.push_back({m, k - m, c});
        if (m > 0) {
            binom *= m;
            binom /= (k - m + 1);
        }
    }
    return rows;
}

}  // namespace

std::size_t termBudget() { return g_termBudget; }
void setTermBudget(std::size_t budget) { g_termBudget = budget; }
void checkBudget(std::size_t candidate) {
    if (candidate > g_termBudget)
        throw BudgetExceeded("term budget exceeded: " + std::to_string(candidate) + " > " +
                             std::to_string(g_termBudget));
}

Expression::Expression(int n) : n_(n) {
    if (n < 0 || n > kMaxN) throw std::out_of_range("Expression: n out of range");
}

Expression Expression::constant(int n, ComplexRational c) {
    Expression e(n);
    if (!c.isZero()) {
        Term t;
        t.coeff = std::move(c);
        e.terms_.push_back(std::move(t));
    }
    return e;
}

Expression Expression::variable(int n, VarFamily fam, int i) {
    Expression e(n);
    if (i < 0 || i >= n) throw std::out_of_range("Expression::variable");
    Term t;
    t.coeff = ComplexRational(1);
    if (fam == VarFamily::X)
        t.mono.xe[i] = 1;
    else
        t.mono.ze[i] = 1;
    e.terms_.push_back(std::move(t));
    return e;
}

Expression Expression::tagged(int n, const ExponentialTag& tag) {
    Expression e(n);
    Term t;
    t.coeff = ComplexRational(1);
    t.tag = tag;
    e.terms_.push_back(std::move(t));
    return e;
}

void Expression::canonicalize() {
    checkBudget(terms_.size());
    std::sort(terms_.begin(), terms_.end(), termKeyLess);
    std::vector<Term> merged;
    merged.reserve(terms_.size());
    for (auto& t : terms_) {
        if (!merged.empty() && termKeyEqual(merged.back(), t)) {
            merged.back().coeff += t.coeff;
            if (merged.back().coeff.isZero()) merged.pop_back();
        } else if (!t.coeff.isZero()) {
            merged.push_back(std::move(t));
        }
    }
    terms_ = std::move(merged);
}

Expression Expression::fromTerms(int n, std::vector<Term> terms) {
    Expression e(n);
    e.terms_ = std::move(terms);
    e.canonicalize();
    return e;
}

Expression Expression::operator-() const { return scaled(ComplexRational(-1)); }

Expression Expression::scaled(const ComplexRational& c) const {
    if (c.isZero()) return Expression(n_);
    Expression out(n_);
    out.terms_ = terms_;
    for (auto& t : out.terms_) t.coeff *= c;
    return out;
}

Expression operator+(const Expression& a, const Expression& b) {
    if (a.n_ != b.n_ && a.n_ != 0 && b.n_ != 0) throw std::invalid_argument("Expression+: size mismatch");
    std::vector<Term> all = a.terms_;
    all.insert(all.end(), b.terms_.begin(), b.terms_.end());
    return Expression::fromTerms(std::max(a.n_, b.n_), std::move(all));
}

Expression operator-(const Expression& a, const Expression& b) { return a + (-b); }

Expression operator*(const Expression& a, const Expression& b) {
    if (a.n_ != b.n_ && a.n_ != 0 && b.n_ != 0) throw std::invalid_argument("Expression*: size mismatch");
    checkBudget(a.terms_.size() * std::max<std::size_t>(1, b.terms_.size()));
    std::vector<Term> out;
    out.reserve(a.terms_.size() * b.terms_.size());
    for (const auto& ta : a.terms_) {
        for (const auto& tb : b.terms_) {
            Term t;
            t.coeff = ta.coeff * tb.coeff;
            for (int k = 0; k < kMaxN; ++k) {
                t.mono.xe[k] = static_cast<std::int16_t>(ta.mono.xe[k] + tb.mono.xe[k]);
                t.mono.ze[k] = static_cast<std::int16_t>(ta.mono.ze[k] + tb.mono.ze[k]);
            }
            for (int k = 0; k < kMaxPairs; ++k) {
                t.denom.xp[k] = static_cast<std::uint8_t>(ta.denom.xp[k] + tb.denom.xp[k]);
                t.denom.zp[k] = static_cast<std::uint8_t>(ta.denom.zp[k] + tb.denom.zp[k]);
            }
            // tag product
            if (ta.tag.kind == TagKind::None) {
                t.tag = tb.tag;
            } else if (tb.tag.kind == TagKind::None) {
                t.tag = ta.tag;
            } else if (ta.tag.kind == TagKind::Gaussian && tb.tag.kind == TagKind::Gaussian) {
                Rational r = ta.tag.rate + tb.tag.rate;
                t.tag = (r == 0) ? ExponentialTag::none() : ExponentialTag::gaussian(r);
            } else {
                throw std::logic_error("Expression*: unsupported exponential tag product");
            }
            out.push_back(std::move(t));
        }
    }
    return Expression::fromTerms(std::max(a.n_, b.n_), std::move(out));
}

Expression Expression::timesVarPower(VarFamily fam, int i, int k) const {
    if (i < 0 || i >= n_) throw std::out_of_range("timesVarPower");
    Expression out(n_);
    out.terms_ = terms_;
    for (auto& t : out.terms_) {
        if (fam == VarFamily::X)
            t.mono.xe[i] = static_cast<std::int16_t>(t.mono.xe[i] + k);
        else
            t.mono.ze[i] = static_cast<std::int16_t>(t.mono.ze[i] + k);
    }
    out.canonicalize();
    return out;
}

Expression Expression::timesInverseDifference(VarFamily fam, int i, int j) const {
    if (i == j || i < 0 || j < 0 || i >= n_ || j >= n_) throw std::out_of_range("timesInverseDifference");
    bool flip = i > j;
    int p = std::min(i, j), q = std::max(i, j);
    int idx = pairIndex(p, q);
    Expression out(n_);
    out.terms_ = terms_;
    for (auto& t : out.terms_) {
        auto& pow = (fam == VarFamily::X) ? t.denom.xp[idx] : t.denom.zp[idx];
        if (pow == 255) throw std::overflow_error("denominator power overflow");
        ++pow;
        if (flip) t.coeff = -t.coeff;
    }
    out.canonicalize();
    return out;
}

Expression Expression::timesDifference(VarFamily fam, int i, int j) const {
    Expression d = Expression::variable(n_, fam, i) - Expression::variable(n_, fam, j);
    return *this * d;
}

Expression Expression::shiftedGaussianRate(const Rational& delta) const {
    Expression out(n_);
    out.terms_ = terms_;
    for (auto& t : out.terms_) {
        if (t.tag.kind != TagKind::Gaussian)
            throw std::logic_error("shiftedGaussianRate: term without Gaussian tag");
        Rational r = t.tag.rate + delta;
        t.tag = (r == 0) ? ExponentialTag::none() : ExponentialTag::gaussian(r);
    }
    out.canonicalize();
    return out;
}

Expression Expression::timesSquareSum(VarFamily fam) const {
    Expression acc(n_);
    for (int k = 0; k < n_; ++k) acc = acc + timesVarPower(fam, k, 2);
    return acc;
}

Expression Expression::derivative(VarFamily fam, int i) const {
    if (i < 0 || i >= n_) throw std::out_of_range("derivative");
    std::vector<Term> out;
    out.reserve(terms_.size() * 2);
    for (const auto& t : terms_) {
        // monomial part
        {
            std::int16_t e = (fam == VarFamily::X) ? t.mono.xe[i] : t.mono.ze[i];
            if (e != 0) {
                Term d = t;
                d.coeff *= ComplexRational(Rational(static_cast<long>(e)));
                if (fam == VarFamily::X)
                    d.mono.xe[i] = static_cast<std::int16_t>(e - 1);
                else
                    d.mono.ze[i] = static_cast<std::int16_t>(e - 1);
                out.push_back(std::move(d));
            }
        }
        // denominator part
        for (int p = 0; p < n_; ++p) {
            for (int q = p + 1; q < n_; ++q) {
                if (p != i && q != i) continue;
                int idx = pairIndex(p, q);
                std::uint8_t k = (fam == VarFamily::X) ? t.denom.xp[idx] : t.denom.zp[idx];
                if (k == 0) continue;
                Term d = t;
                long sgn = (i == p) ? -static_cast<long>(k) : static_cast<long>(k);
                d.coeff *= ComplexRational(Rational(sgn));
                auto& pow = (fam == VarFamily::X) ? d.denom.xp[idx] : d.denom.zp[idx];
                ++pow;
                out.push_back(std::move(d));
            }
        }
        // tag part
        if (t.tag.kind == TagKind::PlaneWave) {
            // e^{i sum_k x_{pi(k)} z_k}
            Term d = t;
            d.coeff *= ComplexRational::i();
            if (fam == VarFamily::X) {
                int k = t.tag.perm.inverse()[i];  // the slot with x_{pi(k)} = x_i
                d.mono.ze[k] = static_cast<std::int16_t>(d.mono.ze[k] + 1);
            } else {
                int m = t.tag.perm[i];
                d.mono.xe[m] = static_cast<std::int16_t>(d.mono.xe[m] + 1);
            }
            out.push_back(std::move(d));
        } else if (t.tag.kind == TagKind::Gaussian && fam == VarFamily::X) {
            Term d = t;
            d.coeff *= ComplexRational(Rational(-2) * t.tag.rate);
            d.mono.xe[i] = static_cast<std::int16_t>(d.mono.xe[i] + 1);
            out.push_back(std::move(d));
        }
    }
    return fromTerms(n_, std::move(out));
}

Expression Expression::permuted(const Permutation& sigma) const {
    std::vector<Term> out;
    out.reserve(terms_.size());
    for (const auto& t : terms_) {
        Term r = t;
        // x-exponents move with the coordinates; z stays put
        for (int k = 0; k < n_; ++k) r.mono.xe[sigma[k]] = t.mono.xe[k];
        // denominator pairs reindex with a sign per flipped pair
        r.denom = DiffDenominator{};
        r.denom.zp = t.denom.zp;
        for (int p = 0; p < n_; ++p) {
            for (int q = p + 1; q < n_; ++q) {
                std::uint8_t k = t.denom.xp[pairIndex(p, q)];
                if (k == 0) continue;
                int a = sigma[p], b = sigma[q];
                if (a < b) {
                    r.denom.xp[pairIndex(a, b)] = static_cast<std::uint8_t>(r.denom.xp[pairIndex(a, b)] + k);
                } else {
                    r.denom.xp[pairIndex(b, a)] = static_cast<std::uint8_t>(r.denom.xp[pairIndex(b, a)] + k);
                    if (k % 2 != 0) r.coeff = -r.coeff;
                }
            }
        }
        if (t.tag.kind == TagKind::PlaneWave) r.tag = ExponentialTag::planeWave(sigma * t.tag.perm);
        out.push_back(std::move(r));
    }
    return fromTerms(n_, std::move(out));
}

Expression Expression::xzSwapped() const {
    std::vector<Term> out;
    out.reserve(terms_.size());
    for (const auto& t : terms_) {
        Term r = t;
        r.mono.xe = t.mono.ze;
        r.mono.ze = t.mono.xe;
        for (int k = 0; k < kMaxN; ++k)
            if (r.mono.xe[k] < 0) throw std::logic_error("xzSwapped: negative z-exponent cannot move to x");
        r.denom.xp = t.denom.zp;
        r.denom.zp = t.denom.xp;
        if (t.tag.kind == TagKind::Gaussian) throw std::logic_error("xzSwapped: Gaussian tag present");
        if (t.tag.kind == TagKind::PlaneWave) r.tag = ExponentialTag::planeWave(t.tag.perm.inverse());
        out.push_back(std::move(r));
    }
    return fromTerms(n_, std::move(out));
}

Expression Expression::rationalNormalForm() const {
    std::vector<Term> result;
    // Terms are already tag-grouped by the canonical order.
    std::size_t lo = 0;
    while (lo < terms_.size()) {
        std::size_t hi = lo;
        while (hi < terms_.size() && terms_[hi].tag == terms_[lo].tag) ++hi;

        // least common denominator over the group
        std::array<int, kMaxPairs> lcdX{}, lcdZ{};
        for (std::size_t t = lo; t < hi; ++t) {
            for (int k = 0; k < kMaxPairs; ++k) {
                lcdX[k] = std::max(lcdX[k], static_cast<int>(terms_[t].denom.xp[k]));
                lcdZ[k] = std::max(lcdZ[k], static_cast<int>(terms_[t].denom.zp[k]));
            }
        }

        // numerator = sum of terms lifted onto the LCD
        MonoMap numer;
        for (std::size_t t = lo; t < hi; ++t) {
            const Term& term = terms_[t];
            std::vector<std::pair<MonoKey, ComplexRational>> parts;
            MonoKey base;
            base.xe = term.mono.xe;
            base.ze = term.mono.ze;
            parts.emplace_back(base, term.coeff);
            auto foldPair = [&parts](VarFamily fam, int i, int j, int power) {
                if (power == 0) return;
                auto rows = binomialPower(power);
                std::vector<std::pair<MonoKey, ComplexRational>> next;
                next.reserve(parts.size() * rows.size());
                for (const auto& [mk, c] : parts) {
                    for (const auto& row : rows) {
                        MonoKey m = mk;
                        exponentOf(m, fam, i) = static_cast<std::int16_t>(exponentOf(m, fam, i) + row.ei);
                        exponentOf(m, fam, j) = static_cast<std::int16_t>(exponentOf(m, fam, j) + row.ej);
                        next.emplace_back(m, c * ComplexRational(row.c));
                    }
                }
                checkBudget(next.size());
                parts = std::move(next);
            };
            for (int p = 0; p < n_; ++p) {
                for (int q = p + 1; q < n_; ++q) {
                    int idx = pairIndex(p, q);
                    foldPair(VarFamily::X, p, q, lcdX[idx] - term.denom.xp[idx]);
                    foldPair(VarFamily::Z, p, q, lcdZ[idx] - term.denom.zp[idx]);
                }
            }
            for (auto& [mk, c] : parts) addTo(numer, mk, c);
        }

        // reduce: cancel binomials out of the LCD while the numerator divides
        for (int p = 0; p < n_ && !numer.empty(); ++p) {
            for (int q = p + 1; q < n_; ++q) {
                int idx = pairIndex(p, q);
                MonoMap quot;
                while (lcdX[idx] > 0 && divideMapByDifference(numer, VarFamily::X, p, q, quot)) {
                    numer = std::move(quot);
                    quot.clear();
                    --lcdX[idx];
                }
                while (lcdZ[idx] > 0 && divideMapByDifference(numer, VarFamily::Z, p, q, quot)) {
                    numer = std::move(quot);
                    quot.clear();
                    --lcdZ[idx];
                }
            }
        }

        if (!numer.empty()) {
            DiffDenominator denom;
            for (int k = 0; k < kMaxPairs; ++k) {
                denom.xp[k] = static_cast<std::uint8_t>(lcdX[k]);
                denom.zp[k] = static_cast<std::uint8_t>(lcdZ[k]);
            }
            checkBudget(result.size() + numer.size());
            for (const auto& [mk, c] : numer) {
                Term t;
                t.coeff = c;
                t.mono.xe = mk.xe;
                t.mono.ze = mk.ze;
                t.denom = denom;
                t.tag = terms_[lo].tag;
                result.push_back(std::move(t));
            }
        }
        lo = hi;
    }
    return fromTerms(n_, std::move(result));
}

std::optional<Rational> Expression::uniformGaussianRate() const {
    std::optional<Rational> rate;
    for (const auto& t : terms_) {
        Rational r = (t.tag.kind == TagKind::Gaussian) ? t.tag.rate : Rational(0);
        if (!rate)
            rate = r;
        else if (*rate != r)
            return std::nullopt;
    }
    if (!rate) rate = Rational(0);
    return rate;
}

std::complex<double> Expression::evalNumeric(const std::vector<double>& xs,
                                             const std::vector<std::complex<double>>& zs) const {
    if (static_cast<int>(xs.size()) != n_ || static_cast<int>(zs.size()) != n_)
        throw std::invalid_argument("evalNumeric: wrong point dimension");
    std::complex<double> sum = 0.0;
    for (const auto& t : terms_) {
        std::complex<double> v = t.coeff.toComplexDouble();
        for (int k = 0; k < n_; ++k) {
            if (t.mono.xe[k]) v *= ipow(xs[k], t.mono.xe[k]);
            if (t.mono.ze[k]) v *= ipow(zs[k], t.mono.ze[k]);
        }
        for (int p = 0; p < n_; ++p) {
            for (int q = p + 1; q < n_; ++q) {
                int idx = pairIndex(p, q);
                if (t.denom.xp[idx]) {
                    double d = xs[p] - xs[q];
                    if (d == 0.0) throw std::domain_error("evalNumeric: coincident x at denominator");
                    v *= ipow(d, -static_cast<int>(t.denom.xp[idx]));
                }
                if (t.denom.zp[idx]) {
                    std::complex<double> d = zs[p] - zs[q];
                    if (d == 0.0) throw std::domain_error("evalNumeric: coincident z at denominator");
                    v *= ipow(d, -static_cast<int>(t.denom.zp[idx]));
                }
            }
        }
        if (t.tag.kind == TagKind::PlaneWave) {
            std::complex<double> phase = 0.0;
            for (int k = 0; k < n_; ++k) phase += xs[t.tag.perm[k]] * zs[k];
            v *= std::exp(std::complex<double>(0.0, 1.0) * phase);
        } else if (t.tag.kind == TagKind::Gaussian) {
            double s2 = 0.0;
            for (int k = 0; k < n_; ++k) s2 += xs[k] * xs[k];
            v *= std::exp(-t.tag.rate.get_d() * s2);
        }
        sum += v;
    }
    return sum;
}

std::complex<double> Expression::evalNumericSansGaussian(const std::vector<double>& xs,
                                                         const std::vector<std::complex<double>>& zs,
                                                         Rational* rateOut) const {
    auto rate = uniformGaussianRate();
    if (!rate) throw std::logic_error("evalNumericSansGaussian: mixed Gaussian rates");
    if (rateOut) *rateOut = *rate;
    if (static_cast<int>(xs.size()) != n_ || static_cast<int>(zs.size()) != n_)
        throw std::invalid_argument("evalNumericSansGaussian: wrong point dimension");
    std::complex<double> sum = 0.0;
    for (const auto& t : terms_) {
        std::complex<double> v = t.coeff.toComplexDouble();
        for (int k = 0; k < n_; ++k) {
            if (t.mono.xe[k]) v *= ipow(xs[k], t.mono.xe[k]);
            if (t.mono.ze[k]) v *= ipow(zs[k], t.mono.ze[k]);
        }
        for (int p = 0; p < n_; ++p) {
            for (int q = p + 1; q < n_; ++q) {
                int idx = pairIndex(p, q);
                if (t.denom.xp[idx]) v *= ipow(xs[p] - xs[q], -static_cast<int>(t.denom.xp[idx]));
                if (t.denom.zp[idx]) v *= ipow(zs[p] - zs[q], -static_cast<int>(t.denom.zp[idx]));
            }
        }
        if (t.tag.kind == TagKind::PlaneWave) {
            std::complex<double> phase = 0.0;
            for (int k = 0; k < n_; ++k) phase += xs[t.tag.perm[k]] * zs[k];
            v *= std::exp(std::complex<double>(0.0, 1.0) * phase);
        }
        sum += v;
    }
    return sum;
}

Expression vandermonde(int n, VarFamily fam, int power) {
    Expression e = Expression::constant(n, ComplexRational(1));
    for (int rep = 0; rep < power; ++rep)
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q) e = e.timesDifference(fam, q, p);  // (v_q - v_p), q > p
    return e;
}

std::complex<double> vandermondeValue(const std::vector<std::complex<double>>& v, int power) {
    std::complex<double> d = 1.0;
    int n = static_cast<int>(v.size());
    for (int p = 0; p < n; ++p)
        for (int q = p + 1; q < n; ++q) d *= (v[q] - v[p]);
    return ipow(d, power);
}

std::string Expression::toString() const {
    std::ostringstream os;
    if (terms_.empty()) return "0";
    bool first = true;
    for (const auto& t : terms_) {
        if (!first) os << " + ";
        first = false;
        os << "(" << ratToString(t.coeff.re) << (t.coeff.im >= 0 ? "+" : "") << ratToString(t.coeff.im)
           << "i)";
        for (int k = 0; k < n_; ++k) {
            if (t.mono.xe[k]) os << "*x" << (k + 1) << "^" << t.mono.xe[k];
            if (t.mono.ze[k]) os << "*z" << (k + 1) << "^" << t.mono.ze[k];
        }
        for (int p = 0; p < n_; ++p)
            for (int q = p + 1; q < n_; ++q) {
                int idx = pairIndex(p, q);
                if (t.denom.xp[idx]) os << "*(x" << (p + 1) << "-x" << (q + 1) << ")^-" << int(t.denom.xp[idx]);
                if (t.denom.zp[idx]) os << "*(z" << (p + 1) << "-z" << (q + 1) << ")^-" << int(t.denom.zp[idx]);
            }
        if (t.tag.kind == TagKind::PlaneWave) {
            os << "*exp(i(";
            for (int k = 0; k < n_; ++k) {
                if (k) os << "+";
                os << "x" << (t.tag.perm[k] + 1) << "z" << (k + 1);
            }
            os << "))";
        } else if (t.tag.kind == TagKind::Gaussian) {
            os << "*exp(-" << ratToString(t.tag.rate) << "[x^2])";
        }
    }
    return os.str();
}

// ---------------------------------------------------------------------------
// JSON serialization: stable field order, 1-based indices, exact rationals.

using OrderedJson = nlohmann::ordered_json;

std::string expressionToJson(const Expression& e, int indent) {
    OrderedJson j;
    j["n"] = e.n();
    OrderedJson terms = OrderedJson::array();
    for (const auto& t : e.terms()) {
        OrderedJson jt;
        jt["coeff"] = {ratToString(t.coeff.re), ratToString(t.coeff.im)};
        OrderedJson xs = OrderedJson::array(), zs = OrderedJson::array();
        for (int k = 0; k < e.n(); ++k) {
            xs.push_back(t.mono.xe[k]);
            zs.push_back(t.mono.ze[k]);
        }
        jt["x"] = xs;
        jt["z"] = zs;
        OrderedJson dx = OrderedJson::array(), dz = OrderedJson::array();
        for (int p = 0; p < e.n(); ++p)
            for (int q = p + 1; q < e.n(); ++q) {
                int idx = pairIndex(p, q);
                if (t.denom.xp[idx]) dx.push_back({p + 1, q + 1, t.denom.xp[idx]});
                if (t.denom.zp[idx]) dz.push_back({p + 1, q + 1, t.denom.zp[idx]});
            }
        jt["denom"] = dx;
        jt["zdenom"] = dz;
        OrderedJson tag;
        switch (t.tag.kind) {
            case TagKind::None: tag["kind"] = "none"; break;
            case TagKind::PlaneWave: {
                tag["kind"] = "planewave";
                OrderedJson perm = OrderedJson::array();
                for (int k = 0; k < e.n(); ++k) perm.push_back(t.tag.perm[k] + 1);
                tag["perm"] = perm;
                break;
            }
            case TagKind::Gaussian:
                tag["kind"] = "gaussian";
                tag["rate"] = ratToString(t.tag.rate);
                break;
        }
        jt["tag"] = tag;
        terms.push_back(jt);
    }
    j["terms"] = terms;
    return indent < 0 ? j.dump() : j.dump(indent);
}

Expression expressionFromJson(const std::string& json) {
    OrderedJson j = OrderedJson::parse(json);
    int n = j.at("n").get<int>();
    std::vector<Term> terms;
    for (const auto& jt : j.at("terms")) {
        Term t;
        auto coeff = jt.at("coeff");
        t.coeff = ComplexRational(ratParse(coeff.at(0).get<std::string>()),
                                  ratParse(coeff.at(1).get<std::string>()));
        for (int k = 0; k < n; ++k) {
            t.mono.xe[k] = jt.at("x").at(k).get<std::int16_t>();
            t.mono.ze[k] = jt.at("z").at(k).get<std::int16_t>();
        }
        auto readDenoms = [n](const OrderedJson& arr, std::array<std::uint8_t, kMaxPairs>& out) {
            for (const auto& row : arr) {
                int i = row.at(0).get<int>(), jj = row.at(1).get<int>(), p = row.at(2).get<int>();
                if (i < 1 || jj <= i || jj > n || p <= 0) throw std::invalid_argument("bad denom row");
                out[pairIndex(i - 1, jj - 1)] = static_cast<std::uint8_t>(p);
            }
        };
        readDenoms(jt.at("denom"), t.denom.xp);
        if (jt.contains("zdenom")) readDenoms(jt.at("zdenom"), t.denom.zp);
        const auto& tag = jt.at("tag");
        std::string kind = tag.at("kind").get<std::string>();
        if (kind == "none") {
            t.tag = ExponentialTag::none();
        } else if (kind == "planewave") {
            std::vector<int> img;
            for (const auto& v : tag.at("perm")) img.push_back(v.get<int>() - 1);
            t.tag = ExponentialTag::planeWave(Permutation::fromImages(img));
        } else if (kind == "gaussian") {
            t.tag = ExponentialTag::gaussian(ratParse(tag.at("rate").get<std::string>()));
        } else {
            throw std::invalid_argument("unknown tag kind: " + kind);
        }
        terms.push_back(std::move(t));
    }
    return Expression::fromTerms(n, std::move(terms));
}

}  // namespace cak
