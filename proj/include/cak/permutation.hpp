#ifndef CAK_PERMUTATION_HPP
#define CAK_PERMUTATION_HPP

#include <algorithm>
#include <array>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace cak {

/// Particle count ceiling for the symbolic layer (S_N sums grow factorially).
inline constexpr int kMaxN = 6;

/// Bijection on {0..n-1}, stored as images: sigma maps k -> img[k].
/// Padded with the identity up to kMaxN so permutations of different n compare cleanly.
class Permutation {
  public:
    Permutation() : n_(0) {
        for (int k = 0; k < kMaxN; ++k) img_[k] = static_cast<std::uint8_t>(k);
    }

    static Permutation identity(int n) {
        checkN(n);
        Permutation p;
        p.n_ = n;
        return p;
    }

    static Permutation transposition(int n, int i, int j) {
        checkN(n);
        if (i < 0 || j < 0 || i >= n || j >= n || i == j)
            throw std::out_of_range("Permutation::transposition: bad indices");
        Permutation p = identity(n);
        std::swap(p.img_[i], p.img_[j]);
        return p;
    }

    static Permutation fromImages(const std::vector<int>& images) {
        int n = static_cast<int>(images.size());
        checkN(n);
        Permutation p = identity(n);
        std::array<bool, kMaxN> seen{};
        for (int k = 0; k < n; ++k) {
            int v = images[k];
            if (v < 0 || v >= n || seen[v]) throw std::invalid_argument("Permutation: not a bijection");
            seen[v] = true;
            p.img_[k] = static_cast<std::uint8_t>(v);
        }
        return p;
    }

    int size() const { return n_; }
    int operator[](int k) const { return img_[k]; }

    /// (a*b)(k) = a(b(k))
    friend Permutation operator*(const Permutation& a, const Permutation& b) {
        Permutation r = a;  // copies n_
        for (int k = 0; k < kMaxN; ++k) r.img_[k] = a.img_[b.img_[k]];
        return r;
    }

    Permutation inverse() const {
        Permutation r = *this;
        for (int k = 0; k < kMaxN; ++k) r.img_[img_[k]] = static_cast<std::uint8_t>(k);
        return r;
    }

    /// Number of inversions; equals the minimal adjacent-transposition count.
    int inversions() const {
        int c = 0;
        for (int a = 0; a < n_; ++a)
            for (int b = a + 1; b < n_; ++b)
                if (img_[a] > img_[b]) ++c;
        return c;
    }

    int parity() const { return (inversions() % 2 == 0) ? 1 : -1; }

    friend bool operator==(const Permutation& a, const Permutation& b) { return a.img_ == b.img_; }
    friend bool operator!=(const Permutation& a, const Permutation& b) { return !(a == b); }
    friend bool operator<(const Permutation& a, const Permutation& b) { return a.img_ < b.img_; }

    const std::array<std::uint8_t, kMaxN>& raw() const { return img_; }

    /// All of S_n in lexicographic image order (deterministic).
    static std::vector<Permutation> all(int n) {
        checkN(n);
        std::vector<int> v(n);
        for (int k = 0; k < n; ++k) v[k] = k;
        std::vector<Permutation> out;
        do {
            out.push_back(fromImages(v));
        } while (std::next_permutation(v.begin(), v.end()));
        return out;
    }

  private:
    static void checkN(int n) {
        if (n < 1 || n > kMaxN) throw std::out_of_range("Permutation: n out of range");
    }
    std::array<std::uint8_t, kMaxN> img_;
    int n_;
};

}  // namespace cak

#endif
