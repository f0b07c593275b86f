#pragma once

// Basis-monomial bookkeeping for Grassmann algebras: canonical indices,
// the rank bijection, merge signs for blade products and metric weights.

#include <bit>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace sga {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// Hard library limit: generator positions 1..64 so an index fits a machine word.
inline constexpr int kMaxGenerators = 64;

// A finite set of generator positions, i.e. the index I of a basis blade
// sigma^I = sigma_{i1} ... sigma_{ik} with i1 < i2 < ... < ik.
// Bit j-1 of the mask corresponds to generator j. The empty index is the
// unit monomial.
class GIndex {
public:
    constexpr GIndex() = default;

    static constexpr GIndex from_mask(std::uint64_t mask) { return GIndex(mask); }

    // Single generator j, 1-based.
    static GIndex single(int j) {
        check_pos(j);
        return GIndex(std::uint64_t{1} << (j - 1));
    }

    // Ascending list of generator positions; throws on duplicates/disorder.
    static GIndex from_list(const std::vector<int>& gens) {
        std::uint64_t mask = 0;
        int prev = 0;
        for (int j : gens) {
            check_pos(j);
            if (j <= prev)
                throw std::domain_error("GIndex: generators must be strictly increasing");
            mask |= std::uint64_t{1} << (j - 1);
            prev = j;
        }
        return GIndex(mask);
    }

    constexpr std::uint64_t mask() const { return mask_; }
    constexpr int degree() const { return std::popcount(mask_); }
    constexpr bool empty() const { return mask_ == 0; }
    constexpr bool even() const { return (degree() & 1) == 0; }
    constexpr bool odd() const { return (degree() & 1) == 1; }

    constexpr bool contains(int j) const {
        return j >= 1 && j <= kMaxGenerators && (mask_ >> (j - 1)) & 1;
    }
    constexpr bool disjoint(GIndex other) const { return (mask_ & other.mask_) == 0; }

    // Union of disjoint index sets; the caller checks disjointness.
    constexpr GIndex unite(GIndex other) const { return GIndex(mask_ | other.mask_); }
    constexpr GIndex intersect(GIndex other) const { return GIndex(mask_ & other.mask_); }
    constexpr GIndex without(GIndex other) const { return GIndex(mask_ & ~other.mask_); }

    // Largest generator present, 0 for the empty index.
    constexpr int max_generator() const {
        return mask_ == 0 ? 0 : 64 - std::countl_zero(mask_);
    }

    std::vector<int> generators() const {
        std::vector<int> out;
        out.reserve(static_cast<std::size_t>(degree()));
        for (std::uint64_t m = mask_; m;) {
            int bit = std::countr_zero(m);
            out.push_back(bit + 1);
            m &= m - 1;
        }
        return out;
    }

    // Text form "[1,3]"; "[]" is the empty index.
    std::string str() const {
        std::string s = "[";
        bool first = true;
        for (int j : generators()) {
            if (!first) s += ',';
            s += std::to_string(j);
            first = false;
        }
        return s + "]";
    }

    static GIndex parse(const std::string& text) {
        if (text.size() < 2 || text.front() != '[' || text.back() != ']')
            throw std::invalid_argument("GIndex: expected bracketed list, got '" + text + "'");
        std::vector<int> gens;
        std::size_t i = 1;
        while (i < text.size() - 1) {
            std::size_t next = text.find(',', i);
            if (next == std::string::npos || next > text.size() - 1) next = text.size() - 1;
            gens.push_back(std::stoi(text.substr(i, next - i)));
            i = next + 1;
        }
        return from_list(gens);
    }

    friend constexpr bool operator==(GIndex a, GIndex b) = default;
    friend constexpr auto operator<=>(GIndex a, GIndex b) { return a.mask_ <=> b.mask_; }

private:
    constexpr explicit GIndex(std::uint64_t mask) : mask_(mask) {}

    static void check_pos(int j) {
        if (j < 1 || j > kMaxGenerators)
            throw std::domain_error("GIndex: generator position out of range 1.." +
                                    std::to_string(kMaxGenerators));
    }

    std::uint64_t mask_ = 0;
};

// Result of multiplying two basis blades sigma^J sigma^K.
struct MergeResult {
    bool zero = false;   // true iff J and K share a generator
    int sign = 1;        // (-1)^tau, tau = inversions needed to sort J||K
    GIndex index{};      // J union K when nonzero
};

// sigma^J sigma^K = sign * sigma^{J u K}, or 0 when the supports overlap.
// tau counts pairs (j in J, k in K) with j > k, i.e. the transpositions
// needed to interleave the concatenated generator word into ascending order.
inline MergeResult merge_sign(GIndex j, GIndex k) {
    if (!j.disjoint(k)) return MergeResult{true, 1, GIndex{}};
    int tau = 0;
    for (std::uint64_t m = k.mask(); m;) {
        int bit = std::countr_zero(m);           // generator bit+1 in K
        tau += std::popcount(j.mask() >> (bit + 1));  // members of J above it
        m &= m - 1;
    }
    return MergeResult{false, (tau & 1) ? -1 : 1, j.unite(k)};
}

// Rank bijection r(mu) = (2^{mu_1} + ... + 2^{mu_k}) / 2 between nonempty
// indices and positive integers. With the bitmask encoding this is exactly
// the mask value.
inline BigInt encode_rank(GIndex mu) {
    if (mu.empty())
        throw std::domain_error("encode_rank: the empty index has no rank");
    return BigInt(mu.mask());
}

inline GIndex decode_rank(const BigInt& r) {
    if (r <= 0) throw std::domain_error("decode_rank: rank must be positive");
    if (r > BigInt(~std::uint64_t{0}))
        throw std::domain_error("decode_rank: rank exceeds the 64-generator limit");
    return GIndex::from_mask(static_cast<std::uint64_t>(r));
}

// Metric weight 2^{-r(I)} with r(I) = 1 + (sum_k 2^k i_k)/2 = 1 + mask.
// This weight r is distinct from the rank bijection above and the two are
// never interchanged.
inline BigInt metric_exponent(GIndex i) { return BigInt(i.mask()) + 1; }

// Exact weight. Denominators grow as 2^(mask+1); guarded so a high skeleton
// cannot allocate astronomically large integers by accident.
inline Rational metric_weight(GIndex i) {
    BigInt r = metric_exponent(i);
    if (r > (BigInt(1) << 22))
        throw std::overflow_error("metric_weight: exact weight too large; use float mode");
    Rational w(1);
    w /= Rational(BigInt(1) << static_cast<unsigned>(r));
    return w;
}

inline double metric_weight_d(GIndex i) {
    BigInt r = metric_exponent(i);
    if (r > 4096) return 0.0;  // underflows double anyway
    return std::ldexp(1.0, -static_cast<int>(r));
}

// Odd multi-index a in {0,1}^n addressing theta^a = theta_1^{a_1}...theta_n^{a_n}.
// Bit s-1 of the mask corresponds to the odd variable theta_s.
struct OddMulti {
    std::uint32_t mask = 0;
    int n = 0;

    static OddMulti from_bits(const std::vector<int>& bits) {
        OddMulti a;
        a.n = static_cast<int>(bits.size());
        for (int s = 0; s < a.n; ++s) {
            if (bits[static_cast<std::size_t>(s)] != 0 && bits[static_cast<std::size_t>(s)] != 1)
                throw std::domain_error("OddMulti: entries must be 0 or 1");
            if (bits[static_cast<std::size_t>(s)]) a.mask |= std::uint32_t{1} << s;
        }
        return a;
    }

    int degree() const { return std::popcount(mask); }
    bool test(int s) const { return (mask >> (s - 1)) & 1; }  // s is 1-based

    std::vector<int> bits() const {
        std::vector<int> out(static_cast<std::size_t>(n), 0);
        for (int s = 0; s < n; ++s) out[static_cast<std::size_t>(s)] = (mask >> s) & 1;
        return out;
    }

    friend bool operator==(const OddMulti&, const OddMulti&) = default;
};

// l(a) = sum_{j<s} a_j and r(a) = sum_{j>s} a_j, the sign exponents of the
// left and right odd derivatives. s is 1-based.
inline int left_sign_exponent(std::uint32_t a_mask, int s) {
    return std::popcount(a_mask & ((std::uint32_t{1} << (s - 1)) - 1));
}
inline int right_sign_exponent(std::uint32_t a_mask, int s) {
    return std::popcount(a_mask >> s);
}

// Even multi-index alpha in N_0^m for x^alpha and partial derivatives.
using EvenMulti = std::vector<unsigned>;

inline unsigned multi_order(const EvenMulti& alpha) {
    unsigned s = 0;
    for (unsigned a : alpha) s += a;
    return s;
}

inline BigInt multi_factorial(const EvenMulti& alpha) {
    BigInt f = 1;
    for (unsigned a : alpha)
        for (unsigned k = 2; k <= a; ++k) f *= k;
    return f;
}

// All alpha in N_0^m with |alpha| <= max_total, in lexicographic order.
inline std::vector<EvenMulti> enumerate_multis(int m, unsigned max_total) {
    std::vector<EvenMulti> out;
    EvenMulti cur(static_cast<std::size_t>(m), 0);
    auto rec = [&](auto&& self, int pos, unsigned left) -> void {
        if (pos == m) {
            out.push_back(cur);
            return;
        }
        for (unsigned a = 0; a <= left; ++a) {
            cur[static_cast<std::size_t>(pos)] = a;
            self(self, pos + 1, left - a);
        }
        cur[static_cast<std::size_t>(pos)] = 0;
    };
    rec(rec, 0, max_total);
    return out;
}

}  // namespace sga
