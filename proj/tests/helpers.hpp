#pragma once

// Shared test oracles and random generators. The oracles are deliberately
// naive and independent of the library's merge/convolution paths.

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "sga/gindex.hpp"
#include "sga/scalar.hpp"
#include "sga/smoothfn.hpp"
#include "sga/supernumber.hpp"

namespace sga::test {

// Sign of a generator word by bubble sort, counting transpositions.
// Returns nullopt when a generator repeats (the product vanishes).
inline std::optional<int> sign_by_sorting(std::vector<int> word) {
    int swaps = 0;
    for (std::size_t i = 0; i + 1 < word.size(); ++i) {
        for (std::size_t j = 0; j + 1 < word.size() - i; ++j) {
            if (word[j] > word[j + 1]) {
                std::swap(word[j], word[j + 1]);
                ++swaps;
            }
        }
    }
    for (std::size_t i = 0; i + 1 < word.size(); ++i)
        if (word[i] == word[i + 1]) return std::nullopt;
    return (swaps % 2 == 0) ? 1 : -1;
}

// Dense 2^L coefficient vector with naive sign-by-sorting multiplication.
template <class S>
struct DenseAlg {
    int L;
    std::vector<S> coeffs;  // indexed by blade mask

    explicit DenseAlg(int skeleton)
        : L(skeleton), coeffs(std::size_t{1} << skeleton, ScalarOps<S>::zero()) {}

    static DenseAlg from_sparse(const Supernumber<S>& x) {
        DenseAlg d(x.skeleton());
        for (const auto& [i, c] : x.terms()) d.coeffs[i.mask()] = c;
        return d;
    }

    Supernumber<S> to_sparse(int D) const {
        std::vector<typename Supernumber<S>::Term> terms;
        for (std::uint64_t m = 0; m < coeffs.size(); ++m) {
            if (ScalarOps<S>::is_zero(coeffs[m])) continue;
            GIndex i = GIndex::from_mask(m);
            if (i.degree() > D) continue;
            terms.emplace_back(i, coeffs[m]);
        }
        return Supernumber<S>::from_terms(L, D, std::move(terms));
    }

    friend DenseAlg multiply(const DenseAlg& a, const DenseAlg& b) {
        DenseAlg out(a.L);
        for (std::uint64_t j = 0; j < a.coeffs.size(); ++j) {
            if (ScalarOps<S>::is_zero(a.coeffs[j])) continue;
            for (std::uint64_t k = 0; k < b.coeffs.size(); ++k) {
                if (ScalarOps<S>::is_zero(b.coeffs[k])) continue;
                std::vector<int> word = GIndex::from_mask(j).generators();
                for (int g : GIndex::from_mask(k).generators()) word.push_back(g);
                auto sign = sign_by_sorting(word);
                if (!sign) continue;
                S c = a.coeffs[j] * b.coeffs[k];
                if (*sign < 0) c = -c;
                out.coeffs[j | k] += c;
            }
        }
        return out;
    }
};

// Oracle product with cutoff semantics: dense multiply, then truncate.
template <class S>
Supernumber<S> oracle_mul(const Supernumber<S>& a, const Supernumber<S>& b) {
    auto [x, y] = Supernumber<S>::promote(a, b);
    auto prod = multiply(DenseAlg<S>::from_sparse(x), DenseAlg<S>::from_sparse(y));
    return prod.to_sparse(x.cutoff());
}

struct Rng {
    std::mt19937_64 engine;
    explicit Rng(std::uint64_t seed) : engine(seed) {}

    int uniform(int lo, int hi) {  // inclusive
        return static_cast<int>(engine() % static_cast<std::uint64_t>(hi - lo + 1)) + lo;
    }

    Rational rational(int max_num = 9, int max_den = 4) {
        int num = uniform(-max_num, max_num);
        int den = uniform(1, max_den);
        return Rational(num, den);
    }

    GaussRat gauss(bool allow_imag = true) {
        GaussRat g(rational());
        if (allow_imag && uniform(0, 3) == 0) g.im = rational();
        return g;
    }

    GIndex gindex(int L, int max_degree) {
        std::uint64_t mask = 0;
        int deg = uniform(0, std::min(L, max_degree));
        for (int t = 0; t < deg; ++t) mask |= std::uint64_t{1} << uniform(0, L - 1);
        GIndex i = GIndex::from_mask(mask);
        return i.degree() <= max_degree ? i : GIndex{};
    }

    SupernumberQ supernumber(int L, int D, int max_terms = 6, bool allow_imag = true) {
        std::vector<SupernumberQ::Term> terms;
        int n = uniform(0, max_terms);
        for (int t = 0; t < n; ++t) terms.emplace_back(gindex(L, D), gauss(allow_imag));
        return SupernumberQ::from_terms(L, D, std::move(terms));
    }

    PolyMap<GaussRat> poly(int arity, unsigned max_degree, int max_terms = 4,
                           bool allow_imag = false) {
        std::vector<typename PolyMap<GaussRat>::Term> terms;
        int count = uniform(1, max_terms);
        for (int t = 0; t < count; ++t) {
            EvenMulti e(static_cast<std::size_t>(arity), 0);
            unsigned left = max_degree == 0 ? 0 : static_cast<unsigned>(
                                                      uniform(0, static_cast<int>(max_degree)));
            for (int j = 0; j < arity && left > 0; ++j) {
                unsigned a = static_cast<unsigned>(uniform(0, static_cast<int>(left)));
                e[static_cast<std::size_t>(j)] = a;
                left -= a;
            }
            terms.emplace_back(std::move(e), gauss(allow_imag));
        }
        return PolyMap<GaussRat>::from_terms(arity, std::move(terms));
    }

    // Valid even-slot value: even parity with a real body.
    SupernumberQ even_slot_value(int L, int D) {
        auto x = homogeneous(L, D, Parity::even);
        auto body = x.coeff(GIndex{});
        if (body.im != 0)
            x = x - SupernumberQ::scalar(L, D, GaussRat(Rational(0), body.im));
        return x;
    }

    // Nonzero homogeneous element of the given parity.
    SupernumberQ homogeneous(int L, int D, Parity p) {
        std::vector<SupernumberQ::Term> terms;
        for (int t = 0; t < 4; ++t) {
            GIndex i = gindex(L, D);
            bool even = i.even();
            if ((p == Parity::even) != even) continue;
            terms.emplace_back(i, gauss());
        }
        if (terms.empty()) {
            GIndex i = p == Parity::even ? GIndex{} : GIndex::single(uniform(1, L));
            terms.emplace_back(i, GaussRat(1));
        }
        return SupernumberQ::from_terms(L, D, std::move(terms));
    }
};

}  // namespace sga::test
