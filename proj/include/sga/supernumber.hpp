#pragma once

// Skeletonized Fréchet-Grassmann algebra elements: sparse sums
// X = sum_I X_I sigma^I within a generator bound L and a degree cutoff D.
// Values are immutable after construction and every operation is pure.
//
// Multiplication computes in the quotient by the ideal of terms of degree
// greater than D. Degree components of a product depend only on components
// of no higher degree, so the retained grades are exact; the quotient is
// the finite stand-in for the projective limit over skeletons.

#include <algorithm>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "sga/gindex.hpp"
#include "sga/scalar.hpp"

namespace sga {

enum class Parity { even, odd, undefined };

template <class S>
class Supernumber {
public:
    using Scalar = S;
    using Real = typename ScalarOps<S>::Real;
    using Term = std::pair<GIndex, S>;

    // The zero element of the (L, D) context.
    Supernumber(int skeleton, int cutoff) : L_(skeleton), D_(cutoff) {
        check_context(skeleton, cutoff);
    }

    static Supernumber zero(int L, int D) { return Supernumber(L, D); }

    static Supernumber scalar(int L, int D, S value) {
        Supernumber x(L, D);
        if (!ScalarOps<S>::is_zero(value)) x.terms_.emplace_back(GIndex{}, std::move(value));
        return x;
    }

    static Supernumber unit(int L, int D) { return scalar(L, D, ScalarOps<S>::one()); }

    static Supernumber blade(int L, int D, GIndex i, S coeff) {
        Supernumber x(L, D);
        x.check_index(i);
        if (!ScalarOps<S>::is_zero(coeff)) x.terms_.emplace_back(i, std::move(coeff));
        return x;
    }

    static Supernumber generator(int L, int D, int j) {
        return blade(L, D, GIndex::single(j), ScalarOps<S>::one());
    }

    // Terms sorted by index mask, no zero coefficients.
    static Supernumber from_terms(int L, int D, std::vector<Term> terms) {
        Supernumber x(L, D);
        std::map<GIndex, S> acc;
        for (auto& [i, c] : terms) {
            x.check_index(i);
            auto [it, fresh] = acc.emplace(i, c);
            if (!fresh) it->second += c;
        }
        for (auto& [i, c] : acc)
            if (!ScalarOps<S>::is_zero(c)) x.terms_.emplace_back(i, std::move(c));
        return x;
    }

    int skeleton() const { return L_; }
    int cutoff() const { return D_; }
    const std::vector<Term>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    // Coefficient lookup proj_I(X); zero when absent.
    S coeff(GIndex i) const {
        auto it = std::lower_bound(terms_.begin(), terms_.end(), i,
                                   [](const Term& t, GIndex key) { return t.first < key; });
        if (it != terms_.end() && it->first == i) return it->second;
        return ScalarOps<S>::zero();
    }

    S body() const { return coeff(GIndex{}); }

    Supernumber soul() const {
        Supernumber x(L_, D_);
        for (const auto& t : terms_)
            if (!t.first.empty()) x.terms_.push_back(t);
        return x;
    }

    // Retains exactly the degree-j component.
    Supernumber grade_project(int j) const {
        Supernumber x(L_, D_);
        for (const auto& t : terms_)
            if (t.first.degree() == j) x.terms_.push_back(t);
        return x;
    }

    int max_degree() const {
        int d = 0;
        for (const auto& t : terms_) d = std::max(d, t.first.degree());
        return d;
    }

    int min_degree() const {
        int d = D_ + 1;
        for (const auto& t : terms_) d = std::min(d, t.first.degree());
        return d;
    }

    Supernumber parity_project(Parity p) const {
        Supernumber x(L_, D_);
        if (p == Parity::undefined)
            throw std::domain_error("parity_project: project onto even or odd");
        for (const auto& t : terms_) {
            bool is_even = t.first.even();
            if ((p == Parity::even) == is_even) x.terms_.push_back(t);
        }
        return x;
    }

    // Zero is even by convention: it lies in every graded component and even
    // is the unital choice.
    Parity parity() const {
        bool has_even = false, has_odd = false;
        for (const auto& t : terms_) (t.first.even() ? has_even : has_odd) = true;
        if (has_even && has_odd) return Parity::undefined;
        if (has_odd) return Parity::odd;
        return Parity::even;
    }

    // Drops terms using any generator above new_skeleton (the projection p_L').
    Supernumber skeleton_project(int new_skeleton) const {
        if (new_skeleton < 0 || new_skeleton > L_)
            throw std::domain_error("skeleton_project: target bound must be 0..L");
        Supernumber x(new_skeleton, std::min(D_, new_skeleton));
        for (const auto& t : terms_)
            if (t.first.max_generator() <= new_skeleton && t.first.degree() <= x.D_)
                x.terms_.push_back(t);
        return x;
    }

    // Drops terms of degree above new_cutoff.
    Supernumber truncate(int new_cutoff) const {
        if (new_cutoff < 0 || new_cutoff > L_)
            throw std::domain_error("truncate: cutoff must be 0..L");
        Supernumber x(L_, new_cutoff);
        for (const auto& t : terms_)
            if (t.first.degree() <= new_cutoff) x.terms_.push_back(t);
        return x;
    }

    // Reinterpret in a wider or equal context without changing the terms.
    Supernumber in_context(int L, int D) const {
        Supernumber x(L, D);
        for (const auto& t : terms_) {
            x.check_index(t.first);
            x.terms_.push_back(t);
        }
        return x;
    }

    bool reality_check() const { return ScalarOps<S>::imag_part(body()) == 0; }

    friend Supernumber operator+(const Supernumber& a, const Supernumber& b) {
        auto [x, y] = promote(a, b);
        Supernumber out(x.L_, x.D_);
        merge_into(out, x, y, false);
        return out;
    }

    friend Supernumber operator-(const Supernumber& a, const Supernumber& b) {
        auto [x, y] = promote(a, b);
        Supernumber out(x.L_, x.D_);
        merge_into(out, x, y, true);
        return out;
    }

    friend Supernumber operator-(const Supernumber& a) {
        Supernumber out(a.L_, a.D_);
        out.terms_.reserve(a.terms_.size());
        for (const auto& [i, c] : a.terms_) out.terms_.emplace_back(i, -c);
        return out;
    }

    // Signed-merge convolution (XY)_I = sum_{I=J+K} (-1)^tau X_J Y_K, with
    // product terms of degree above the cutoff discarded.
    friend Supernumber operator*(const Supernumber& a, const Supernumber& b) {
        auto [x, y] = promote(a, b);
        Supernumber out(x.L_, x.D_);
        std::map<GIndex, S> acc;
        for (const auto& [j, cj] : x.terms_) {
            for (const auto& [k, ck] : y.terms_) {
                if (j.degree() + k.degree() > x.D_) continue;
                MergeResult mr = merge_sign(j, k);
                if (mr.zero) continue;
                S contrib = cj * ck;
                if (mr.sign < 0) contrib = -contrib;
                auto [it, fresh] = acc.emplace(mr.index, contrib);
                if (!fresh) it->second += contrib;
            }
        }
        for (auto& [i, c] : acc)
            if (!ScalarOps<S>::is_zero(c)) out.terms_.emplace_back(i, std::move(c));
        return out;
    }

    friend Supernumber operator*(const S& c, const Supernumber& a) {
        Supernumber out(a.L_, a.D_);
        if (ScalarOps<S>::is_zero(c)) return out;
        for (const auto& [i, v] : a.terms_) {
            S cv = c * v;
            if (!ScalarOps<S>::is_zero(cv)) out.terms_.emplace_back(i, std::move(cv));
        }
        return out;
    }

    friend Supernumber operator*(const Supernumber& a, const S& c) { return c * a; }

    Supernumber pow(unsigned k) const {
        Supernumber r = unit(L_, D_);
        for (unsigned i = 0; i < k; ++i) r = r * *this;
        return r;
    }

    // Mathematical equality: coefficient-wise, independent of context.
    friend bool operator==(const Supernumber& a, const Supernumber& b) {
        return a.terms_ == b.terms_;
    }

    // Metric sum_I 2^{-r(I)} |X_I| / (1 + |X_I|), finite within a skeleton.
    Real dist() const {
        Real total{};
        for (const auto& [i, c] : terms_) {
            Real mag = ScalarOps<S>::magnitude(c);
            Real w;
            if constexpr (ScalarOps<S>::exact) {
                w = metric_weight(i);
            } else {
                w = metric_weight_d(i);
            }
            total += w * mag / (Real(1) + mag);
        }
        return total;
    }

    std::string str() const {
        if (terms_.empty()) return "0";
        std::string s;
        bool first = true;
        for (const auto& [i, c] : terms_) {
            if (!first) s += " + ";
            s += scalar_str(c);
            if (!i.empty()) {
                for (int j : i.generators()) s += ".s" + std::to_string(j);
            }
            first = false;
        }
        return s;
    }

    // Binary operations promote both operands to (max L, min D): min D is the
    // largest cutoff at which both operands are faithful.
    static std::pair<Supernumber, Supernumber> promote(const Supernumber& a,
                                                       const Supernumber& b) {
        if (a.L_ == b.L_ && a.D_ == b.D_) return {a, b};
        int L = std::max(a.L_, b.L_);
        int D = std::min(a.D_, b.D_);
        return {a.truncate_to_context(L, D), b.truncate_to_context(L, D)};
    }

private:
    static void check_context(int L, int D) {
        if (L < 0 || L > kMaxGenerators)
            throw std::domain_error("Supernumber: skeleton bound must be 0.." +
                                    std::to_string(kMaxGenerators));
        if (D < 0 || D > L)
            throw std::domain_error("Supernumber: cutoff must satisfy 0 <= D <= L");
    }

    void check_index(GIndex i) const {
        if (i.max_generator() > L_)
            throw std::domain_error("Supernumber: index " + i.str() +
                                    " outside skeleton L=" + std::to_string(L_));
        if (i.degree() > D_)
            throw std::domain_error("Supernumber: index " + i.str() +
                                    " above cutoff D=" + std::to_string(D_));
    }

    Supernumber truncate_to_context(int L, int D) const {
        Supernumber x(L, D);
        for (const auto& t : terms_)
            if (t.first.degree() <= D) x.terms_.push_back(t);
        return x;
    }

    static void merge_into(Supernumber& out, const Supernumber& x, const Supernumber& y,
                           bool subtract) {
        auto ix = x.terms_.begin(), iy = y.terms_.begin();
        while (ix != x.terms_.end() || iy != y.terms_.end()) {
            if (iy == y.terms_.end() || (ix != x.terms_.end() && ix->first < iy->first)) {
                out.terms_.push_back(*ix++);
            } else if (ix == x.terms_.end() || iy->first < ix->first) {
                out.terms_.emplace_back(iy->first, subtract ? -iy->second : iy->second);
                ++iy;
            } else {
                S c = subtract ? ix->second - iy->second : ix->second + iy->second;
                if (!ScalarOps<S>::is_zero(c)) out.terms_.emplace_back(ix->first, std::move(c));
                ++ix;
                ++iy;
            }
        }
    }

    static std::string scalar_str(const GaussRat& c) {
        if (c.im == 0) return rational_str(c.re);
        return "(" + rational_str(c.re) + "+" + rational_str(c.im) + "i)";
    }
    static std::string scalar_str(const ComplexD& c) {
        if (c.imag() == 0) return std::to_string(c.real());
        return "(" + std::to_string(c.real()) + "+" + std::to_string(c.imag()) + "i)";
    }

    int L_;
    int D_;
    std::vector<Term> terms_;
};

template <class S>
typename ScalarOps<S>::Real dist(const Supernumber<S>& x) {
    return x.dist();
}

template <class S>
typename ScalarOps<S>::Real dist(const Supernumber<S>& x, const Supernumber<S>& y) {
    return (x - y).dist();
}

using SupernumberQ = Supernumber<GaussRat>;
using SupernumberD = Supernumber<ComplexD>;

// Demote an exact supernumber to the float carrier.
inline SupernumberD demote(const SupernumberQ& x) {
    std::vector<SupernumberD::Term> terms;
    terms.reserve(x.terms().size());
    for (const auto& [i, c] : x.terms())
        terms.emplace_back(i, ComplexD{static_cast<double>(c.re), static_cast<double>(c.im)});
    return SupernumberD::from_terms(x.skeleton(), x.cutoff(), std::move(terms));
}

}  // namespace sga
