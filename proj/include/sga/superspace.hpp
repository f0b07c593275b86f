#pragma once

// Points of the superspace R^{m|n} over a skeleton: m even slots with real
// body and n odd slots, the real coordinate system X_{A,I}, basis
// directions, the pairing and axis-aligned superdomains.

#include <algorithm>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "sga/supernumber.hpp"

namespace sga {

// Coordinate address: slot A in 1..m+n plus a blade index. Even slots take
// even-degree blades, odd slots odd-degree blades.
struct CoordIndex {
    int slot = 1;  // A, 1-based
    GIndex index{};

    friend bool operator==(const CoordIndex&, const CoordIndex&) = default;
};

inline bool coord_parity_ok(const CoordIndex& c, int m) {
    return c.slot <= m ? c.index.even() : c.index.odd();
}

template <class S>
class SuperPoint {
public:
    using Sn = Supernumber<S>;

    SuperPoint(int m, int n, int L, int D)
        : m_(m), n_(n), L_(L), D_(D),
          even_(static_cast<std::size_t>(m), Sn::zero(L, D)),
          odd_(static_cast<std::size_t>(n), Sn::zero(L, D)) {
        if (m < 0 || n < 0) throw std::domain_error("SuperPoint: negative slot count");
    }

    SuperPoint(std::vector<Sn> even, std::vector<Sn> odd, int L, int D)
        : m_(static_cast<int>(even.size())), n_(static_cast<int>(odd.size())),
          L_(L), D_(D), even_(std::move(even)), odd_(std::move(odd)) {
        for (auto& x : even_) {
            x = x.in_context(L, D);
            if (x.parity() != Parity::even)
                throw std::domain_error("SuperPoint: even slot holds an odd component");
            if (!x.reality_check())
                throw std::domain_error("SuperPoint: even slot body must be real");
        }
        for (auto& t : odd_) {
            t = t.in_context(L, D);
            if (t.parity() != Parity::odd && !t.is_zero())
                throw std::domain_error("SuperPoint: odd slot holds an even component");
        }
    }

    int m() const { return m_; }
    int n() const { return n_; }
    int skeleton() const { return L_; }
    int cutoff() const { return D_; }

    const Sn& even_slot(int j) const { return even_.at(static_cast<std::size_t>(j - 1)); }
    const Sn& odd_slot(int k) const { return odd_.at(static_cast<std::size_t>(k - 1)); }
    const std::vector<Sn>& even_slots() const { return even_; }
    const std::vector<Sn>& odd_slots() const { return odd_; }

    // Slot by flat address A = 1..m+n.
    const Sn& slot(int a) const {
        return a <= m_ ? even_slot(a) : odd_slot(a - m_);
    }

    std::vector<typename ScalarOps<S>::Real> body() const {
        std::vector<typename ScalarOps<S>::Real> q;
        q.reserve(even_.size());
        for (const auto& x : even_) q.push_back(ScalarOps<S>::real_part(x.body()));
        return q;
    }

    SuperPoint with_slot(int a, Sn value) const {
        std::vector<Sn> ev = even_, od = odd_;
        if (a <= m_)
            ev.at(static_cast<std::size_t>(a - 1)) = std::move(value);
        else
            od.at(static_cast<std::size_t>(a - m_ - 1)) = std::move(value);
        return SuperPoint(std::move(ev), std::move(od), L_, D_);
    }

    SuperPoint in_context(int L, int D) const {
        std::vector<Sn> ev, od;
        for (const auto& x : even_) ev.push_back(x.in_context(L, D));
        for (const auto& t : odd_) od.push_back(t.in_context(L, D));
        return SuperPoint(std::move(ev), std::move(od), L, D);
    }

    friend SuperPoint operator+(const SuperPoint& a, const SuperPoint& b) {
        if (a.m_ != b.m_ || a.n_ != b.n_)
            throw std::domain_error("SuperPoint: shape mismatch in addition");
        std::vector<Sn> ev, od;
        for (int j = 1; j <= a.m_; ++j) ev.push_back(a.even_slot(j) + b.even_slot(j));
        for (int k = 1; k <= a.n_; ++k) od.push_back(a.odd_slot(k) + b.odd_slot(k));
        int L = std::max(a.L_, b.L_), D = std::min(a.D_, b.D_);
        return SuperPoint(std::move(ev), std::move(od), L, D);
    }

    friend SuperPoint operator-(const SuperPoint& a, const SuperPoint& b) {
        if (a.m_ != b.m_ || a.n_ != b.n_)
            throw std::domain_error("SuperPoint: shape mismatch in subtraction");
        std::vector<Sn> ev, od;
        for (int j = 1; j <= a.m_; ++j) ev.push_back(a.even_slot(j) - b.even_slot(j));
        for (int k = 1; k <= a.n_; ++k) od.push_back(a.odd_slot(k) - b.odd_slot(k));
        int L = std::max(a.L_, b.L_), D = std::min(a.D_, b.D_);
        return SuperPoint(std::move(ev), std::move(od), L, D);
    }

    // Scale by an even supernumber, from the left.
    friend SuperPoint operator*(const Sn& c, const SuperPoint& p) {
        std::vector<Sn> ev, od;
        for (const auto& x : p.even_) ev.push_back(c * x);
        for (const auto& t : p.odd_) od.push_back(c * t);
        return SuperPoint(std::move(ev), std::move(od),
                          std::max(p.L_, c.skeleton()), std::min(p.D_, c.cutoff()));
    }

    friend bool operator==(const SuperPoint& a, const SuperPoint& b) {
        return a.m_ == b.m_ && a.n_ == b.n_ && a.even_ == b.even_ && a.odd_ == b.odd_;
    }

private:
    int m_, n_, L_, D_;
    std::vector<Sn> even_;
    std::vector<Sn> odd_;
};

// The point E_{A,I} = sigma^I e_A. Parity mismatches are rejected.
template <class S>
SuperPoint<S> basis_direction(const CoordIndex& c, int m, int n, int L, int D) {
    if (c.slot < 1 || c.slot > m + n)
        throw std::domain_error("basis_direction: slot out of range");
    if (!coord_parity_ok(c, m))
        throw std::domain_error("basis_direction: blade parity does not match slot " +
                                std::to_string(c.slot));
    SuperPoint<S> p(m, n, L, D);
    return p.with_slot(c.slot, Supernumber<S>::blade(L, D, c.index, ScalarOps<S>::one()));
}

template <class S>
S coord_get(const SuperPoint<S>& p, const CoordIndex& c) {
    if (!coord_parity_ok(c, p.m()))
        throw std::domain_error("coord_get: blade parity does not match slot");
    return p.slot(c.slot).coeff(c.index);
}

// Writes X_{A,I}. Body coordinates of even slots are real by construction;
// a complex value there is rejected.
template <class S>
SuperPoint<S> coord_set(const SuperPoint<S>& p, const CoordIndex& c, S value) {
    if (!coord_parity_ok(c, p.m()))
        throw std::domain_error("coord_set: blade parity does not match slot");
    if (c.slot <= p.m() && c.index.empty() && ScalarOps<S>::imag_part(value) != 0)
        throw std::domain_error("coord_set: body coordinate of an even slot must be real");
    const auto& old = p.slot(c.slot);
    auto updated = old - Supernumber<S>::blade(p.skeleton(), p.cutoff(), c.index,
                                               old.coeff(c.index)) +
                   Supernumber<S>::blade(p.skeleton(), p.cutoff(), c.index, std::move(value));
    return p.with_slot(c.slot, std::move(updated));
}

// <Y|X> = sum y_j x_j + sum omega_k theta_k.
template <class S>
Supernumber<S> pairing(const SuperPoint<S>& y, const SuperPoint<S>& x) {
    if (y.m() != x.m() || y.n() != x.n())
        throw std::domain_error("pairing: shape mismatch");
    int L = std::max(y.skeleton(), x.skeleton());
    int D = std::min(y.cutoff(), x.cutoff());
    auto acc = Supernumber<S>::zero(L, D);
    for (int j = 1; j <= x.m(); ++j) acc = acc + y.even_slot(j) * x.even_slot(j);
    for (int k = 1; k <= x.n(); ++k) acc = acc + y.odd_slot(k) * x.odd_slot(k);
    return acc;
}

// Distance on R^{m|n}: the sum of per-slot metric sums.
template <class S>
typename ScalarOps<S>::Real dist_mn(const SuperPoint<S>& x, const SuperPoint<S>& y) {
    auto d = x - y;
    typename ScalarOps<S>::Real total{};
    for (const auto& s : d.even_slots()) total += s.dist();
    for (const auto& s : d.odd_slots()) total += s.dist();
    return total;
}

// Solution basis of { X : <Y|X> = 0 for all Y } obtained by exact linear
// algebra, slot by slot. Directions Y carry slot-parity blades; the unknown
// slot values range over the ambient algebra, so the result is the same for
// every finite skeleton: even slots vanish, odd slots contribute the span of
// the top blade sigma_1...sigma_L.
struct AnnihilatorBasis {
    int m = 0, n = 0, L = 0;
    // each element is one basis vector: m+n slot values
    std::vector<std::vector<SupernumberQ>> vectors;
};

namespace detail {

using SparseRow = std::vector<std::pair<std::size_t, Rational>>;  // sorted by column

// Nullspace basis of a sparse rational system by reduced row echelon form.
inline std::vector<std::vector<Rational>> sparse_nullspace(std::vector<SparseRow> rows,
                                                           std::size_t dim) {
    auto coeff_at = [](const SparseRow& r, std::size_t col) {
        for (const auto& [c, v] : r)
            if (c == col) return v;
        return Rational(0);
    };
    auto axpy = [](SparseRow& dst, const Rational& f, const SparseRow& src) {
        SparseRow out;
        std::size_t i = 0, j = 0;
        while (i < dst.size() || j < src.size()) {
            if (j == src.size() || (i < dst.size() && dst[i].first < src[j].first)) {
                out.push_back(dst[i++]);
            } else if (i == dst.size() || src[j].first < dst[i].first) {
                Rational v = f * src[j].second;
                if (v != 0) out.emplace_back(src[j].first, std::move(v));
                ++j;
            } else {
                Rational v = dst[i].second + f * src[j].second;
                if (v != 0) out.emplace_back(dst[i].first, std::move(v));
                ++i;
                ++j;
            }
        }
        dst = std::move(out);
    };

    std::size_t rank = 0;
    std::vector<std::size_t> pivot_cols;
    for (std::size_t col = 0; col < dim && rank < rows.size(); ++col) {
        std::size_t pivot = rank;
        while (pivot < rows.size() &&
               (rows[pivot].empty() || rows[pivot].front().first != col))
            ++pivot;
        if (pivot == rows.size()) continue;
        std::swap(rows[rank], rows[pivot]);
        Rational inv = Rational(1) / rows[rank].front().second;
        for (auto& [c, v] : rows[rank]) v *= inv;
        for (std::size_t r = 0; r < rows.size(); ++r) {
            if (r == rank) continue;
            Rational f = coeff_at(rows[r], col);
            if (f != 0) axpy(rows[r], -f, rows[rank]);
        }
        pivot_cols.push_back(col);
        ++rank;
    }
    std::vector<bool> is_pivot(dim, false);
    for (std::size_t c : pivot_cols) is_pivot[c] = true;
    std::vector<std::vector<Rational>> basis;
    for (std::size_t free_col = 0; free_col < dim; ++free_col) {
        if (is_pivot[free_col]) continue;
        std::vector<Rational> v(dim, Rational(0));
        v[free_col] = 1;
        for (std::size_t r = 0; r < rank; ++r)
            v[pivot_cols[r]] = -coeff_at(rows[r], free_col);
        basis.push_back(std::move(v));
    }
    return basis;
}

// Nullspace of { sigma^K v = 0 : K within L of the given parity }, the
// unknown v dense over all 2^L blades. One equation per output blade of
// each product sigma^K v.
inline std::vector<std::vector<Rational>> slot_nullspace(int L, bool directions_even) {
    const std::size_t dim = std::size_t{1} << L;
    std::map<std::pair<std::uint64_t, std::uint64_t>, SparseRow> eqs;  // (K, out blade)
    for (std::uint64_t km = 0; km < dim; ++km) {
        GIndex k = GIndex::from_mask(km);
        if (k.even() != directions_even) continue;
        for (std::uint64_t jm = 0; jm < dim; ++jm) {
            MergeResult mr = merge_sign(k, GIndex::from_mask(jm));
            if (mr.zero) continue;
            eqs[{km, mr.index.mask()}].emplace_back(static_cast<std::size_t>(jm),
                                                    Rational(mr.sign));
        }
    }
    std::vector<SparseRow> rows;
    rows.reserve(eqs.size());
    for (auto& [key, row] : eqs) {
        std::sort(row.begin(), row.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        rows.push_back(std::move(row));
    }
    return sparse_nullspace(std::move(rows), dim);
}

}  // namespace detail

inline AnnihilatorBasis annihilator_solve(int m, int n, int L) {
    if (L < 1 || L > 20)
        throw std::domain_error("annihilator_solve: skeleton bound must be 1..20");
    AnnihilatorBasis out;
    out.m = m;
    out.n = n;
    out.L = L;
    auto even_null = detail::slot_nullspace(L, true);
    auto odd_null = detail::slot_nullspace(L, false);
    auto to_sn = [L](const std::vector<Rational>& dense) {
        std::vector<SupernumberQ::Term> terms;
        for (std::uint64_t mask = 0; mask < dense.size(); ++mask)
            if (dense[static_cast<std::size_t>(mask)] != 0)
                terms.emplace_back(GIndex::from_mask(mask),
                                   GaussRat(dense[static_cast<std::size_t>(mask)]));
        return SupernumberQ::from_terms(L, L, std::move(terms));
    };
    // one basis vector per (slot, per-slot nullspace vector)
    for (int a = 1; a <= m + n; ++a) {
        const auto& null = a <= m ? even_null : odd_null;
        for (const auto& v : null) {
            std::vector<SupernumberQ> slots(static_cast<std::size_t>(m + n),
                                            SupernumberQ::zero(L, L));
            slots[static_cast<std::size_t>(a - 1)] = to_sn(v);
            out.vectors.push_back(std::move(slots));
        }
    }
    return out;
}

// Axis-aligned open box in R^m, possibly a union; membership of a point
// depends only on its body.
template <class S>
class Superdomain {
public:
    using Real = typename ScalarOps<S>::Real;
    struct Box {
        std::vector<Real> lo, hi;  // open intervals per axis
    };

    Superdomain(int m, int n, std::vector<Box> boxes)
        : m_(m), n_(n), boxes_(std::move(boxes)) {
        for (const auto& b : boxes_)
            if (static_cast<int>(b.lo.size()) != m || static_cast<int>(b.hi.size()) != m)
                throw std::domain_error("Superdomain: box dimension mismatch");
    }

    static Superdomain whole(int m, int n) { return Superdomain(m, n, {}); }

    int m() const { return m_; }
    int n() const { return n_; }
    bool unbounded() const { return boxes_.empty(); }

    bool contains_body(const std::vector<Real>& q) const {
        if (boxes_.empty()) return true;
        for (const auto& b : boxes_) {
            bool inside = true;
            for (int j = 0; j < m_; ++j) {
                const auto& v = q[static_cast<std::size_t>(j)];
                if (!(b.lo[static_cast<std::size_t>(j)] < v &&
                      v < b.hi[static_cast<std::size_t>(j)])) {
                    inside = false;
                    break;
                }
            }
            if (inside) return true;
        }
        return false;
    }

    bool contains(const SuperPoint<S>& p) const {
        if (p.m() != m_) throw std::domain_error("Superdomain: point shape mismatch");
        return contains_body(p.body());
    }

private:
    int m_, n_;
    std::vector<Box> boxes_;
};

}  // namespace sga
