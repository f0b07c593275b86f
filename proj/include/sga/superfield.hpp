#pragma once

// Supersmooth functions u(x, theta) = sum_{|a|<=n} theta^a f~_a(x): the odd
// factors multiply from the left and the odd derivatives follow the left
// convention, with sign l(a) = sum_{j<s} a_j. A right-ordered form
// sum f_a(x) theta^a exists alongside with the mirror sign r(a).

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <vector>

#include "sga/continuation.hpp"
#include "sga/errors.hpp"
#include "sga/interpolate.hpp"
#include "sga/smoothfn.hpp"
#include "sga/superspace.hpp"

namespace sga {

namespace detail {

// theta^a = theta_{s1} ... theta_{sk} with ascending s.
template <class S>
Supernumber<S> theta_power(const SuperPoint<S>& x, std::uint32_t a_mask) {
    auto acc = Supernumber<S>::unit(x.skeleton(), x.cutoff());
    for (int s = 1; s <= x.n(); ++s)
        if ((a_mask >> (s - 1)) & 1) acc = acc * x.odd_slot(s);
    return acc;
}

}  // namespace detail

template <class S>
class Superfield {
public:
    using Coefficient = SupernumberValuedMap<S>;
    using CoeffMap = std::map<std::uint32_t, Coefficient>;

    Superfield(int m, int n, CoeffMap coeffs,
               std::optional<Superdomain<S>> domain = std::nullopt)
        : m_(m), n_(n), coeffs_(std::move(coeffs)), domain_(std::move(domain)) {
        if (n < 0 || n > 31) throw std::domain_error("Superfield: odd arity out of range");
        for (const auto& [a, f] : coeffs_) {
            if (a >= (std::uint32_t{1} << n))
                throw std::domain_error("Superfield: odd multi-index out of range");
            if (f.arity() != m)
                throw std::domain_error("Superfield: coefficient arity mismatch");
            if (f.value_parity() == Parity::undefined)
                warnings_.push_back("coefficient at odd index mask " + std::to_string(a) +
                                    " is not homogeneous");
        }
        if (domain_ && (domain_->m() != m))
            throw std::domain_error("Superfield: domain shape mismatch");
    }

    // Scalar-coefficient field u = sum theta^a f_a with f_a: R^m -> scalar.
    static Superfield from_scalar_coeffs(
        int m, int n, const std::vector<std::pair<std::uint32_t, SmoothMap<S>>>& coeffs,
        int L, int D, std::optional<Superdomain<S>> domain = std::nullopt) {
        CoeffMap map;
        for (const auto& [a, f] : coeffs) {
            if (map.count(a)) throw std::domain_error("Superfield: duplicate odd index");
            map.emplace(a, Coefficient::from_scalar(f, L, D));
        }
        return Superfield(m, n, std::move(map), std::move(domain));
    }

    int m() const { return m_; }
    int n() const { return n_; }
    const CoeffMap& coefficients() const { return coeffs_; }
    const std::vector<std::string>& warnings() const { return warnings_; }
    const std::optional<Superdomain<S>>& domain() const { return domain_; }

    // Largest polynomial degree across coefficients, when all are polynomial.
    std::optional<unsigned> coeff_degree() const {
        unsigned d = 0;
        for (const auto& [a, f] : coeffs_) {
            auto pd = f.poly_degree();
            if (!pd) return std::nullopt;
            d = std::max(d, *pd);
        }
        return d;
    }

    // Degree in t of t -> eval(X + tY) along any affine line, when available.
    std::optional<int> line_degree() const {
        auto cd = coeff_degree();
        if (!cd) return std::nullopt;
        return static_cast<int>(*cd) + n_;
    }

    Superfield with_domain(Superdomain<S> dom) const {
        return Superfield(m_, n_, coeffs_, std::move(dom));
    }

    Supernumber<S> eval(const SuperPoint<S>& x) const {
        if (x.m() != m_ || x.n() != n_)
            throw std::domain_error("Superfield: point shape mismatch");
        if (domain_ && !domain_->contains(x))
            throw EvalError("Superfield: body outside the base domain");
        int L = x.skeleton(), D = x.cutoff();
        for (const auto& [a, f] : coeffs_) L = std::max(L, f.skeleton());
        auto acc = Supernumber<S>::zero(L, D);
        for (const auto& [a, f] : coeffs_) {
            auto continued =
                grassmann_continue(f, x.even_slots()).truncate(D).in_context(L, D);
            acc = acc + detail::theta_power(x, a).in_context(L, D) * continued;
        }
        return acc;
    }

    Supernumber<S> operator()(const SuperPoint<S>& x) const { return eval(x); }

    // Coefficient-wise d/dx_j.
    Superfield partial_even(int j) const {
        if (j < 1 || j > m_) throw std::domain_error("partial_even: slot out of range");
        CoeffMap out;
        for (const auto& [a, f] : coeffs_) out.emplace(a, f.partial_var(j));
        return Superfield(m_, n_, std::move(out), domain_);
    }

    // Left derivative d/dtheta_s: the entry at a with a_s = 1 moves to
    // a - e_s with sign (-1)^{l(a)}; entries with a_s = 0 vanish.
    Superfield partial_odd_left(int s) const {
        if (s < 1 || s > n_) throw std::domain_error("partial_odd_left: slot out of range");
        const std::uint32_t bit = std::uint32_t{1} << (s - 1);
        CoeffMap out;
        for (const auto& [a, f] : coeffs_) {
            if (!(a & bit)) continue;
            int l = left_sign_exponent(a, s);
            out.emplace(a & ~bit,
                        (l % 2 == 0) ? f : f.scaled(-ScalarOps<S>::one()));
        }
        return Superfield(m_, n_, std::move(out), domain_);
    }

    // Iterated left derivative for a full odd multi-index: theta_1 first.
    Superfield partial_odd_multi(std::uint32_t a_mask) const {
        Superfield u = *this;
        for (int s = 1; s <= n_; ++s)
            if ((a_mask >> (s - 1)) & 1) u = u.partial_odd_left(s);
        return u;
    }

private:
    int m_, n_;
    CoeffMap coeffs_;
    std::optional<Superdomain<S>> domain_;
    std::vector<std::string> warnings_;
};

// Right-ordered representation sum_a f_a(x) theta^a.
template <class S>
class SuperfieldRight {
public:
    using Coefficient = SupernumberValuedMap<S>;
    using CoeffMap = std::map<std::uint32_t, Coefficient>;

    SuperfieldRight(int m, int n, CoeffMap coeffs) : m_(m), n_(n), coeffs_(std::move(coeffs)) {}

    int m() const { return m_; }
    int n() const { return n_; }
    const CoeffMap& coefficients() const { return coeffs_; }

    Supernumber<S> eval(const SuperPoint<S>& x) const {
        int L = x.skeleton(), D = x.cutoff();
        for (const auto& [a, f] : coeffs_) {
            L = std::max(L, f.skeleton());
            D = std::min(D, f.cutoff());
        }
        auto acc = Supernumber<S>::zero(L, D);
        for (const auto& [a, f] : coeffs_) {
            auto continued = grassmann_continue(f, x.even_slots()).in_context(L, D);
            acc = acc + continued * detail::theta_power(x, a).in_context(L, D);
        }
        return acc;
    }

    // Right derivative: sign r(a) = sum_{j>s} a_j.
    SuperfieldRight partial_odd_right(int s) const {
        if (s < 1 || s > n_) throw std::domain_error("partial_odd_right: slot out of range");
        const std::uint32_t bit = std::uint32_t{1} << (s - 1);
        CoeffMap out;
        for (const auto& [a, f] : coeffs_) {
            if (!(a & bit)) continue;
            int r = right_sign_exponent(a, s);
            out.emplace(a & ~bit,
                        (r % 2 == 0) ? f : f.scaled(-ScalarOps<S>::one()));
        }
        return SuperfieldRight(m_, n_, std::move(out));
    }

private:
    int m_, n_;
    CoeffMap coeffs_;
};

// Reorder theta^a f_a(x) = g_a(x) theta^a: even components of f_a commute
// through, odd components pick up (-1)^{|a|}.
template <class S>
SuperfieldRight<S> to_right_ordered(const Superfield<S>& u) {
    typename SuperfieldRight<S>::CoeffMap out;
    for (const auto& [a, f] : u.coefficients()) {
        bool odd_count = (std::popcount(a) % 2) == 1;
        S even_factor = ScalarOps<S>::one();
        S odd_factor = odd_count ? -ScalarOps<S>::one() : ScalarOps<S>::one();
        out.emplace(a, f.parity_scaled(even_factor, odd_factor));
    }
    return SuperfieldRight<S>(u.m(), u.n(), std::move(out));
}

template <class S>
Superfield<S> to_left_ordered(const SuperfieldRight<S>& u) {
    typename Superfield<S>::CoeffMap out;
    for (const auto& [a, f] : u.coefficients()) {
        bool odd_count = (std::popcount(a) % 2) == 1;
        S even_factor = ScalarOps<S>::one();
        S odd_factor = odd_count ? -ScalarOps<S>::one() : ScalarOps<S>::one();
        out.emplace(a, f.parity_scaled(even_factor, odd_factor));
    }
    return Superfield<S>(u.m(), u.n(), std::move(out));
}

// Evaluable function on a fixed skeleton, the black-box side of the
// characterization machinery. line_degree, when declared, promises that
// t -> fn(X + tY) is polynomial of at most that degree, enabling exact
// derivatives; otherwise derivatives fall back to central differences.
template <class S>
struct SkeletonFn {
    int m = 0, n = 0, L = 0, D = 0;
    std::function<Supernumber<S>(const SuperPoint<S>&)> fn;
    std::optional<int> line_degree;

    Supernumber<S> operator()(const SuperPoint<S>& x) const { return fn(x); }
};

template <class S>
SkeletonFn<S> make_skeleton_fn(const Superfield<S>& u, int L, int D) {
    return SkeletonFn<S>{u.m(), u.n(), L, D,
                         [u](const SuperPoint<S>& x) { return u.eval(x); },
                         u.line_degree()};
}

namespace detail {

template <class S>
SuperPoint<S> point_axpy(const SuperPoint<S>& x, const typename ScalarOps<S>::Real& t,
                         const SuperPoint<S>& y) {
    auto ty = Supernumber<S>::scalar(y.skeleton(), y.cutoff(), ScalarOps<S>::from_real(t));
    std::vector<Supernumber<S>> ev, od;
    for (int j = 1; j <= x.m(); ++j) ev.push_back(x.even_slot(j) + ty * y.even_slot(j));
    for (int k = 1; k <= x.n(); ++k) od.push_back(x.odd_slot(k) + ty * y.odd_slot(k));
    return SuperPoint<S>(std::move(ev), std::move(od),
                         std::max(x.skeleton(), y.skeleton()),
                         std::min(x.cutoff(), y.cutoff()));
}

// d/dt F(X + tY) at t = 0 for an arbitrary evaluator.
template <class S>
Supernumber<S> line_derivative(const std::function<Supernumber<S>(const SuperPoint<S>&)>& fn,
                               const SuperPoint<S>& x, const SuperPoint<S>& y,
                               std::optional<int> degree, const FdOptions& fd) {
    using Real = typename ScalarOps<S>::Real;
    auto along = [&](const Real& t) { return fn(point_axpy(x, t, y)); };
    if (degree) {
        if (*degree == 0) {
            auto v = along(Real(0));
            return Supernumber<S>::zero(v.skeleton(), v.cutoff());
        }
        return sample_line_poly<S>(along, *degree).derivative_at_zero();
    }
    if constexpr (!ScalarOps<S>::exact) {
        auto central = [&](double h) {
            return (along(h) - along(-h)) * ScalarOps<S>::from_real(1.0 / (2.0 * h));
        };
        auto d = central(fd.step);
        if (!fd.richardson) return d;
        auto d2 = central(fd.step / 2.0);
        return (d2 * ScalarOps<S>::from_real(4.0 / 3.0)) -
               (d * ScalarOps<S>::from_real(1.0 / 3.0));
    }
    throw ConfigError("line_derivative: exact carrier needs a declared line degree");
}

}  // namespace detail

// Gateaux derivative d/dt u(X+tY)|_0. The right-hand side
// sum y_j d_{x_j}u + sum omega_s d_{theta_s}u is evaluated directly; the
// left-hand side is recovered from the line itself and both must agree.
template <class S>
Supernumber<S> gateaux_derivative(const Superfield<S>& u, const SuperPoint<S>& x,
                                  const SuperPoint<S>& y, const FdOptions& fd = {},
                                  double float_tol = 1e-6) {
    auto rhs = Supernumber<S>::zero(x.skeleton(), x.cutoff());
    for (int j = 1; j <= u.m(); ++j)
        rhs = rhs + y.even_slot(j) * u.partial_even(j).eval(x);
    for (int s = 1; s <= u.n(); ++s)
        rhs = rhs + y.odd_slot(s) * u.partial_odd_left(s).eval(x);

    auto lhs = detail::line_derivative<S>([&u](const SuperPoint<S>& p) { return u.eval(p); },
                                          x, y, u.line_degree(), fd);
    if constexpr (ScalarOps<S>::exact) {
        if (!(lhs == rhs))
            throw std::logic_error("gateaux_derivative: line and slot routes disagree");
    } else {
        if (dist(lhs, rhs) > float_tol)
            throw EvalError("gateaux_derivative: routes disagree beyond tolerance");
    }
    return rhs;
}

// Coordinate derivative d/dX_{A,I} = line derivative along E_{A,I}.
template <class S>
Supernumber<S> coord_partial(const Superfield<S>& u, const SuperPoint<S>& x,
                             const CoordIndex& c, const FdOptions& fd = {}) {
    auto e = basis_direction<S>(c, u.m(), u.n(), x.skeleton(), x.cutoff());
    return detail::line_derivative<S>([&u](const SuperPoint<S>& p) { return u.eval(p); }, x, e,
                                      u.line_degree(), fd);
}

template <class S>
Supernumber<S> coord_partial(const SkeletonFn<S>& f, const SuperPoint<S>& x,
                             const CoordIndex& c, const FdOptions& fd = {}) {
    auto e = basis_direction<S>(c, f.m, f.n, x.skeleton(), x.cutoff());
    return detail::line_derivative<S>(f.fn, x, e, f.line_degree, fd);
}

template <class S>
struct SuperfieldTaylor {
    Supernumber<S> partial_sum;
    Supernumber<S> defect;
    bool exact = false;
};

// Taylor sum over mixed multi-indices through total order N:
//   sum_{|alpha|+|a| <= N} (1/alpha!) y^alpha omega^a (d_x^alpha d_theta^a u)(X).
// Odd derivatives apply theta_1 innermost.
template <class S>
SuperfieldTaylor<S> taylor_superfield(const Superfield<S>& u, const SuperPoint<S>& x,
                                      const SuperPoint<S>& y, unsigned order) {
    auto shifted = x + y;
    auto full = u.eval(shifted);
    auto sum = Supernumber<S>::zero(full.skeleton(), full.cutoff());
    for (std::uint32_t a = 0; a < (std::uint32_t{1} << u.n()); ++a) {
        unsigned odd_order = static_cast<unsigned>(std::popcount(a));
        if (odd_order > order) continue;
        auto u_odd = u.partial_odd_multi(a);
        auto omega_pow = detail::theta_power(y, a);
        for (const auto& alpha : enumerate_multis(u.m(), order - odd_order)) {
            Superfield<S> u_full = u_odd;
            for (int j = 1; j <= u.m(); ++j)
                for (unsigned k = 0; k < alpha[static_cast<std::size_t>(j - 1)]; ++k)
                    u_full = u_full.partial_even(j);
            auto y_pow = Supernumber<S>::unit(y.skeleton(), y.cutoff());
            for (int j = 1; j <= u.m(); ++j)
                for (unsigned k = 0; k < alpha[static_cast<std::size_t>(j - 1)]; ++k)
                    y_pow = y_pow * y.even_slot(j);
            auto term = detail::inv_factorial<S>(alpha) *
                        (y_pow * (omega_pow * u_full.eval(x)));
            sum = sum + term.in_context(full.skeleton(), full.cutoff());
        }
    }
    auto defect = full - sum;
    return SuperfieldTaylor<S>{std::move(sum), defect, defect.is_zero()};
}

// Coefficient recovery at a base point: evaluate at fresh odd generators
// theta*_k = sigma_{L+k} and read the fresh-generator blades. For the
// evaluation of a superfield this inverts the expansion exactly.
template <class S>
std::map<std::uint32_t, Supernumber<S>> superfield_extract(
    const std::function<Supernumber<S>(const SuperPoint<S>&)>& fn, int declared_skeleton,
    const std::vector<Supernumber<S>>& x, int n, int L, int D) {
    if (L + n > kMaxGenerators)
        throw ConfigError("superfield_extract: no room for fresh generators above L");
    if (declared_skeleton < L + n)
        throw ConfigError("superfield_extract: function skeleton lacks " +
                          std::to_string(n) + " fresh generators above L=" +
                          std::to_string(L));
    const int big_l = L + n;
    const int big_d = std::min(D + n, big_l);

    std::vector<Supernumber<S>> ev;
    for (const auto& xj : x) {
        if (xj.max_degree() > D)
            throw std::domain_error("superfield_extract: base point exceeds cutoff");
        for (const auto& [i, cc] : xj.terms())
            if (i.max_generator() > L)
                throw std::domain_error(
                    "superfield_extract: base point uses reserved fresh generators");
        ev.push_back(xj.in_context(big_l, big_d));
    }
    std::vector<Supernumber<S>> od;
    for (int k = 1; k <= n; ++k) od.push_back(Supernumber<S>::generator(big_l, big_d, L + k));
    SuperPoint<S> probe(std::move(ev), std::move(od), big_l, big_d);

    auto value = fn(probe);
    const std::uint64_t high_mask =
        n == 0 ? 0 : (((std::uint64_t{1} << n) - 1) << L);

    std::map<std::uint32_t, std::vector<typename Supernumber<S>::Term>> collected;
    for (const auto& [i, c] : value.terms()) {
        GIndex high = i.intersect(GIndex::from_mask(high_mask));
        GIndex low = i.without(high);
        if (low.degree() > D) continue;
        std::uint32_t a_mask = static_cast<std::uint32_t>(high.mask() >> L);
        MergeResult mr = merge_sign(high, low);
        S coeff = mr.sign < 0 ? -c : c;
        collected[a_mask].emplace_back(low, std::move(coeff));
    }
    std::map<std::uint32_t, Supernumber<S>> out;
    for (std::uint32_t a = 0; a < (std::uint32_t{1} << n); ++a) {
        auto it = collected.find(a);
        if (it == collected.end())
            out.emplace(a, Supernumber<S>::zero(L, D));
        else
            out.emplace(a, Supernumber<S>::from_terms(L, D, std::move(it->second)));
    }
    return out;
}

template <class S>
std::map<std::uint32_t, Supernumber<S>> superfield_extract(const SkeletonFn<S>& f,
                                                           const std::vector<Supernumber<S>>& x,
                                                           int L, int D) {
    return superfield_extract<S>(f.fn, f.L, x, f.n, L, D);
}

struct PathOptions {
    std::optional<int> poly_degree;  // exact closed form when set
    double tol = 1e-10;
    int max_refine = 16;
};

// Componentwise integral of a supernumber-valued path over [a, b]. Exact
// for declared polynomial paths, composite-Simpson refinement otherwise
// (float carrier only).
template <class S>
Supernumber<S> integrate_path(
    const std::function<Supernumber<S>(const typename ScalarOps<S>::Real&)>& phi,
    const typename ScalarOps<S>::Real& a, const typename ScalarOps<S>::Real& b,
    const PathOptions& opts = {}) {
    using Real = typename ScalarOps<S>::Real;
    if (opts.poly_degree) {
        int deg = *opts.poly_degree;
        if (deg < 0) throw std::domain_error("integrate_path: negative degree");
        std::vector<Supernumber<S>> values;
        std::vector<Real> nodes;
        for (int k = 0; k <= deg; ++k) {
            Real t = deg == 0 ? a
                              : a + (b - a) * Real(static_cast<long>(k)) /
                                    Real(static_cast<long>(deg));
            nodes.push_back(t);
            values.push_back(phi(t));
        }
        return line_poly_from_samples<S>(std::move(values), std::move(nodes)).integral(a, b);
    }
    if constexpr (ScalarOps<S>::exact) {
        throw ConfigError("integrate_path: exact carrier needs a declared polynomial degree");
    } else {
        auto simpson = [&](int intervals) {
            double h = (b - a) / intervals;
            auto acc = phi(a) * ScalarOps<S>::from_real(h / 3.0);
            for (int k = 1; k <= intervals; ++k) {
                double w = (k == intervals) ? 1.0 : (k % 2 == 1 ? 4.0 : 2.0);
                acc = acc + phi(a + k * h) * ScalarOps<S>::from_real(w * h / 3.0);
            }
            return acc;
        };
        int intervals = 8;
        auto prev = simpson(intervals);
        for (int r = 0; r < opts.max_refine; ++r) {
            intervals *= 2;
            auto cur = simpson(intervals);
            if (dist(cur, prev) <= opts.tol) return cur;
            prev = cur;
        }
        return prev;
    }
}

}  // namespace sga
