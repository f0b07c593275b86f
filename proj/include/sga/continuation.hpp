#pragma once

// Grassmann continuation: extension of smooth functions on R^m to even
// supernumber arguments through the Taylor series in the nilpotent soul,
//
//   f~(x) = sum_{|alpha| <= D/2} (1/alpha!) d^alpha f(x_B) x_S^alpha.
//
// Soul components of even slots have minimal degree 2, so orders above
// floor(D/2) cannot contribute below the cutoff; the truncation order is
// fixed at that bound rather than discovered by watching for zero terms.

#include <functional>
#include <optional>
#include <vector>

#include "sga/errors.hpp"
#include "sga/interpolate.hpp"
#include "sga/smoothfn.hpp"
#include "sga/supernumber.hpp"

namespace sga {

namespace detail {

template <class S>
void check_even_slot(const Supernumber<S>& x) {
    if (x.parity() != Parity::even)
        throw std::domain_error("grassmann_continue: argument slot must be even");
    if (!x.reality_check())
        throw std::domain_error("grassmann_continue: argument body must be real");
    if (!x.soul().is_zero() && x.soul().min_degree() < 2)
        throw std::logic_error("grassmann_continue: even soul below degree 2");
}

template <class S>
S inv_factorial(const EvenMulti& alpha) {
    using Real = typename ScalarOps<S>::Real;
    return ScalarOps<S>::from_real(Real(1) / Real(static_cast<long>(multi_factorial(alpha))));
}

}  // namespace detail

// f~(x) for a scalar-valued coefficient function.
template <class S>
Supernumber<S> grassmann_continue(const SmoothMap<S>& f,
                                  const std::vector<Supernumber<S>>& x) {
    const int m = f.arity();
    if (static_cast<int>(x.size()) != m)
        throw std::domain_error("grassmann_continue: slot count must match arity");
    int skeleton = 0, cutoff = kMaxGenerators;
    for (const auto& xj : x) {
        detail::check_even_slot(xj);
        skeleton = std::max(skeleton, xj.skeleton());
        cutoff = std::min(cutoff, xj.cutoff());
    }
    if (m == 0) skeleton = cutoff = 0;

    std::vector<typename ScalarOps<S>::Real> body;
    std::vector<Supernumber<S>> soul;
    for (const auto& xj : x) {
        body.push_back(ScalarOps<S>::real_part(xj.body()));
        soul.push_back(xj.soul().in_context(skeleton, cutoff));
    }

    const unsigned order = static_cast<unsigned>(cutoff / 2);
    auto acc = Supernumber<S>::zero(skeleton, cutoff);
    for (const auto& alpha : enumerate_multis(m, order)) {
        auto soul_pow = Supernumber<S>::unit(skeleton, cutoff);
        for (int j = 0; j < m; ++j)
            for (unsigned k = 0; k < alpha[static_cast<std::size_t>(j)]; ++k)
                soul_pow = soul_pow * soul[static_cast<std::size_t>(j)];
        if (soul_pow.is_zero()) continue;
        S c = f.partial(alpha).eval(body) * detail::inv_factorial<S>(alpha);
        acc = acc + c * soul_pow;
    }
    return acc;
}

// Componentwise continuation of an algebra-valued coefficient function.
// The map's own context bounds which blades its components occupy; the
// evaluation context comes from the argument. Component blades above the
// argument's cutoff drop out, as any product would in the quotient.
template <class S>
Supernumber<S> grassmann_continue(const SupernumberValuedMap<S>& f,
                                  const std::vector<Supernumber<S>>& x) {
    int skeleton = f.skeleton();
    int cutoff = x.empty() ? f.cutoff() : kMaxGenerators;
    for (const auto& xj : x) {
        skeleton = std::max(skeleton, xj.skeleton());
        cutoff = std::min(cutoff, xj.cutoff());
    }
    cutoff = std::min(cutoff, skeleton);
    auto acc = Supernumber<S>::zero(skeleton, cutoff);
    for (const auto& [blade, comp] : f.components()) {
        if (blade.degree() > cutoff) continue;
        auto continued = grassmann_continue(comp, x).in_context(skeleton, cutoff);
        acc = acc + continued * Supernumber<S>::blade(skeleton, cutoff, blade,
                                                      ScalarOps<S>::one());
    }
    return acc;
}

struct FdOptions {
    double step = 1e-5;
    bool richardson = true;  // one extrapolation level
};

namespace detail {

// d/dt f~(x + t e_j) at t = 0. Polynomials go through exact interpolation,
// everything else through central differences on the body coordinate.
template <class S>
Supernumber<S> body_line_derivative(const SmoothMap<S>& f,
                                    const std::vector<Supernumber<S>>& x, int j,
                                    const FdOptions& fd) {
    using Real = typename ScalarOps<S>::Real;
    auto shifted = [&](const Real& t) {
        auto xs = x;
        auto& slot = xs[static_cast<std::size_t>(j - 1)];
        slot = slot + Supernumber<S>::scalar(slot.skeleton(), slot.cutoff(),
                                             ScalarOps<S>::from_real(t));
        return grassmann_continue(f, xs);
    };
    if (const auto* p = f.as_poly()) {
        int deg = static_cast<int>(p->total_degree());
        return sample_line_poly<S>(shifted, deg).derivative_at_zero();
    }
    if constexpr (!ScalarOps<S>::exact) {
        auto central = [&](double h) {
            return (shifted(h) - shifted(-h)) * ScalarOps<S>::from_real(1.0 / (2.0 * h));
        };
        auto d = central(fd.step);
        if (!fd.richardson) return d;
        auto d2 = central(fd.step / 2.0);
        return (d2 * ScalarOps<S>::from_real(4.0 / 3.0)) -
               (d * ScalarOps<S>::from_real(1.0 / 3.0));
    }
    throw ConfigError(
        "continuation derivative of a non-polynomial needs the float carrier");
}

}  // namespace detail

// Computes d_{x_j} f~ both as the continuation of d_{q_j} f and as the
// derivative of f~ along the body line, checks that the two agree, and
// returns the value.
template <class S>
Supernumber<S> continuation_partial(const SmoothMap<S>& f,
                                    const std::vector<Supernumber<S>>& x, int j,
                                    const FdOptions& fd = {},
                                    double float_tol = 1e-6) {
    auto continued_derivative = grassmann_continue(f.partial_var(j), x);
    auto line_derivative = detail::body_line_derivative(f, x, j, fd);
    if constexpr (ScalarOps<S>::exact) {
        if (!(continued_derivative == line_derivative))
            throw std::logic_error("continuation_partial: derivative routes disagree");
    } else {
        if (dist(continued_derivative, line_derivative) > float_tol)
            throw EvalError("continuation_partial: derivative routes disagree beyond tolerance");
    }
    return continued_derivative;
}

template <class S>
struct TaylorResult {
    Supernumber<S> partial_sum;
    Supernumber<S> defect;  // f~(x+y) - partial sum
    bool exact = false;
};

// Taylor expansion of the continuation around x with increment y, through
// total order N. The derivative coefficients are continuations of the
// coefficient-function derivatives.
template <class S>
TaylorResult<S> taylor_expand_continued(const SmoothMap<S>& f,
                                        const std::vector<Supernumber<S>>& x,
                                        const std::vector<Supernumber<S>>& y, unsigned n) {
    const int m = f.arity();
    if (static_cast<int>(y.size()) != m)
        throw std::domain_error("taylor_expand_continued: increment shape mismatch");
    int skeleton = 0, cutoff = kMaxGenerators;
    for (const auto& s : x) {
        skeleton = std::max(skeleton, s.skeleton());
        cutoff = std::min(cutoff, s.cutoff());
    }
    for (const auto& s : y) {
        detail::check_even_slot(s);
        skeleton = std::max(skeleton, s.skeleton());
        cutoff = std::min(cutoff, s.cutoff());
    }
    if (m == 0) skeleton = cutoff = 0;

    auto sum = Supernumber<S>::zero(skeleton, cutoff);
    for (const auto& alpha : enumerate_multis(m, n)) {
        auto deriv = grassmann_continue(f.partial(alpha), x).in_context(skeleton, cutoff);
        auto y_pow = Supernumber<S>::unit(skeleton, cutoff);
        for (int j = 0; j < m; ++j)
            for (unsigned k = 0; k < alpha[static_cast<std::size_t>(j)]; ++k)
                y_pow = y_pow * y[static_cast<std::size_t>(j)];
        sum = sum + detail::inv_factorial<S>(alpha) * (deriv * y_pow);
    }

    std::vector<Supernumber<S>> xy;
    for (int j = 0; j < m; ++j)
        xy.push_back(x[static_cast<std::size_t>(j)] + y[static_cast<std::size_t>(j)]);
    auto full = grassmann_continue(f, xy).in_context(skeleton, cutoff);
    auto defect = full - sum;
    return TaylorResult<S>{std::move(sum), defect, defect.is_zero()};
}

// One-variable analytic continuation sum_k (1/k!) f^(k)(z_B) z_S^k.
template <class S>
Supernumber<S> continue_analytic(const SmoothMap<S>& f, const Supernumber<S>& z) {
    if (f.arity() != 1)
        throw std::domain_error("continue_analytic: expects a one-variable function");
    return grassmann_continue(f, {z});
}

}  // namespace sga
