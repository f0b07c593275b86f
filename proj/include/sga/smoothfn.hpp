#pragma once

// Coefficient functions f: R^m -> scalar with exact partial-derivative
// oracles. Polynomials carry exact arithmetic; the analytic primitives
// (exp, trig, log, integer powers of an affine form) have closed derivative
// cycles and live on the float carrier. User-defined maps must supply their
// own derivative oracle; the library never differentiates a black box by
// finite differences when building continuations, finite differences exist
// only as a check.

#include <cmath>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "sga/errors.hpp"
#include "sga/gindex.hpp"
#include "sga/scalar.hpp"
#include "sga/supernumber.hpp"

namespace sga {

// Exact multivariate polynomial in normal form: terms sorted by exponent
// vector, no zero coefficients.
template <class S>
class PolyMap {
public:
    using Real = typename ScalarOps<S>::Real;
    using Term = std::pair<EvenMulti, S>;

    explicit PolyMap(int arity) : m_(arity) {
        if (arity < 0) throw std::domain_error("PolyMap: negative arity");
    }

    static PolyMap constant(int arity, S c) {
        PolyMap p(arity);
        if (!ScalarOps<S>::is_zero(c))
            p.terms_.emplace_back(EvenMulti(static_cast<std::size_t>(arity), 0), std::move(c));
        return p;
    }

    static PolyMap variable(int arity, int j) {  // q_j, 1-based
        if (j < 1 || j > arity) throw std::domain_error("PolyMap: variable out of range");
        EvenMulti e(static_cast<std::size_t>(arity), 0);
        e[static_cast<std::size_t>(j - 1)] = 1;
        return monomial(arity, std::move(e), ScalarOps<S>::one());
    }

    static PolyMap monomial(int arity, EvenMulti exps, S c) {
        if (static_cast<int>(exps.size()) != arity)
            throw std::domain_error("PolyMap: exponent arity mismatch");
        PolyMap p(arity);
        if (!ScalarOps<S>::is_zero(c)) p.terms_.emplace_back(std::move(exps), std::move(c));
        return p;
    }

    static PolyMap from_terms(int arity, std::vector<Term> terms) {
        PolyMap p(arity);
        for (auto& [e, c] : terms) {
            if (static_cast<int>(e.size()) != arity)
                throw std::domain_error("PolyMap: exponent arity mismatch");
            p.add_term(e, c);
        }
        return p;
    }

    int arity() const { return m_; }
    const std::vector<Term>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    unsigned total_degree() const {
        unsigned d = 0;
        for (const auto& [e, c] : terms_) d = std::max(d, multi_order(e));
        return d;
    }

    S eval(const std::vector<Real>& q) const {
        if (static_cast<int>(q.size()) != m_)
            throw std::domain_error("PolyMap: evaluation arity mismatch");
        S acc = ScalarOps<S>::zero();
        for (const auto& [e, c] : terms_) {
            Real mono{1};
            for (int j = 0; j < m_; ++j)
                for (unsigned k = 0; k < e[static_cast<std::size_t>(j)]; ++k)
                    mono *= q[static_cast<std::size_t>(j)];
            acc += c * ScalarOps<S>::from_real(mono);
        }
        return acc;
    }

    PolyMap partial_var(int j) const {  // 1-based
        PolyMap p(m_);
        for (const auto& [e, c] : terms_) {
            unsigned a = e[static_cast<std::size_t>(j - 1)];
            if (a == 0) continue;
            EvenMulti e2 = e;
            e2[static_cast<std::size_t>(j - 1)] = a - 1;
            p.add_term(e2, c * ScalarOps<S>::from_int(static_cast<long>(a)));
        }
        return p;
    }

    friend PolyMap operator+(const PolyMap& a, const PolyMap& b) {
        PolyMap p = a;
        for (const auto& [e, c] : b.terms_) p.add_term(e, c);
        return p;
    }

    friend PolyMap operator-(const PolyMap& a, const PolyMap& b) {
        PolyMap p = a;
        for (const auto& [e, c] : b.terms_) p.add_term(e, -c);
        return p;
    }

    friend PolyMap operator*(const PolyMap& a, const PolyMap& b) {
        PolyMap p(a.m_);
        for (const auto& [ea, ca] : a.terms_) {
            for (const auto& [eb, cb] : b.terms_) {
                EvenMulti e = ea;
                for (std::size_t j = 0; j < e.size(); ++j) e[j] += eb[j];
                p.add_term(e, ca * cb);
            }
        }
        return p;
    }

    friend PolyMap operator*(const S& c, const PolyMap& a) {
        PolyMap p(a.m_);
        for (const auto& [e, v] : a.terms_) p.add_term(e, c * v);
        return p;
    }

    // Substitute q_i = sum_k A[i][k] u_k + b[i]; the result has arity
    // new_arity = A[i].size().
    PolyMap compose_affine(const std::vector<std::vector<Real>>& a,
                           const std::vector<Real>& b) const {
        if (static_cast<int>(a.size()) != m_ || static_cast<int>(b.size()) != m_)
            throw std::domain_error("PolyMap: affine map shape mismatch");
        int new_arity = a.empty() ? 0 : static_cast<int>(a[0].size());
        std::vector<PolyMap> subs;
        for (int i = 0; i < m_; ++i) {
            PolyMap lin = constant(new_arity,
                                   ScalarOps<S>::from_real(b[static_cast<std::size_t>(i)]));
            for (int k = 0; k < new_arity; ++k) {
                S coef = ScalarOps<S>::from_real(a[static_cast<std::size_t>(i)]
                                                  [static_cast<std::size_t>(k)]);
                lin = lin + coef * variable(new_arity, k + 1);
            }
            subs.push_back(std::move(lin));
        }
        PolyMap acc(new_arity);
        for (const auto& [e, c] : terms_) {
            PolyMap mono = constant(new_arity, c);
            for (int i = 0; i < m_; ++i)
                for (unsigned k = 0; k < e[static_cast<std::size_t>(i)]; ++k)
                    mono = mono * subs[static_cast<std::size_t>(i)];
            acc = acc + mono;
        }
        return acc;
    }

    friend bool operator==(const PolyMap& x, const PolyMap& y) {
        return x.m_ == y.m_ && x.terms_ == y.terms_;
    }

private:
    void add_term(const EvenMulti& e, S c) {
        if (ScalarOps<S>::is_zero(c)) return;
        auto it = std::lower_bound(terms_.begin(), terms_.end(), e,
                                   [](const Term& t, const EvenMulti& key) {
                                       return t.first < key;
                                   });
        if (it != terms_.end() && it->first == e) {
            it->second += c;
            if (ScalarOps<S>::is_zero(it->second)) terms_.erase(it);
        } else {
            terms_.emplace(it, e, std::move(c));
        }
    }

    int m_;
    std::vector<Term> terms_;
};

enum class AnalyticKind { exp, trig, log, powint };

// c * g(<a,q> + b) where g is exp, a sin/cos cycle member, log, or an
// integer power. Derivatives stay in the family.
struct AnalyticSpec {
    AnalyticKind kind = AnalyticKind::exp;
    ComplexD coeff{1.0, 0.0};
    std::vector<double> slope;  // a
    double offset = 0.0;        // b
    int trig_phase = 0;         // d^p/du^p sin(u) = sin(u + p*pi/2)
    int power = 1;              // for powint
};

// Type-erased immutable smooth function value.
template <class S>
class SmoothMap {
public:
    using Real = typename ScalarOps<S>::Real;

    struct Impl {
        virtual ~Impl() = default;
        virtual int arity() const = 0;
        virtual S eval(const std::vector<Real>& q) const = 0;
        virtual std::shared_ptr<const Impl> partial_var(int j) const = 0;
        virtual std::shared_ptr<const Impl> scaled(const S& c) const = 0;
        // max reliable derivative order; nullopt means unlimited
        virtual std::optional<unsigned> max_order() const { return std::nullopt; }
    };

    explicit SmoothMap(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {
        if (!impl_) throw std::domain_error("SmoothMap: null implementation");
    }

    static SmoothMap poly(PolyMap<S> p) {
        return SmoothMap(std::make_shared<PolyImpl>(std::move(p)));
    }

    static SmoothMap analytic(AnalyticSpec spec);

    // User-supplied evaluator plus derivative oracle.
    static SmoothMap from_callable(int arity,
                                   std::function<S(const std::vector<Real>&)> eval,
                                   std::function<SmoothMap(int)> partial_oracle,
                                   std::optional<unsigned> max_order = std::nullopt) {
        return SmoothMap(std::make_shared<CallableImpl>(arity, std::move(eval),
                                                        std::move(partial_oracle), max_order));
    }

    int arity() const { return impl_->arity(); }
    std::optional<unsigned> max_order() const { return impl_->max_order(); }

    S eval(const std::vector<Real>& q) const { return impl_->eval(q); }
    S operator()(const std::vector<Real>& q) const { return impl_->eval(q); }

    SmoothMap partial_var(int j) const {
        if (j < 1 || j > arity()) throw std::domain_error("SmoothMap: variable out of range");
        if (auto mo = impl_->max_order(); mo && *mo == 0)
            throw std::domain_error("SmoothMap: derivative order exceeds declared bound");
        return SmoothMap(impl_->partial_var(j));
    }

    SmoothMap partial(const EvenMulti& alpha) const {
        if (static_cast<int>(alpha.size()) != arity())
            throw std::domain_error("SmoothMap: multi-index arity mismatch");
        SmoothMap f = *this;
        for (int j = 0; j < arity(); ++j)
            for (unsigned k = 0; k < alpha[static_cast<std::size_t>(j)]; ++k)
                f = f.partial_var(j + 1);
        return f;
    }

    SmoothMap scaled(const S& c) const { return SmoothMap(impl_->scaled(c)); }

    // Downcast hooks for serialization.
    const PolyMap<S>* as_poly() const {
        auto p = dynamic_cast<const PolyImpl*>(impl_.get());
        return p ? &p->poly : nullptr;
    }
    const AnalyticSpec* as_analytic() const;

private:
    struct PolyImpl : Impl {
        PolyMap<S> poly;
        explicit PolyImpl(PolyMap<S> p) : poly(std::move(p)) {}
        int arity() const override { return poly.arity(); }
        S eval(const std::vector<Real>& q) const override { return poly.eval(q); }
        std::shared_ptr<const Impl> partial_var(int j) const override {
            return std::make_shared<PolyImpl>(poly.partial_var(j));
        }
        std::shared_ptr<const Impl> scaled(const S& c) const override {
            return std::make_shared<PolyImpl>(c * poly);
        }
    };

    struct CallableImpl : Impl {
        int m;
        std::function<S(const std::vector<Real>&)> fn;
        std::function<SmoothMap(int)> d;
        std::optional<unsigned> order;
        CallableImpl(int arity, std::function<S(const std::vector<Real>&)> eval,
                     std::function<SmoothMap(int)> partial_oracle,
                     std::optional<unsigned> max_order)
            : m(arity), fn(std::move(eval)), d(std::move(partial_oracle)), order(max_order) {}
        int arity() const override { return m; }
        S eval(const std::vector<Real>& q) const override { return fn(q); }
        std::shared_ptr<const Impl> partial_var(int j) const override { return d(j).impl_; }
        std::shared_ptr<const Impl> scaled(const S& c) const override {
            auto base_fn = fn;
            auto base_d = d;
            auto base_order = order;
            return std::make_shared<CallableImpl>(
                m, [base_fn, c](const std::vector<Real>& q) { return c * base_fn(q); },
                [base_d, c](int j) { return base_d(j).scaled(c); }, base_order);
        }
        std::optional<unsigned> max_order() const override { return order; }
    };

    struct AnalyticImpl;

    std::shared_ptr<const Impl> impl_;
};

// Analytic primitives are float-carrier only: their values are irrational
// at rational points.
template <>
struct SmoothMap<ComplexD>::AnalyticImpl : SmoothMap<ComplexD>::Impl {
    AnalyticSpec spec;
    explicit AnalyticImpl(AnalyticSpec s) : spec(std::move(s)) {}

    int arity() const override { return static_cast<int>(spec.slope.size()); }

    ComplexD eval(const std::vector<double>& q) const override {
        if (q.size() != spec.slope.size())
            throw std::domain_error("SmoothMap: evaluation arity mismatch");
        double u = spec.offset;
        for (std::size_t j = 0; j < q.size(); ++j) u += spec.slope[j] * q[j];
        switch (spec.kind) {
            case AnalyticKind::exp:
                return spec.coeff * std::exp(u);
            case AnalyticKind::trig:
                switch (((spec.trig_phase % 4) + 4) % 4) {
                    case 0: return spec.coeff * std::sin(u);
                    case 1: return spec.coeff * std::cos(u);
                    case 2: return spec.coeff * -std::sin(u);
                    default: return spec.coeff * -std::cos(u);
                }
            case AnalyticKind::log:
                if (u <= 0.0) throw EvalError("log evaluated outside (0, inf)");
                return spec.coeff * std::log(u);
            case AnalyticKind::powint: {
                if (spec.power < 0 && u == 0.0)
                    throw EvalError("reciprocal power evaluated at 0");
                double v = 1.0;
                for (int k = 0; k < std::abs(spec.power); ++k) v *= u;
                if (spec.power < 0) v = 1.0 / v;
                return spec.coeff * v;
            }
        }
        throw std::logic_error("unreachable analytic kind");
    }

    std::shared_ptr<const Impl> partial_var(int j) const override {
        AnalyticSpec d = spec;
        double aj = spec.slope[static_cast<std::size_t>(j - 1)];
        d.coeff = spec.coeff * aj;
        switch (spec.kind) {
            case AnalyticKind::exp:
                break;
            case AnalyticKind::trig:
                d.trig_phase = spec.trig_phase + 1;
                break;
            case AnalyticKind::log:
                d.kind = AnalyticKind::powint;
                d.power = -1;
                break;
            case AnalyticKind::powint:
                if (spec.power == 0) {
                    d.coeff = 0.0;
                    d.power = 1;
                } else {
                    d.coeff = spec.coeff * aj * static_cast<double>(spec.power);
                    d.power = spec.power - 1;
                }
                break;
        }
        return std::make_shared<AnalyticImpl>(std::move(d));
    }

    std::shared_ptr<const Impl> scaled(const ComplexD& c) const override {
        AnalyticSpec s = spec;
        s.coeff = spec.coeff * c;
        return std::make_shared<AnalyticImpl>(std::move(s));
    }
};

template <>
inline SmoothMap<ComplexD> SmoothMap<ComplexD>::analytic(AnalyticSpec spec) {
    return SmoothMap(std::make_shared<AnalyticImpl>(std::move(spec)));
}

template <class S>
SmoothMap<S> SmoothMap<S>::analytic(AnalyticSpec) {
    throw ConfigError("analytic primitives require the float carrier");
}

template <>
inline const AnalyticSpec* SmoothMap<ComplexD>::as_analytic() const {
    auto p = dynamic_cast<const AnalyticImpl*>(impl_.get());
    return p ? &p->spec : nullptr;
}

template <class S>
const AnalyticSpec* SmoothMap<S>::as_analytic() const {
    return nullptr;
}

// f(q) = sum_J f_J(q) sigma^J with finitely many components.
template <class S>
class SupernumberValuedMap {
public:
    using Real = typename ScalarOps<S>::Real;
    using Component = std::pair<GIndex, SmoothMap<S>>;

    SupernumberValuedMap(int arity, int L, int D, std::vector<Component> comps)
        : m_(arity), L_(L), D_(D), comps_(std::move(comps)) {
        for (const auto& [i, f] : comps_) {
            if (f.arity() != m_)
                throw std::domain_error("SupernumberValuedMap: component arity mismatch");
            if (i.max_generator() > L || i.degree() > D)
                throw std::domain_error("SupernumberValuedMap: component index outside context");
        }
        std::sort(comps_.begin(), comps_.end(),
                  [](const Component& a, const Component& b) { return a.first < b.first; });
    }

    static SupernumberValuedMap from_scalar(SmoothMap<S> f, int L, int D) {
        int arity = f.arity();
        std::vector<Component> comps;
        comps.emplace_back(GIndex{}, std::move(f));
        return SupernumberValuedMap(arity, L, D, std::move(comps));
    }

    int arity() const { return m_; }
    int skeleton() const { return L_; }
    int cutoff() const { return D_; }
    const std::vector<Component>& components() const { return comps_; }

    Supernumber<S> eval(const std::vector<Real>& q) const {
        std::vector<typename Supernumber<S>::Term> terms;
        for (const auto& [i, f] : comps_) terms.emplace_back(i, f.eval(q));
        return Supernumber<S>::from_terms(L_, D_, std::move(terms));
    }

    SupernumberValuedMap partial_var(int j) const {
        std::vector<Component> comps;
        for (const auto& [i, f] : comps_) comps.emplace_back(i, f.partial_var(j));
        return SupernumberValuedMap(m_, L_, D_, std::move(comps));
    }

    SupernumberValuedMap partial(const EvenMulti& alpha) const {
        std::vector<Component> comps;
        for (const auto& [i, f] : comps_) comps.emplace_back(i, f.partial(alpha));
        return SupernumberValuedMap(m_, L_, D_, std::move(comps));
    }

    SupernumberValuedMap scaled(const S& c) const {
        std::vector<Component> comps;
        for (const auto& [i, f] : comps_) comps.emplace_back(i, f.scaled(c));
        return SupernumberValuedMap(m_, L_, D_, std::move(comps));
    }

    // Kind-preserving scaling per blade parity: component at sigma^J gets
    // multiplied by factor(|J| odd).
    SupernumberValuedMap parity_scaled(const S& even_factor, const S& odd_factor) const {
        std::vector<Component> comps;
        for (const auto& [i, f] : comps_)
            comps.emplace_back(i, f.scaled(i.even() ? even_factor : odd_factor));
        return SupernumberValuedMap(m_, L_, D_, std::move(comps));
    }

    // nullopt when any component is not a polynomial
    std::optional<unsigned> poly_degree() const {
        unsigned d = 0;
        for (const auto& [i, f] : comps_) {
            const auto* p = f.as_poly();
            if (!p) return std::nullopt;
            d = std::max(d, p->total_degree());
        }
        return d;
    }

    // Definite parity of the value across components, when one exists.
    Parity value_parity() const {
        bool has_even = false, has_odd = false;
        for (const auto& [i, f] : comps_) (i.even() ? has_even : has_odd) = true;
        if (has_even && has_odd) return Parity::undefined;
        if (has_odd) return Parity::odd;
        return Parity::even;
    }

private:
    int m_, L_, D_;
    std::vector<Component> comps_;
};

// Central finite-difference estimate of partial(alpha) f at q versus the
// oracle; returns the magnitude of the difference. A check, not a
// construction tool.
template <class S>
typename ScalarOps<S>::Real finite_diff_check(const SmoothMap<S>& f, const EvenMulti& alpha,
                                              const std::vector<typename ScalarOps<S>::Real>& q,
                                              const typename ScalarOps<S>::Real& h) {
    using Real = typename ScalarOps<S>::Real;
    std::function<S(const EvenMulti&, const std::vector<Real>&)> stencil =
        [&](const EvenMulti& a, const std::vector<Real>& at) -> S {
        int j = -1;
        for (std::size_t k = 0; k < a.size(); ++k)
            if (a[k] > 0) {
                j = static_cast<int>(k);
                break;
            }
        if (j < 0) return f.eval(at);
        EvenMulti rest = a;
        rest[static_cast<std::size_t>(j)] -= 1;
        std::vector<Real> plus = at, minus = at;
        plus[static_cast<std::size_t>(j)] += h;
        minus[static_cast<std::size_t>(j)] -= h;
        S num = stencil(rest, plus) - stencil(rest, minus);
        return num * ScalarOps<S>::from_real(Real(1) / (Real(2) * h));
    };
    S estimate = stencil(alpha, q);
    S truth = f.partial(alpha).eval(q);
    return ScalarOps<S>::magnitude(estimate - truth);
}

}  // namespace sga
