#pragma once

// The characterization machinery: coordinate-level Cauchy-Riemann checks,
// witness recovery for superdifferentiability, the sigma system solver, the
// duality representer and projectability sampling. Everything reports
// through plain value types that serialize to JSON and tables.
//
// Checks run in two regimes: with the exact carrier a residual must vanish
// identically, with the float carrier it is compared against a tolerance.

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "sga/superfield.hpp"

namespace sga {

namespace detail {

template <class S>
std::string residual_str(const typename ScalarOps<S>::Real& r) {
    if constexpr (ScalarOps<S>::exact) {
        return rational_str(r);
    } else {
        std::ostringstream os;
        os.precision(17);
        os << r;
        return os.str();
    }
}

template <class S>
Supernumber<S> drop_top_blade(const Supernumber<S>& x, int skeleton) {
    GIndex top = GIndex::from_mask(skeleton == 64 ? ~std::uint64_t{0}
                                                  : (std::uint64_t{1} << skeleton) - 1);
    auto c = x.coeff(top);
    if (ScalarOps<S>::is_zero(c)) return x;
    return x - Supernumber<S>::blade(x.skeleton(), x.cutoff(), top, c);
}

}  // namespace detail

// Coordinate-derivative source at a fixed point, with memoization. The
// context (m, n, L, D) fixes which coordinates exist.
template <class S>
class DerivProvider {
public:
    DerivProvider(int m, int n, int L, int D,
                  std::function<Supernumber<S>(const CoordIndex&)> fn)
        : m_(m), n_(n), L_(L), D_(D), fn_(std::move(fn)),
          cache_(std::make_shared<std::map<std::pair<int, std::uint64_t>, Supernumber<S>>>()) {}

    int m() const { return m_; }
    int n() const { return n_; }
    int skeleton() const { return L_; }
    int cutoff() const { return D_; }

    Supernumber<S> deriv(const CoordIndex& c) const {
        auto key = std::make_pair(c.slot, c.index.mask());
        auto it = cache_->find(key);
        if (it != cache_->end()) return it->second;
        auto v = fn_(c);
        cache_->emplace(key, v);
        return v;
    }

private:
    int m_, n_, L_, D_;
    std::function<Supernumber<S>(const CoordIndex&)> fn_;
    std::shared_ptr<std::map<std::pair<int, std::uint64_t>, Supernumber<S>>> cache_;
};

template <class S>
DerivProvider<S> deriv_provider(const Superfield<S>& u, const SuperPoint<S>& x,
                                const FdOptions& fd = {}) {
    return DerivProvider<S>(u.m(), u.n(), x.skeleton(), x.cutoff(),
                            [u, x, fd](const CoordIndex& c) {
                                return coord_partial(u, x, c, fd);
                            });
}

template <class S>
DerivProvider<S> deriv_provider(const SkeletonFn<S>& f, const SuperPoint<S>& x,
                                const FdOptions& fd = {}) {
    return DerivProvider<S>(f.m, f.n, x.skeleton(), x.cutoff(),
                            [f, x, fd](const CoordIndex& c) {
                                return coord_partial(f, x, c, fd);
                            });
}

struct CrOptions {
    std::size_t even_cap = 0;   // max even indices per even slot; 0 = all
    std::size_t pair_cap = 0;   // max odd index pairs per odd slot; 0 = all
    double tol = 1e-6;          // float-mode residual bound
};

struct CrViolation {
    int slot = 0;
    GIndex first;   // the index I, or J of a pair
    GIndex second;  // empty for even-slot checks, K for odd pairs
    std::string residual;
};

struct CrReport {
    bool pass = true;
    std::size_t checked = 0;
    std::size_t skipped = 0;
    std::vector<std::string> skip_reasons;
    std::string max_residual = "0";
    double max_residual_d = 0.0;
    std::vector<CrViolation> violations;
};

// Cauchy-Riemann system at one point:
//   (i)  d/dX_{A,I} F = sigma^I d/dX_{A,0} F   (A <= m, |I| even)
//   (ii) sigma^K d/dX_{A,J} F + sigma^J d/dX_{A,K} F = 0
//                                           (A > m, |J|, |K| odd).
// Enumeration is lexicographic in the blade masks, optionally capped.
template <class S>
CrReport cr_check(const DerivProvider<S>& f, const CrOptions& opts = {}) {
    using Real = typename ScalarOps<S>::Real;
    CrReport report;
    const int L = f.skeleton(), D = f.cutoff();
    const std::uint64_t blade_count = std::uint64_t{1} << L;
    Real max_res{};

    auto record = [&](int slot, GIndex i, GIndex j, const Supernumber<S>& defect) {
        ++report.checked;
        Real res = defect.dist();
        bool ok;
        if constexpr (ScalarOps<S>::exact)
            ok = defect.is_zero();
        else
            ok = ScalarOps<S>::to_double(res) <= opts.tol;
        if (res > max_res) max_res = res;
        if (!ok) {
            report.pass = false;
            report.violations.push_back(
                CrViolation{slot, i, j, detail::residual_str<S>(res)});
        }
    };
    auto guarded = [&](int slot, GIndex i, GIndex j, auto&& compute) {
        try {
            record(slot, i, j, compute());
        } catch (const std::exception& e) {
            ++report.skipped;
            report.skip_reasons.push_back("slot " + std::to_string(slot) + " " + i.str() +
                                          (j.empty() ? "" : " " + j.str()) + ": " + e.what());
        }
    };

    for (int a = 1; a <= f.m(); ++a) {
        auto base = f.deriv({a, GIndex{}});
        std::size_t used = 0;
        for (std::uint64_t mask = 1; mask < blade_count; ++mask) {
            GIndex i = GIndex::from_mask(mask);
            if (!i.even() || i.degree() > D) continue;
            if (opts.even_cap && used >= opts.even_cap) break;
            ++used;
            guarded(a, i, GIndex{}, [&] {
                auto lhs = f.deriv({a, i});
                auto blade = Supernumber<S>::blade(L, D, i, ScalarOps<S>::one());
                return lhs - blade * base;
            });
        }
    }
    for (int a = f.m() + 1; a <= f.m() + f.n(); ++a) {
        std::size_t used = 0;
        bool capped = false;
        for (std::uint64_t jm = 1; jm < blade_count && !capped; ++jm) {
            GIndex j = GIndex::from_mask(jm);
            if (!j.odd() || j.degree() > D) continue;
            for (std::uint64_t km = jm; km < blade_count; ++km) {
                GIndex k = GIndex::from_mask(km);
                if (!k.odd() || k.degree() > D) continue;
                if (opts.pair_cap && used >= opts.pair_cap) {
                    capped = true;
                    break;
                }
                ++used;
                guarded(a, j, k, [&] {
                    auto dj = f.deriv({a, j});
                    auto dk = f.deriv({a, k});
                    auto sj = Supernumber<S>::blade(L, D, j, ScalarOps<S>::one());
                    auto sk = Supernumber<S>::blade(L, D, k, ScalarOps<S>::one());
                    return sk * dj + sj * dk;
                });
            }
        }
    }
    report.max_residual = detail::residual_str<S>(max_res);
    report.max_residual_d = ScalarOps<S>::to_double(max_res);
    return report;
}

template <class S>
struct SolveSigmaResult {
    bool ok = false;
    Supernumber<S> witness;
    std::string ambiguity;
    std::optional<std::pair<int, int>> violation;   // compatibility pair (i, j), i <= j
    std::optional<std::string> contradiction;       // inconsistent decomposition

    explicit SolveSigmaResult(int L) : witness(Supernumber<S>::zero(L, L)) {}
};

// Solve A_i = sigma_i F from the compatibility system
// sigma_j A_i + sigma_i A_j = 0 (including sigma_i A_i = 0). The witness is
// canonical: its top-blade coefficient is zero, and the full solution set is
// witness + span{sigma_1...sigma_L}.
template <class S>
SolveSigmaResult<S> solve_sigma(const std::vector<Supernumber<S>>& inputs, int L,
                                double tol = 0.0) {
    SolveSigmaResult<S> result(L);
    if (static_cast<int>(inputs.size()) != L)
        throw std::domain_error("solve_sigma: need exactly L inputs");
    std::vector<Supernumber<S>> a;
    for (const auto& x : inputs) a.push_back(x.in_context(L, L));

    auto sigma = [&](int i) { return Supernumber<S>::generator(L, L, i); };
    auto is_small = [&](const Supernumber<S>& x) {
        if constexpr (ScalarOps<S>::exact)
            return x.is_zero();
        else
            return ScalarOps<S>::to_double(x.dist()) <= tol;
    };

    for (int i = 1; i <= L; ++i) {
        for (int j = i; j <= L; ++j) {
            auto defect = sigma(j) * a[static_cast<std::size_t>(i - 1)] +
                          sigma(i) * a[static_cast<std::size_t>(j - 1)];
            if (!is_small(defect)) {
                result.violation = std::make_pair(i, j);
                return result;
            }
        }
    }

    // Each A_i = sigma_i F forces every blade of A_i to contain i; read off
    // F's coefficients and cross-check overlaps.
    std::map<std::uint64_t, S> b;
    for (int i = 1; i <= L; ++i) {
        for (const auto& [k, c] : a[static_cast<std::size_t>(i - 1)].terms()) {
            if (!k.contains(i)) {
                result.contradiction = "blade " + k.str() + " of input " + std::to_string(i) +
                                       " does not contain sigma_" + std::to_string(i);
                return result;
            }
            GIndex j = k.without(GIndex::single(i));
            MergeResult mr = merge_sign(GIndex::single(i), j);
            S value = mr.sign < 0 ? -c : c;
            auto [it, fresh] = b.emplace(j.mask(), value);
            if (!fresh) {
                bool same;
                if constexpr (ScalarOps<S>::exact)
                    same = it->second == value;
                else
                    same = ScalarOps<S>::magnitude(it->second - value) <= tol;
                if (!same) {
                    result.contradiction =
                        "inconsistent coefficient at " + j.str();
                    return result;
                }
            }
        }
    }

    const std::uint64_t top = L == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << L) - 1;
    std::vector<typename Supernumber<S>::Term> terms;
    for (auto& [mask, c] : b) {
        if (mask == top) continue;  // unreachable: every stored J misses some i
        terms.emplace_back(GIndex::from_mask(mask), std::move(c));
    }
    result.witness = Supernumber<S>::from_terms(L, L, std::move(terms));
    result.ambiguity = "unique up to adding a real multiple of sigma_1...sigma_" +
                       std::to_string(L);
    result.ok = true;
    return result;
}

template <class S>
struct WitnessResult {
    bool ok = false;
    std::vector<Supernumber<S>> witnesses;  // F_A for A = 1..m+n when ok
    std::string ambiguity;                  // applies to odd-slot witnesses
    // infeasibility certificate: slot and the violated pair
    std::optional<std::tuple<int, int, int>> infeasible;
};

// Witness recovery: F_A = d/dX_{A,0} F for even slots; for odd slots the
// family A_i = d/dX_{A,(i)} F is fed through solve_sigma. Witnesses are
// canonicalized by zeroing the top-blade coefficient.
template <class S>
WitnessResult<S> g1_witness(const DerivProvider<S>& f, double tol = 0.0) {
    WitnessResult<S> out;
    const int L = f.skeleton();
    for (int a = 1; a <= f.m(); ++a)
        out.witnesses.push_back(detail::drop_top_blade(f.deriv({a, GIndex{}}), L));
    for (int a = f.m() + 1; a <= f.m() + f.n(); ++a) {
        std::vector<Supernumber<S>> family;
        for (int i = 1; i <= L; ++i) family.push_back(f.deriv({a, GIndex::single(i)}));
        auto solved = solve_sigma(family, L, tol);
        if (!solved.ok) {
            auto [vi, vj] = solved.violation.value_or(std::make_pair(0, 0));
            out.infeasible = std::make_tuple(a, vi, vj);
            out.witnesses.clear();
            return out;
        }
        out.witnesses.push_back(solved.witness.truncate(std::min(L, f.cutoff()))
                                    .in_context(L, f.cutoff()));
        out.ambiguity = solved.ambiguity;
    }
    out.ok = true;
    return out;
}

template <class S>
struct DualResult {
    bool ok = false;
    Supernumber<S> representer;
    std::string ambiguity;
    std::optional<GIndex> linearity_failure;       // sample contradicting even-linearity
    std::optional<std::pair<int, int>> infeasible; // sigma-compatibility pair
    std::optional<GIndex> representation_failure;  // final verification blade

    explicit DualResult(int L) : representer(Supernumber<S>::zero(L, L)) {}
};

// Representation of a declared even-linear map f on the odd part as right
// multiplication: f(X) = X u_f. Samples f on the odd-blade basis, checks the
// consistency relations even-linearity imposes, solves the sigma system on
// the generator images and verifies the representer on the whole basis.
template <class S>
DualResult<S> dual_represent(const std::function<Supernumber<S>(const Supernumber<S>&)>& f,
                             int L, double tol = 0.0) {
    DualResult<S> out(L);
    auto is_small = [&](const Supernumber<S>& x) {
        if constexpr (ScalarOps<S>::exact)
            return x.is_zero();
        else
            return ScalarOps<S>::to_double(x.dist()) <= tol;
    };
    auto blade = [&](GIndex i) { return Supernumber<S>::blade(L, L, i, ScalarOps<S>::one()); };

    std::map<std::uint64_t, Supernumber<S>> samples;
    const std::uint64_t count = std::uint64_t{1} << L;
    for (std::uint64_t mask = 1; mask < count; ++mask) {
        GIndex i = GIndex::from_mask(mask);
        if (!i.odd()) continue;
        samples.emplace(mask, f(blade(i)).in_context(L, L));
    }

    // even-linearity consistency: f(sigma^I) = +/- sigma^{I without k} f(sigma_k)
    for (const auto& [mask, value] : samples) {
        GIndex i = GIndex::from_mask(mask);
        if (i.degree() < 3) continue;
        for (int k : i.generators()) {
            GIndex rest = i.without(GIndex::single(k));
            int below = 0;
            for (int g : i.generators())
                if (g < k) ++below;
            auto expected = blade(rest) * samples.at(std::uint64_t{1} << (k - 1));
            if (below % 2 == 1) expected = -expected;
            if (!is_small(value - expected)) {
                out.linearity_failure = i;
                return out;
            }
        }
    }

    std::vector<Supernumber<S>> family;
    for (int i = 1; i <= L; ++i) family.push_back(samples.at(std::uint64_t{1} << (i - 1)));
    auto solved = solve_sigma(family, L, tol);
    if (!solved.ok) {
        out.infeasible = solved.violation;
        return out;
    }

    for (const auto& [mask, value] : samples) {
        GIndex i = GIndex::from_mask(mask);
        if (!is_small(value - blade(i) * solved.witness)) {
            out.representation_failure = i;
            return out;
        }
    }
    out.representer = solved.witness;
    out.ambiguity = solved.ambiguity;
    out.ok = true;
    return out;
}

struct ProjectabilityViolation {
    int target_skeleton = 0;
    std::string detail;
};

struct ProjectabilityReport {
    bool pass = true;
    std::size_t cases = 0;
    std::vector<ProjectabilityViolation> violations;
};

// Samples pairs Z, W agreeing below the target skeleton and differing above
// it; a projectable function must satisfy p_L F(Z) = p_L F(W).
template <class S>
ProjectabilityReport projectability_check(const SkeletonFn<S>& f,
                                          const std::vector<int>& targets,
                                          int samples_per_target, std::uint64_t seed,
                                          double tol = 0.0) {
    ProjectabilityReport report;
    std::mt19937_64 rng(seed);
    const int big_l = f.L, big_d = f.D;
    auto rand_coeff = [&]() {
        return ScalarOps<S>::from_int(static_cast<long>(rng() % 7) - 3);
    };
    auto rand_blades = [&](bool even_part, int lo_gen) {
        // a few blades that use at least one generator above lo_gen
        std::vector<typename Supernumber<S>::Term> terms;
        for (int t = 0; t < 3; ++t) {
            std::uint64_t mask = 0;
            int deg = even_part ? 2 : 1;
            mask |= std::uint64_t{1} << (lo_gen + static_cast<int>(rng() % static_cast<std::uint64_t>(big_l - lo_gen)));
            for (int extra = 1; extra < deg + (even_part ? static_cast<int>(rng() % 2) * 2 : 0); ++extra)
                mask |= std::uint64_t{1} << (rng() % static_cast<std::uint64_t>(big_l));
            GIndex i = GIndex::from_mask(mask);
            if (i.even() != even_part || i.degree() > big_d) continue;
            terms.emplace_back(i, rand_coeff());
        }
        return Supernumber<S>::from_terms(big_l, big_d, std::move(terms));
    };

    for (int target : targets) {
        if (target < 0 || target >= big_l)
            throw std::domain_error("projectability_check: target must be below the skeleton");
        for (int s = 0; s < samples_per_target; ++s) {
            // base point within the full skeleton
            std::vector<Supernumber<S>> ev, od;
            for (int j = 0; j < f.m; ++j) {
                auto base = Supernumber<S>::scalar(big_l, big_d, rand_coeff());
                ev.push_back(base + rand_blades(true, 0));
            }
            for (int k = 0; k < f.n; ++k) od.push_back(rand_blades(false, 0));
            SuperPoint<S> z(ev, od, big_l, big_d);

            // perturb only above the target skeleton
            std::vector<Supernumber<S>> ev2, od2;
            for (int j = 1; j <= f.m; ++j)
                ev2.push_back(z.even_slot(j) + rand_blades(true, target));
            for (int k = 1; k <= f.n; ++k)
                od2.push_back(z.odd_slot(k) + rand_blades(false, target));
            SuperPoint<S> w(ev2, od2, big_l, big_d);

            ++report.cases;
            auto defect = f.fn(z).skeleton_project(target) - f.fn(w).skeleton_project(target);
            bool ok;
            if constexpr (ScalarOps<S>::exact)
                ok = defect.is_zero();
            else
                ok = ScalarOps<S>::to_double(defect.dist()) <= tol;
            if (!ok) {
                report.pass = false;
                report.violations.push_back(ProjectabilityViolation{
                    target, "sample " + std::to_string(s) + ": projections differ, dist " +
                                detail::residual_str<S>(defect.dist())});
            }
        }
    }
    return report;
}

struct CheckItem {
    std::string name;      // which check
    std::string rule;      // which law it exercises
    bool pass = true;
    std::string residual = "0";
    std::string witness;   // details for failures or recovered data
};

struct SuiteReport {
    bool pass = true;
    std::vector<CheckItem> items;

    void add(CheckItem item) {
        pass = pass && item.pass;
        items.push_back(std::move(item));
    }
};

struct SuiteOptions {
    CrOptions cr;
    double tol = 1e-9;
    std::uint64_t seed = 1;
};

// The executable equivalence loop for one superfield: the coordinate
// derivatives satisfy the Cauchy-Riemann system, witnesses exist and
// coincide with the partial derivatives, the Gateaux derivative factors
// through them, and coefficient extraction inverts evaluation.
template <class S>
SuiteReport equivalence_suite(const Superfield<S>& u,
                              const std::vector<SuperPoint<S>>& points,
                              const SuiteOptions& opts = {}) {
    SuiteReport report;
    std::mt19937_64 rng(opts.seed);
    int point_idx = 0;
    for (const auto& x : points) {
        const std::string tag = "point" + std::to_string(point_idx++);
        const int L = x.skeleton(), D = x.cutoff();
        auto provider = deriv_provider(u, x);

        {
            auto cr = cr_check(provider, opts.cr);
            CheckItem item{tag + "/cr", "cauchy-riemann", cr.pass, cr.max_residual, ""};
            if (!cr.pass && !cr.violations.empty())
                item.witness = "first violation at slot " +
                               std::to_string(cr.violations.front().slot) + " " +
                               cr.violations.front().first.str();
            report.add(std::move(item));
        }
        {
            auto w = g1_witness(provider, opts.tol);
            CheckItem item{tag + "/witness", "derivative-factorization", w.ok, "0", ""};
            if (!w.ok) {
                auto [slot, i, j] = *w.infeasible;
                item.witness = "slot " + std::to_string(slot) + " incompatible pair (" +
                               std::to_string(i) + "," + std::to_string(j) + ")";
            } else {
                // witnesses must equal the partial derivatives (odd ones up
                // to the top blade)
                bool coherent = true;
                for (int j = 1; j <= u.m() && coherent; ++j)
                    coherent = detail::drop_top_blade(u.partial_even(j).eval(x), L) ==
                               w.witnesses[static_cast<std::size_t>(j - 1)];
                for (int s = 1; s <= u.n() && coherent; ++s)
                    coherent =
                        detail::drop_top_blade(u.partial_odd_left(s).eval(x), L) ==
                        detail::drop_top_blade(
                            w.witnesses[static_cast<std::size_t>(u.m() + s - 1)], L);
                item.pass = coherent;
                if (!coherent) item.witness = "witnesses differ from partial derivatives";
            }
            report.add(std::move(item));
        }
        {
            CheckItem item{tag + "/gateaux", "directional-derivative", true, "0", ""};
            try {
                // a modest random direction; the internal routes must agree
                std::vector<Supernumber<S>> ev, od;
                for (int j = 0; j < u.m(); ++j) {
                    auto v = Supernumber<S>::scalar(
                        L, D, ScalarOps<S>::from_int(static_cast<long>(rng() % 5) - 2));
                    if (L >= 2)
                        v = v + Supernumber<S>::blade(
                                    L, D, GIndex::from_list({1, 2}),
                                    ScalarOps<S>::from_int(static_cast<long>(rng() % 3)));
                    ev.push_back(v);
                }
                for (int k = 0; k < u.n(); ++k)
                    od.push_back(Supernumber<S>::generator(
                        L, D, 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(L))));
                SuperPoint<S> y(ev, od, L, D);
                gateaux_derivative(u, x, y);
            } catch (const std::exception& e) {
                item.pass = false;
                item.witness = e.what();
            }
            report.add(std::move(item));
        }
        {
            CheckItem item{tag + "/extract", "expansion-roundtrip", true, "0", ""};
            try {
                auto fn = make_skeleton_fn(u, L + u.n(), std::min(D + u.n(), L + u.n()));
                auto got = superfield_extract(fn, x.even_slots(), L, D);
                for (std::uint32_t a = 0; a < (std::uint32_t{1} << u.n()); ++a) {
                    auto it = u.coefficients().find(a);
                    auto expect = it == u.coefficients().end()
                                      ? Supernumber<S>::zero(L, D)
                                      : grassmann_continue(it->second, x.even_slots())
                                            .truncate(std::min(D, L))
                                            .in_context(L, D);
                    bool same;
                    if constexpr (ScalarOps<S>::exact)
                        same = got.at(a) == expect;
                    else
                        same = ScalarOps<S>::to_double(dist(got.at(a), expect)) <= opts.tol;
                    if (!same) {
                        item.pass = false;
                        item.witness = "coefficient mask " + std::to_string(a) + " differs";
                        break;
                    }
                }
            } catch (const std::exception& e) {
                item.pass = false;
                item.witness = e.what();
            }
            report.add(std::move(item));
        }
    }
    return report;
}

}  // namespace sga
