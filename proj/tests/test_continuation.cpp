#include <catch2/catch_amalgamated.hpp>

#include "helpers.hpp"
#include "sga/continuation.hpp"

using namespace sga;
using sga::test::Rng;

namespace {

using PolyQ = PolyMap<GaussRat>;
using MapQ = SmoothMap<GaussRat>;
using MapD = SmoothMap<ComplexD>;

SupernumberQ blade12(int L = 4, int D = 4) {
    return SupernumberQ::blade(L, D, GIndex::from_list({1, 2}), GaussRat(1));
}

MapQ q_pow(unsigned k) {
    return MapQ::poly(PolyQ::monomial(1, {k}, GaussRat(1)));
}

}  // namespace

TEST_CASE("continuation of q^2 along a nilpotent shift") {
    // x = q + sigma1 sigma2: f~(x) = q^2 + 2 q sigma1 sigma2
    Rng rng(51);
    for (int rep = 0; rep < 10; ++rep) {
        Rational q = rng.rational();
        auto x = SupernumberQ::scalar(4, 4, GaussRat(q)) + blade12();
        auto v = grassmann_continue(q_pow(2), {x});
        auto expect = SupernumberQ::scalar(4, 4, GaussRat(q * q)) +
                      GaussRat(2 * q) * blade12();
        CHECK(v == expect);
    }
}

TEST_CASE("continuation of q^3 at 2 + sigma1 sigma2") {
    auto x = SupernumberQ::scalar(4, 4, GaussRat(2)) + blade12();
    auto v = grassmann_continue(q_pow(3), {x});
    auto expect = SupernumberQ::scalar(4, 4, GaussRat(8)) + GaussRat(12) * blade12();
    CHECK(v == expect);
}

TEST_CASE("constant and identity continuations") {
    auto c = MapQ::poly(PolyQ::constant(1, GaussRat(Rational(5, 3))));
    Rng rng(53);
    for (int rep = 0; rep < 10; ++rep) {
        auto x = rng.even_slot_value(4, 4);
        CHECK(grassmann_continue(c, {x}) ==
              SupernumberQ::scalar(4, 4, GaussRat(Rational(5, 3))));
        CHECK(grassmann_continue(q_pow(1), {x}) == x.in_context(4, 4));
    }
}

TEST_CASE("continuation rejects invalid slots") {
    auto odd = SupernumberQ::generator(2, 2, 1);
    CHECK_THROWS_AS(grassmann_continue(q_pow(2), {odd}), std::domain_error);
    auto complex_body = SupernumberQ::scalar(2, 2, GaussRat(Rational(0), Rational(1)));
    CHECK_THROWS_AS(grassmann_continue(q_pow(2), {complex_body}), std::domain_error);
}

TEST_CASE("body compatibility") {
    Rng rng(57);
    for (int rep = 0; rep < 50; ++rep) {
        auto f = MapQ::poly(rng.poly(2, 4));
        auto x1 = rng.even_slot_value(5, 5);
        auto x2 = rng.even_slot_value(5, 5);
        auto v = grassmann_continue(f, {x1, x2});
        CHECK(v.body() == f.eval({ScalarOps<GaussRat>::real_part(x1.body()),
                                  ScalarOps<GaussRat>::real_part(x2.body())}));
    }
}

TEST_CASE("continuation is a ring homomorphism on polynomials") {
    Rng rng(59);
    for (int rep = 0; rep < 120; ++rep) {
        int m = rng.uniform(1, 3);
        int L = rng.uniform(2, 6);
        auto pf = rng.poly(m, 3);
        auto pg = rng.poly(m, 3);
        std::vector<SupernumberQ> x;
        for (int j = 0; j < m; ++j) x.push_back(rng.even_slot_value(L, L));

        auto f = MapQ::poly(pf), g = MapQ::poly(pg);
        auto sum = grassmann_continue(MapQ::poly(pf + pg), x);
        CHECK(sum == grassmann_continue(f, x) + grassmann_continue(g, x));
        auto prod = grassmann_continue(MapQ::poly(pf * pg), x);
        CHECK(prod == grassmann_continue(f, x) * grassmann_continue(g, x));
    }
}

TEST_CASE("derivative commutes with continuation") {
    SECTION("q^2 along a soul shift gives 2x") {
        Rng rng(61);
        auto q = rng.rational();
        auto x = SupernumberQ::scalar(4, 4, GaussRat(q)) + blade12();
        auto v = continuation_partial(q_pow(2), {x}, 1);
        CHECK(v == GaussRat(2) * x.in_context(4, 4));
    }
    SECTION("product rule case") {
        auto f = MapQ::poly(PolyQ::variable(2, 1) * PolyQ::variable(2, 2));
        Rng rng(63);
        auto x1 = rng.even_slot_value(4, 4);
        auto x2 = rng.even_slot_value(4, 4);
        CHECK(continuation_partial(f, {x1, x2}, 2) == x1.in_context(4, 4));
    }
    SECTION("constants vanish") {
        auto c = MapQ::poly(PolyQ::constant(1, GaussRat(9)));
        auto x = SupernumberQ::scalar(2, 2, GaussRat(1));
        CHECK(continuation_partial(c, {x}, 1).is_zero());
    }
    SECTION("random polynomials to order 3") {
        Rng rng(67);
        for (int rep = 0; rep < 60; ++rep) {
            int m = rng.uniform(1, 3);
            auto f = MapQ::poly(rng.poly(m, 3));
            std::vector<SupernumberQ> x;
            for (int j = 0; j < m; ++j) x.push_back(rng.even_slot_value(6, 6));
            for (int j = 1; j <= m; ++j) CHECK_NOTHROW(continuation_partial(f, x, j));
        }
    }
    SECTION("analytic primitives in float mode") {
        AnalyticSpec spec;
        spec.slope = {1.0};
        auto f = MapD::analytic(spec);  // exp
        auto x = SupernumberD::scalar(4, 4, ComplexD{0.25, 0.0}) +
                 SupernumberD::blade(4, 4, GIndex::from_list({1, 2}), ComplexD{1.0, 0.0});
        CHECK_NOTHROW(continuation_partial(f, {x}, 1, FdOptions{1e-5, true}, 1e-6));
    }
}

TEST_CASE("Taylor expansion of continuations") {
    Rng rng(71);
    auto x = SupernumberQ::scalar(4, 4, GaussRat(Rational(1, 2))) + blade12();
    auto y = SupernumberQ::scalar(4, 4, GaussRat(Rational(1, 3))) +
             SupernumberQ::blade(4, 4, GIndex::from_list({3, 4}), GaussRat(2));

    SECTION("cubic is exact at order 3") {
        auto r = taylor_expand_continued(q_pow(3), {x}, {y}, 3);
        CHECK(r.exact);
        CHECK(r.defect.is_zero());
    }
    SECTION("order 2 defect of the cubic is the continued y^3") {
        auto r = taylor_expand_continued(q_pow(3), {x}, {y}, 2);
        CHECK_FALSE(r.exact);
        CHECK(r.defect == y * y * y);
    }
    SECTION("zero increment reproduces the continuation at every order") {
        auto zero = SupernumberQ::zero(4, 4);
        for (unsigned n = 0; n <= 3; ++n) {
            auto r = taylor_expand_continued(q_pow(3), {x}, {zero}, n);
            CHECK(r.partial_sum == grassmann_continue(q_pow(3), {x}));
        }
    }
}

TEST_CASE("analytic continuation") {
    SECTION("exp of a pure soul") {
        auto z = SupernumberD::blade(4, 4, GIndex::from_list({1, 2}), ComplexD{1.0, 0.0});
        AnalyticSpec spec;
        spec.slope = {1.0};
        auto v = continue_analytic(MapD::analytic(spec), z);
        auto expect = SupernumberD::unit(4, 4) + z;
        CHECK(v == expect);
    }
    SECTION("functional equation exp(a+s) exp(-a-s) = 1") {
        AnalyticSpec spec;
        spec.slope = {1.0};
        auto f = MapD::analytic(spec);
        auto z = SupernumberD::scalar(4, 4, ComplexD{0.7, 0.0}) +
                 SupernumberD::blade(4, 4, GIndex::from_list({1, 2}), ComplexD{2.0, 0.0}) +
                 SupernumberD::blade(4, 4, GIndex::from_list({1, 2, 3, 4}), ComplexD{-1.0, 0.0});
        auto prod = continue_analytic(f, z) * continue_analytic(f, -z);
        CHECK(dist(prod, SupernumberD::unit(4, 4)) < 1e-12);
    }
    SECTION("sin at zero") {
        AnalyticSpec spec;
        spec.kind = AnalyticKind::trig;
        spec.slope = {1.0};
        auto z = SupernumberD::zero(2, 2);
        CHECK(continue_analytic(MapD::analytic(spec), z).is_zero());
    }
    SECTION("log needs a positive body") {
        AnalyticSpec spec;
        spec.kind = AnalyticKind::log;
        spec.slope = {1.0};
        auto z = SupernumberD::zero(2, 2);
        CHECK_THROWS_AS(continue_analytic(MapD::analytic(spec), z), EvalError);
    }
}

TEST_CASE("zero polynomial has zero continuation") {
    Rng rng(73);
    auto zero_fn = MapQ::poly(PolyQ(1));
    for (int rep = 0; rep < 20; ++rep) {
        auto x = rng.even_slot_value(5, 5);
        CHECK(grassmann_continue(zero_fn, {x}).is_zero());
    }
}

TEST_CASE("directional derivative matches the sum of slot derivatives") {
    Rng rng(79);
    for (int rep = 0; rep < 40; ++rep) {
        int m = rng.uniform(1, 2);
        auto p = rng.poly(m, 3);
        auto f = MapQ::poly(p);
        std::vector<SupernumberQ> x, y;
        for (int j = 0; j < m; ++j) {
            x.push_back(rng.even_slot_value(5, 5));
            y.push_back(rng.even_slot_value(5, 5));
        }
        // symbolic in t: the composed map is polynomial of the coefficient degree
        auto along = [&](const Rational& t) {
            std::vector<SupernumberQ> xt;
            for (int j = 0; j < m; ++j)
                xt.push_back(x[static_cast<std::size_t>(j)] +
                             y[static_cast<std::size_t>(j)] *
                                 GaussRat(t));
            return grassmann_continue(f, xt);
        };
        auto line = sample_line_poly<GaussRat>(along, static_cast<int>(p.total_degree()));
        auto lhs = line.derivative_at_zero();
        auto rhs = SupernumberQ::zero(5, 5);
        for (int j = 1; j <= m; ++j)
            rhs = rhs + y[static_cast<std::size_t>(j - 1)] *
                            grassmann_continue(f.partial_var(j), x);
        CHECK(lhs == rhs);
    }
}

TEST_CASE("line polynomial utilities") {
    // phi(t) = sigma1 (1 + 2t + t^2) sampled exactly
    auto blade = SupernumberQ::generator(2, 2, 1);
    auto phi = [&](const Rational& t) {
        return blade * GaussRat(1 + 2 * t + t * t);
    };
    auto line = sample_line_poly<GaussRat>(phi, 2);
    REQUIRE(line.coeffs.size() == 3);
    CHECK(line.coeffs[0] == blade);
    CHECK(line.coeffs[1] == GaussRat(2) * blade);
    CHECK(line.coeffs[2] == blade);
    CHECK(line.derivative_at_zero() == GaussRat(2) * blade);
    // integral over [0,1] of 1 + 2t + t^2 = 1 + 1 + 1/3
    CHECK(line.integral(Rational(0), Rational(1)) ==
          GaussRat(Rational(7, 3)) * blade);
    CHECK(line.eval(Rational(3)) == GaussRat(16) * blade);
}
