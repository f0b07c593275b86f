#include <catch2/catch_amalgamated.hpp>

#include "helpers.hpp"
#include "sga/superspace.hpp"

using namespace sga;
using sga::test::Rng;

namespace {

SupernumberQ sn(int L, int D, std::initializer_list<int> gens, int coeff = 1) {
    return SupernumberQ::blade(L, D, GIndex::from_list(gens), GaussRat(coeff));
}

}  // namespace

TEST_CASE("basis directions") {
    auto e = basis_direction<GaussRat>({1, GIndex{}}, 2, 1, 4, 4);
    CHECK(e.even_slot(1) == SupernumberQ::unit(4, 4));
    CHECK(e.even_slot(2).is_zero());
    CHECK(e.odd_slot(1).is_zero());

    auto f = basis_direction<GaussRat>({3, GIndex::single(1)}, 2, 1, 4, 4);
    CHECK(f.odd_slot(1) == SupernumberQ::generator(4, 4, 1));

    CHECK_THROWS_AS((basis_direction<GaussRat>({1, GIndex::single(1)}, 2, 1, 4, 4)),
                    std::domain_error);
    CHECK_THROWS_AS((basis_direction<GaussRat>({3, GIndex::from_list({1, 2})}, 2, 1, 4, 4)),
                    std::domain_error);
}

TEST_CASE("coordinate access") {
    auto x1 = SupernumberQ::scalar(4, 4, GaussRat(2)) + sn(4, 4, {1, 2});
    SuperPoint<GaussRat> p({x1}, {}, 4, 4);
    CHECK(coord_get(p, {1, GIndex::from_list({1, 2})}) == GaussRat(1));
    CHECK(coord_get(p, {1, GIndex::from_list({3, 4})}) == GaussRat(0));

    auto q = coord_set(p, {1, GIndex::from_list({3, 4})}, GaussRat(5));
    CHECK(coord_get(q, {1, GIndex::from_list({3, 4})}) == GaussRat(5));
    CHECK(coord_get(q, {1, GIndex::from_list({1, 2})}) == GaussRat(1));

    CHECK_THROWS_AS(coord_set(p, {1, GIndex{}}, GaussRat(Rational(0), Rational(1))),
                    std::domain_error);
}

TEST_CASE("point invariants are validated") {
    auto odd_elem = SupernumberQ::generator(2, 2, 1);
    CHECK_THROWS_AS(SuperPoint<GaussRat>({odd_elem}, {}, 2, 2), std::domain_error);
    auto complex_body = SupernumberQ::scalar(2, 2, GaussRat(Rational(0), Rational(1)));
    CHECK_THROWS_AS(SuperPoint<GaussRat>({complex_body}, {}, 2, 2), std::domain_error);
    auto even_elem = sn(2, 2, {1, 2});
    CHECK_THROWS_AS(SuperPoint<GaussRat>({}, {even_elem}, 2, 2), std::domain_error);
    // zero is allowed in odd slots
    CHECK_NOTHROW(SuperPoint<GaussRat>({}, {SupernumberQ::zero(2, 2)}, 2, 2));
}

TEST_CASE("pairing examples") {
    SuperPoint<GaussRat> zero(1, 1, 3, 3);
    CHECK(pairing(zero, zero).is_zero());

    SuperPoint<GaussRat> y({}, {SupernumberQ::generator(3, 3, 1)}, 3, 3);
    SuperPoint<GaussRat> x({}, {SupernumberQ::generator(3, 3, 2)}, 3, 3);
    CHECK(pairing(y, x) == sn(3, 3, {1, 2}));

    // top blade at odd L annihilates every odd direction
    auto top = sn(3, 3, {1, 2, 3});
    SuperPoint<GaussRat> t({}, {top}, 3, 3);
    Rng rng(41);
    for (int rep = 0; rep < 40; ++rep) {
        auto omega = rng.homogeneous(3, 3, Parity::odd);
        SuperPoint<GaussRat> w({}, {omega}, 3, 3);
        CHECK(pairing(w, t).is_zero());
    }
}

TEST_CASE("pairing is additive and even-linear") {
    Rng rng(43);
    for (int rep = 0; rep < 100; ++rep) {
        int L = 4;
        auto mk = [&] {
            return SuperPoint<GaussRat>({rng.even_slot_value(L, L)},
                                        {rng.homogeneous(L, L, Parity::odd)}, L, L);
        };
        auto y1 = mk(), y2 = mk(), x = mk();
        CHECK(pairing(y1 + y2, x) == pairing(y1, x) + pairing(y2, x));
        CHECK(pairing(y1, y2 + x) == pairing(y1, y2) + pairing(y1, x));
        auto lambda = rng.even_slot_value(L, L);
        CHECK(pairing(lambda * y1, x) == lambda * pairing(y1, x));
    }
}

TEST_CASE("annihilator structure") {
    SECTION("even slots contribute nothing") {
        auto basis = annihilator_solve(1, 0, 2);
        CHECK(basis.vectors.empty());
    }
    SECTION("single odd slot at L=2") {
        auto basis = annihilator_solve(0, 1, 2);
        REQUIRE(basis.vectors.size() == 1);
        CHECK(basis.vectors[0][0] == sn(2, 2, {1, 2}));
    }
    SECTION("two odd slots at L=3") {
        auto basis = annihilator_solve(0, 2, 3);
        REQUIRE(basis.vectors.size() == 2);
        auto top = sn(3, 3, {1, 2, 3});
        CHECK(basis.vectors[0][0] == top);
        CHECK(basis.vectors[0][1].is_zero());
        CHECK(basis.vectors[1][1] == top);
        CHECK(basis.vectors[1][0].is_zero());
    }
}

TEST_CASE("annihilator verified by exhaustive pairing") {
    for (int L = 2; L <= 5; ++L) {
        for (auto [m, n] : {std::pair{1, 1}, std::pair{0, 2}, std::pair{2, 1}}) {
            auto basis = annihilator_solve(m, n, L);
            CHECK(static_cast<int>(basis.vectors.size()) == n);
            for (const auto& vec : basis.vectors) {
                // pair slotwise against every admissible basis direction
                for (int a = 1; a <= m + n; ++a) {
                    for (std::uint64_t km = 0; km < (std::uint64_t{1} << L); ++km) {
                        GIndex k = GIndex::from_mask(km);
                        bool dir_even = a <= m;
                        if (k.even() != dir_even) continue;
                        auto product = SupernumberQ::blade(L, L, k, GaussRat(1)) *
                                       vec[static_cast<std::size_t>(a - 1)];
                        CHECK(product.is_zero());
                    }
                }
            }
        }
    }
}

TEST_CASE("superspace distance") {
    SuperPoint<GaussRat> x({SupernumberQ::generator(2, 2, 1) * GaussRat(0) +
                            SupernumberQ::scalar(2, 2, GaussRat(1))},
                           {}, 2, 2);
    CHECK(dist_mn(x, x) == Rational(0));

    Rng rng(47);
    for (int rep = 0; rep < 50; ++rep) {
        auto a = rng.homogeneous(3, 3, Parity::odd);
        auto b = rng.homogeneous(3, 3, Parity::odd);
        SuperPoint<GaussRat> pa({}, {a}, 3, 3), pb({}, {b}, 3, 3);
        CHECK(dist_mn(pa, pb) == dist_mn(pb, pa));
        // single slot reduces to the supernumber metric
        CHECK(dist_mn(pa, pb) == dist(a, b));
    }
}

TEST_CASE("superdomain membership depends only on the body") {
    using Dom = Superdomain<GaussRat>;
    Dom dom(1, 0, {Dom::Box{{Rational(0)}, {Rational(1)}}});
    auto mk = [](Rational body, int soul_coeff) {
        return SuperPoint<GaussRat>({SupernumberQ::scalar(2, 2, GaussRat(body)) +
                                     sn(2, 2, {1, 2}, soul_coeff)},
                                    {}, 2, 2);
    };
    CHECK(dom.contains(mk(Rational(1, 2), 0)));
    CHECK(dom.contains(mk(Rational(1, 2), 7)));
    CHECK_FALSE(dom.contains(mk(Rational(2), 0)));
    CHECK_FALSE(dom.contains(mk(Rational(2), 7)));
    CHECK_FALSE(dom.contains(mk(Rational(0), 3)));  // boundary of the open box
    CHECK(Dom::whole(1, 0).contains(mk(Rational(100), 1)));
}
