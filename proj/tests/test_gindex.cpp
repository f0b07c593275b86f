#include <catch2/catch_amalgamated.hpp>

#include "helpers.hpp"
#include "sga/gindex.hpp"

using namespace sga;
using sga::test::sign_by_sorting;

TEST_CASE("rank encoding matches the binary correspondence") {
    CHECK(encode_rank(GIndex::single(1)) == 1);
    CHECK(encode_rank(GIndex::from_list({1, 2})) == 3);
    CHECK(encode_rank(GIndex::single(3)) == 4);
    CHECK_THROWS_AS(encode_rank(GIndex{}), std::domain_error);
}

TEST_CASE("rank decoding inverts the binary correspondence") {
    CHECK(decode_rank(1) == GIndex::single(1));
    CHECK(decode_rank(3) == GIndex::from_list({1, 2}));
    CHECK(decode_rank(6) == GIndex::from_list({2, 3}));
    CHECK_THROWS_AS(decode_rank(0), std::domain_error);
    CHECK_THROWS_AS(decode_rank(-5), std::domain_error);
}

TEST_CASE("encode and decode are mutually inverse on ranks 1..4096") {
    for (int r = 1; r <= 4096; ++r) {
        GIndex mu = decode_rank(r);
        CHECK(encode_rank(mu) == r);
    }
}

TEST_CASE("high generator positions stay exact") {
    GIndex top = GIndex::single(64);
    BigInt r = encode_rank(top);
    CHECK(r == (BigInt(1) << 63));
    CHECK(decode_rank(r) == top);
    CHECK_THROWS_AS(decode_rank((BigInt(1) << 64) + 1), std::domain_error);
}

TEST_CASE("merge_sign base cases") {
    auto r = merge_sign(GIndex::single(1), GIndex::single(2));
    CHECK(!r.zero);
    CHECK(r.sign == 1);
    CHECK(r.index == GIndex::from_list({1, 2}));

    r = merge_sign(GIndex::single(2), GIndex::single(1));
    CHECK(r.sign == -1);
    CHECK(r.index == GIndex::from_list({1, 2}));

    r = merge_sign(GIndex::from_list({1, 3}), GIndex::single(2));
    CHECK(r.sign == -1);
    CHECK(r.index == GIndex::from_list({1, 2, 3}));

    CHECK(merge_sign(GIndex::single(1), GIndex::single(1)).zero);
}

TEST_CASE("merge_sign agrees with the sorting oracle on all pairs in 1..8") {
    for (std::uint64_t jm = 0; jm < 256; ++jm) {
        for (std::uint64_t km = 0; km < 256; ++km) {
            GIndex j = GIndex::from_mask(jm), k = GIndex::from_mask(km);
            std::vector<int> word = j.generators();
            for (int g : k.generators()) word.push_back(g);
            auto expect = sign_by_sorting(word);
            MergeResult got = merge_sign(j, k);
            if (!expect) {
                CHECK(got.zero);
            } else {
                REQUIRE(!got.zero);
                CHECK(got.sign == *expect);
                CHECK(got.index.mask() == (jm | km));
                CHECK(got.index.degree() == j.degree() + k.degree());
            }
        }
    }
}

TEST_CASE("graded commutativity of monomial merges") {
    for (std::uint64_t jm = 0; jm < 64; ++jm) {
        for (std::uint64_t km = 0; km < 64; ++km) {
            if (jm & km) continue;
            GIndex j = GIndex::from_mask(jm), k = GIndex::from_mask(km);
            int expected = (j.degree() * k.degree()) % 2 == 0 ? 1 : -1;
            CHECK(merge_sign(j, k).sign * merge_sign(k, j).sign == expected);
        }
    }
}

TEST_CASE("signed merge is associative on generator triples from 1..8") {
    // brute-force oracle: sort the full concatenated word once
    for (int a = 1; a <= 8; ++a) {
        for (int b = 1; b <= 8; ++b) {
            for (int c = 1; c <= 8; ++c) {
                std::vector<int> word{a, b, c};
                auto expect = sign_by_sorting(word);

                auto ab = merge_sign(GIndex::single(a), GIndex::single(b));
                int left_sign = 0;
                GIndex left_idx{};
                if (!ab.zero) {
                    auto abc = merge_sign(ab.index, GIndex::single(c));
                    if (!abc.zero) {
                        left_sign = ab.sign * abc.sign;
                        left_idx = abc.index;
                    }
                }
                auto bc = merge_sign(GIndex::single(b), GIndex::single(c));
                int right_sign = 0;
                GIndex right_idx{};
                if (!bc.zero) {
                    auto abc = merge_sign(GIndex::single(a), bc.index);
                    if (!abc.zero) {
                        right_sign = bc.sign * abc.sign;
                        right_idx = abc.index;
                    }
                }
                if (!expect) {
                    CHECK(left_sign == 0);
                    CHECK(right_sign == 0);
                } else {
                    CHECK(left_sign == *expect);
                    CHECK(right_sign == *expect);
                    CHECK(left_idx == right_idx);
                }
            }
        }
    }
}

TEST_CASE("metric weights") {
    CHECK(metric_weight(GIndex{}) == Rational(1, 2));
    CHECK(metric_weight(GIndex::single(1)) == Rational(1, 4));
    CHECK(metric_weight(GIndex::from_list({1, 2})) == Rational(1, 16));
    CHECK(metric_weight_d(GIndex::from_list({1, 2})) == 1.0 / 16.0);
    CHECK_THROWS_AS(metric_weight(GIndex::single(40)), std::overflow_error);
}

TEST_CASE("text form round-trips") {
    CHECK(GIndex{}.str() == "[]");
    CHECK(GIndex::from_list({1, 3}).str() == "[1,3]");
    CHECK(GIndex::parse("[1,3]") == GIndex::from_list({1, 3}));
    CHECK(GIndex::parse("[]") == GIndex{});
    CHECK_THROWS(GIndex::parse("1,3"));
    CHECK_THROWS_AS(GIndex::from_list({3, 1}), std::domain_error);
    CHECK_THROWS_AS(GIndex::from_list({2, 2}), std::domain_error);
}

TEST_CASE("odd multi-index sign exponents") {
    // a = (1,1,0): moving past theta_1 for s=2 costs one sign
    OddMulti a = OddMulti::from_bits({1, 1, 0});
    CHECK(a.degree() == 2);
    CHECK(left_sign_exponent(a.mask, 1) == 0);
    CHECK(left_sign_exponent(a.mask, 2) == 1);
    CHECK(right_sign_exponent(a.mask, 1) == 1);
    CHECK(right_sign_exponent(a.mask, 2) == 0);
}

TEST_CASE("even multi-index helpers") {
    EvenMulti alpha{2, 0, 3};
    CHECK(multi_order(alpha) == 5);
    CHECK(multi_factorial(alpha) == 12);
    auto all = enumerate_multis(2, 2);
    CHECK(all.size() == 6);  // (0,0) (0,1) (0,2) (1,0) (1,1) (2,0)
}
