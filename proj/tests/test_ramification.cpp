#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "hkg/ramification.hpp"
#include "testutil.hpp"

using namespace hkg;

TEST_CASE("lower to upper conversion") {
    const auto js = jumps_from_lower({1, 21, 521}, 5);
    CHECK(js.orbit_counts == std::vector<Int>{2, 4, 20});
    CHECK(js.upper == std::vector<Int>{1, 5, 25});

    const auto jw = jumps_from_lower({9, 189, 4689}, 5);
    CHECK(jw.orbit_counts == std::vector<Int>{10, 36, 180});
    CHECK(jw.upper == std::vector<Int>{9, 45, 225});
    // oracle: the defining identity b_k + 1 = sum i_v p^v, re-evaluated here
    for (std::size_t k = 0; k < 3; ++k) {
        Int acc = 0, pk = 1;
        for (std::size_t v = 0; v <= k; ++v) {
            acc += jw.orbit_counts[v] * pk;
            pk *= 5;
        }
        CHECK(jw.lower[k] + 1 == acc);
    }

    const auto j1 = jumps_from_lower({1}, 5);
    CHECK(j1.orbit_counts == std::vector<Int>{2});
    CHECK(j1.upper == std::vector<Int>{1});
}

TEST_CASE("unrealizable lower sequences are rejected") {
    CHECK_THROWS_AS(jumps_from_lower({1, 2}, 5), DomainError);   // fractional i_1
    CHECK_THROWS_AS(jumps_from_lower({5, 3}, 5), DomainError);   // not increasing
    CHECK_THROWS_AS(jumps_from_lower({0}, 5), DomainError);
    CHECK_THROWS_AS(jumps_from_lower({}, 5), DomainError);
}

TEST_CASE("upper to lower conversion") {
    CHECK(jumps_from_upper({1, 5, 25}, 5).lower == std::vector<Int>{1, 21, 521});
    CHECK(jumps_from_upper({9, 45, 225}, 5).lower ==
          std::vector<Int>{9, 189, 4689});
    CHECK(jumps_from_upper({7}, 3).lower == std::vector<Int>{7});
    CHECK_THROWS_AS(jumps_from_upper({5, 5}, 5), DomainError);
}

TEST_CASE("conversion round trips on random admissible sequences") {
    testutil::Rng rng(20240811);
    for (int iter = 0; iter < 400; ++iter) {
        const Int p = std::vector<Int>{3, 5, 7}[static_cast<std::size_t>(
            testutil::pick(rng, 0, 2))];
        const Int h = testutil::pick(rng, 1, 4);
        const Int m = testutil::pick(rng, 1, 4);
        const auto upper = testutil::random_admissible_upper(rng, p, h, m);
        CHECK(validate_obus_pries(upper, p, m).valid); // generator self-check
        const auto js = jumps_from_upper(upper, p);
        CHECK(jumps_from_lower(js.lower, p).upper == upper);
        CHECK(jumps_from_upper(js.upper, p).lower == js.lower);
    }
}

TEST_CASE("admissibility of upper jumps") {
    CHECK(validate_obus_pries({9, 45, 225}, 5, 2).valid);
    const auto r1 = validate_obus_pries({10}, 5, 2);
    CHECK_FALSE(r1.valid);
    CHECK(r1.violated_clause == 3);
    const auto r2 = validate_obus_pries({3, 9}, 5, 2);
    CHECK_FALSE(r2.valid);
    CHECK(r2.violated_clause == 3);
    const auto r3 = validate_obus_pries({4, 20}, 5, 2); // gcd(2, 4) = 2
    CHECK_FALSE(r3.valid);
    CHECK(r3.violated_clause == 2);
    const auto r4 = validate_obus_pries({4, 21}, 5, 3); // 21 != 4 mod 3
    CHECK_FALSE(r4.valid);
    CHECK(r4.violated_clause == 4);
    CHECK(validate_obus_pries({4, 20}, 5, 2, 2).valid); // m' = 2 allows it
    const auto r5 = validate_obus_pries({0}, 5, 2);
    CHECK_FALSE(r5.valid);
    CHECK(r5.violated_clause == 1);
}

TEST_CASE("KGB obstruction") {
    CHECK(kgb_vanishes({9, 189, 4689}, 5, 2).vanishes);
    CHECK_FALSE(kgb_vanishes({1, 21, 521}, 5, 4).vanishes);
    CHECK(kgb_vanishes({3}, 5, 4).vanishes); // b0 = m - 1

    // vanishing implies the two equivalent formulations on admissible input
    testutil::Rng rng(77);
    for (int iter = 0; iter < 300; ++iter) {
        const Int p = std::vector<Int>{3, 5, 7}[static_cast<std::size_t>(
            testutil::pick(rng, 0, 2))];
        const Int m = testutil::pick(rng, 2, 4);
        if (m % p == 0)
            continue;
        const Int h = testutil::pick(rng, 1, 4);
        const auto upper = testutil::random_admissible_upper(rng, p, h, m);
        const auto js = jumps_from_upper(upper, p);
        const auto rep = kgb_vanishes(js.lower, p, m);
        if (rep.vanishes) {
            CHECK(rep.upper_all_minus_one);
            CHECK(rep.orbits_all_divisible);
        } else {
            CHECK_FALSE(rep.upper_all_minus_one);
        }
    }
}

TEST_CASE("genus by both formulas") {
    CHECK(genus_special({9, 189, 4689}, 5) == 11656);
    CHECK(genus_generic({10, 36, 180}, 5) == 11656);
    CHECK(genus_special({1, 21, 521}, 5) == 1240);
    CHECK(genus_generic({2, 4, 20}, 5) == 1240);
    CHECK(genus_special({1}, 3) == 0);
    CHECK(genus_generic({2}, 3) == 0);
}

TEST_CASE("genus formulas agree on random admissible sequences") {
    testutil::Rng rng(424242);
    int done = 0;
    while (done < 250) {
        const Int p = std::vector<Int>{3, 5, 7}[static_cast<std::size_t>(
            testutil::pick(rng, 0, 2))];
        const Int h = testutil::pick(rng, 1, 4);
        const Int m = testutil::pick(rng, 2, 4);
        if (m % p == 0)
            continue;
        const auto upper = testutil::random_admissible_upper(rng, p, h, m);
        const auto js = jumps_from_upper(upper, p);
        CHECK(genus_special(js.lower, p) == genus_generic(js.orbit_counts, p));
        ++done;
    }
}

TEST_CASE("family of jump sequences") {
    CHECK(family_jumps(5, 3, 9) == std::vector<Int>{9, 189, 4689});
    CHECK(family_jumps(5, 3, 1) == std::vector<Int>{1, 21, 521});
    CHECK(family_jumps(3, 2, 1) == std::vector<Int>{1, 7});
    CHECK_THROWS_AS(family_jumps(5, 3, 10), DomainError); // p | w0
}

TEST_CASE("B values") {
    const auto fam = family_jumps(5, 3, 1);
    CHECK(b_value(0, fam, 5) == 0);
    CHECK(b_value(1, fam, 5) == 25);       // p^{h-1}
    CHECK(b_value(6, fam, 5) == 130);      // p^h + p^{h-2}
    const auto f9 = family_jumps(5, 3, 9);
    CHECK(b_value(6, f9, 5) == 9 * 130);
}

TEST_CASE("pi profile of the first-jump-one family") {
    for (Int p : {3, 5, 7}) {
        for (Int h = 1; h <= 4; ++h) {
            const auto fam = family_jumps(p, h, 1);
            const auto prof = pi_profile(fam, p);
            CHECK(prof.pi[0] == 0);
            std::vector<Int> expected;
            for (Int k = 1; k * (p + 1) <= prof.q - 1; ++k)
                expected.push_back(k * (p + 1));
            CHECK(prof.jump_indices == expected);
            for (Int j = 1; j < prof.q; ++j)
                CHECK(prof.B[static_cast<std::size_t>(j)] % prof.q != 0);
        }
    }
}

TEST_CASE("B of the complementary index") {
    // digits of q-1-j are the digit-wise complements of those of j
    testutil::Rng rng(606);
    for (int iter = 0; iter < 50; ++iter) {
        const Int p = std::vector<Int>{3, 5, 7}[static_cast<std::size_t>(
            testutil::pick(rng, 0, 2))];
        const Int h = testutil::pick(rng, 1, 3);
        const auto upper = testutil::random_admissible_upper(rng, p, h, 2);
        const auto js = jumps_from_upper(upper, p);
        const Int q = checked_pow(p, h);
        const Int top = b_value(q - 1, js.lower, p);
        for (Int j = 0; j < q; ++j)
            CHECK(top - b_value(j, js.lower, p) ==
                  b_value(q - 1 - j, js.lower, p));
    }
}

TEST_CASE("B steps by the type of the predecessor in the w0 = 1 family") {
    for (Int p : {3, 5}) {
        for (Int h = 1; h <= 4; ++h) {
            const auto fam = family_jumps(p, h, 1);
            const Int q = checked_pow(p, h);
            for (Int j = 1; j < q; ++j) {
                const Int s = type_of_index(j - 1, p, h);
                CHECK(b_value(j, fam, p) - b_value(j - 1, fam, p) ==
                      checked_pow(p, h - s));
            }
        }
    }
}
