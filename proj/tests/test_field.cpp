#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"
#include "qrs/field.hpp"

using namespace qrs;
using namespace qrs::testing;

static RingElement sqrt5(const QuadField& F, long x, long y) {
    return RingElement::from_sqrt_coords(F, x, y);
}

TEST_CASE("field constructor gate") {
    CHECK_NOTHROW(QuadField(5));
    CHECK_NOTHROW(QuadField(13));
    CHECK_THROWS_AS(QuadField(7), UsageError);  // 3 mod 4
    CHECK_THROWS_AS(QuadField(21), UsageError); // composite
    CHECK_THROWS_AS(QuadField(2), UsageError);
}

TEST_CASE("norm trace conj on pinned values") {
    QuadField F(5);
    CHECK(sqrt5(F, 33, 8).norm() == 769);
    // (23 + 5 sqrt5)/2 = 9 + 5w
    RingElement pi3 = RingElement::from_half_coords(F, 23, 5);
    CHECK(pi3 == RingElement(F, 9, 5));
    CHECK(pi3.norm() == 101);
    auto [n, t, c] = norm_trace_conj(RingElement(F, 1));
    CHECK(n == 1);
    CHECK(t == 2);
    CHECK(c == RingElement(F, 1));
}

TEST_CASE("half coordinate round trip") {
    QuadField F(13);
    RingElement e(F, -7, 11);
    CHECK(RingElement::from_half_coords(F, e.half_u(), e.half_v()) == e);
    CHECK_THROWS_AS(RingElement::from_half_coords(F, 1, 2), UsageError);
}

TEST_CASE("real signs") {
    QuadField F(5);
    RingElement eps(F, 0, 1); // (1+sqrt5)/2
    CHECK(real_signs(eps) == std::pair{1, -1});
    CHECK(real_signs(RingElement::from_half_coords(F, 23, 5)) == std::pair{1, 1});
    CHECK(real_signs(RingElement(F, -1)) == std::pair{-1, -1});
    CHECK_THROWS_AS(real_signs(RingElement(F, 0)), UsageError);
}

TEST_CASE("fundamental units") {
    QuadField F5(5), F13(13), F29(29);
    auto u5 = fundamental_unit(F5);
    CHECK(u5.fundamental_unit == RingElement(F5, 0, 1)); // (1+sqrt5)/2
    CHECK(u5.unit_norm == -1);
    auto u13 = fundamental_unit(F13);
    CHECK(u13.fundamental_unit == RingElement::from_half_coords(F13, 3, 1));
    CHECK(u13.unit_norm == -1);
    auto u29 = fundamental_unit(F29);
    CHECK(u29.fundamental_unit == RingElement::from_half_coords(F29, 5, 1));
    CHECK(u29.unit_norm == -1);
}

TEST_CASE("fundamental unit invariants") {
    for (long p : {5, 13, 17, 29, 37, 41, 53, 61, 73, 89, 97, 101, 109, 113}) {
        QuadField F(p);
        auto u = fundamental_unit(F);
        const RingElement& e = u.fundamental_unit;
        CHECK(e * e.conj() == RingElement(F, u.unit_norm));
        CHECK(e.sign_inf1() > 0);
        CHECK((e - RingElement(F, 1)).sign_inf1() > 0); // e > 1 at the first place
        // minimality among all units with b up to b(eps)
        for (const auto& v : units_with_b_up_to(F, e.half_v())) {
            if (v == e) continue;
            // any other unit > 1 must be larger than eps
            if ((v - RingElement(F, 1)).sign_inf1() > 0)
                CHECK((v - e).sign_inf1() >= 0);
        }
    }
}

TEST_CASE("class numbers") {
    CHECK(class_numbers(QuadField(5)).h == 1);
    CHECK(class_numbers(QuadField(5)).h_plus == 1);
    CHECK(class_numbers(QuadField(13)).h == 1);
    CHECK(class_numbers(QuadField(13)).h_plus == 1);
    auto cd = class_numbers(QuadField(229));
    CHECK(cd.h == 3);
    CHECK(cd.h_plus == 3);
}

TEST_CASE("class numbers vs Minkowski oracle, p <= 200") {
    for (Int p = 5; p <= 229; ++p) {
        if (p % 4 != 1 || !is_probable_prime(p)) continue;
        QuadField F(p);
        auto cd = class_numbers(F);
        CHECK(cd.h >= 1);
        CHECK((cd.h_plus == cd.h || cd.h_plus == 2 * cd.h));
        if (p <= 200) CHECK(minkowski_h_is_one(F) == (cd.h == 1));
    }
    CHECK_FALSE(minkowski_h_is_one(QuadField(229)));
}

TEST_CASE("congruences") {
    QuadField F(5);
    RingElement four(F, 4);
    CHECK(congruent(sqrt5(F, 33, 8), RingElement(F, 1), four));
    CHECK(congruent(sqrt5(F, -25, -14), RingElement(F, 1), four));
    RingElement e(F, 3, 7), m(F, 2, 1);
    CHECK(congruent(e, e, m));
    CHECK_THROWS_AS(congruent(e, e, RingElement(F, 0)), UsageError);
}

TEST_CASE("sqrt_element") {
    QuadField F(5);
    auto s = sqrt_element(sqrt5(F, 81, 36));
    REQUIRE(s.has_value());
    CHECK(*s == sqrt5(F, 6, 3));
    auto two = sqrt_element(RingElement(F, 4));
    REQUIRE(two.has_value());
    CHECK(*two == RingElement(F, 2));
    CHECK_FALSE(sqrt_element(sqrt5(F, 1, 1)).has_value()); // negative at inf2
    CHECK(sqrt_element(RingElement(F, 0)).has_value());
}

TEST_CASE("ring properties on random pairs") {
    QuadField F(5), G(13);
    auto rng = make_rng();
    for (int i = 0; i < 1000; ++i) {
        const QuadField& K = (i % 2) ? F : G;
        RingElement e = random_element(K, rng), f = random_element(K, rng);
        CHECK((e * f).norm() == e.norm() * f.norm());
        CHECK(e.conj().conj() == e);
        CHECK((e * f).conj() == e.conj() * f.conj());
        CHECK((e + f).conj() == e.conj() + f.conj());
        if (!e.is_zero() && !f.is_zero()) {
            auto [s1, s2] = real_signs(e);
            auto [t1, t2] = real_signs(f);
            CHECK(real_signs(e * f) == std::pair{s1 * t1, s2 * t2});
        }
    }
}

TEST_CASE("sqrt round trip on random squares") {
    QuadField F(5);
    auto rng = make_rng(42);
    for (int i = 0; i < 500; ++i) {
        RingElement s = random_element(F, rng, -30, 30);
        auto r = sqrt_element(s * s);
        REQUIRE(r.has_value());
        CHECK((*r == s || *r == -s));
    }
}

TEST_CASE("text round trips") {
    QuadField F(5);
    RingElement e(F, -23, 5);
    CHECK(RingElement::parse(F, e.to_string()) == e);
    CHECK(e.to_string() == "-23+5w");
    CHECK(RingElement::from_half_coords(F, 23, 5).pretty() == "(23+5*sqrt(5))/2");
    CHECK(sqrt5(F, 33, 8).pretty() == "33+8*sqrt(5)");
    CHECK_THROWS_AS(RingElement::parse(F, "junk"), UsageError);
}
