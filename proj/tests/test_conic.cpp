#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"
#include "qrs/conic.hpp"

using namespace qrs;
using namespace qrs::testing;

static RingElement sqrt5(const QuadField& F, long x, long y) {
    return RingElement::from_sqrt_coords(F, x, y);
}

// admissible pairs (both generators 1 mod 4, totally positive, all four
// symbol conditions +1) harvested from small primes of Q(sqrt 5)
static std::vector<std::pair<RingElement, RingElement>> admissible_pairs(const QuadField& F,
                                                                         size_t want) {
    RingElement eps = fundamental_unit(F).fundamental_unit;
    GeneratorFlags both{true, true};
    std::vector<RingElement> gens;
    for (long ell = 5; ell < 400 && gens.size() < 24; ell += 4) {
        if (!is_probable_prime(Int(ell)) || ell == 5) continue;
        for (const auto& P : PrimeIdeal::splitting_type(F, ell)) {
            if (quad_symbol(eps, P) != 1) continue;
            try {
                gens.push_back(normalized_generator(P, both));
            } catch (const NormalizationUnreachable&) {
            }
        }
    }
    std::vector<std::pair<RingElement, RingElement>> out;
    for (size_t i = 0; i < gens.size() && out.size() < want; ++i)
        for (size_t j = i + 1; j < gens.size() && out.size() < want; ++j) {
            const RingElement &a = gens[i], &b = gens[j];
            if (abs(a.norm()) == abs(b.norm())) continue;
            if (quad_symbol(a, ideal_of(b)) != 1) continue;
            if (quad_symbol(b, ideal_of(a)) != 1) continue;
            out.push_back({a, b});
        }
    return out;
}

TEST_CASE("ideal_of") {
    QuadField F(5);
    CHECK(ideal_of(sqrt5(F, 33, 8)).ell() == 769);
    CHECK(ideal_of(RingElement(F, 17, 0)).kind() == SplitKind::inert);
    CHECK(ideal_of(sqrt5(F, 0, 1)).kind() == SplitKind::ramified);
    CHECK_THROWS_AS(ideal_of(RingElement(F, 15, 0)), UsageError);
    CHECK_THROWS_AS(ideal_of(RingElement(F, 1)), UsageError);
}

TEST_CASE("worked conic instance") {
    QuadField F(5);
    RingElement pi1 = sqrt5(F, 33, 8);
    RingElement pi2(F, 17, 0);
    ConicSolution raw = solve_conic(pi1, pi2, ConicOptions{200, std::nullopt});
    CHECK(verify_solution(raw, pi1, pi2));
    ConicSolution n = normalize_solution(raw, pi1, pi2);
    CHECK(verify_solution(n, pi1, pi2));
    CHECK(n.primitive);
    CHECK(n.y_even);
    CHECK(n.xy_normalized);
    CHECK(n.x == sqrt5(F, -23, -14));
    CHECK(n.y == RingElement(F, 2));
    RingElement zplus = sqrt5(F, 6, 3);
    CHECK((n.z == zplus || n.z == -zplus));
    CHECK(congruent(n.x - n.y, RingElement(F, 1), RingElement(F, 4)));
}

TEST_CASE("precondition gates") {
    QuadField F(5);
    RingElement pi1 = sqrt5(F, 33, 8);
    // (7+sqrt5)/2 generates the prime over 11 and is not 1 mod 4
    RingElement g11 = RingElement::from_half_coords(F, 7, 1);
    CHECK_THROWS_AS(solve_conic(g11, pi1, {}), PreconditionFailed);
    CHECK_THROWS_AS(solve_conic(-pi1, pi1, {}), PreconditionFailed);
    // 29 = 1 mod 4 but (pi29 / pi13) may fail the symbol gate; find a pair
    // whose mutual symbol is -1 and check the gate fires
    RingElement eps = fundamental_unit(F).fundamental_unit;
    GeneratorFlags both{true, true};
    bool fired = false;
    std::vector<RingElement> gens;
    for (long ell = 13; ell < 200 && !fired; ell += 4) {
        if (!is_probable_prime(Int(ell))) continue;
        for (const auto& P : PrimeIdeal::splitting_type(F, ell)) {
            try {
                gens.push_back(normalized_generator(P, both));
            } catch (const NormalizationUnreachable&) {
            }
        }
        for (size_t i = 0; i < gens.size() && !fired; ++i)
            for (size_t j = i + 1; j < gens.size() && !fired; ++j) {
                if (abs(gens[i].norm()) == abs(gens[j].norm())) continue;
                if (quad_symbol(gens[i], ideal_of(gens[j])) != -1) continue;
                CHECK_THROWS_AS(solve_conic(gens[i], gens[j], {}), PreconditionFailed);
                fired = true;
            }
    }
    CHECK(fired);
}

TEST_CASE("avoid option keeps z off the third prime") {
    QuadField F(5);
    RingElement pi1 = sqrt5(F, 33, 8);
    RingElement pi2(F, 17, 0);
    PrimeIdeal P3 = PrimeIdeal::above(F, 101, Int(56));
    ConicSolution s = solve_conic(pi1, pi2, ConicOptions{200, P3});
    CHECK(verify_solution(s, pi1, pi2));
    CHECK_FALSE(reduce(s.z, P3).is_zero());
}

TEST_CASE("flags on the secondary worked solution") {
    QuadField F(5);
    RingElement pi1 = RingElement::from_half_coords(F, 11, 1); // (11+sqrt5)/2
    RingElement pi2(F, 13, 0);
    ConicSolution s = make_solution(sqrt5(F, -1, -9), RingElement(F, 6), RingElement(F, 4));
    CHECK(verify_solution(s, pi1, pi2));
    CHECK(s.y_even);
    CHECK_FALSE(s.primitive); // content 2
    // scaled solutions keep the equation but lose primitivity
    ConicSolution tripled = make_solution(s.x * Int(3), s.y * Int(3), s.z * Int(3));
    CHECK(verify_solution(tripled, pi1, pi2));
    CHECK_FALSE(tripled.primitive);
}

TEST_CASE("zero and corrupted solutions fail verification") {
    QuadField F(5);
    RingElement pi1 = sqrt5(F, 33, 8), pi2(F, 17, 0);
    ConicSolution zero = make_solution(RingElement(F, 0), RingElement(F, 0), RingElement(F, 0));
    CHECK_FALSE(verify_solution(zero, pi1, pi2));
    ConicSolution s = normalize_solution(solve_conic(pi1, pi2, {}), pi1, pi2);
    ConicSolution bad = s;
    bad.x = s.x + RingElement(F, 1);
    CHECK_FALSE(verify_solution(bad, pi1, pi2));
    ConicSolution lied = s;
    lied.primitive = !s.primitive;
    CHECK_FALSE(verify_solution(lied, pi1, pi2));
}

TEST_CASE("properties across harvested admissible pairs") {
    QuadField F(5);
    auto pairs = admissible_pairs(F, 6);
    REQUIRE(pairs.size() >= 3);
    auto rng = make_rng(17);
    RingElement one(F, 1), four(F, 4);
    int solved = 0;
    for (const auto& [pi1, pi2] : pairs) {
        std::optional<ConicSolution> found;
        try {
            found = solve_conic(pi1, pi2, ConicOptions{40, std::nullopt});
        } catch (const HeightExhausted&) {
            continue;
        }
        const ConicSolution& raw = *found;
        ++solved;
        CHECK(verify_solution(raw, pi1, pi2));
        ConicSolution n = normalize_solution(raw, pi1, pi2);
        CHECK(verify_solution(n, pi1, pi2));
        // idempotence
        ConicSolution again = normalize_solution(n, pi1, pi2);
        CHECK(again.x == n.x);
        CHECK(again.y == n.y);
        CHECK(again.z == n.z);
        // mod-4 consistency for the primitive representative
        RingElement lhs = n.x * n.x - n.y * n.y - n.z * n.z;
        CHECK(congruent(lhs, RingElement(F, 0), four));
        // (x + y s)(x - y s) = pi2 z^2 at split odd primes seeing pi1 as a square
        int checked = 0;
        for (long ell : {11, 19, 29, 31, 41, 59, 61, 71, 79, 89, 101, 109}) {
            for (const auto& P : PrimeIdeal::splitting_type(F, ell)) {
                if (reduce(pi1, P).is_zero() || quad_symbol(pi1, P) != 1) continue;
                ResidueElement s = sqrt_mod(P, reduce(pi1, P));
                ResidueElement X = reduce(n.x, P), Y = reduce(n.y, P);
                CHECK((X + Y * s) * (X - Y * s) == reduce(pi2 * n.z * n.z, P));
                ++checked;
            }
        }
        CHECK(checked >= 4);
    }
    CHECK(solved >= 3);
}
