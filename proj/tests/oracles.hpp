// Test-only oracles, independent of the library's main computation paths.
#pragma once

#include <random>
#include <vector>

#include "qrs/field.hpp"

namespace qrs::testing {

inline std::mt19937_64 make_rng(uint64_t seed = 0x5eed5eedULL) { return std::mt19937_64(seed); }

inline RingElement random_element(const QuadField& F, std::mt19937_64& rng, long lo = -50, long hi = 50) {
    std::uniform_int_distribution<long> d(lo, hi);
    return RingElement(F, d(rng), d(rng));
}

inline RingElement random_nonzero(const QuadField& F, std::mt19937_64& rng, long lo = -50, long hi = 50) {
    for (;;) {
        RingElement e = random_element(F, rng, lo, hi);
        if (!e.is_zero()) return e;
    }
}

// Is there an element of norm +-q? Decides principality of the primes above q
// (class number one detection), by scanning the Pell-type equations
// u^2 - p v^2 = +-4q for v up to an explicit bound derived from the unit.
inline bool has_element_of_norm(const QuadField& F, const Int& q) {
    UnitData eps = fundamental_unit(F);
    Int s = isqrt(F.p());
    // upper bound on iota_1(eps), times 2: |u| + |v|(s+1)
    Int eps2 = abs(eps.fundamental_unit.half_u()) + abs(eps.fundamental_unit.half_v()) * (s + 1);
    Int vbound = (2 * (isqrt(q) + 1) * (eps2 + 2)) / s + 2;
    for (Int v = 0; v <= vbound; ++v) {
        Int base = F.p() * v * v;
        if (is_perfect_square(base + 4 * q)) return true;
        if (base >= 4 * q && is_perfect_square(base - 4 * q)) return true;
    }
    return false;
}

// Minkowski-bound ideal enumeration: the class group is generated by prime
// ideals of norm below (1/2)sqrt(p); h = 1 iff all of them are principal.
inline bool minkowski_h_is_one(const QuadField& F) {
    Int bound = isqrt(F.p()) / 2;
    for (Int q = 2; q <= bound; ++q) {
        if (!is_probable_prime(q)) continue;
        bool inert;
        if (q == 2) {
            inert = (F.p() % 8 == 5);
        } else {
            Int r = F.p() % q;
            inert = mpz_legendre(r.get_mpz_t(), q.get_mpz_t()) == -1;
        }
        if (inert) continue; // norm q^2 > bound once q >= 2... prime of norm q^2 still may be <= bound
        if (!has_element_of_norm(F, q)) return false;
    }
    // inert primes of norm q^2 <= bound are principal (generated by q) anyway
    return true;
}

// All units a + b*omega with 0 < b <= bmax, as a brute-force check of
// fundamental-unit minimality.
inline std::vector<RingElement> units_with_b_up_to(const QuadField& F, const Int& bmax) {
    std::vector<RingElement> out;
    for (Int b = 1; b <= bmax; ++b) {
        for (int s : {+1, -1}) {
            Int t = b * b * F.p() + 4 * s;
            if (t < 0 || !is_perfect_square(t)) continue;
            Int u = isqrt(t);
            if ((u - b) % 2 != 0) continue;
            out.push_back(RingElement::from_half_coords(F, u, b));
        }
    }
    return out;
}

} // namespace qrs::testing
