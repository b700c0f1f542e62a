#include "qrs/conic.hpp"

#include <algorithm>
#include <cstdlib>
#include <vector>

namespace qrs {

PrimeIdeal ideal_of(const RingElement& pi) {
    const QuadField& F = pi.field();
    Int n = abs(pi.norm());
    if (n > 1 && is_probable_prime(n)) {
        for (const auto& P : PrimeIdeal::splitting_type(F, n == F.p() ? F.p() : n))
            if (reduce(pi, P).is_zero()) return P;
        throw Error("prime element matches no ideal over " + n.get_str());
    }
    Int r = isqrt(n);
    if (n > 1 && r * r == n && is_probable_prime(r)) {
        auto q = divide_exact(pi, RingElement(F, r, 0));
        if (q && abs(q->norm()) == 1) {
            auto primes = PrimeIdeal::splitting_type(F, r);
            if (primes.size() == 1 && primes[0].kind() == SplitKind::inert) return primes[0];
        }
    }
    throw UsageError(pi.to_string() + " is not a prime element");
}

namespace {

// common content checks: does any rational prime or prime element divide
// all three coordinates?
bool triple_is_primitive(const RingElement& x, const RingElement& y, const RingElement& z) {
    const QuadField& F = x.field();
    if (x.is_zero() && y.is_zero() && z.is_zero()) return false;
    Int g = 0;
    for (const RingElement* e : {&x, &y, &z}) {
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), e->a().get_mpz_t());
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), e->b().get_mpz_t());
    }
    if (g != 1) return false;
    Int gn = 0;
    for (const RingElement* e : {&x, &y, &z}) {
        Int n = abs(e->norm());
        mpz_gcd(gn.get_mpz_t(), gn.get_mpz_t(), n.get_mpz_t());
    }
    if (gn <= 1) return true;
    for (const auto& [q, mult] : factor_rational(gn)) {
        if (q == 2) continue; // inert 2 already covered by the rational gcd
        for (const auto& P : PrimeIdeal::splitting_type(F, q)) {
            if (reduce(x, P).is_zero() && reduce(y, P).is_zero() && reduce(z, P).is_zero())
                return false;
        }
    }
    return true;
}

std::vector<std::pair<long, long>> height_shell(long H) {
    std::vector<std::pair<long, long>> out;
    if (H == 0) {
        out.push_back({0, 0});
        return out;
    }
    for (long a = -H; a <= H; ++a)
        for (long b = -H; b <= H; ++b) {
            if (std::max(std::labs(a), std::labs(b)) != H) continue;
            if (a < 0 || (a == 0 && b < 0)) continue; // one representative per sign pair
            out.push_back({a, b});
        }
    return out;
}

} // namespace

ConicSolution make_solution(const RingElement& x, const RingElement& y, const RingElement& z) {
    const QuadField& F = x.field();
    ConicSolution s{x, y, z, false, false, false};
    s.primitive = triple_is_primitive(x, y, z);
    s.y_even = y.a() % 2 == 0 && y.b() % 2 == 0;
    s.xy_normalized = congruent(x - y, RingElement(F, 1), RingElement(F, 4));
    return s;
}

static void check_preconditions(const RingElement& pi1, const RingElement& pi2) {
    const QuadField& F = pi1.field();
    RingElement one(F, 1), four(F, 4);
    for (const RingElement* pi : {&pi1, &pi2}) {
        if (!congruent(*pi, one, four))
            throw PreconditionFailed(pi->to_string() + " is not 1 mod 4 O_k");
        if (!pi->totally_positive())
            throw PreconditionFailed(pi->to_string() + " is not totally positive");
    }
    PrimeIdeal P1 = ideal_of(pi1), P2 = ideal_of(pi2);
    RingElement eps = fundamental_unit(F).fundamental_unit;
    if (quad_symbol(pi1, P2) != 1 || quad_symbol(pi2, P1) != 1)
        throw PreconditionFailed("mutual residue symbols of the pair are not both +1");
    if (quad_symbol(eps, P1) != 1 || quad_symbol(eps, P2) != 1)
        throw PreconditionFailed("unit symbol is not +1 at both primes");
}

// scans solutions in height order, handing each to `accept` until it
// returns a value
template <typename Accept>
static auto scan_conic(const RingElement& pi1, const RingElement& pi2,
                       const ConicOptions& options, Accept accept)
    -> decltype(accept(std::declval<ConicSolution>())) {
    const QuadField& F = pi1.field();
    check_preconditions(pi1, pi2);

    std::vector<std::vector<std::pair<long, long>>> shells;
    shells.push_back(height_shell(0));
    for (long H = 1; H <= options.height_bound; ++H) {
        shells.push_back(height_shell(H));
        // pairs whose larger coordinate height is exactly H
        for (long hy = 0; hy <= H; ++hy) {
            for (auto [ya, yb] : shells[hy]) {
                RingElement y = RingElement(F, ya, yb) * Int(2);
                long hz_lo = hy == H ? 0 : H;
                for (long hz = hz_lo; hz <= H; ++hz) {
                    for (auto [za, zb] : shells[hz]) {
                        if (ya == 0 && yb == 0 && za == 0 && zb == 0) continue;
                        RingElement z(F, za, zb);
                        if (options.avoid && reduce(z, *options.avoid).is_zero()) continue;
                        RingElement t = pi1 * (y * y) + pi2 * (z * z);
                        auto x = sqrt_element(t);
                        if (!x) continue;
                        if (auto hit = accept(make_solution(*x, y, z))) return hit;
                    }
                }
            }
        }
    }
    throw HeightExhausted("no conic point with coordinate height <= " +
                          std::to_string(options.height_bound));
}

ConicSolution solve_conic(const RingElement& pi1, const RingElement& pi2,
                          const ConicOptions& options) {
    return *scan_conic(pi1, pi2, options, [](ConicSolution s) {
        return std::optional<ConicSolution>(std::move(s));
    });
}

ConicSolution solve_conic_normalized(const RingElement& pi1, const RingElement& pi2,
                                     const ConicOptions& options) {
    bool saw_raw = false;
    auto normalized = [&](const ConicSolution& raw) -> std::optional<ConicSolution> {
        saw_raw = true;
        try {
            ConicSolution n = normalize_solution(raw, pi1, pi2);
            if (options.avoid && reduce(n.z, *options.avoid).is_zero()) return std::nullopt;
            return n;
        } catch (const NormalizationUnreachable&) {
            return std::nullopt;
        }
    };
    try {
        return *scan_conic(pi1, pi2, options, normalized);
    } catch (const HeightExhausted&) {
        if (saw_raw) throw NormalizationUnreachable("no conic point in range normalizes");
        throw;
    }
}

ConicSolution normalize_solution(const ConicSolution& sol, const RingElement& pi1,
                                 const RingElement& pi2) {
    const QuadField& F = sol.x.field();
    RingElement x = sol.x, y = sol.y, z = sol.z;
    if (x.is_zero() && y.is_zero() && z.is_zero())
        throw UsageError("normalizing the zero solution");

    // strip rational content
    Int g = 0;
    for (const RingElement* e : {&x, &y, &z}) {
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), e->a().get_mpz_t());
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), e->b().get_mpz_t());
    }
    if (g > 1) {
        x = RingElement(F, x.a() / g, x.b() / g);
        y = RingElement(F, y.a() / g, y.b() / g);
        z = RingElement(F, z.a() / g, z.b() / g);
    }
    // strip common prime elements
    for (bool changed = true; changed;) {
        changed = false;
        Int gn = 0;
        for (const RingElement* e : {&x, &y, &z}) {
            Int n = abs(e->norm());
            mpz_gcd(gn.get_mpz_t(), gn.get_mpz_t(), n.get_mpz_t());
        }
        if (gn <= 1) break;
        for (const auto& [q, mult] : factor_rational(gn)) {
            if (q == 2) continue;
            for (const auto& P : PrimeIdeal::splitting_type(F, q)) {
                auto qx = divide_exact(x, P.generator());
                auto qy = divide_exact(y, P.generator());
                auto qz = divide_exact(z, P.generator());
                if (qx && qy && qz) {
                    x = *qx;
                    y = *qy;
                    z = *qz;
                    changed = true;
                }
            }
        }
    }

    UnitData ud = fundamental_unit(F);
    RingElement eps = ud.fundamental_unit;
    RingElement eps_inv = ud.unit_norm == -1 ? -eps.conj() : eps.conj();
    RingElement up(F, 1), down(F, 1);
    for (int j = 0; j <= 8; ++j) {
        if (j > 0) { up = up * eps; down = down * eps_inv; }
        std::vector<RingElement> units = j == 0 ? std::vector<RingElement>{up}
                                                : std::vector<RingElement>{up, down};
        for (const RingElement& u : units) {
            for (int sg : {+1, -1}) {
                for (int sx : {+1, -1}) {
                    RingElement cx = u * x * Int(sg * sx);
                    RingElement cy = u * y * Int(sg);
                    RingElement cz = u * z * Int(sg);
                    ConicSolution cand = make_solution(cx, cy, cz);
                    if (cand.primitive && cand.y_even && cand.xy_normalized) {
                        // y and z only appear squared, and y is even, so sign
                        // flips keep every flag; prefer nonnegative embeddings
                        if (!cand.y.is_zero() && cand.y.sign_inf1() < 0) cand.y = -cand.y;
                        if (!cand.z.is_zero() && cand.z.sign_inf1() < 0) cand.z = -cand.z;
                        return cand;
                    }
                }
            }
        }
    }
    throw NormalizationUnreachable("no unit-orbit representative has all flags set");
}

bool verify_solution(const ConicSolution& sol, const RingElement& pi1, const RingElement& pi2) {
    if (sol.x.is_zero() && sol.y.is_zero() && sol.z.is_zero()) return false;
    RingElement lhs = sol.x * sol.x - pi1 * (sol.y * sol.y) - pi2 * (sol.z * sol.z);
    if (!lhs.is_zero()) return false;
    ConicSolution fresh = make_solution(sol.x, sol.y, sol.z);
    return fresh.primitive == sol.primitive && fresh.y_even == sol.y_even &&
           fresh.xy_normalized == sol.xy_normalized;
}

} // namespace qrs
