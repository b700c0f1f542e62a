#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qrs/conic.hpp"
#include "qrs/tower.hpp"

namespace qrs {

struct AdmissibilityReport {
    bool ok;
    std::vector<std::string> reasons; // empty when ok
};

/// Integer Redei data over Q for a pair of rational primes, used as a
/// cross-check when both primes are inert in k.
struct RationalRedei {
    Int x, y, z; // x^2 - p1 y^2 - p2 z^2 = 0, y even, x - y = 1 mod 4
};

/// Everything defining the D8 extension K = k(sqrt pi1, sqrt pi2,
/// sqrt alpha1) with alpha1 = x + y sqrt(pi1).
struct RedeiData {
    PrimeIdeal p1, p2;
    RingElement pi1, pi2; // normalized generators (1 mod 4, totally positive)
    ConicSolution solution;
    std::vector<std::string> tower;
    std::optional<RationalRedei> rational; // double-inert composite route
};

/// Element of the unipotent 3x3 group over F_2 (= D8).
struct D8Class {
    int e12 = 0, e23 = 0, e13 = 0;

    D8Class mul(const D8Class& o) const {
        return D8Class{(e12 + o.e12) & 1, (e23 + o.e23) & 1,
                       (e13 + o.e13 + e12 * o.e23) & 1};
    }
    bool identity() const { return e12 == 0 && e23 == 0 && e13 == 0; }
    bool central() const { return e12 == 0 && e23 == 0; }
    bool operator==(const D8Class& o) const {
        return e12 == o.e12 && e23 == o.e23 && e13 == o.e13;
    }
};

struct WitnessReport {
    bool theta_integral;  // (1 + sqrt alpha1)/2 satisfies a monic integral quadratic
    bool norm_identity;   // relative norm of alpha1 equals pi2 z^2
    int registry_checked; // worked-example identity blocks that applied
};

struct RedeiOptions {
    long height_bound = 80;
    std::optional<PrimeIdeal> avoid;
};

/// N(p_i) = 1 mod 4, normalized generators exist, mutual symbols and unit
/// symbols all +1, over a field with narrow class number 1.
AdmissibilityReport pair_admissible(const PrimeIdeal& p1, const PrimeIdeal& p2);

/// pair_admissible plus (pi_i / p_j) = 1 for all i != j among the three,
/// (eps / p3) = 1 and N(p3) = 1 mod 4.
AdmissibilityReport triple_admissible(const PrimeIdeal& p1, const PrimeIdeal& p2,
                                      const PrimeIdeal& p3);

/// Solve and normalize the conic for the pair's normalized generators and
/// assemble the extension data. For double-inert pairs satisfying the
/// rational Redei conditions the integer solution is recorded as well.
RedeiData build_redei(const PrimeIdeal& p1, const PrimeIdeal& p2,
                      const RedeiOptions& options = {});

/// Symbolic integrality and norm checks for the given data; worked-example
/// registry identities run when the pair matches one. Throws WitnessFailed
/// naming the identity that broke.
WitnessReport integrality_witnesses(const RedeiData& data);

/// The hard-coded worked-example identities on their own (quadratic and
/// octic integrality witnesses plus relative-norm values for the three
/// published instances). Returns the number of example blocks verified.
int paper_witness_registry_check();

struct TripleEvaluation {
    int symbol;
    ResidueElement s; // sqrt of pi1 mod p3
    ResidueElement u; // (x + y s) mod p3, or the conjugate fallback
    RedeiData data;
};

/// [p1, p2, p3] by the decomposition route: -1 iff p3 does not split
/// completely in K.
TripleEvaluation triple_symbol_detail(const PrimeIdeal& p1, const PrimeIdeal& p2,
                                      const PrimeIdeal& p3, long height_bound = 80);
int triple_symbol(const PrimeIdeal& p1, const PrimeIdeal& p2, const PrimeIdeal& p3);

/// Symbol of the same triple computed from the rational (composite-route)
/// solution, when the data carries one.
std::optional<int> rational_route_symbol(const RedeiData& data, const PrimeIdeal& p3);

/// Frobenius conjugacy class of p3 in Gal(K/k) = D8 as a unipotent matrix:
/// e12, e23 from the quadratic symbols, e13 from the triple symbol when
/// both vanish.
D8Class frobenius_class(const RedeiData& data, const PrimeIdeal& p3);

} // namespace qrs
