#pragma once

#include <optional>

#include "qrs/residue.hpp"

namespace qrs {

/// O_k-point of x^2 - pi1 y^2 - pi2 z^2 = 0, with the normalization flags
/// the D8-extension construction needs.
struct ConicSolution {
    RingElement x, y, z;
    bool primitive;     // no rational prime or prime element divides x, y, z
    bool y_even;        // y in 2 O_k
    bool xy_normalized; // x - y = 1 mod 4 O_k
};

struct ConicOptions {
    long height_bound = 60;
    std::optional<PrimeIdeal> avoid; // skip solutions with z = 0 mod this ideal
};

/// The prime ideal generated by a prime element (norm +-ell or +-ell^2
/// with rational prime part). Rejects non-prime elements.
PrimeIdeal ideal_of(const RingElement& pi);

/// Recompute all flags for a coordinate triple (the equation is not checked
/// here; see verify_solution).
ConicSolution make_solution(const RingElement& x, const RingElement& y, const RingElement& z);

/// First solution in a deterministic scan of (y, z) by increasing max
/// coordinate height, with y restricted to 2 O_k and x recovered by the
/// exact square-root test. Hypotheses on pi1, pi2 (both = 1 mod 4 O_k,
/// totally positive, mutual symbols and unit symbols +1) are enforced.
ConicSolution solve_conic(const RingElement& pi1, const RingElement& pi2,
                          const ConicOptions& options = {});

/// Like solve_conic, but skips scan hits whose unit orbit misses the
/// normalization flags (and hits whose normalized z lands on the avoided
/// prime) and returns the first solution that fully normalizes.
ConicSolution solve_conic_normalized(const RingElement& pi1, const RingElement& pi2,
                                     const ConicOptions& options = {});

/// Divide out common factors, then search {+-eps^j (x,y,z)} and x-sign
/// flips (|j| <= 8) for a representative with all flags true.
ConicSolution normalize_solution(const ConicSolution& sol, const RingElement& pi1,
                                 const RingElement& pi2);

/// Exact re-check of the equation, nontriviality, and the stored flags.
bool verify_solution(const ConicSolution& sol, const RingElement& pi1, const RingElement& pi2);

} // namespace qrs
