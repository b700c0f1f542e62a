#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qrs/field.hpp"

namespace qrs {

enum class SplitKind { split, inert, ramified };

std::string to_string(SplitKind k);

/// An odd prime ideal of O_k. For split primes, `root` is the residue
/// r mod ell with r^2 = p that this prime's residue map sends sqrt(p) to;
/// the stored generator reduces to 0 under that map.
class PrimeIdeal {
public:
    /// All prime ideals above an odd rational prime ell (two if split,
    /// one otherwise), with generators found by a Pell-type scan.
    static std::vector<PrimeIdeal> splitting_type(const QuadField& field, const Int& ell);
    /// The one ideal above ell whose root matches (split), or the unique
    /// ideal above ell.
    static PrimeIdeal above(const QuadField& field, const Int& ell,
                            const std::optional<Int>& root = std::nullopt);

    const QuadField& field() const { return field_; }
    const Int& ell() const { return ell_; }
    SplitKind kind() const { return kind_; }
    const Int& root() const { return root_; } // split only
    const RingElement& generator() const { return gen_; }
    const Int& norm() const { return norm_; }

    bool operator==(const PrimeIdeal& o) const {
        return ell_ == o.ell_ && kind_ == o.kind_ && root_ == o.root_;
    }
    bool operator!=(const PrimeIdeal& o) const { return !(*this == o); }
    bool operator<(const PrimeIdeal& o) const {
        if (ell_ != o.ell_) return ell_ < o.ell_;
        return root_ < o.root_;
    }

    /// Text form `(<ell>,<kind>,<root-or-dash>)`.
    std::string to_string() const;
    static PrimeIdeal parse(const QuadField& field, const std::string& text);

private:
    PrimeIdeal(QuadField field, Int ell, SplitKind kind, Int root, RingElement gen, Int norm)
        : field_(std::move(field)), ell_(std::move(ell)), kind_(kind), root_(std::move(root)),
          gen_(std::move(gen)), norm_(std::move(norm)) {}

    QuadField field_;
    Int ell_;
    SplitKind kind_;
    Int root_; // -1 when not split
    RingElement gen_;
    Int norm_;
};

/// O_k/p: F_ell for split/ramified primes, F_ell[theta]/(theta^2 - p)
/// for inert ones.
struct ResidueContext {
    Int ell;
    Int pmod;       // p mod ell (theta^2)
    bool quadratic; // inert residue field
    Int size;       // ell or ell^2
};

class ResidueElement {
public:
    ResidueElement(ResidueContext ctx, Int c, Int d = 0);

    const ResidueContext& ctx() const { return ctx_; }
    const Int& c() const { return c_; }
    const Int& d() const { return d_; }
    bool is_zero() const { return c_ == 0 && d_ == 0; }
    bool is_one() const { return c_ == 1 && d_ == 0; }

    ResidueElement operator+(const ResidueElement& o) const;
    ResidueElement operator-(const ResidueElement& o) const;
    ResidueElement operator*(const ResidueElement& o) const;
    ResidueElement operator-() const;
    bool operator==(const ResidueElement& o) const { return c_ == o.c_ && d_ == o.d_; }
    bool operator!=(const ResidueElement& o) const { return !(*this == o); }

    ResidueElement pow(const Int& e) const;
    ResidueElement inverse() const;
    /// lexicographically smaller of {x, -x} on (c, d) in [0, ell)^2
    ResidueElement lex_min_of_pair() const;

    std::string to_string() const;

private:
    ResidueContext ctx_;
    Int c_, d_;
};

/// The residue map O_k -> O_k/p (ring homomorphism; sqrt(p) goes to
/// root for split primes, to theta for inert, to 0 for ramified).
ResidueElement reduce(const RingElement& e, const PrimeIdeal& ideal);

ResidueContext residue_context(const PrimeIdeal& ideal);

/// Euler criterion in the residue field; throws NotCoprime when the
/// reduction vanishes.
int quad_symbol(const RingElement& a, const PrimeIdeal& ideal);
int quad_symbol_residue(const ResidueElement& r);

/// Square root in the residue field (Tonelli-Shanks, works in F_ell and
/// F_ell^2); canonical choice is the lexicographically smaller of +-s.
ResidueElement sqrt_mod(const PrimeIdeal& ideal, const ResidueElement& a);

/// Square root mod an odd rational prime; absent for nonresidues.
std::optional<Int> sqrt_mod_prime(const Int& a, const Int& ell);

struct Place {
    enum class Tag { finite, infinite_1, infinite_2 };
    Tag tag;
    std::optional<PrimeIdeal> ideal;

    static Place finite(PrimeIdeal p) { return Place{Tag::finite, std::move(p)}; }
    static Place inf1() { return Place{Tag::infinite_1, std::nullopt}; }
    static Place inf2() { return Place{Tag::infinite_2, std::nullopt}; }
};

/// Sign of the real embedding at an infinite place; finite places rejected.
int place_symbol(const RingElement& a, const Place& place);

struct Valuation {
    long v;
    RingElement unit; // a / pi^v
};
Valuation split_off(const RingElement& a, const PrimeIdeal& ideal);

/// Tame Hilbert symbol at an odd finite place, or the sign rule at a real
/// place. Dyadic places are not representable here; see dyadic_hilbert.
int hilbert_symbol(const RingElement& a, const RingElement& b, const Place& place);

/// Hilbert symbol at the (inert, p = 5 mod 8) dyadic place, decided by a
/// primitive-solution search for z^2 = a x^2 + b y^2 modulo 2^6.
int dyadic_hilbert(const RingElement& a, const RingElement& b);

/// Product of all local Hilbert symbols over places dividing 2ab∞.
bool product_formula_check(const RingElement& a, const RingElement& b);

struct GeneratorFlags {
    bool require_one_mod4 = false;
    bool require_totally_positive = false;
};

/// Generator satisfying the requested flags, searched over associates
/// +-eps^j * pi for |j| <= 8 (smallest |j| first, positive sign preferred).
RingElement normalized_generator(const PrimeIdeal& ideal, const GeneratorFlags& flags);

/// Rational prime factorization by trial division (desk scale).
std::vector<std::pair<Int, int>> factor_rational(Int n);

} // namespace qrs
