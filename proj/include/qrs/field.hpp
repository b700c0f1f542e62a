#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>
#include <utility>

#include "qrs/errors.hpp"

namespace qrs {

using Int = mpz_class;

bool is_probable_prime(const Int& n);
bool is_perfect_square(const Int& n);
Int isqrt(const Int& n);

/// Real quadratic field Q(sqrt(p)) with p prime, p = 1 mod 4.
/// The ring of integers is Z[w] with w = (1+sqrt(p))/2, so the
/// field discriminant equals p and (p-1)/4 is an integer.
class QuadField {
public:
    explicit QuadField(Int p);

    const Int& p() const { return p_; }
    // w^2 = q + w with q = (p-1)/4
    const Int& omega_sq_const() const { return q_; }
    bool operator==(const QuadField& o) const { return p_ == o.p_; }
    bool operator!=(const QuadField& o) const { return p_ != o.p_; }

private:
    Int p_;
    Int q_;
};

/// Element a + b*w of O_k in the integral basis {1, w}, w = (1+sqrt(p))/2.
/// Half coordinates: a + b*w = (u + v*sqrt(p))/2 with u = 2a+b, v = b.
class RingElement {
public:
    RingElement(const QuadField& field, Int a, Int b)
        : field_(field), a_(std::move(a)), b_(std::move(b)) {}
    RingElement(const QuadField& field, long a) : field_(field), a_(a), b_(0) {}

    // (u + v*sqrt(p))/2; throws unless u = v mod 2
    static RingElement from_half_coords(const QuadField& field, const Int& u, const Int& v);
    // x + y*sqrt(p) with integer x, y
    static RingElement from_sqrt_coords(const QuadField& field, const Int& x, const Int& y);

    const QuadField& field() const { return field_; }
    const Int& a() const { return a_; }
    const Int& b() const { return b_; }
    Int half_u() const { return 2 * a_ + b_; } // numerator of the rational part, times 2
    Int half_v() const { return b_; }          // numerator of the sqrt(p) part, times 2

    bool is_zero() const { return a_ == 0 && b_ == 0; }
    bool is_rational() const { return b_ == 0; }

    RingElement conj() const { return RingElement(field_, a_ + b_, -b_); }
    Int norm() const;  // a^2 + ab - b^2 (p-1)/4
    Int trace() const { return 2 * a_ + b_; }

    RingElement operator-() const { return RingElement(field_, -a_, -b_); }
    RingElement operator+(const RingElement& o) const;
    RingElement operator-(const RingElement& o) const;
    RingElement operator*(const RingElement& o) const;
    RingElement operator*(const Int& n) const { return RingElement(field_, a_ * n, b_ * n); }
    bool operator==(const RingElement& o) const;
    bool operator!=(const RingElement& o) const { return !(*this == o); }
    // total order used only for canonical tie-breaking
    bool operator<(const RingElement& o) const;

    RingElement pow(unsigned long e) const;

    /// Signs of the two real embeddings, computed by integer comparison
    /// of (2a+b)^2 against b^2 p. Throws on zero input.
    int sign_inf1() const;
    int sign_inf2() const { return conj().sign_inf1(); }
    bool totally_positive() const { return sign_inf1() > 0 && sign_inf2() > 0; }

    /// Canonical text form "<a>+<b>w" (signed decimal, omega basis).
    std::string to_string() const;
    /// Display form "(u + v sqrt(p))/2" in lowest terms.
    std::string pretty() const;
    static RingElement parse(const QuadField& field, const std::string& text);

private:
    QuadField field_;
    Int a_, b_;
};

inline RingElement operator*(const Int& n, const RingElement& e) { return e * n; }

/// norm, trace and the conjugate under the nontrivial automorphism.
struct NormTraceConj {
    Int norm;
    Int trace;
    RingElement conj;
};
NormTraceConj norm_trace_conj(const RingElement& e);

/// Both real-embedding signs; zero input rejected.
std::pair<int, int> real_signs(const RingElement& e);

/// Exact division e1/e2 in O_k, if the quotient is integral.
std::optional<RingElement> divide_exact(const RingElement& e1, const RingElement& e2);

/// e1 = e2 mod (m); zero modulus rejected.
bool congruent(const RingElement& e1, const RingElement& e2, const RingElement& m);

/// Square root in O_k if one exists; absence is a value, not an error.
/// The candidate satisfies c^2 + d^2 p = 2u, cd = v in half coordinates,
/// so c^2 and d^2 p are the roots of X^2 - 2uX + pv^2, which reduces the
/// test to two integer square-root checks.
std::optional<RingElement> sqrt_element(const RingElement& t);

struct UnitData {
    RingElement fundamental_unit;
    int unit_norm; // +1 or -1
};

/// Smallest unit > 1 at the first real place, found from the
/// continued-fraction expansion of w = (1+sqrt(p))/2.
UnitData fundamental_unit(const QuadField& field);

struct ClassData {
    Int h;
    Int h_plus;
};

/// Class number by counting cycles of reduced indefinite binary quadratic
/// forms of discriminant p; h+ from the {h, 2h} dichotomy keyed on N(eps).
ClassData class_numbers(const QuadField& field);

} // namespace qrs
