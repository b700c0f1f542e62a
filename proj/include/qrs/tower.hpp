#pragma once

#include <gmpxx.h>

#include <vector>

#include "qrs/field.hpp"

namespace qrs {

using Rat = mpq_class;

/// Exact arithmetic in a tower Q < Q(r1) < Q(r1,r2) < Q(r1,r2,r3) of
/// quadratic steps, with r1^2 rational, r2^2 in the first step and r3^2 in
/// the second. Dimensions 2, 4, 8 over Q; no minimality assumptions, the
/// algebra laws alone are used.
struct TowerL1 {
    Rat a, b; // a + b r1
};
struct TowerL2 {
    TowerL1 a, b; // + r2
};
struct TowerL3 {
    TowerL2 a, b; // + r3
};

class QuadTower {
public:
    QuadTower(Rat d1, TowerL1 d2, TowerL2 d3)
        : d1_(std::move(d1)), d2_(std::move(d2)), d3_(std::move(d3)) {}

    const Rat& d1() const { return d1_; }
    const TowerL1& d2() const { return d2_; }
    const TowerL2& d3() const { return d3_; }

    TowerL1 add(const TowerL1& x, const TowerL1& y) const;
    TowerL1 sub(const TowerL1& x, const TowerL1& y) const;
    TowerL1 mul(const TowerL1& x, const TowerL1& y) const;
    TowerL2 add(const TowerL2& x, const TowerL2& y) const;
    TowerL2 sub(const TowerL2& x, const TowerL2& y) const;
    TowerL2 mul(const TowerL2& x, const TowerL2& y) const;
    TowerL3 add(const TowerL3& x, const TowerL3& y) const;
    TowerL3 sub(const TowerL3& x, const TowerL3& y) const;
    TowerL3 mul(const TowerL3& x, const TowerL3& y) const;

    static bool is_zero(const TowerL1& x) { return x.a == 0 && x.b == 0; }
    static bool is_zero(const TowerL2& x) { return is_zero(x.a) && is_zero(x.b); }
    static bool is_zero(const TowerL3& x) { return is_zero(x.a) && is_zero(x.b); }

    static TowerL1 scalar1(const Rat& c) { return TowerL1{c, 0}; }
    static TowerL2 scalar2(const Rat& c) { return TowerL2{scalar1(c), scalar1(0)}; }
    static TowerL3 scalar3(const Rat& c) { return TowerL3{scalar2(c), scalar2(0)}; }

    /// sum coeffs[i] x^i with integer coefficients, by Horner evaluation
    TowerL2 eval_poly(const std::vector<Int>& coeffs, const TowerL2& x) const;
    TowerL3 eval_poly(const std::vector<Int>& coeffs, const TowerL3& x) const;

private:
    Rat d1_;
    TowerL1 d2_;
    TowerL2 d3_;
};

/// Element a + b sqrt(p) of k with rational coordinates.
struct KElementQ {
    Rat a, b;
};

/// Membership in O_k for p = 1 mod 4: both doubled coordinates integral
/// and of equal parity.
bool is_integral(const KElementQ& e);

KElementQ k_add(const KElementQ& x, const KElementQ& y);
KElementQ k_sub(const KElementQ& x, const KElementQ& y);
KElementQ k_mul(const KElementQ& x, const KElementQ& y, const Int& p);
KElementQ k_from_ring(const RingElement& e);

} // namespace qrs
