#pragma once

#include "qrs/magnus.hpp"

namespace qrs {

/// The span of the coefficient functionals mu2(I; .) for 1 <= |I| <= D-1,
/// with the basis ordered by (length, lex).
struct FunctionalSpace {
    int s, D;

    FunctionalSpace(int s, int D);

    long dimension() const { return (long)basis.size(); }
    long position(const std::vector<int>& I) const;

    std::vector<std::vector<int>> basis;

    bool operator==(const FunctionalSpace& o) const { return s == o.s && D == o.D; }
};

/// F_2-linear combination of coefficient functionals; evaluates on words.
class CochainFunctional {
public:
    explicit CochainFunctional(FunctionalSpace space);
    /// The basis functional mu2(I; .).
    static CochainFunctional dual(const FunctionalSpace& space, const std::vector<int>& I);
    /// Text form `mu[1,2,3]+mu[1]`; `0` for the zero functional.
    static CochainFunctional parse(const FunctionalSpace& space, const std::string& text);

    const FunctionalSpace& space() const { return space_; }
    int bit(long pos) const { return bits_[(size_t)pos]; }
    bool is_zero() const;
    /// True when the support involves only indices of length 1.
    bool degree_one() const;

    int operator()(const FreeWord& w) const;
    CochainFunctional operator+(const CochainFunctional& o) const;
    bool operator==(const CochainFunctional& o) const { return bits_ == o.bits_; }
    std::string to_string() const;

private:
    FunctionalSpace space_;
    std::vector<unsigned char> bits_;
};

/// 2-cochain spanned by cup products of basis functionals, stored as the
/// matrix of its coefficients: value(v, w) = sum M[I][J] mu2(I;v) mu2(J;w).
class TwoCochainValue {
public:
    explicit TwoCochainValue(FunctionalSpace space);
    static TwoCochainValue cup(const CochainFunctional& f, const CochainFunctional& g);

    const FunctionalSpace& space() const { return space_; }
    int entry(long i, long j) const;
    void toggle(long i, long j);
    bool is_zero() const;

    int operator()(const FreeWord& v, const FreeWord& w) const;
    TwoCochainValue operator+(const TwoCochainValue& o) const;
    bool operator==(const TwoCochainValue& o) const { return bits_ == o.bits_; }

private:
    FunctionalSpace space_;
    std::vector<unsigned char> bits_;
};

/// (df)(v, w) = f(v) + f(w) + f(vw), expanded over the basis through the
/// product rule: d(mu2(I;.)) = sum over proper splittings I = JK of
/// mu2(J;.) cup mu2(K;.).
TwoCochainValue coboundary(const CochainFunctional& f);

/// The pair (omega13, omega24) = (mu2((12);.) + lambda1, mu2((23);.) + lambda2)
/// with d omega13 = chi1 cup chi2 and d omega24 = chi2 cup chi3 verified.
/// chi_i must be the duals mu2((i);.); the perturbations must be degree-1
/// functionals (equivalently cocycles), otherwise InvalidPerturbation.
std::pair<CochainFunctional, CochainFunctional> defining_system(
    const CochainFunctional& chi1, const CochainFunctional& chi2,
    const CochainFunctional& chi3, const CochainFunctional& lambda1,
    const CochainFunctional& lambda2);

/// A functional b with db = z, of minimal support in the graded basis order;
/// throws NotACoboundary when no such b exists. The full solution set is
/// b + span of the degree-1 duals (the kernel of d).
CochainFunctional solve_primitive(const TwoCochainValue& z);

/// <chi1, chi2, chi3> paired with f: builds the defining system, solves
/// db = chi1 cup omega24 + omega13 cup chi3 and returns b(f). Requires
/// mu2(J; f) = 0 for all |J| <= 2; the result is asserted against the
/// direct coefficient mu2((123); f).
int triple_massey_pairing(const FreeWord& f, const CochainFunctional& lambda1,
                          const CochainFunctional& lambda2);
int triple_massey_pairing(const FreeWord& f);

} // namespace qrs
