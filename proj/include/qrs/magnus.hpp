#pragma once

#include <string>
#include <vector>

#include "qrs/errors.hpp"

namespace qrs {

/// Letter x_index^exponent; exponents live mod 2^16 (stored in the signed
/// window (-2^15, 2^15]), which is exact for every binomial bit the
/// truncated expansion ever consults.
struct Letter {
    int index;
    int exponent;
};

/// Word in the free group on x_1..x_s, kept in canonical form: adjacent
/// letters with equal index merged, zero exponents dropped.
class FreeWord {
public:
    explicit FreeWord(int s) : s_(s) {}
    static FreeWord generator(int s, int i, long exponent = 1);
    /// Text form `x1^3 x2^-1 x1` (whitespace separated, `^1` optional).
    static FreeWord parse(int s, const std::string& text);

    int generators() const { return s_; }
    const std::vector<Letter>& letters() const { return letters_; }
    bool is_identity() const { return letters_.empty(); }

    FreeWord operator*(const FreeWord& o) const;
    FreeWord inverse() const;
    FreeWord pow(long e) const;
    /// w * this * w^-1
    FreeWord conjugate_by(const FreeWord& w) const;
    static FreeWord commutator(const FreeWord& a, const FreeWord& b);

    bool operator==(const FreeWord& o) const;
    bool operator<(const FreeWord& o) const;
    std::string to_string() const;

private:
    void push(int index, long exponent);

    int s_;
    std::vector<Letter> letters_;
};

/// Element of F_2<<X_1..X_s>> truncated to total degree < D, stored as a
/// dense bit vector over all multi-indices of length 0..D-1.
class TruncatedSeries {
public:
    TruncatedSeries(int s, int D);
    static TruncatedSeries one(int s, int D);

    int generators() const { return s_; }
    int truncation() const { return D_; }
    long dimension() const { return (long)bits_.size(); }

    int coeff(const std::vector<int>& I) const;
    void set_coeff(const std::vector<int>& I, int bit);

    TruncatedSeries operator+(const TruncatedSeries& o) const;
    TruncatedSeries operator*(const TruncatedSeries& o) const;
    bool operator==(const TruncatedSeries& o) const { return bits_ == o.bits_; }
    bool operator!=(const TruncatedSeries& o) const { return !(*this == o); }

    /// One `I:1` line per nonzero coefficient, sorted by (length, lex);
    /// the empty index prints as `()`.
    std::string dump() const;

    /// Enumeration of all stored multi-indices in dump order.
    std::vector<std::vector<int>> indices() const;

private:
    long position(const std::vector<int>& I) const;

    int s_, D_;
    std::vector<unsigned char> bits_;
};

/// Multiplicative extension of M(x_i) = 1 + X_i; powers expand through
/// binomial coefficients mod 2 (Lucas on the exponent residue).
TruncatedSeries expand(const FreeWord& w, int D);

/// Coefficient of X_I in expand(w).
int mu2(const std::vector<int>& I, const FreeWord& w, int D = 4);

/// The same coefficient through iterated free derivatives and augmentation
/// (innermost derivative taken in the last index). Exponential in the
/// exponent sizes; meant as an independent cross-check.
int fox_mu2(const std::vector<int>& I, const FreeWord& w);

/// Smallest |I| with a nonzero coefficient, or D when every coefficient of
/// positive length vanishes (depth at least D).
long zassenhaus_depth(const FreeWord& w, int D);

/// Upper unitriangular 3x3 matrix over F_2, the dihedral group of order 8.
struct UnipotentMatrix {
    int e12 = 0, e23 = 0, e13 = 0;

    UnipotentMatrix mul(const UnipotentMatrix& o) const {
        return UnipotentMatrix{(e12 + o.e12) & 1, (e23 + o.e23) & 1,
                               (e13 + o.e13 + e12 * o.e23) & 1};
    }
    bool identity() const { return e12 == 0 && e23 == 0 && e13 == 0; }
    bool operator==(const UnipotentMatrix& o) const {
        return e12 == o.e12 && e23 == o.e23 && e13 == o.e13;
    }
};

/// (mu2((1);w), mu2((2);w), mu2((12);w)) as matrix entries.
UnipotentMatrix rho(const FreeWord& w);

/// Shortest word in the dihedral generators s (reflection) and t (rotation)
/// representing the matrix; identity gives the empty string.
std::string d8_translate(const UnipotentMatrix& m);

/// x_i^(Np-1) [x_i, y].
FreeWord relator_word(int i, long Np, const FreeWord& y);

/// mu2((12); y3), the candidate third-order invariant. Requires the degree-1
/// coefficients at indices 1 and 2 to vanish.
int milnor_triple(const FreeWord& y3);

} // namespace qrs
