#include "qrs/residue.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <vector>

namespace qrs {

namespace {

Int mod_nonneg(const Int& x, const Int& m) {
    Int r;
    mpz_fdiv_r(r.get_mpz_t(), x.get_mpz_t(), m.get_mpz_t());
    return r;
}

// Element of norm +-ell, by scanning u^2 - p v^2 = +-4 ell with v bounded
// in terms of the fundamental unit (a principal generator, if one exists,
// can be unit-adjusted into this window).
RingElement generator_of_norm(const QuadField& F, const Int& ell) {
    UnitData ud = fundamental_unit(F);
    Int s = isqrt(F.p());
    Int eb = abs(ud.fundamental_unit.half_u()) + abs(ud.fundamental_unit.half_v()) * (s + 1);
    Int vbound = (2 * (isqrt(ell) + 1) * (eb + 2)) / s + 2;
    for (Int v = 0; v <= vbound; ++v) {
        Int base = F.p() * v * v;
        for (int sg : {+1, -1}) {
            Int usq = base + sg * 4 * ell;
            if (usq < 0 || !is_perfect_square(usq)) continue;
            Int u = isqrt(usq);
            if ((u - v) % 2 != 0) continue;
            return RingElement::from_half_coords(F, u, v);
        }
    }
    throw Error("no principal element of norm +-" + ell.get_str() +
                " in Q(sqrt " + F.p().get_str() + "); class number may exceed 1");
}

} // namespace

std::string to_string(SplitKind k) {
    switch (k) {
    case SplitKind::split: return "split";
    case SplitKind::inert: return "inert";
    case SplitKind::ramified: return "ramified";
    }
    return "?";
}

std::vector<PrimeIdeal> PrimeIdeal::splitting_type(const QuadField& field, const Int& ell) {
    if (ell < 3 || ell % 2 == 0 || !is_probable_prime(ell))
        throw UsageError("splitting_type needs an odd prime, got " + ell.get_str());
    if (ell == field.p()) {
        // (sqrt p)^2 = (p), the ramified prime
        RingElement g = RingElement::from_sqrt_coords(field, 0, 1);
        return {PrimeIdeal(field, ell, SplitKind::ramified, -1, g, field.p())};
    }
    Int pm = field.p() % ell;
    if (mpz_legendre(pm.get_mpz_t(), ell.get_mpz_t()) == -1) {
        return {PrimeIdeal(field, ell, SplitKind::inert, -1,
                           RingElement(field, ell, 0), Int(ell * ell))};
    }
    Int r1 = *sqrt_mod_prime(pm, ell);
    Int r2 = ell - r1;
    if (r2 < r1) std::swap(r1, r2);
    RingElement g = generator_of_norm(field, ell);
    std::vector<PrimeIdeal> out;
    for (const Int& r : {r1, r2}) {
        // g lies in the prime with root r iff u + v r = 0 mod ell
        bool mine = mod_nonneg(g.half_u() + g.half_v() * r, ell) == 0;
        out.push_back(PrimeIdeal(field, ell, SplitKind::split, r, mine ? g : g.conj(), ell));
    }
    return out;
}

PrimeIdeal PrimeIdeal::above(const QuadField& field, const Int& ell,
                             const std::optional<Int>& root) {
    auto primes = splitting_type(field, ell);
    if (!root) {
        if (primes.size() == 1) return primes[0];
        throw UsageError(ell.get_str() + " splits; a root is required to pick the prime");
    }
    Int r = mod_nonneg(*root, ell);
    for (const auto& P : primes)
        if (P.kind() == SplitKind::split && P.root() == r) return P;
    throw UsageError("no prime over " + ell.get_str() + " with root " + r.get_str());
}

std::string PrimeIdeal::to_string() const {
    std::string r = kind_ == SplitKind::split ? root_.get_str() : "-";
    return "(" + ell_.get_str() + "," + qrs::to_string(kind_) + "," + r + ")";
}

PrimeIdeal PrimeIdeal::parse(const QuadField& field, const std::string& text) {
    if (text.size() < 2 || text.front() != '(' || text.back() != ')')
        throw UsageError("bad ideal literal '" + text + "'");
    std::string body = text.substr(1, text.size() - 2);
    std::vector<std::string> parts;
    std::istringstream is(body);
    std::string piece;
    while (std::getline(is, piece, ',')) parts.push_back(piece);
    if (parts.size() != 3)
        throw UsageError("bad ideal literal '" + text + "': expected (<ell>,<kind>,<root-or-dash>)");
    Int ell;
    try {
        ell = Int(parts[0]);
    } catch (const std::invalid_argument&) {
        throw UsageError("bad ideal literal '" + text + "'");
    }
    std::optional<Int> root;
    if (parts[2] != "-") {
        try {
            root = Int(parts[2]);
        } catch (const std::invalid_argument&) {
            throw UsageError("bad ideal literal '" + text + "'");
        }
    }
    PrimeIdeal P = above(field, ell, root);
    if (qrs::to_string(P.kind()) != parts[1])
        throw UsageError("ideal literal '" + text + "' has kind " + qrs::to_string(P.kind()));
    return P;
}

ResidueContext residue_context(const PrimeIdeal& ideal) {
    ResidueContext ctx;
    ctx.ell = ideal.ell();
    ctx.pmod = ideal.field().p() % ideal.ell();
    ctx.quadratic = ideal.kind() == SplitKind::inert;
    ctx.size = ctx.quadratic ? Int(ideal.ell() * ideal.ell()) : ideal.ell();
    return ctx;
}

ResidueElement::ResidueElement(ResidueContext ctx, Int c, Int d) : ctx_(std::move(ctx)) {
    c_ = mod_nonneg(c, ctx_.ell);
    d_ = mod_nonneg(d, ctx_.ell);
    if (!ctx_.quadratic && d_ != 0)
        throw UsageError("theta component in a prime residue field");
}

ResidueElement ResidueElement::operator+(const ResidueElement& o) const {
    return ResidueElement(ctx_, c_ + o.c_, d_ + o.d_);
}

ResidueElement ResidueElement::operator-(const ResidueElement& o) const {
    return ResidueElement(ctx_, c_ - o.c_, d_ - o.d_);
}

ResidueElement ResidueElement::operator*(const ResidueElement& o) const {
    // (c1 + d1 th)(c2 + d2 th), th^2 = p
    return ResidueElement(ctx_, c_ * o.c_ + d_ * o.d_ * ctx_.pmod, c_ * o.d_ + d_ * o.c_);
}

ResidueElement ResidueElement::operator-() const {
    return ResidueElement(ctx_, -c_, -d_);
}

ResidueElement ResidueElement::pow(const Int& e) const {
    if (e < 0) throw UsageError("negative exponent; use inverse()");
    ResidueElement r(ctx_, 1);
    ResidueElement base = *this;
    size_t nbits = mpz_sizeinbase(e.get_mpz_t(), 2);
    if (e == 0) return r;
    for (size_t i = 0; i < nbits; ++i) {
        if (mpz_tstbit(e.get_mpz_t(), i)) r = r * base;
        if (i + 1 < nbits) base = base * base;
    }
    return r;
}

ResidueElement ResidueElement::inverse() const {
    if (is_zero()) throw UsageError("inverse of zero residue");
    return pow(ctx_.size - 2);
}

ResidueElement ResidueElement::lex_min_of_pair() const {
    ResidueElement neg = -*this;
    if (neg.c_ < c_ || (neg.c_ == c_ && neg.d_ < d_)) return neg;
    return *this;
}

std::string ResidueElement::to_string() const {
    if (d_ == 0) return c_.get_str();
    return c_.get_str() + "+" + d_.get_str() + "*theta";
}

ResidueElement reduce(const RingElement& e, const PrimeIdeal& ideal) {
    ResidueContext ctx = residue_context(ideal);
    Int inv2 = (ctx.ell + 1) / 2; // 2^{-1} mod ell
    switch (ideal.kind()) {
    case SplitKind::split:
        // w = (1 + sqrt p)/2 -> (1 + root)/2
        return ResidueElement(ctx, e.a() + e.b() * (1 + ideal.root()) * inv2);
    case SplitKind::ramified:
        // sqrt p -> 0, so w -> 1/2
        return ResidueElement(ctx, e.a() + e.b() * inv2);
    case SplitKind::inert:
        // w -> (1 + th)/2
        return ResidueElement(ctx, e.a() + e.b() * inv2, e.b() * inv2);
    }
    throw Error("unreachable");
}

int quad_symbol_residue(const ResidueElement& r) {
    if (r.is_zero()) throw NotCoprime("quadratic symbol of zero residue");
    ResidueElement s = r.pow((r.ctx().size - 1) / 2);
    if (s.is_one()) return 1;
    if (s == -ResidueElement(r.ctx(), 1)) return -1;
    throw Error("Euler criterion landed outside {+-1}");
}

int quad_symbol(const RingElement& a, const PrimeIdeal& ideal) {
    return quad_symbol_residue(reduce(a, ideal));
}

std::optional<Int> sqrt_mod_prime(const Int& a, const Int& ell) {
    if (ell < 3 || ell % 2 == 0 || !is_probable_prime(ell))
        throw UsageError("sqrt_mod_prime needs an odd prime modulus");
    Int am = mod_nonneg(a, ell);
    if (am == 0) return Int(0);
    if (mpz_legendre(am.get_mpz_t(), ell.get_mpz_t()) == -1) return std::nullopt;
    ResidueContext ctx{ell, Int(0), false, ell};
    // Tonelli-Shanks in F_ell via the generic residue-field routine
    Int q = ell - 1;
    unsigned e = 0;
    while (q % 2 == 0) { q /= 2; ++e; }
    Int z = 2;
    while (mpz_legendre(z.get_mpz_t(), ell.get_mpz_t()) != -1) ++z;
    ResidueElement c = ResidueElement(ctx, z).pow(q);
    ResidueElement t = ResidueElement(ctx, am).pow(q);
    ResidueElement r = ResidueElement(ctx, am).pow((q + 1) / 2);
    unsigned m = e;
    while (!t.is_one()) {
        unsigned i = 0;
        ResidueElement t2 = t;
        while (!t2.is_one()) { t2 = t2 * t2; ++i; }
        ResidueElement b = c;
        for (unsigned k = 0; k + i + 1 < m; ++k) b = b * b;
        c = b * b;
        t = t * c;
        r = r * b;
        m = i;
    }
    return r.c();
}

ResidueElement sqrt_mod(const PrimeIdeal& ideal, const ResidueElement& a) {
    if (a.is_zero()) throw UsageError("sqrt of zero residue");
    if (quad_symbol_residue(a) != 1)
        throw NonResidue(a.to_string() + " is a nonresidue at " + ideal.to_string());
    const ResidueContext& ctx = a.ctx();
    Int q = ctx.size - 1;
    unsigned e = 0;
    while (q % 2 == 0) { q /= 2; ++e; }
    // a quadratic nonresidue of the residue field
    ResidueElement z(ctx, 0);
    if (!ctx.quadratic) {
        for (Int cc = 2;; ++cc) {
            ResidueElement cand(ctx, cc);
            if (quad_symbol_residue(cand) == -1) { z = cand; break; }
        }
    } else {
        // every F_ell scalar is a square in F_{ell^2}; scan the th-line
        for (Int cc = 0;; ++cc) {
            ResidueElement cand(ctx, cc, 1);
            if (quad_symbol_residue(cand) == -1) { z = cand; break; }
        }
    }
    ResidueElement c = z.pow(q);
    ResidueElement t = a.pow(q);
    ResidueElement r = a.pow((q + 1) / 2);
    unsigned m = e;
    while (!t.is_one()) {
        unsigned i = 0;
        ResidueElement t2 = t;
        while (!t2.is_one()) { t2 = t2 * t2; ++i; }
        ResidueElement b = c;
        for (unsigned k = 0; k + i + 1 < m; ++k) b = b * b;
        c = b * b;
        t = t * c;
        r = r * b;
        m = i;
    }
    return r.lex_min_of_pair();
}

int place_symbol(const RingElement& a, const Place& place) {
    if (a.is_zero()) throw UsageError("sign of zero element");
    switch (place.tag) {
    case Place::Tag::infinite_1: return a.sign_inf1();
    case Place::Tag::infinite_2: return a.sign_inf2();
    case Place::Tag::finite: throw UsageError("place_symbol is for real places; use quad_symbol");
    }
    throw Error("unreachable");
}

Valuation split_off(const RingElement& a, const PrimeIdeal& ideal) {
    if (a.is_zero()) throw UsageError("valuation of zero");
    Valuation out{0, a};
    for (;;) {
        auto q = divide_exact(out.unit, ideal.generator());
        if (!q) return out;
        out.unit = *q;
        ++out.v;
    }
}

int hilbert_symbol(const RingElement& a, const RingElement& b, const Place& place) {
    if (a.is_zero() || b.is_zero()) throw UsageError("Hilbert symbol of zero");
    if (place.tag != Place::Tag::finite) {
        int sa = place_symbol(a, place), sb = place_symbol(b, place);
        return (sa < 0 && sb < 0) ? -1 : 1;
    }
    const PrimeIdeal& P = *place.ideal;
    Valuation va = split_off(a, P), vb = split_off(b, P);
    // tame formula: ((-1)^{ab} u^b w^a / P), exponents mod 2
    int result = 1;
    if ((va.v & 1) && (vb.v & 1)) result *= quad_symbol(RingElement(P.field(), -1), P);
    if (vb.v & 1) result *= quad_symbol(va.unit, P);
    if (va.v & 1) result *= quad_symbol(vb.unit, P);
    return result;
}

namespace {

// Arithmetic in (Z/2^k)[w], w^2 = t + w, element a + b w packed as (a << k) | b.
inline unsigned dy_mul(unsigned x, unsigned y, unsigned t, unsigned k) {
    unsigned m = (1u << k) - 1;
    unsigned a1 = x >> k, b1 = x & m, a2 = y >> k, b2 = y & m;
    unsigned bb = b1 * b2;
    return (((a1 * a2 + bb * t) & m) << k) | ((a1 * b2 + b1 * a2 + bb) & m);
}

inline bool dy_unit(unsigned x, unsigned k) { return (((x >> k) | x) & 1u) != 0; }

struct DyadicTable {
    unsigned t6 = 0; // (p-1)/4 mod 64
    std::vector<uint8_t> sq_any;  // 4096 flags: squares in (Z/64)[w]
    std::vector<uint8_t> sq_unit; // squares of units
    std::vector<unsigned> unit_squares8;
    std::map<std::pair<unsigned, unsigned>, int> memo;
};

std::map<unsigned, DyadicTable>& dyadic_cache() {
    static std::map<unsigned, DyadicTable> cache;
    return cache;
}
std::mutex dyadic_mutex;

DyadicTable& dyadic_table(const QuadField& F) {
    unsigned t6 = mpz_fdiv_ui(F.omega_sq_const().get_mpz_t(), 64);
    auto& cache = dyadic_cache();
    auto it = cache.find(t6);
    if (it != cache.end()) return it->second;
    DyadicTable T;
    T.t6 = t6;
    T.sq_any.assign(4096, 0);
    T.sq_unit.assign(4096, 0);
    for (unsigned z = 0; z < 4096; ++z) {
        unsigned s = dy_mul(z, z, t6, 6);
        T.sq_any[s] = 1;
        if (dy_unit(z, 6)) T.sq_unit[s] = 1;
    }
    std::set<unsigned> sq8;
    for (unsigned z = 0; z < 64; ++z)
        if (dy_unit(z, 3)) sq8.insert(dy_mul(z, z, t6 & 7, 3));
    T.unit_squares8.assign(sq8.begin(), sq8.end());
    return cache.emplace(t6, std::move(T)).first->second;
}

// Square-class data of a nonzero element at the inert dyadic place:
// a mod-64 representative (unit class rep mod 8, doubled once for odd
// valuation) and a memo key. Valid because units congruent mod 8 agree
// modulo squares (Hensel) and the symbol only sees square classes.
std::pair<unsigned, unsigned> dyadic_class(const RingElement& e, const DyadicTable& T) {
    Int a = e.a(), b = e.b();
    long alpha = 0;
    while (a % 2 == 0 && b % 2 == 0) { a /= 2; b /= 2; ++alpha; }
    unsigned a8 = mpz_fdiv_ui(a.get_mpz_t(), 8);
    unsigned b8 = mpz_fdiv_ui(b.get_mpz_t(), 8);
    unsigned u8 = (a8 << 3) | b8;
    unsigned rep = ~0u;
    for (unsigned s : T.unit_squares8) rep = std::min(rep, dy_mul(u8, s, T.t6 & 7, 3));
    unsigned a64 = rep >> 3, b64 = rep & 7;
    if (alpha & 1) { a64 <<= 1; b64 <<= 1; }
    return {(a64 << 6) | b64, rep | static_cast<unsigned>((alpha & 1) << 6)};
}

int dyadic_scan(unsigned ae, unsigned be, const DyadicTable& T) {
    std::vector<unsigned> ax(4096), by(4096);
    std::vector<uint8_t> odd(4096);
    for (unsigned i = 0; i < 4096; ++i) {
        unsigned sq = dy_mul(i, i, T.t6, 6);
        ax[i] = dy_mul(ae, sq, T.t6, 6);
        by[i] = dy_mul(be, sq, T.t6, 6);
        odd[i] = dy_unit(i, 6) ? 1 : 0;
    }
    for (unsigned xi = 0; xi < 4096; ++xi) {
        unsigned ah = ax[xi] >> 6, al = ax[xi] & 63;
        bool xu = odd[xi];
        for (unsigned yi = 0; yi < 4096; ++yi) {
            unsigned s = by[yi];
            unsigned idx = (((ah + (s >> 6)) & 63) << 6) | ((al + (s & 63)) & 63);
            if (T.sq_unit[idx]) return 1;                    // odd z
            if ((xu || odd[yi]) && T.sq_any[idx]) return 1;  // odd x or y
        }
    }
    return -1;
}

} // namespace

int dyadic_hilbert(const RingElement& a, const RingElement& b) {
    if (a.is_zero() || b.is_zero()) throw UsageError("Hilbert symbol of zero");
    const QuadField& F = a.field();
    if (F.p() % 8 != 5)
        throw PreconditionFailed("dyadic symbol needs p = 5 mod 8 (2 inert), got p = " +
                                 F.p().get_str());
    std::lock_guard<std::mutex> lock(dyadic_mutex);
    DyadicTable& T = dyadic_table(F);
    auto [ea, ka] = dyadic_class(a, T);
    auto [eb, kb] = dyadic_class(b, T);
    if (ka > kb) { std::swap(ea, eb); std::swap(ka, kb); }
    auto it = T.memo.find({ka, kb});
    if (it != T.memo.end()) return it->second;
    int v = dyadic_scan(ea, eb, T);
    T.memo.emplace(std::make_pair(ka, kb), v);
    return v;
}

bool product_formula_check(const RingElement& a, const RingElement& b) {
    if (a.is_zero() || b.is_zero()) throw UsageError("Hilbert symbol of zero");
    const QuadField& F = a.field();
    int prod = hilbert_symbol(a, b, Place::inf1()) * hilbert_symbol(a, b, Place::inf2());
    prod *= dyadic_hilbert(a, b);
    std::set<Int> ells;
    for (const RingElement* e : {&a, &b})
        for (const auto& [q, mult] : factor_rational(e->norm()))
            if (q != 2) ells.insert(q);
    for (const Int& ell : ells)
        for (const auto& P : PrimeIdeal::splitting_type(F, ell))
            prod *= hilbert_symbol(a, b, Place::finite(P));
    return prod == 1;
}

RingElement normalized_generator(const PrimeIdeal& ideal, const GeneratorFlags& flags) {
    const QuadField& F = ideal.field();
    UnitData ud = fundamental_unit(F);
    const RingElement& eps = ud.fundamental_unit;
    // eps * conj(eps) = N(eps), so the inverse is +-conj(eps)
    RingElement eps_inv = ud.unit_norm == -1 ? -eps.conj() : eps.conj();
    RingElement one(F, 1), four(F, 4);
    auto admissible = [&](const RingElement& c) {
        if (flags.require_one_mod4 && !congruent(c, one, four)) return false;
        if (flags.require_totally_positive && !c.totally_positive()) return false;
        return true;
    };
    RingElement up = ideal.generator(), down = ideal.generator();
    for (int j = 0; j <= 8; ++j) {
        if (j > 0) { up = up * eps; down = down * eps_inv; }
        std::vector<RingElement> cands;
        if (j == 0) cands = {up, -up};
        else cands = {up, down, -up, -down};
        for (const RingElement& c : cands)
            if (admissible(c)) return c;
    }
    throw NormalizationUnreachable("no associate of " + ideal.generator().to_string() +
                                   " within the unit window satisfies the flags");
}

std::vector<std::pair<Int, int>> factor_rational(Int n) {
    if (n == 0) throw UsageError("factoring zero");
    n = abs(n);
    std::vector<std::pair<Int, int>> out;
    auto strip = [&](const Int& d) {
        int m = 0;
        while (n % d == 0) { n /= d; ++m; }
        if (m) out.emplace_back(d, m);
    };
    strip(2);
    for (Int d = 3; d * d <= n && d <= 1000000; d += 2) strip(d);
    if (n > 1) {
        if (!is_probable_prime(n))
            throw Error("cofactor " + n.get_str() + " too large for trial division");
        out.emplace_back(n, 1);
    }
    return out;
}

} // namespace qrs
