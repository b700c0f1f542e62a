#include "qrs/field.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <vector>

namespace qrs {

bool is_probable_prime(const Int& n) {
    return mpz_probab_prime_p(n.get_mpz_t(), 32) != 0;
}

bool is_perfect_square(const Int& n) {
    return n >= 0 && mpz_perfect_square_p(n.get_mpz_t()) != 0;
}

Int isqrt(const Int& n) {
    Int r;
    mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
    return r;
}

QuadField::QuadField(Int p) : p_(std::move(p)) {
    if (p_ < 5 || p_ % 4 != 1 || !is_probable_prime(p_))
        throw UsageError("QuadField requires a prime p = 1 mod 4, got " + p_.get_str());
    q_ = (p_ - 1) / 4;
}

RingElement RingElement::from_half_coords(const QuadField& field, const Int& u, const Int& v) {
    if ((u - v) % 2 != 0)
        throw UsageError("(u + v sqrt p)/2 is not integral: parity mismatch");
    return RingElement(field, (u - v) / 2, v);
}

RingElement RingElement::from_sqrt_coords(const QuadField& field, const Int& x, const Int& y) {
    return RingElement(field, x - y, 2 * y);
}

Int RingElement::norm() const {
    return a_ * a_ + a_ * b_ - b_ * b_ * field_.omega_sq_const();
}

RingElement RingElement::operator+(const RingElement& o) const {
    return RingElement(field_, a_ + o.a_, b_ + o.b_);
}

RingElement RingElement::operator-(const RingElement& o) const {
    return RingElement(field_, a_ - o.a_, b_ - o.b_);
}

RingElement RingElement::operator*(const RingElement& o) const {
    // (a1 + b1 w)(a2 + b2 w) with w^2 = q + w
    Int bb = b_ * o.b_;
    return RingElement(field_, a_ * o.a_ + bb * field_.omega_sq_const(),
                       a_ * o.b_ + b_ * o.a_ + bb);
}

bool RingElement::operator==(const RingElement& o) const {
    return field_ == o.field_ && a_ == o.a_ && b_ == o.b_;
}

bool RingElement::operator<(const RingElement& o) const {
    if (a_ != o.a_) return a_ < o.a_;
    return b_ < o.b_;
}

RingElement RingElement::pow(unsigned long e) const {
    RingElement r(field_, 1);
    RingElement base = *this;
    while (e) {
        if (e & 1) r = r * base;
        base = base * base;
        e >>= 1;
    }
    return r;
}

int RingElement::sign_inf1() const {
    if (is_zero()) throw UsageError("sign of zero element");
    Int u = half_u(), v = half_v();
    int su = sgn(u), sv = sgn(v);
    if (su >= 0 && sv >= 0) return 1;
    if (su <= 0 && sv <= 0) return -1;
    // mixed signs: compare u^2 against v^2 p (never equal, p nonsquare)
    bool u_dominates = u * u > v * v * field_.p();
    return u_dominates ? su : sv;
}

std::string RingElement::to_string() const {
    std::string s = a_.get_str();
    if (b_ >= 0) s += "+";
    s += b_.get_str() + "w";
    return s;
}

std::string RingElement::pretty() const {
    Int u = half_u(), v = half_v();
    std::ostringstream os;
    if (u % 2 == 0 && v % 2 == 0) {
        Int x = u / 2, y = v / 2;
        os << x;
        if (y >= 0) os << "+";
        os << y << "*sqrt(" << field_.p() << ")";
    } else {
        os << "(" << u;
        if (v >= 0) os << "+";
        os << v << "*sqrt(" << field_.p() << "))/2";
    }
    return os.str();
}

RingElement RingElement::parse(const QuadField& field, const std::string& text) {
    // "<a>+<b>w" with signed decimals, e.g. "25+16w", "-3-2w"
    auto wpos = text.find('w');
    if (wpos == std::string::npos || wpos + 1 != text.size())
        throw UsageError("bad element literal '" + text + "': expected <a>+<b>w");
    // split at the sign of the b term: last '+' or '-' before 'w' that is not at index 0
    size_t split = std::string::npos;
    for (size_t i = wpos; i-- > 1;) {
        if (text[i] == '+' || text[i] == '-') {
            split = i;
            break;
        }
    }
    if (split == std::string::npos)
        throw UsageError("bad element literal '" + text + "'");
    try {
        Int a(text.substr(0, split));
        std::string bs = text.substr(split, wpos - split);
        if (!bs.empty() && bs[0] == '+') bs.erase(0, 1);
        Int b(bs);
        return RingElement(field, a, b);
    } catch (const std::invalid_argument&) {
        throw UsageError("bad element literal '" + text + "'");
    }
}

NormTraceConj norm_trace_conj(const RingElement& e) {
    return NormTraceConj{e.norm(), e.trace(), e.conj()};
}

std::pair<int, int> real_signs(const RingElement& e) {
    return {e.sign_inf1(), e.sign_inf2()};
}

std::optional<RingElement> divide_exact(const RingElement& e1, const RingElement& e2) {
    if (e2.is_zero()) throw UsageError("division by zero");
    RingElement num = e1 * e2.conj();
    Int n = e2.norm();
    if (num.a() % n != 0 || num.b() % n != 0) return std::nullopt;
    return RingElement(e1.field(), num.a() / n, num.b() / n);
}

bool congruent(const RingElement& e1, const RingElement& e2, const RingElement& m) {
    if (m.is_zero()) throw UsageError("zero modulus");
    return divide_exact(e1 - e2, m).has_value();
}

std::optional<RingElement> sqrt_element(const RingElement& t) {
    const QuadField& F = t.field();
    if (t.is_zero()) return RingElement(F, 0);
    Int u = t.half_u(), v = t.half_v();
    Int disc = u * u - F.p() * v * v; // = 4 N(t), must be a square of some r >= 0
    if (disc < 0) return std::nullopt;
    if (!is_perfect_square(disc)) return std::nullopt;
    Int r = isqrt(disc);
    for (int branch = 0; branch < 2; ++branch) {
        Int csq = branch == 0 ? Int(u + r) : Int(u - r);
        Int pdsq = branch == 0 ? Int(u - r) : Int(u + r);
        if (csq < 0 || pdsq < 0) continue;
        if (pdsq % F.p() != 0) continue;
        Int dsq = pdsq / F.p();
        if (!is_perfect_square(csq) || !is_perfect_square(dsq)) continue;
        Int c = isqrt(csq), d = isqrt(dsq);
        // fix signs so that cd = v; then s = (c + d sqrt p)/2
        if (c * d != 0) {
            if (sgn(v) == 0) continue;
            if (sgn(v) < 0) d = -d;
        } else if (v != 0) {
            continue;
        }
        if (c * d != v) continue;
        if ((c - d) % 2 != 0) continue;
        RingElement s = RingElement::from_half_coords(F, c, d);
        if (s * s == t) {
            if (!s.is_zero() && s.sign_inf1() < 0) s = -s;
            return s;
        }
    }
    return std::nullopt;
}

UnitData fundamental_unit(const QuadField& field) {
    // continued fraction of w = (1 + sqrt p)/2: alpha_n = (P_n + sqrt p)/Q_n
    const Int& p = field.p();
    Int s = isqrt(p);
    Int P = 1, Q = 2;
    Int h_prev = 0, k_prev = 1; // h_{-2}/k_{-2}
    Int h = 1, k = 0;           // h_{-1}/k_{-1}
    for (int iter = 0; iter < 100000; ++iter) {
        Int a = (P + s) / Q;
        Int h_next = a * h + h_prev;
        Int k_next = a * k + k_prev;
        h_prev = h;
        k_prev = k;
        h = h_next;
        k = k_next;
        // convergent h/k gives the unit candidate (h - k) + k w
        RingElement cand(field, h - k, k);
        Int n = cand.norm();
        if (n == 1 || n == -1) {
            return UnitData{cand, static_cast<int>(n.get_si())};
        }
        P = a * Q - P;
        Q = (p - P * P) / Q;
    }
    throw Error("fundamental unit not found (continued fraction did not close)");
}

namespace {

struct Form {
    Int a, b, c; // a x^2 + b x y + c y^2
    bool operator<(const Form& o) const {
        if (a != o.a) return a < o.a;
        if (b != o.b) return b < o.b;
        return c < o.c;
    }
    bool operator==(const Form& o) const { return a == o.a && b == o.b && c == o.c; }
};

// reduced indefinite form: 0 < b < sqrt(D) and sqrt(D) - b < 2|a| < sqrt(D) + b
bool is_reduced(const Form& f, const Int& D) {
    if (f.b <= 0 || f.b * f.b >= D) return false;
    Int t = 2 * abs(f.a);
    // sqrt(D) - b < t  <=>  D < (t + b)^2
    if (D >= (t + f.b) * (t + f.b)) return false;
    // t < sqrt(D) + b  <=>  t <= b, or (t - b)^2 < D
    if (t > f.b && (t - f.b) * (t - f.b) >= D) return false;
    return true;
}

// reduction step: (a, b, c) -> (c, b', c') with b' = -b mod 2c in the reduced window
Form rho_step(const Form& f, const Int& D, const Int& sq) {
    Int a2 = f.c;
    Int t = 2 * abs(a2);
    // choose b' = -b + 2 c m with sqrt(D) - 2|c| < b' <= sqrt(D) (standard window)
    // upper edge: largest b' = -b + t*m' <= sq', where sq' = floor(sqrt(D)) adjusted for parity
    Int lo = sq - t + 1; // b' > sqrt(D) - 2|c| means b' >= sq - t + 1 (sqrt irrational)
    Int bp = -f.b;
    Int diff = lo - bp;
    Int m = diff >= 0 ? Int((diff + t - 1) / t) : Int(-((-diff) / t));
    bp += m * t;
    Form g;
    g.a = a2;
    g.b = bp;
    g.c = (bp * bp - D) / (4 * a2);
    return g;
}

} // namespace

ClassData class_numbers(const QuadField& field) {
    const Int& D = field.p();
    Int sq = isqrt(D);
    std::vector<Form> reduced;
    // b odd, 0 < b < sqrt(D); 4ac = b^2 - D < 0
    for (Int b = 1; b * b < D; b += 2) {
        Int ac4 = b * b - D; // negative, divisible by 4 since b odd, D = 1 mod 4... b^2 = 1, D = 1 mod 8? use exact division check
        if (ac4 % 4 != 0) continue;
        Int ac = ac4 / 4;
        Int bound = isqrt(-ac);
        for (Int a = 1; a <= bound; ++a) {
            if (ac % a != 0) continue;
            Int c = ac / a;
            for (const auto& [fa, fc] : {std::pair{a, c}, {c, a}, {-a, -c}, {-c, -a}}) {
                Form f{fa, b, fc};
                if (is_reduced(f, D)) reduced.push_back(f);
            }
        }
    }
    std::sort(reduced.begin(), reduced.end());
    reduced.erase(std::unique(reduced.begin(), reduced.end()), reduced.end());

    std::set<Form> seen;
    Int cycles = 0;
    for (const auto& f : reduced) {
        if (seen.count(f)) continue;
        ++cycles;
        Form g = f;
        do {
            seen.insert(g);
            g = rho_step(g, D, sq);
        } while (!(g == f));
    }
    // cycle count = number of proper form classes = narrow class number
    UnitData u = fundamental_unit(field);
    ClassData cd;
    if (u.unit_norm == -1) {
        cd.h = cycles;
        cd.h_plus = cycles;
    } else {
        cd.h = cycles / 2;
        cd.h_plus = cycles;
    }
    return cd;
}

} // namespace qrs
