#include "qrs/magnus.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace qrs {

namespace {

// signed window (-2^15, 2^15] of the residue mod 2^16
int reduce_exp(long e) {
    long r = e & 0xFFFFL;
    if (r > 32768) r -= 65536;
    return (int)r;
}

// C(e, k) mod 2 by Lucas on the 16-bit residue of e
int binom_mod2(int e, int k) {
    unsigned u = (unsigned)e & 0xFFFFu;
    return ((u & (unsigned)k) == (unsigned)k) ? 1 : 0;
}

void check_index(int s, int i) {
    if (i < 1 || i > s) throw UsageError("generator index out of range");
}

} // namespace

void FreeWord::push(int index, long exponent) {
    check_index(s_, index);
    if (!letters_.empty() && letters_.back().index == index) {
        int merged = reduce_exp((long)letters_.back().exponent + exponent);
        if (merged == 0)
            letters_.pop_back();
        else
            letters_.back().exponent = merged;
        return;
    }
    int e = reduce_exp(exponent);
    if (e != 0) letters_.push_back(Letter{index, e});
}

FreeWord FreeWord::generator(int s, int i, long exponent) {
    FreeWord w(s);
    w.push(i, exponent);
    return w;
}

FreeWord FreeWord::parse(int s, const std::string& text) {
    FreeWord w(s);
    std::istringstream in(text);
    std::string tok;
    while (in >> tok) {
        if (tok.size() < 2 || tok[0] != 'x') throw UsageError("bad word letter: " + tok);
        size_t caret = tok.find('^');
        long e = 1;
        std::string idx = tok.substr(1, caret == std::string::npos ? caret : caret - 1);
        try {
            if (caret != std::string::npos) e = std::stol(tok.substr(caret + 1));
            w.push(std::stoi(idx), e);
        } catch (const std::logic_error&) {
            throw UsageError("bad word letter: " + tok);
        }
    }
    return w;
}

FreeWord FreeWord::operator*(const FreeWord& o) const {
    if (s_ != o.s_) throw UsageError("mixed generator counts");
    FreeWord w = *this;
    for (const Letter& l : o.letters_) w.push(l.index, l.exponent);
    return w;
}

FreeWord FreeWord::inverse() const {
    FreeWord w(s_);
    for (auto it = letters_.rbegin(); it != letters_.rend(); ++it)
        w.push(it->index, -(long)it->exponent);
    return w;
}

FreeWord FreeWord::pow(long e) const {
    FreeWord base = e < 0 ? inverse() : *this;
    long n = e < 0 ? -e : e;
    FreeWord acc(s_);
    for (; n > 0; --n) acc = acc * base;
    return acc;
}

FreeWord FreeWord::conjugate_by(const FreeWord& w) const { return w * *this * w.inverse(); }

FreeWord FreeWord::commutator(const FreeWord& a, const FreeWord& b) {
    return a * b * a.inverse() * b.inverse();
}

bool FreeWord::operator==(const FreeWord& o) const {
    if (s_ != o.s_ || letters_.size() != o.letters_.size()) return false;
    for (size_t i = 0; i < letters_.size(); ++i)
        if (letters_[i].index != o.letters_[i].index ||
            letters_[i].exponent != o.letters_[i].exponent)
            return false;
    return true;
}

bool FreeWord::operator<(const FreeWord& o) const {
    if (letters_.size() != o.letters_.size()) return letters_.size() < o.letters_.size();
    for (size_t i = 0; i < letters_.size(); ++i) {
        if (letters_[i].index != o.letters_[i].index)
            return letters_[i].index < o.letters_[i].index;
        if (letters_[i].exponent != o.letters_[i].exponent)
            return letters_[i].exponent < o.letters_[i].exponent;
    }
    return false;
}

std::string FreeWord::to_string() const {
    if (letters_.empty()) return "1";
    std::string out;
    for (const Letter& l : letters_) {
        if (!out.empty()) out += ' ';
        out += "x" + std::to_string(l.index);
        if (l.exponent != 1) out += "^" + std::to_string(l.exponent);
    }
    return out;
}

TruncatedSeries::TruncatedSeries(int s, int D) : s_(s), D_(D) {
    if (D < 2) throw UsageError("truncation degree must be at least 2");
    if (s < 1 || s > 8) throw UsageError("generator count out of range");
    long n = 0, pw = 1;
    for (int len = 0; len < D; ++len) {
        n += pw;
        pw *= s;
    }
    bits_.assign((size_t)n, 0);
}

TruncatedSeries TruncatedSeries::one(int s, int D) {
    TruncatedSeries t(s, D);
    t.bits_[0] = 1;
    return t;
}

long TruncatedSeries::position(const std::vector<int>& I) const {
    if ((int)I.size() >= D_) throw UsageError("multi-index too long for the truncation");
    long off = 0, pw = 1;
    for (size_t len = 0; len < I.size(); ++len) {
        off += pw;
        pw *= s_;
    }
    long val = 0;
    for (int i : I) {
        check_index(s_, i);
        val = val * s_ + (i - 1);
    }
    return off + val;
}

int TruncatedSeries::coeff(const std::vector<int>& I) const { return bits_[position(I)]; }

void TruncatedSeries::set_coeff(const std::vector<int>& I, int bit) {
    bits_[position(I)] = (unsigned char)(bit & 1);
}

std::vector<std::vector<int>> TruncatedSeries::indices() const {
    std::vector<std::vector<int>> out;
    out.push_back({});
    for (int len = 1; len < D_; ++len) {
        long count = 1;
        for (int i = 0; i < len; ++i) count *= s_;
        for (long v = 0; v < count; ++v) {
            std::vector<int> I(len);
            long r = v;
            for (int i = len - 1; i >= 0; --i) {
                I[i] = (int)(r % s_) + 1;
                r /= s_;
            }
            out.push_back(std::move(I));
        }
    }
    return out;
}

TruncatedSeries TruncatedSeries::operator+(const TruncatedSeries& o) const {
    if (s_ != o.s_ || D_ != o.D_) throw UsageError("mismatched series shapes");
    TruncatedSeries t = *this;
    for (size_t i = 0; i < bits_.size(); ++i) t.bits_[i] ^= o.bits_[i];
    return t;
}

TruncatedSeries TruncatedSeries::operator*(const TruncatedSeries& o) const {
    if (s_ != o.s_ || D_ != o.D_) throw UsageError("mismatched series shapes");
    TruncatedSeries t(s_, D_);
    auto idx = indices();
    for (const auto& I : idx) {
        if (!bits_[position(I)]) continue;
        for (const auto& J : idx) {
            if ((int)(I.size() + J.size()) >= D_) continue;
            if (!o.bits_[o.position(J)]) continue;
            std::vector<int> K = I;
            K.insert(K.end(), J.begin(), J.end());
            t.bits_[t.position(K)] ^= 1;
        }
    }
    return t;
}

std::string TruncatedSeries::dump() const {
    std::string out;
    for (const auto& I : indices()) {
        if (!bits_[position(I)]) continue;
        out += "(";
        for (size_t i = 0; i < I.size(); ++i) {
            if (i) out += ",";
            out += std::to_string(I[i]);
        }
        out += "):1\n";
    }
    return out;
}

TruncatedSeries expand(const FreeWord& w, int D) {
    int s = w.generators();
    TruncatedSeries acc = TruncatedSeries::one(s, D);
    for (const Letter& l : w.letters()) {
        // (1 + X_i)^e truncated: binomial bits of the exponent residue
        TruncatedSeries f(s, D);
        std::vector<int> I;
        for (int k = 0; k < D; ++k) {
            if (binom_mod2(l.exponent, k)) f.set_coeff(I, 1);
            I.push_back(l.index);
        }
        acc = acc * f;
    }
    return acc;
}

int mu2(const std::vector<int>& I, const FreeWord& w, int D) {
    if ((int)I.size() >= D) D = (int)I.size() + 1;
    return expand(w, D).coeff(I);
}

namespace {

// F_2 group-ring element as an xor-set of words
using RingEl = std::set<FreeWord>;

void ring_toggle(RingEl& e, const FreeWord& w) {
    auto [it, inserted] = e.insert(w);
    if (!inserted) e.erase(it);
}

// free derivative of a single word with respect to x_i
RingEl fox_word(int i, const FreeWord& w) {
    RingEl out;
    int s = w.generators();
    FreeWord prefix(s);
    for (const Letter& l : w.letters()) {
        if (l.index == i) {
            // d(x^e) = sum x^k, k in [0,e) or [e,0) shifted by the sign
            long e = l.exponent;
            long lo = e > 0 ? 0 : e, hi = e > 0 ? e : 0;
            for (long k = lo; k < hi; ++k)
                ring_toggle(out, prefix * FreeWord::generator(s, i, k));
        }
        prefix = prefix * FreeWord::generator(s, l.index, l.exponent);
    }
    return out;
}

RingEl fox_el(int i, const RingEl& e) {
    RingEl out;
    for (const FreeWord& w : e)
        for (const FreeWord& t : fox_word(i, w)) ring_toggle(out, t);
    return out;
}

} // namespace

int fox_mu2(const std::vector<int>& I, const FreeWord& w) {
    if (I.empty()) return 1;
    RingEl e{w};
    for (auto it = I.rbegin(); it != I.rend(); ++it) e = fox_el(*it, e);
    return (int)(e.size() & 1); // augmentation sends every word to 1
}

long zassenhaus_depth(const FreeWord& w, int D) {
    TruncatedSeries m = expand(w, D);
    long best = D;
    for (const auto& I : m.indices())
        if (!I.empty() && m.coeff(I)) {
            best = std::min(best, (long)I.size());
            if (best == 1) break;
        }
    return best;
}

UnipotentMatrix rho(const FreeWord& w) {
    if (w.generators() < 2) throw UsageError("rho needs at least two generators");
    TruncatedSeries m = expand(w, 3);
    return UnipotentMatrix{m.coeff({1}), m.coeff({2}), m.coeff({1, 2})};
}

std::string d8_translate(const UnipotentMatrix& m) {
    const UnipotentMatrix s_gen{0, 1, 0}, t_gen{1, 1, 0};
    std::vector<std::pair<UnipotentMatrix, std::string>> frontier{{UnipotentMatrix{}, ""}};
    std::vector<UnipotentMatrix> seen{UnipotentMatrix{}};
    for (size_t i = 0; i < frontier.size(); ++i) {
        auto [cur, word] = frontier[i];
        if (cur == m) return word;
        for (auto [g, name] : {std::pair{s_gen, "s"}, std::pair{t_gen, "t"}}) {
            UnipotentMatrix nxt = cur.mul(g);
            if (std::find(seen.begin(), seen.end(), nxt) != seen.end()) continue;
            seen.push_back(nxt);
            frontier.push_back({nxt, word + name});
        }
    }
    throw Error("matrix not reached by the dihedral generators");
}

FreeWord relator_word(int i, long Np, const FreeWord& y) {
    FreeWord xi = FreeWord::generator(y.generators(), i);
    return xi.pow(Np - 1) * FreeWord::commutator(xi, y);
}

int milnor_triple(const FreeWord& y3) {
    TruncatedSeries m = expand(y3, 3);
    if (m.coeff({1}) != 0 || m.coeff({2}) != 0)
        throw HypothesisViolated("degree-1 coefficients at indices 1, 2 must vanish");
    return m.coeff({1, 2});
}

} // namespace qrs
