#include "qrs/massey.hpp"

#include <sstream>

namespace qrs {

FunctionalSpace::FunctionalSpace(int s, int D) : s(s), D(D) {
    if (D < 2) throw UsageError("truncation degree must be at least 2");
    if (s < 1 || s > 8) throw UsageError("generator count out of range");
    for (const auto& I : TruncatedSeries(s, D).indices())
        if (!I.empty()) basis.push_back(I);
}

long FunctionalSpace::position(const std::vector<int>& I) const {
    if (I.empty() || (int)I.size() >= D) throw UsageError("index outside the functional basis");
    long off = 0, pw = 1;
    for (size_t len = 1; len < I.size(); ++len) {
        pw *= s;
        off += pw;
    }
    long val = 0;
    for (int i : I) {
        if (i < 1 || i > s) throw UsageError("generator index out of range");
        val = val * s + (i - 1);
    }
    return off + val;
}

CochainFunctional::CochainFunctional(FunctionalSpace space)
    : space_(std::move(space)), bits_((size_t)space_.dimension(), 0) {}

CochainFunctional CochainFunctional::dual(const FunctionalSpace& space,
                                          const std::vector<int>& I) {
    CochainFunctional f(space);
    f.bits_[(size_t)space.position(I)] = 1;
    return f;
}

CochainFunctional CochainFunctional::parse(const FunctionalSpace& space,
                                           const std::string& text) {
    CochainFunctional f(space);
    if (text == "0") return f;
    std::string term;
    std::istringstream in(text);
    while (std::getline(in, term, '+')) {
        if (term.size() < 5 || term.substr(0, 3) != "mu[" || term.back() != ']')
            throw UsageError("bad functional term: " + term);
        std::vector<int> I;
        std::istringstream body(term.substr(3, term.size() - 4));
        std::string num;
        while (std::getline(body, num, ',')) {
            try {
                I.push_back(std::stoi(num));
            } catch (const std::logic_error&) {
                throw UsageError("bad functional term: " + term);
            }
        }
        f.bits_[(size_t)space.position(I)] ^= 1;
    }
    return f;
}

bool CochainFunctional::is_zero() const {
    for (unsigned char b : bits_)
        if (b) return false;
    return true;
}

bool CochainFunctional::degree_one() const {
    for (size_t i = 0; i < bits_.size(); ++i)
        if (bits_[i] && space_.basis[i].size() != 1) return false;
    return true;
}

int CochainFunctional::operator()(const FreeWord& w) const {
    TruncatedSeries m = expand(w, space_.D);
    int out = 0;
    for (size_t i = 0; i < bits_.size(); ++i)
        if (bits_[i]) out ^= m.coeff(space_.basis[i]);
    return out;
}

CochainFunctional CochainFunctional::operator+(const CochainFunctional& o) const {
    if (!(space_ == o.space_)) throw UsageError("mismatched functional spaces");
    CochainFunctional f = *this;
    for (size_t i = 0; i < bits_.size(); ++i) f.bits_[i] ^= o.bits_[i];
    return f;
}

std::string CochainFunctional::to_string() const {
    std::string out;
    for (size_t i = 0; i < bits_.size(); ++i) {
        if (!bits_[i]) continue;
        if (!out.empty()) out += "+";
        out += "mu[";
        const auto& I = space_.basis[i];
        for (size_t j = 0; j < I.size(); ++j) {
            if (j) out += ",";
            out += std::to_string(I[j]);
        }
        out += "]";
    }
    return out.empty() ? "0" : out;
}

TwoCochainValue::TwoCochainValue(FunctionalSpace space)
    : space_(std::move(space)),
      bits_((size_t)(space_.dimension() * space_.dimension()), 0) {}

TwoCochainValue TwoCochainValue::cup(const CochainFunctional& f, const CochainFunctional& g) {
    if (!(f.space() == g.space())) throw UsageError("mismatched functional spaces");
    TwoCochainValue t(f.space());
    long n = t.space_.dimension();
    for (long i = 0; i < n; ++i) {
        if (!f.bit(i)) continue;
        for (long j = 0; j < n; ++j)
            if (g.bit(j)) t.toggle(i, j);
    }
    return t;
}

int TwoCochainValue::entry(long i, long j) const {
    return bits_[(size_t)(i * space_.dimension() + j)];
}

void TwoCochainValue::toggle(long i, long j) {
    bits_[(size_t)(i * space_.dimension() + j)] ^= 1;
}

bool TwoCochainValue::is_zero() const {
    for (unsigned char b : bits_)
        if (b) return false;
    return true;
}

int TwoCochainValue::operator()(const FreeWord& v, const FreeWord& w) const {
    TruncatedSeries mv = expand(v, space_.D), mw = expand(w, space_.D);
    long n = space_.dimension();
    int out = 0;
    for (long i = 0; i < n; ++i) {
        if (!mv.coeff(space_.basis[i])) continue;
        for (long j = 0; j < n; ++j)
            if (entry(i, j)) out ^= mw.coeff(space_.basis[j]);
    }
    return out;
}

TwoCochainValue TwoCochainValue::operator+(const TwoCochainValue& o) const {
    if (!(space_ == o.space_)) throw UsageError("mismatched functional spaces");
    TwoCochainValue t = *this;
    for (size_t i = 0; i < bits_.size(); ++i) t.bits_[i] ^= o.bits_[i];
    return t;
}

TwoCochainValue coboundary(const CochainFunctional& f) {
    const FunctionalSpace& sp = f.space();
    TwoCochainValue t(sp);
    for (long pos = 0; pos < sp.dimension(); ++pos) {
        if (!f.bit(pos)) continue;
        const auto& I = sp.basis[pos];
        for (size_t cut = 1; cut < I.size(); ++cut) {
            std::vector<int> J(I.begin(), I.begin() + cut), K(I.begin() + cut, I.end());
            t.toggle(sp.position(J), sp.position(K));
        }
    }
    return t;
}

std::pair<CochainFunctional, CochainFunctional> defining_system(
    const CochainFunctional& chi1, const CochainFunctional& chi2,
    const CochainFunctional& chi3, const CochainFunctional& lambda1,
    const CochainFunctional& lambda2) {
    const FunctionalSpace& sp = chi1.space();
    if (!(chi1 == CochainFunctional::dual(sp, {1}) && chi2 == CochainFunctional::dual(sp, {2}) &&
          chi3 == CochainFunctional::dual(sp, {3})))
        throw UsageError("the chi arguments must be the dual basis functionals");
    CochainFunctional omega13 = CochainFunctional::dual(sp, {1, 2}) + lambda1;
    CochainFunctional omega24 = CochainFunctional::dual(sp, {2, 3}) + lambda2;
    if (!(coboundary(omega13) == TwoCochainValue::cup(chi1, chi2)))
        throw InvalidPerturbation("d omega13 != chi1 cup chi2");
    if (!(coboundary(omega24) == TwoCochainValue::cup(chi2, chi3)))
        throw InvalidPerturbation("d omega24 != chi2 cup chi3");
    return {omega13, omega24};
}

CochainFunctional solve_primitive(const TwoCochainValue& z) {
    const FunctionalSpace& sp = z.space();
    long n = sp.dimension();
    CochainFunctional b(sp);
    // db has entry b_(JK) at (J, K); entries with |J|+|K| >= D are always 0
    std::vector<int> assigned((size_t)n, 0), value((size_t)n, 0);
    for (long i = 0; i < n; ++i) {
        for (long j = 0; j < n; ++j) {
            int bit = z.entry(i, j);
            const auto& J = sp.basis[i];
            const auto& K = sp.basis[j];
            if ((int)(J.size() + K.size()) >= sp.D) {
                if (bit) throw NotACoboundary("entry beyond the truncation is nonzero");
                continue;
            }
            std::vector<int> I = J;
            I.insert(I.end(), K.begin(), K.end());
            long pos = sp.position(I);
            if (assigned[(size_t)pos] && value[(size_t)pos] != bit)
                throw NotACoboundary("inconsistent splittings of " +
                                     CochainFunctional::dual(sp, I).to_string());
            assigned[(size_t)pos] = 1;
            value[(size_t)pos] = bit;
        }
    }
    CochainFunctional out(sp);
    for (long pos = 0; pos < n; ++pos)
        if (assigned[(size_t)pos] && value[(size_t)pos])
            out = out + CochainFunctional::dual(sp, sp.basis[(size_t)pos]);
    return out;
}

int triple_massey_pairing(const FreeWord& f, const CochainFunctional& lambda1,
                          const CochainFunctional& lambda2) {
    const FunctionalSpace& sp = lambda1.space();
    if (sp.s != f.generators()) throw UsageError("generator count mismatch");
    TruncatedSeries m = expand(f, sp.D);
    for (const auto& I : sp.basis)
        if (I.size() <= 2 && m.coeff(I))
            throw HypothesisViolated("f must lie in the third filtration step");
    CochainFunctional chi1 = CochainFunctional::dual(sp, {1});
    CochainFunctional chi2 = CochainFunctional::dual(sp, {2});
    CochainFunctional chi3 = CochainFunctional::dual(sp, {3});
    auto [omega13, omega24] = defining_system(chi1, chi2, chi3, lambda1, lambda2);
    TwoCochainValue z = TwoCochainValue::cup(chi1, omega24) + TwoCochainValue::cup(omega13, chi3);
    CochainFunctional b = solve_primitive(z);
    int out = b(f);
    // the direct coefficient formula of the same pairing
    if (out != m.coeff({1, 2, 3}))
        throw Error("pairing disagrees with the direct coefficient");
    return out;
}

int triple_massey_pairing(const FreeWord& f) {
    FunctionalSpace sp(f.generators(), 4);
    CochainFunctional zero(sp);
    return triple_massey_pairing(f, zero, zero);
}

} // namespace qrs
