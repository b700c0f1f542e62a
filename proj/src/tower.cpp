#include "qrs/tower.hpp"

namespace qrs {

TowerL1 QuadTower::add(const TowerL1& x, const TowerL1& y) const {
    return TowerL1{x.a + y.a, x.b + y.b};
}
TowerL1 QuadTower::sub(const TowerL1& x, const TowerL1& y) const {
    return TowerL1{x.a - y.a, x.b - y.b};
}
TowerL1 QuadTower::mul(const TowerL1& x, const TowerL1& y) const {
    return TowerL1{x.a * y.a + x.b * y.b * d1_, x.a * y.b + x.b * y.a};
}

TowerL2 QuadTower::add(const TowerL2& x, const TowerL2& y) const {
    return TowerL2{add(x.a, y.a), add(x.b, y.b)};
}
TowerL2 QuadTower::sub(const TowerL2& x, const TowerL2& y) const {
    return TowerL2{sub(x.a, y.a), sub(x.b, y.b)};
}
TowerL2 QuadTower::mul(const TowerL2& x, const TowerL2& y) const {
    // (a1 + b1 r2)(a2 + b2 r2), r2^2 = d2
    return TowerL2{add(mul(x.a, y.a), mul(mul(x.b, y.b), d2_)),
                   add(mul(x.a, y.b), mul(x.b, y.a))};
}

TowerL3 QuadTower::add(const TowerL3& x, const TowerL3& y) const {
    return TowerL3{add(x.a, y.a), add(x.b, y.b)};
}
TowerL3 QuadTower::sub(const TowerL3& x, const TowerL3& y) const {
    return TowerL3{sub(x.a, y.a), sub(x.b, y.b)};
}
TowerL3 QuadTower::mul(const TowerL3& x, const TowerL3& y) const {
    return TowerL3{add(mul(x.a, y.a), mul(mul(x.b, y.b), d3_)),
                   add(mul(x.a, y.b), mul(x.b, y.a))};
}

TowerL2 QuadTower::eval_poly(const std::vector<Int>& coeffs, const TowerL2& x) const {
    TowerL2 acc = scalar2(0);
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it)
        acc = add(mul(acc, x), scalar2(Rat(*it)));
    return acc;
}

TowerL3 QuadTower::eval_poly(const std::vector<Int>& coeffs, const TowerL3& x) const {
    TowerL3 acc = scalar3(0);
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it)
        acc = add(mul(acc, x), scalar3(Rat(*it)));
    return acc;
}

bool is_integral(const KElementQ& e) {
    Rat u = 2 * e.a, v = 2 * e.b;
    if (u.get_den() != 1 || v.get_den() != 1) return false;
    return (u.get_num() - v.get_num()) % 2 == 0;
}

KElementQ k_add(const KElementQ& x, const KElementQ& y) { return {x.a + y.a, x.b + y.b}; }
KElementQ k_sub(const KElementQ& x, const KElementQ& y) { return {x.a - y.a, x.b - y.b}; }
KElementQ k_mul(const KElementQ& x, const KElementQ& y, const Int& p) {
    return {x.a * y.a + x.b * y.b * Rat(p), x.a * y.b + x.b * y.a};
}
KElementQ k_from_ring(const RingElement& e) {
    return {Rat(e.half_u()) / 2, Rat(e.half_v()) / 2};
}

} // namespace qrs
