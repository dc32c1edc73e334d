#include "doctest.h"

#include <map>
#include <random>

#include "pcov/witt.hpp"

using namespace pcov;

namespace {

ResidueSeries rand_series(PrimeChar p, std::mt19937& rng) {
    std::uniform_int_distribution<i64> exp(-3, 3);
    std::uniform_int_distribution<u32> coeff(0, p.value() - 1);
    std::uniform_int_distribution<int> nterms(0, 3);
    ResidueSeries s(p);
    int n = nterms(rng);
    for (int i = 0; i < n; ++i) {
        i64 e = exp(rng);
        s.set_coeff(e, fp_add(s.coeff(e), coeff(rng), p));
    }
    return s;
}

// Integer Laurent polynomials, for the ghost-component oracle.
using ZPoly = std::map<i64, long long>;

ZPoly zadd(const ZPoly& a, const ZPoly& b) {
    ZPoly r = a;
    for (auto& [e, c] : b) {
        r[e] += c;
        if (r[e] == 0) r.erase(e);
    }
    return r;
}
ZPoly zmul(const ZPoly& a, const ZPoly& b) {
    ZPoly r;
    for (auto& [e1, c1] : a)
        for (auto& [e2, c2] : b) {
            r[e1 + e2] += c1 * c2;
            if (r[e1 + e2] == 0) r.erase(e1 + e2);
        }
    return r;
}
ZPoly zpow(const ZPoly& a, unsigned k) {
    ZPoly r{{0, 1}};
    for (unsigned i = 0; i < k; ++i) r = zmul(r, a);
    return r;
}
ZPoly zscale(const ZPoly& a, long long c) {
    ZPoly r;
    for (auto& [e, v] : a)
        if (v * c != 0) r[e] = v * c;
    return r;
}
ZPoly zdiv_exact(const ZPoly& a, long long d) {
    ZPoly r;
    for (auto& [e, v] : a) {
        REQUIRE(v % d == 0);
        r[e] = v / d;
    }
    return r;
}
ZPoly zlift(const ResidueSeries& s) {
    ZPoly r;
    for (auto& [e, c] : s.coeffs()) r[e] = c;
    return r;
}
ResidueSeries zreduce(const ZPoly& a, PrimeChar p) {
    ResidueSeries s(p);
    for (auto& [e, c] : a) s.set_coeff(e, fp_add(s.coeff(e), fp_reduce(c, p), p));
    return s;
}

// Classical length-2 Witt addition over Z via ghost components
// w0 = x1, w1 = x1^p + p x2; add ghosts, invert, reduce mod p.
WittRes ghost_add(const WittRes& u, const WittRes& v) {
    PrimeChar p = u.x1.prime();
    unsigned pv = p.value();
    ZPoly ux1 = zlift(u.x1), ux2 = zlift(u.x2), vx1 = zlift(v.x1), vx2 = zlift(v.x2);
    ZPoly w0 = zadd(ux1, vx1);
    ZPoly w1 = zadd(zadd(zpow(ux1, pv), zscale(ux2, pv)), zadd(zpow(vx1, pv), zscale(vx2, pv)));
    ZPoly z1 = w0;
    ZPoly z2 = zdiv_exact(zadd(w1, zscale(zpow(z1, pv), -1)), pv);
    return {zreduce(z1, p), zreduce(z2, p), Twist{0, 0}};
}

} // namespace

TEST_CASE("carry coefficients from exact binomials") {
    CHECK(witt_carry_coeffs(PrimeChar(2)) == std::vector<u32>{1});
    CHECK(witt_carry_coeffs(PrimeChar(3)) == std::vector<u32>{1, 1});
    CHECK(witt_carry_coeffs(PrimeChar(5)) == std::vector<u32>{1, 2, 2, 1});
    CHECK(witt_carry_coeffs(PrimeChar(7)) == std::vector<u32>{1, 3, 5, 5, 3, 1});
}

TEST_CASE("carry specialisations") {
    PrimeChar p2(2);
    auto x = ResidueSeries::monomial(p2, 1, 1); // t
    auto y = ResidueSeries::monomial(p2, 2, 1); // t^2
    CHECK(witt_carry(x, y) == x * y);           // carry = x*y for p = 2

    PrimeChar p3(3);
    auto a = ResidueSeries::monomial(p3, 1, 1);
    auto b = ResidueSeries::monomial(p3, 0, 2);
    CHECK(witt_carry(a, b) == a * a * b + a * b * b); // x^2 y + x y^2 for p = 3
}

TEST_CASE("(t,0)+(t,0) = (0, t^2) over F_2") {
    PrimeChar p(2);
    WittRes u{ResidueSeries::monomial(p, 1, 1), ResidueSeries(p), Twist{0, 0}};
    auto s = witt_add(u, u);
    CHECK(s.x1.window_empty());
    CHECK(s.x2 == ResidueSeries::monomial(p, 2, 1)); // -t^2 = t^2 in char 2
    auto g = ghost_add(u, u);
    CHECK(s.x1 == g.x1);
    CHECK(s.x2 == g.x2);
}

TEST_CASE("group axioms for twisted addition, random, p in {2,3,5}") {
    for (u32 pv : {2u, 3u, 5u}) {
        PrimeChar p(pv);
        std::mt19937 rng(101 + pv);
        std::vector<Twist> twists = {{0, 0}, {0, 1}, {1, static_cast<i64>(pv)},
                                     {1, static_cast<i64>(pv) + 2}, {2, 2 * static_cast<i64>(pv)}};
        for (int i = 0; i < 50; ++i) {
            for (auto tw : twists) {
                WittRes a{rand_series(p, rng), rand_series(p, rng), tw};
                WittRes b{rand_series(p, rng), rand_series(p, rng), tw};
                WittRes c{rand_series(p, rng), rand_series(p, rng), tw};
                WittRes zero{ResidueSeries(p), ResidueSeries(p), tw};
                auto ab = witt_add(a, b);
                CHECK(ab.x1 == witt_add(b, a).x1);
                CHECK(ab.x2 == witt_add(b, a).x2);
                auto abc1 = witt_add(ab, c);
                auto abc2 = witt_add(a, witt_add(b, c));
                CHECK(abc1.x1 == abc2.x1);
                CHECK(abc1.x2 == abc2.x2);
                auto az = witt_add(a, zero);
                CHECK(az.x1 == a.x1);
                CHECK(az.x2 == a.x2);
                auto inv = witt_add(a, witt_neg(a));
                CHECK(inv.x1.window_empty());
                CHECK(inv.x2.window_empty());
            }
        }
    }
}

TEST_CASE("untwisted addition agrees with the ghost oracle exhaustively, p in {2,3}") {
    for (u32 pv : {2u, 3u}) {
        PrimeChar p(pv);
        // small exhaustive set: monomials c t^e with c in F_p, e in {-1,0,1}
        std::vector<ResidueSeries> pool;
        pool.push_back(ResidueSeries(p));
        for (i64 e = -1; e <= 1; ++e)
            for (u32 c = 1; c < pv; ++c) pool.push_back(ResidueSeries::monomial(p, e, c));
        for (auto& ux1 : pool)
            for (auto& ux2 : pool)
                for (auto& vx1 : pool)
                    for (auto& vx2 : pool) {
                        WittRes u{ux1, ux2, Twist{0, 0}};
                        WittRes v{vx1, vx2, Twist{0, 0}};
                        auto s = witt_add(u, v);
                        auto g = ghost_add(u, v);
                        REQUIRE(s.x1 == g.x1);
                        REQUIRE(s.x2 == g.x2);
                    }
    }
}

TEST_CASE("isogeny phi_n") {
    PrimeChar p(3);
    auto x = BiElement::monomial(p, 0, -1, 1);
    auto r = isogeny_phi_n(x, 0);
    CHECK(r == BiElement::from_terms(p, {{{0, -3}, 1}, {{0, -1}, -1}}));

    PrimeChar p2(2);
    auto t = BiElement::monomial(p2, 0, 1, 1);
    auto r2 = isogeny_phi_n(t, 1);
    CHECK(r2 == BiElement::from_terms(p2, {{{0, 2}, 1}, {{1, 1}, -1}}));

    BiElement z(p);
    CHECK(isogeny_phi_n(z, 2).window_empty());
}

TEST_CASE("isogeny phi_m1m2 component formula, p=2, twist (0,1)") {
    PrimeChar p(2);
    auto x1 = BiElement::monomial(p, 0, 1, 1); // T
    auto x2 = BiElement::monomial(p, 0, 2, 1); // T^2
    WittBi u{x1, x2, Twist{0, 1}};
    auto r = isogeny_phi_m1m2(u);
    CHECK(r.twist.m1 == 0);
    CHECK(r.twist.m2 == 2);
    CHECK(r.x1 == BiElement::from_terms(p, {{{0, 2}, 1}, {{0, 1}, -1}}));
    // x2^p - pi^{m2(p-1)} x2 - pi^{m2 p - m1(pk+p-k)} x1^{pk}(-x1)^{p-k}
    //   = T^4 - pi T^2 + pi^2 T^3
    CHECK(r.x2 == BiElement::from_terms(p, {{{0, 4}, 1}, {{1, 2}, -1}, {{2, 3}, 1}}));
}

TEST_CASE("phi_m1m2 is a group homomorphism") {
    for (u32 pv : {2u, 3u}) {
        PrimeChar p(pv);
        std::mt19937 rng(55 + pv);
        std::uniform_int_distribution<i64> te(-2, 2);
        std::uniform_int_distribution<u32> coeff(0, pv - 1);
        auto rand_bi = [&]() {
            BiElement e(p);
            for (int i = 0; i < 2; ++i) {
                i64 b = te(rng);
                e.set_coeff(0, b, fp_add(e.coeff(0, b), coeff(rng), p));
            }
            return e;
        };
        std::vector<Twist> twists = {{0, 0}, {0, 2}, {1, static_cast<i64>(pv) + 1}};
        for (auto tw : twists)
            for (int i = 0; i < 25; ++i) {
                WittBi u{rand_bi(), rand_bi(), tw};
                WittBi v{rand_bi(), rand_bi(), tw};
                auto lhs = isogeny_phi_m1m2(witt_add(u, v));
                auto rhs = witt_add(isogeny_phi_m1m2(u), isogeny_phi_m1m2(v));
                REQUIRE(lhs.x1 == rhs.x1);
                REQUIRE(lhs.x2 == rhs.x2);
            }
    }
}

TEST_CASE("kernel of phi_0 on constants is F_p") {
    for (u32 pv : {2u, 3u, 5u}) {
        PrimeChar p(pv);
        int count = 0;
        for (u32 c = 0; c < pv; ++c) {
            auto x = BiElement::monomial(p, 0, 0, c);
            if (c == 0) x = BiElement(p);
            if (isogeny_phi_n(x, 0).window_empty()) ++count;
        }
        CHECK(count == static_cast<int>(pv));
    }
}

TEST_CASE("generic fibre identification round trip") {
    PrimeChar p(3);
    WittBi u{BiElement::monomial(p, 2, 1, 1), BiElement::monomial(p, 7, -1, 2), Twist{1, 5}};
    auto g = untwist_to_generic(u);
    CHECK(g.x1 == BiElement::monomial(p, 1, 1, 1));
    CHECK(g.x2 == BiElement::monomial(p, 2, -1, 2));
    auto back = twist_from_generic(g, Twist{1, 5});
    CHECK(back.x1 == u.x1);
    CHECK(back.x2 == u.x2);
}

TEST_CASE("coboundary application: zero move is the identity") {
    PrimeChar p(3);
    WittBi a{BiElement::monomial(p, 0, 1, 1), BiElement::monomial(p, -3, 2, 1), Twist{0, 0}};
    BiElement z(p);
    auto r = witt_coboundary_apply(a, z, z);
    CHECK(r.x1 == a.x1);
    CHECK(r.x2 == a.x2);
}

TEST_CASE("torsor equation records") {
    PrimeChar p(3);
    auto a = BiElement::monomial(p, 0, -3, 1);
    auto rec = torsor_equations(GroupSchemeTag::Mn(2), {a});
    CHECK(rec.lines.size() == 1);
    CHECK(rec.lines[0].twist_exp == 4); // 2(p-1)
    CHECK(rec.group == GroupSchemeTag::Mn(2));

    auto rec2 = torsor_equations(GroupSchemeTag::Hm1m2(1, 4), {a, a});
    CHECK(rec2.lines.size() == 2);
    CHECK(rec2.lines[0].twist_exp == 2);
    CHECK(rec2.lines[1].twist_exp == 8);
    CHECK(!rec2.lines[1].carry.empty());

    auto rec3 = torsor_equations(GroupSchemeTag::EtaleZpZ(), {a});
    CHECK(rec3.lines[0].twist_exp == 0);
    CHECK(rec3.lines[0].has_linear);

    CHECK_THROWS_AS(torsor_equations(GroupSchemeTag::Hm1m2(1, 4), {a}), schema_error);
    // M_0 is the etale constant group scheme
    CHECK(GroupSchemeTag::Mn(0) == GroupSchemeTag::EtaleZpZ());
}
