#include "doctest.h"

#include <random>

#include "pcov/residue_fn.hpp"
#include "pcov/torsor_p.hpp"

using namespace pcov;

TEST_CASE("boundary: a_K = T^-3, p = 2 is etale of type (0,-3)") {
    PrimeChar p(2);
    auto a = BiElement::monomial(p, 0, -3, 1);
    auto r = normalize_boundary_p(a);
    CHECK_FALSE(r.type.split);
    CHECK(r.type == DegTypeP{0, -3, false});
    CHECK(r.group == GroupSchemeTag::EtaleZpZ());
    CHECK(r.different == 0);
}

TEST_CASE("boundary: a_K = pi^-2 T^3, p = 2 gives type (1,3), X^2 - pi X = T^3") {
    PrimeChar p(2);
    auto a = BiElement::monomial(p, -2, 3, 1);
    auto r = normalize_boundary_p(a);
    CHECK(r.type == DegTypeP{1, 3, false});
    CHECK(r.group == GroupSchemeTag::Mn(1));
    CHECK(r.integral_rhs == BiElement::monomial(p, 0, 3, 1));
    CHECK(r.special_fibre_rhs == ResidueSeries::monomial(p, 3, 1));
    CHECK(r.different == 1);
}

TEST_CASE("boundary: a_K = T^-p reduces to type (0,-1) via Frobenius relation") {
    for (u32 pv : {2u, 3u, 5u}) {
        PrimeChar p(pv);
        auto a = BiElement::monomial(p, 0, -static_cast<i64>(pv), 1);
        auto r = normalize_boundary_p(a);
        CHECK(r.type == DegTypeP{0, -1, false});
    }
}

TEST_CASE("boundary: a_K = pi T^-1 is split") {
    PrimeChar p(3);
    auto a = BiElement::monomial(p, 1, -1, 1);
    NormalizeOptions opt;
    opt.emit_split_witness = true;
    auto r = normalize_boundary_p(a, opt);
    CHECK(r.type.split);
    REQUIRE(r.split_witness.has_value());
    // witness b satisfies b^p - b = a up to the pi window used
    auto b = *r.split_witness;
    auto err = b.pow(p.value()) - b - a;
    for (auto& [k, c] : err.terms()) CHECK(k.first >= 64);
}

TEST_CASE("germ: a_K = T^m pi^{-np} with m < 0 prime to p gives M_n") {
    PrimeChar p(3);
    auto a = BiElement::monomial(p, -6, -2, 1, BiElement::kExact, -2);
    auto r = normalize_germ_p(a);
    CHECK(r.type == DegTypeP{2, -2, false});
    CHECK(r.group == GroupSchemeTag::Mn(2));
    CHECK(r.different == 2 * (p.value() - 1));
}

TEST_CASE("germ: a_K = T is the etale equation with fibre t, split by Hensel") {
    PrimeChar p(5);
    auto a = BiElement::monomial(p, 0, 1, 1, BiElement::kExact, 0);
    auto r = normalize_germ_p(a);
    CHECK(r.type.n == 0);
    CHECK(r.group == GroupSchemeTag::EtaleZpZ());
    CHECK(r.special_fibre_rhs == ResidueSeries::monomial(p, 1, 1));
    // the residue class t lies in (t)k[[t]], so the torsor has a Hensel
    // section: unramified with conductor 0 and in fact trivial
    CHECK(r.type.m == 0);
    CHECK(r.type.split);
}

TEST_CASE("germ: constant reduction triggers re-descent, then total ramification") {
    PrimeChar p(2);
    // a_K = 1/pi^2: u = 1, ubar = 1 is a p-th power; descent gives 1/pi, odd
    auto a = BiElement::monomial(p, -2, 0, 1, BiElement::kExact, 0);
    CHECK_THROWS_AS(normalize_germ_p(a), ramification_error);
}

TEST_CASE("germ: constant reduction with lower-order escape terminates") {
    PrimeChar p(2);
    // a_K = pi^{-2}(1 + pi T): descent: 1/pi + T/pi -> v = -1 odd... build one
    // that lands instead on an etale class: a_K = pi^{-2} + T
    auto a = BiElement::from_terms(p, {{{-2, 0}, 1}, {{0, 1}, 1}}, BiElement::kExact, 0);
    CHECK_THROWS_AS(normalize_germ_p(a), ramification_error);
    // and one that terminates: a_K = pi^{-2} T^2 + T^3: u = T^2 + pi^2 T^3,
    // ubar = t^2 a square; descent: T/pi + pi T^3 -> odd denominator 1 -> ramified
    auto b = BiElement::from_terms(p, {{{-2, 2}, 1}, {{0, 3}, 1}}, BiElement::kExact, 0);
    CHECK_THROWS_AS(normalize_germ_p(b), ramification_error);
    // a_K = pi^{-4} T^2: u = T^2; descent: T/pi^2: nu = 2, u = T not a square:
    // type (1, 1)
    auto c = BiElement::monomial(p, -4, 2, 1, BiElement::kExact, 0);
    auto r = normalize_germ_p(c);
    CHECK(r.type == DegTypeP{1, 1, false});
}

TEST_CASE("totally ramified detection") {
    PrimeChar p(2);
    auto a = BiElement::monomial(p, -3, 3, 1);
    CHECK_THROWS_AS(normalize_boundary_p(a), ramification_error);
}

TEST_CASE("indeterminate at precision") {
    PrimeChar p(2);
    BiElement zero_tr(p, 4);
    CHECK_THROWS_AS(normalize_boundary_p(zero_tr), precision_error);
}

TEST_CASE("delta-consistency and idempotence") {
    for (u32 pv : {2u, 3u}) {
        PrimeChar p(pv);
        std::mt19937 rng(201 + pv);
        std::uniform_int_distribution<i64> pe(-4, 1), te(-3, 3);
        std::uniform_int_distribution<u32> coeff(0, pv - 1);
        int done = 0;
        for (int i = 0; i < 400 && done < 60; ++i) {
            BiElement a(p);
            for (int t = 0; t < 3; ++t) {
                i64 x = pe(rng), y = te(rng);
                a.set_coeff(x, y, fp_add(a.coeff(x, y), coeff(rng), p));
            }
            try {
                auto r = normalize_boundary_p(a);
                ++done;
                CHECK(r.different == r.type.n * (pv - 1));
                CHECK(r.integral_rhs.reduce_mod_pi() == r.special_fibre_rhs);
                if (!r.type.split) {
                    // re-normalizing the generic form of the integral model is idempotent
                    auto again = normalize_boundary_p(
                        r.integral_rhs.pi_shifted(-static_cast<i64>(pv) * r.type.n));
                    CHECK(again.type == r.type);
                }
            } catch (const ramification_error&) {
            } catch (const precision_error&) {
            }
        }
        CHECK(done >= 40);
    }
}

TEST_CASE("cocycle invariance: a and a + b^p - b have the same type") {
    for (u32 pv : {2u, 3u}) {
        PrimeChar p(pv);
        std::mt19937 rng(301 + pv);
        std::uniform_int_distribution<i64> pe(-3, 1), te(-2, 2);
        std::uniform_int_distribution<u32> coeff(0, pv - 1);
        int done = 0;
        for (int i = 0; i < 500 && done < 50; ++i) {
            BiElement a(p), b(p);
            for (int t = 0; t < 3; ++t) {
                i64 x = pe(rng), y = te(rng);
                a.set_coeff(x, y, fp_add(a.coeff(x, y), coeff(rng), p));
                x = pe(rng);
                y = te(rng);
                b.set_coeff(x, y, fp_add(b.coeff(x, y), coeff(rng), p));
            }
            BiElement a2 = a + b.pow(pv) - b;
            try {
                auto r1 = normalize_boundary_p(a);
                auto r2 = normalize_boundary_p(a2);
                // over F_p the constant-residue quirk distinguishes split
                // from unramified; compare full types when neither fires
                CHECK(r1.type == r2.type);
                ++done;
            } catch (const ramification_error&) {
            } catch (const precision_error&) {
            }
        }
        CHECK(done >= 30);
    }
}

TEST_CASE("brute-force oracle for n, p = 2, tiny windows") {
    PrimeChar p(2);
    std::mt19937 rng(404);
    std::uniform_int_distribution<i64> pe(-4, 0), te(-2, 2);
    std::uniform_int_distribution<u32> coeff(0, 1);

    // b-span: monomials pi^i T^j, i in [-2, 0], j in [-1, 1]
    std::vector<BiElement> span;
    for (i64 i = -2; i <= 0; ++i)
        for (i64 j = -1; j <= 1; ++j) span.push_back(BiElement::monomial(p, i, j, 1));

    int done = 0;
    for (int trial = 0; trial < 800 && done < 100; ++trial) {
        BiElement a(p);
        for (int t = 0; t < 3; ++t) {
            i64 x = pe(rng), y = te(rng);
            a.set_coeff(x, y, fp_add(a.coeff(x, y), coeff(rng), p));
        }
        i64 engine_n = 0;
        try {
            auto r = normalize_boundary_p(a);
            engine_n = r.type.split ? 0 : r.type.n;
        } catch (const error&) {
            continue;
        }
        // exhaustive minimum over sums of span monomials
        i64 best = INT64_MAX;
        const std::size_t N = span.size();
        for (std::size_t mask = 0; mask < (1u << N); ++mask) {
            BiElement b(p);
            for (std::size_t k = 0; k < N; ++k)
                if (mask & (1u << k)) b = b + span[k];
            BiElement mod = a + b.pow(2) - b;
            i64 v = mod.window_empty() ? 1 : mod.gauss_valuation();
            i64 n = ceil_div(std::max<i64>(0, -v), 2);
            best = std::min(best, n);
        }
        CHECK(engine_n == best);
        ++done;
    }
    CHECK(done == 100);
}

TEST_CASE("scaling covariance on catalog equations") {
    // types (n, m) from the double-point catalog: pi^{p s} scaling raises n by s
    for (u32 pv : {2u, 3u}) {
        PrimeChar p(pv);
        for (i64 m : {1, 2}) {
            if (m % pv == 0) continue;
            for (i64 n : {1, 2}) {
                auto a = BiElement::monomial(p, -static_cast<i64>(pv) * n, m, 1);
                auto r0 = normalize_boundary_p(a);
                REQUIRE(r0.type.n == n);
                for (i64 s : {1, 2}) {
                    auto r1 = normalize_boundary_p(a.pi_shifted(-static_cast<i64>(pv) * s));
                    CHECK(r1.type.n == n + s);
                    CHECK(r1.type.m == r0.type.m);
                }
            }
        }
    }
}

TEST_CASE("conductor_at_point") {
    PrimeChar p(3);
    // fbar = x^{-2} at x = 0, radicial kind: pole order 2, prime to 3
    auto f1 = RationalFn::pole_term(p, 0, 2, 1);
    CHECK(conductor_at_point(f1, P1Point::finite(0), TorsorKind::Radicial) == 2);

    // fbar = x^{-p} + x^{-1}, etale kind at 0: x^{-p} = x^{-1} mod wp and the
    // leading terms combine; for p = 2 the combined coefficient 1 + 1 = 0
    // kills the pole entirely
    for (u32 pv : {2u, 3u, 5u}) {
        PrimeChar q(pv);
        auto f2 = RationalFn::pole_term(q, 0, pv, 1) + RationalFn::pole_term(q, 0, 1, 1);
        CHECK(conductor_at_point(f2, P1Point::finite(0), TorsorKind::Etale) ==
              (pv == 2 ? 0 : 1));
    }

    // fbar = x^m, m > 0 prime to p, at infinity: conductor m
    auto f3 = RationalFn::x_power(p, 4);
    CHECK(conductor_at_point(f3, P1Point::infinity(), TorsorKind::Etale) == 4);

    // no pole after stripping: conductor 0
    auto f4 = RationalFn::pole_term(p, 1, 3, 1); // (x-1)^{-3} = cube at residue level
    CHECK(conductor_at_point(f4, P1Point::finite(1), TorsorKind::Radicial) == 0);
    CHECK(conductor_at_point(f4, P1Point::finite(2), TorsorKind::Radicial) == 0);
}

TEST_CASE("alpha_p equivalence basics") {
    PrimeChar p(3);
    Poly v{{1, 1}}; // v = x
    auto f = XYPoly::y_power(p, 7, -1);
    CHECK(alpha_p_equivalent(f, f, v));

    // f - g = (x + y)^p: a p-th power
    auto xplusy = XYPoly::from_base(p, Poly{{1, 1}}) + XYPoly::y_power(p, 1, 1);
    auto cube = xplusy * xplusy * xplusy;
    auto g = f - cube;
    CHECK(alpha_p_equivalent(f, g, v));

    // v a p-th power is rejected
    Poly vp{{3, 1}};
    CHECK_THROWS_AS(alpha_p_equivalent(f, f, vp), schema_error);
}

TEST_CASE("non-cube witness, p = 3") {
    PrimeChar p(3);
    // v = a1 = x (not a cube); f = -y^7, g = -y^7 + 2 a1 b^4 + y b^6 with b = x + 1
    Poly v{{1, 1}};
    Poly b{{1, 1}, {0, 1}};
    auto f = XYPoly::y_power(p, 7, -1);
    auto diff = XYPoly::from_base(p, poly_scale(poly_mul(v, poly_pow(b, 4, p), p), 2, p)) +
                XYPoly::y_power(p, 1, 1) * XYPoly::from_base(p, poly_pow(b, 6, p));
    auto g = f + diff;
    CHECK_FALSE(alpha_p_equivalent(f, g, v));
}

TEST_CASE("m-th root reports") {
    PrimeChar p(5);
    auto r1 = mth_root_in_fp(4, 2, p); // 4 = 2^2 and 3^2
    CHECK(r1.exists);
    CHECK(fp_pow(r1.root, 2, p) == 4);
    auto r2 = mth_root_in_fp(2, 2, p); // 2 is not a square mod 5
    CHECK_FALSE(r2.exists);
    CHECK(r2.extension_degree == 2); // squares in F_25
}
