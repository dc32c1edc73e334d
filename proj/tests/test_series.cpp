#include "doctest.h"

#include <random>

#include "pcov/bielem.hpp"
#include "pcov/series.hpp"

using namespace pcov;

namespace {

ResidueSeries rand_series(PrimeChar p, std::mt19937& rng, i64 lo = -4, i64 hi = 4) {
    std::uniform_int_distribution<i64> exp(lo, hi);
    std::uniform_int_distribution<u32> coeff(0, p.value() - 1);
    std::uniform_int_distribution<int> nterms(0, 4);
    ResidueSeries s(p);
    int n = nterms(rng);
    for (int i = 0; i < n; ++i) s.set_coeff(exp(rng), fp_add(s.coeff(0), coeff(rng), p));
    return s;
}

BiElement rand_bi(PrimeChar p, std::mt19937& rng) {
    std::uniform_int_distribution<i64> pe(-3, 3), te(-3, 3);
    std::uniform_int_distribution<u32> coeff(0, p.value() - 1);
    std::uniform_int_distribution<int> nterms(0, 4);
    BiElement e(p);
    int n = nterms(rng);
    for (int i = 0; i < n; ++i) {
        i64 a = pe(rng), b = te(rng);
        e.set_coeff(a, b, fp_add(e.coeff(a, b), coeff(rng), p));
    }
    return e;
}

} // namespace

TEST_CASE("prime validation") {
    CHECK_NOTHROW(PrimeChar(2));
    CHECK_NOTHROW(PrimeChar(97));
    CHECK_THROWS_AS(PrimeChar(1), schema_error);
    CHECK_THROWS_AS(PrimeChar(6), schema_error);
}

TEST_CASE("additive cancellation: (t^-1 + t) + (-t) = t^-1") {
    PrimeChar p(3);
    auto a = ResidueSeries::from_terms(p, {{-1, 1}, {1, 1}});
    auto b = ResidueSeries::monomial(p, 1, -1);
    auto r = a + b;
    CHECK(r == ResidueSeries::monomial(p, -1, 1));
}

TEST_CASE("product with precision: (1+t)(1-t) = 1 - t^2 + O(t^5) over F_3") {
    PrimeChar p(3);
    auto a = ResidueSeries::from_terms(p, {{0, 1}, {1, 1}}, 5);
    auto b = ResidueSeries::from_terms(p, {{0, 1}, {1, -1}}, 5);
    auto r = a * b;
    CHECK(r.prec() == 5);
    CHECK(r.coeff(0) == 1);
    CHECK(r.coeff(1) == 0);
    CHECK(r.coeff(2) == 2); // -1 mod 3
}

TEST_CASE("monomial product in the two-variable ring, p = 2") {
    PrimeChar p(2);
    auto a = BiElement::monomial(p, 1, -1, 1, 3);
    auto r = a * a;
    CHECK(r.coeff(2, -2) == 1);
    CHECK(r.pi_prec() == 4); // 3 + val(a) = 3 + 1
}

TEST_CASE("valuations") {
    PrimeChar p(5);
    auto f = BiElement::from_terms(p, {{{-6, 2}, 1}, {{-1, 0}, 1}});
    CHECK(f.gauss_valuation() == -6);
    auto g = ResidueSeries::from_terms(p, {{-5, 1}, {3, 1}});
    CHECK(g.valuation() == -5);
    BiElement zero_tr(p, 4);
    CHECK_THROWS_AS(zero_tr.gauss_valuation(), precision_error);
    BiElement zero_exact(p);
    CHECK(zero_exact.gauss_valuation() == BiElement::kValInf);
}

TEST_CASE("reduce_mod_pi") {
    PrimeChar p(3);
    auto f = BiElement::from_terms(p, {{{0, -3}, 1}, {{1, -5}, 1}});
    auto r = f.reduce_mod_pi();
    CHECK(r == ResidueSeries::monomial(p, -3, 1));

    auto g = BiElement::from_terms(p, {{{2, 1}, 1}});
    CHECK(g.reduce_mod_pi().window_empty());

    auto h = BiElement::from_terms(p, {{{0, 0}, 1}, {{0, 1}, 1}, {{1, 2}, 1}});
    CHECK(h.reduce_mod_pi() == ResidueSeries::from_terms(p, {{0, 1}, {1, 1}}));

    auto neg = BiElement::monomial(p, -1, 0, 1);
    CHECK_THROWS_AS(neg.reduce_mod_pi(), error);
}

TEST_CASE("p-th power tests and roots") {
    PrimeChar p3(3);
    auto g = ResidueSeries::from_terms(p3, {{-6, 1}, {3, 2}});
    CHECK(g.is_pth_power());
    CHECK(g.pth_root() == ResidueSeries::from_terms(p3, {{-2, 1}, {1, 2}}));

    PrimeChar p2(2);
    auto h = ResidueSeries::from_terms(p2, {{-2, 1}, {-1, 1}});
    CHECK_FALSE(h.is_pth_power());

    PrimeChar p5(5);
    auto c = ResidueSeries::monomial(p5, 0, 3);
    CHECK(c.is_pth_power());
    // Fermat: 3^{1/5} = 3 over F_5, since 3^5 = 243 = 3 mod 5
    CHECK(fp_pow(3, 5, p5) == 3);
    CHECK(c.pth_root() == ResidueSeries::monomial(p5, 0, 3));
}

TEST_CASE("ring axioms on random elements") {
    for (u32 pv : {2u, 3u, 5u}) {
        PrimeChar p(pv);
        std::mt19937 rng(42 + pv);
        for (int i = 0; i < 60; ++i) {
            auto a = rand_series(p, rng), b = rand_series(p, rng), c = rand_series(p, rng);
            CHECK(a + b == b + a);
            CHECK((a + b) + c == a + (b + c));
            CHECK(a * b == b * a);
            CHECK((a * b) * c == a * (b * c));
            CHECK(a * (b + c) == a * b + a * c);

            auto x = rand_bi(p, rng), y = rand_bi(p, rng), z = rand_bi(p, rng);
            CHECK(x + y == y + x);
            CHECK(x * (y + z) == x * y + x * z);
            CHECK((x * y) * z == x * (y * z));
        }
    }
}

TEST_CASE("reduction is multiplicative; valuation is additive") {
    for (u32 pv : {2u, 3u}) {
        PrimeChar p(pv);
        std::mt19937 rng(7 + pv);
        for (int i = 0; i < 60; ++i) {
            auto x = rand_bi(p, rng), y = rand_bi(p, rng);
            // shift to nonnegative valuation so reduction is defined
            auto shift = [&](const BiElement& e) {
                if (e.window_empty()) return e;
                i64 v = e.gauss_valuation();
                return v < 0 ? e.pi_shifted(-v) : e;
            };
            auto xs = shift(x), ys = shift(y);
            CHECK((xs * ys).reduce_mod_pi() == xs.reduce_mod_pi() * ys.reduce_mod_pi());
            if (!x.window_empty() && !y.window_empty())
                CHECK((x * y).gauss_valuation() == x.gauss_valuation() + y.gauss_valuation());
        }
    }
}

TEST_CASE("p-th power round trip") {
    for (u32 pv : {2u, 3u, 5u}) {
        PrimeChar p(pv);
        std::mt19937 rng(11 + pv);
        for (int i = 0; i < 40; ++i) {
            auto g = rand_series(p, rng);
            auto gp = g.frobenius();
            CHECK(gp.is_pth_power());
            CHECK(gp.pth_root() == g);
            CHECK(gp == g.pow(pv));
        }
    }
}

TEST_CASE("exact zero vs zero-so-far") {
    PrimeChar p(2);
    ResidueSeries z(p);
    CHECK(z.is_exact_zero());
    ResidueSeries zt(p, 4);
    CHECK_FALSE(zt.is_exact_zero());
    CHECK(zt.window_empty());
    CHECK_THROWS_AS(zt.valuation(), precision_error);
}

TEST_CASE("germ window enforcement and coercion") {
    PrimeChar p(3);
    BiElement g(p, BiElement::kExact, 0);
    CHECK_THROWS_AS(g.set_coeff(0, -1, 1), schema_error);
    BiElement b = BiElement::monomial(p, 0, -1, 1);
    BiElement germ = BiElement::monomial(p, 0, 1, 1, BiElement::kExact, 0);
    CHECK_THROWS_AS(b + germ, schema_error);
    CHECK_NOTHROW(b + germ.as_boundary());
}

TEST_CASE("artin-schreier reduction: t^-p goes to t^-1") {
    for (u32 pv : {2u, 3u, 5u}) {
        PrimeChar p(pv);
        auto s = ResidueSeries::monomial(p, -static_cast<i64>(pv), 1);
        auto red = artin_schreier_reduce(s, false);
        CHECK(red.reduced == ResidueSeries::monomial(p, -1, 1));
        // witness consistency: reduced = s - (b^p - b)
        CHECK(red.reduced == s - red.witness.frobenius() + red.witness);
    }
}

TEST_CASE("strip p-th power monomials") {
    PrimeChar p(3);
    auto s = ResidueSeries::from_terms(p, {{-6, 2}, {-1, 1}, {3, 1}});
    auto st = strip_pth_power_monomials(s);
    CHECK(st.stripped == ResidueSeries::monomial(p, -1, 1));
    CHECK(st.root.frobenius() == ResidueSeries::from_terms(p, {{-6, 2}, {3, 1}}));
}
