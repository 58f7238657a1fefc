#include <doctest.h>

#include "weberyz/classpoly.hpp"
#include "weberyz/predictions.hpp"

using namespace weberyz;

namespace {

FactorizationMap numeric_resultant(i64 D1, i64 D2, int s)
{
    long prec = default_precision();
    BigInt r = resultant(minimal_polynomial(D1, s, prec).poly, minimal_polynomial(D2, s, prec).poly);
    return FactorizationMap::from(factorize(r));
}

} // namespace

TEST_CASE("D = -31, s = 1: per-class valuations of the worked example")
{
    PredictionContext ctx(-31, -31, 1);
    for (int cls = 1; cls < ctx.G0().order(); ++cls) {
        for (DiscRoute route : {DiscRoute::Main, DiscRoute::Pairs}) {
            FactorizationMap F = predicted_disc_class(ctx, cls, route);
            CHECK(F.exponent(3) == 6);
            CHECK(F.exponent(11) == 1);
            CHECK(F.exponent(23) == 1);
            CHECK(F.exponent(31) == frac(1, 2));
            for (i64 ell : {2L, 5L, 7L, 13L, 17L, 19L, 29L})
                CHECK(F.exponent(ell) == 0);
        }
        CHECK(ord_disc_main(ctx, 0, cls, 31) == frac(1, 2));
    }
    FactorizationMap full = predicted_disc(ctx);
    CHECK(full.to_string() == "3^12 * 11^2 * 23^2 * 31");
}

TEST_CASE("D = -31: the l = 11 count comes from one ideal pair with j = 1")
{
    PredictionContext ctx(-31, -31, 1);
    CHECK(w_weight(-31, 11, 11) == 1);
    auto W = ideal_pair_witnesses(ctx, 1, 11);
    REQUIRE(W.size() == 1);
    CHECK(W[0].j == 1);
    CHECK(W[0].b1.norm() == 1);
    CHECK(W[0].b2.norm() == 20);
    CHECK(W[0].b2.content() == 2);
    CHECK(W[0].weight == 1);
    CHECK(ord_disc_pairs(ctx, 1, 11) == 1);
    /* split primes contribute nothing */
    CHECK(ord_disc_pairs(ctx, 1, 2) == 0);
    CHECK(ord_disc_pairs(ctx, 1, 5) == 0);
}

TEST_CASE("(-7, -175), s = 1: resultant valuations of the worked example")
{
    PredictionContext ctx(-7, -175, 1);
    FactorizationMap F = predicted_resultant(ctx);
    CHECK(F.to_string() == "3^14 * 5 * 7^2 * 19^3 * 31");
    CHECK(ord_resultant(ctx, 13) == 0);
    CHECK(ord_resultant(ctx, 17) == 0);
    CHECK(F.same_entries(numeric_resultant(-7, -175, 1)));
}

TEST_CASE("resultant predictions match exact resultants")
{
    struct Pair
    {
        i64 D1, D2;
    };
    for (Pair pr : {Pair{-7, -175}, Pair{-23, -575}, Pair{-7, -1183}})
        for (int s : {1, 2, 3, 8, 24}) {
            CAPTURE(pr.D2);
            CAPTURE(s);
            PredictionContext ctx(pr.D1, pr.D2, s);
            FactorizationMap F = predicted_resultant(ctx);
            FactorizationMap num = numeric_resultant(pr.D1, pr.D2, s);
            CHECK(F.same_entries(num));
            for (auto const & [p, e] : num.entries())
                CHECK(p <= BigInt(ctx.N));
        }
}

TEST_CASE("resultant valuations do not depend on the choice of kappa")
{
    for (auto [D1, D2] : {std::pair{-7L, -175L}, std::pair{-23L, -575L}})
        for (int s : {1, 3, 8}) {
            PredictionContext ctx(D1, D2, s);
            for (i64 ell : primes_up_to(ctx.N)) {
                Rational base = ord_resultant(ctx, ell, kappa_ell(ctx.D0, ell, 0));
                for (int idx = 1; idx <= 2; ++idx)
                    CHECK(ord_resultant(ctx, ell, kappa_ell(ctx.D0, ell, idx)) == base);
            }
        }
}

TEST_CASE("kappa choices satisfy their Legendre conditions")
{
    for (i64 D0 : {-7L, -23L, -31L, -71L, -255L})
        for (i64 ell : {2L, 3L, 5L, 7L, 17L})
            for (int idx = 0; idx < 3; ++idx) {
                i64 k = kappa_ell(D0, ell, idx);
                CHECK(k < 0);
                CHECK(gcd(k, D0) == 1);
                for (i64 p : prime_divisors(-D0))
                    CHECK((kronecker(k, p) == 1) == (p != ell));
            }
}

TEST_CASE("main identity does not depend on the ideal representatives")
{
    for (i64 D : {-31L, -47L, -95L})
        for (int s : {1, 3, 8, 24}) {
            PredictionContext ctx(D, D, s);
            for (int cls = 1; cls < ctx.G0().order(); ++cls)
                for (i64 ell : primes_up_to(-D)) {
                    Rational base = ord_disc_main(ctx, 0, cls, ell, 0);
                    CHECK(ord_disc_main(ctx, 0, cls, ell, 1) == base);
                    CHECK(ord_disc_main(ctx, 0, cls, ell, 2) == base);
                }
        }
}

TEST_CASE("main and ideal-pair routes agree on small discriminants")
{
    for (i64 D : {-23L, -47L, -71L, -79L, -95L, -103L})
        for (int s : {1, 2, 3, 4, 6, 8, 12, 24}) {
            PredictionContext ctx(D, D, s);
            for (int cls = 1; cls < ctx.G0().order(); ++cls)
                for (i64 ell : primes_up_to(-D)) {
                    CAPTURE(D);
                    CAPTURE(s);
                    CAPTURE(cls);
                    CAPTURE(ell);
                    CHECK(ord_disc_main(ctx, 0, cls, ell) == ord_disc_pairs(ctx, cls, ell));
                }
        }
}

TEST_CASE("printed content congruence differs only for j >= 2 witnesses")
{
    /* D = -95, s = 8 has a ramified witness with j >= 2 where the two readings part ways */
    PredictionContext ctx(-95, -95, 8);
    bool differs = false;
    for (int cls = 1; cls < ctx.G0().order(); ++cls)
        for (i64 ell : primes_up_to(95)) {
            Rational v = ord_disc_pairs(ctx, cls, ell, Reading::Verified);
            Rational p = ord_disc_pairs(ctx, cls, ell, Reading::AsPrinted);
            if (v != p) {
                differs = true;
                bool has_deep = false;
                for (auto const & w : ideal_pair_witnesses(ctx, cls, ell, Reading::Verified))
                    has_deep = has_deep || w.j >= 2;
                for (auto const & w : ideal_pair_witnesses(ctx, cls, ell, Reading::AsPrinted))
                    has_deep = has_deep || w.j >= 2;
                CHECK(has_deep);
            }
        }
    CHECK(differs);
}

TEST_CASE("prediction preconditions")
{
    CHECK_THROWS_AS(PredictionContext(-15, -15, 1), DomainError);
    CHECK_THROWS_AS(PredictionContext(-31, -31, 5), DomainError);
    CHECK_THROWS_AS(PredictionContext(-7, -31, 1), DomainError);
    PredictionContext same(-7, -7, 1);
    CHECK_THROWS_AS(ord_resultant(same, 3), DomainError);
    CHECK_THROWS_AS(w_weight(-31, 11, 0), DomainError);
}
