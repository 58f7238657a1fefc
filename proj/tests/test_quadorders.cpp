#include <doctest.h>

#include <algorithm>
#include <map>

#include "weberyz/quadorders.hpp"

using namespace weberyz;

namespace {

/* Reduced primitive forms of discriminant D, counted directly. */
i64 brute_class_number(i64 D)
{
    i64 h = 0;
    for (i64 a = 1; 3 * a * a <= -D; ++a)
        for (i64 b = -a + 1; b <= a; ++b) {
            i64 num = b * b - D;
            if (num % (4 * a) != 0)
                continue;
            i64 c = num / (4 * a);
            if (c < a || (c == a && b < 0))
                continue;
            if (gcd(gcd(a, b < 0 ? -b : b), c) == 1)
                ++h;
        }
    return h;
}

/* #{(x, y) : f(x, y) = n} by scanning a box that contains the ellipse. */
i64 brute_representations(Form const & f, i64 n)
{
    i64 D = -f.disc();
    i64 bx = isqrt(4 * f.c * n / D) + 1, by = isqrt(4 * f.a * n / D) + 1;
    i64 count = 0;
    for (i64 x = -bx; x <= bx; ++x)
        for (i64 y = -by; y <= by; ++y)
            if (f.a * x * x + f.b * x * y + f.c * y * y == n)
                ++count;
    return count;
}

i64 dirichlet_rho(i64 D, i64 n)
{
    i64 total = 0;
    for (i64 d : divisors(n))
        total += kronecker(D, d);
    return total;
}

std::vector<i64> fundamental_negatives(i64 lo)
{
    std::vector<i64> out;
    for (i64 D = -3; D >= lo; --D)
        if (is_fundamental(D))
            out.push_back(D);
    return out;
}

} // namespace

TEST_CASE("class numbers agree with a direct count of reduced forms")
{
    for (i64 D = -3; D >= -1500; --D)
        if (mod(D, 4) == 0 || mod(D, 4) == 1)
            CHECK(class_number(D) == brute_class_number(D));
    CHECK(class_number(-31) == 3);
    CHECK(class_number(-175) == 6);
}

TEST_CASE("class-number identity for orders: h(D0 t^2) = h(D0) t prod(1 - (D0|p)/p)")
{
    for (i64 D0 : {-7L, -15L, -31L})
        for (i64 t = 1; t <= 5; ++t) {
            Rational expect = Rational(class_number(D0) * t);
            for (i64 p : prime_divisors(t))
                expect *= 1 - frac(kronecker(D0, p), p);
            CHECK(Rational(class_number(D0 * t * t)) == expect);
        }
}

TEST_CASE("class group axioms and composition")
{
    for (i64 D : {-31L, -47L, -71L, -175L, -311L, -399L, -420L}) {
        ClassGroup G(D);
        int h = G.order();
        CHECK(G.form(0) == identity_form(D));
        for (int x = 0; x < h; ++x) {
            CHECK(is_reduced(G.form(x)));
            CHECK(G.mul(x, G.identity()) == x);
            CHECK(G.mul(x, G.inverse(x)) == 0);
            Form f = G.form(x);
            CHECK(G.class_of(Form{f.a, -f.b, f.c}) == G.inverse(x));
            for (int y = 0; y < h; ++y) {
                CHECK(G.mul(x, y) == G.mul(y, x));
                CHECK(G.class_of(compose(G.form(x), G.form(y))) == G.mul(x, y));
                for (int z = 0; z < h; z += 2)
                    CHECK(G.mul(G.mul(x, y), z) == G.mul(x, G.mul(y, z)));
            }
        }
    }
}

TEST_CASE("reduction preserves the class under SL2(Z) substitutions")
{
    ClassGroup G(-479);
    /* f(x + k y, y) and f(y, -x) are properly equivalent to f */
    for (int cls = 0; cls < G.order(); ++cls) {
        Form f = G.form(cls);
        for (i64 k = -5; k <= 5; ++k) {
            Form g{f.a, f.b + 2 * k * f.a, f.a * k * k + f.b * k + f.c};
            Form r{g.c, -g.b, g.a};
            CHECK(reduce(g) == f);
            CHECK(reduce(r) == f);
        }
    }
}

TEST_CASE("rho matches the divisor sum of the quadratic character")
{
    for (i64 D : fundamental_negatives(-300))
        for (i64 n = 1; n <= 200; ++n) {
            CHECK(rho(D, Rational(n)) == dirichlet_rho(D, n));
            i64 prod = 1;
            for (i64 p : prime_divisors(n))
                prod *= rho_p(D, p, n);
            CHECK(prod == dirichlet_rho(D, n));
        }
    CHECK(rho(-31, frac(1, 3)) == 0);
    CHECK(rho(-31, Rational(-5)) == 0);
    CHECK(rho(-31, Rational(0)) == frac(3, 2));
}

TEST_CASE("rho_M drops the local factors at primes dividing M")
{
    for (i64 n = 1; n <= 100; ++n) {
        Rational expect = 1;
        for (i64 p : prime_divisors(n))
            if (p != 3)
                expect *= rho_p(-31, p, n);
        CHECK(rho_M(-31, Rational(n), 3) == expect);
    }
}

TEST_CASE("class-restricted counts equal half the representation numbers of the class form")
{
    for (i64 D : {-31L, -71L, -191L, -255L}) {
        ClassGroup G(D);
        for (int cls = 0; cls < G.order(); ++cls)
            for (i64 n = 1; n <= 120; ++n)
                CHECK(r_class(G, cls, Rational(n)) == frac(brute_representations(G.form(cls), n), 2));
        for (i64 n = 1; n <= 120; ++n) {
            Rational total = 0;
            for (int cls = 0; cls < G.order(); ++cls)
                total += r_class(G, cls, Rational(n));
            CHECK(total == rho(D, Rational(n)));
            CHECK(static_cast<i64>(ideals_of_norm(D, n).size()) == dirichlet_rho(D, n));
        }
    }
}

TEST_CASE("ideal arithmetic: norms are multiplicative and I conj(I) = (Nm I)")
{
    for (i64 D : {-31L, -199L, -335L}) {
        std::vector<Ideal> all;
        for (i64 n = 1; n <= 30; ++n)
            for (auto const & I : ideals_of_norm(D, n))
                all.push_back(I);
        ClassGroup G(D);
        for (auto const & I : all) {
            CHECK(ideal_mul(I, ideal_conj(I)) == ideal_scale(unit_ideal(D), I.norm()));
            CHECK(ideal_class(G, ideal_conj(I)) == G.inverse(ideal_class(G, I)));
            for (size_t k = 0; k < all.size(); k += 3) {
                Ideal const & J = all[k];
                Ideal IJ = ideal_mul(I, J);
                CHECK(IJ.norm() == I.norm() * J.norm());
                CHECK(ideal_class(G, IJ) == G.mul(ideal_class(G, I), ideal_class(G, J)));
            }
        }
        for (int cls = 0; cls < G.order(); ++cls)
            CHECK(G.class_of(form_of_ideal(ideal_of_form(D, G.form(cls)))) == cls);
    }
}

TEST_CASE("element enumeration returns exactly the elements of the given norm")
{
    i64 D = -31;
    for (auto const & I : ideals_of_norm(D, 10)) {
        for (i64 N = 1; N <= 400; ++N) {
            auto elems = enumerate_elements(I, N);
            std::map<HalfElem, int> seen;
            for (auto const & x : elems) {
                CHECK(elem_norm(D, x) == N);
                CHECK(ideal_contains(I, x));
                CHECK(seen[x]++ == 0);
            }
            /* brute force over the doubled coordinates */
            i64 count = 0;
            for (i64 v = -isqrt(4 * N / 31) - 1; v <= isqrt(4 * N / 31) + 1; ++v)
                for (i64 u = -isqrt(4 * N) - 1; u <= isqrt(4 * N) + 1; ++u)
                    if (mod(u - v, 2) == 0 && u * u + 31 * v * v == 4 * N && ideal_contains(I, HalfElem{u, v}))
                        ++count;
            CHECK(static_cast<i64>(elems.size()) == count);
        }
    }
}

TEST_CASE("genus characters are homomorphisms on the class group")
{
    for (i64 D : {-255L, -399L, -455L}) {
        ClassGroup G(D);
        for (int x = 0; x < G.order(); ++x)
            for (int y = 0; y < G.order(); ++y) {
                auto gx = genus_of(G, x), gy = genus_of(G, y), gxy = genus_of(G, G.mul(x, y));
                REQUIRE(gx.size() == gxy.size());
                for (size_t i = 0; i < gx.size(); ++i)
                    CHECK(gxy[i] == gx[i] * gy[i]);
            }
    }
}

TEST_CASE("Diff sets have even size for positive n and negative D")
{
    for (i64 D : fundamental_negatives(-200))
        for (i64 n = 1; n <= 60; ++n)
            CHECK(S_set(D, Rational(n)).size() % 2 == 0);
    CHECK(S_set(-7, Rational(-3)) == std::vector<i64>{3});
    auto S = S_set(-31, Rational(-12));
    CHECK(std::find(S.begin(), S.end(), 3) != S.end());
}

TEST_CASE("small CM representatives satisfy their congruence conditions")
{
    struct Case
    {
        i64 D1, D2;
    };
    for (Case c : {Case{-31, -31}, Case{-7, -175}, Case{-47, -47}, Case{-71, -71}}) {
        ClassGroup G1(c.D1), G2(c.D2);
        for (int c1 = 0; c1 < G1.order(); ++c1)
            for (int c2 = 0; c2 < G2.order(); ++c2) {
                SmallCMPair P = make_small_cm_pair(G1, c1, G2, c2);
                i64 D = P.D0 * P.t1 * P.t1 * P.t2 * P.t2;
                CHECK(gcd(P.a1, P.a2) == 1);
                for (i64 ai : {P.a1, P.a2}) {
                    CHECK(gcd(ai, 6 * P.b * D) == 1);
                    CHECK((BigInt(P.b) * P.b - P.D0) % (4 * ai) == 0);
                    CHECK(mod(P.b - 1, 48) == 0);
                }
                CHECK(mod(P.a1 - P.t1, 48) == 0);
                CHECK(mod(P.a2 - P.t2, 48) == 0);
                CHECK(P.a == P.a1 * P.a2);
                CHECK(P.a0tilde.norm() == P.a);
                if (c.D1 == c.D2 && P.D0 == c.D1)
                    CHECK(P.a0_class == G1.mul(G1.inverse(c1), c2));
            }
    }
}
