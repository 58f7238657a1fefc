#include "weberyz/webereval.hpp"

#include <cmath>

namespace weberyz {

namespace {

constexpr long kGuardBits = 32;

Complex one(long prec)
{
    return Complex(Real(prec, 1L), Real(prec, 0L));
}

Complex with_prec(Complex const & z, long prec)
{
    Complex r(prec);
    mpfr_set(r.re.get(), z.re.get(), MPFR_RNDN);
    mpfr_set(r.im.get(), z.im.get(), MPFR_RNDN);
    return r;
}

i64 mod48(i64 x)
{
    return mod(x, 48);
}

/* Sum over k in Z of (-1)^k q^(k(3k-1)/2), truncated once terms drop below 2^-(prec+8). */
Complex pentagonal_series(Complex const & q, long prec)
{
    Complex sum = one(prec);
    double log2q = std::log2(cabs(q).to_double());
    if (!std::isfinite(log2q))
        return sum;
    for (i64 k = 1;; ++k) {
        i64 g1 = k * (3 * k - 1) / 2, g2 = k * (3 * k + 1) / 2;
        if (static_cast<double>(g1) * log2q < -static_cast<double>(prec + 8))
            break;
        Complex t = cpow(q, g1) + cpow(q, g2);
        if (k % 2)
            sum -= t;
        else
            sum += t;
    }
    return sum;
}

} // namespace

Gamma02Element gamma_mul(Gamma02Element const & x, Gamma02Element const & y)
{
    return Gamma02Element{x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d, x.c * y.a + x.d * y.c,
                          x.c * y.b + x.d * y.d};
}

Complex gamma_apply(Gamma02Element const & g, Complex const & tau)
{
    long p = tau.prec();
    Complex num = tau * Real(p, static_cast<long>(g.a)) + Complex(Real(p, static_cast<long>(g.b)), Real(p, 0L));
    Complex den = tau * Real(p, static_cast<long>(g.c)) + Complex(Real(p, static_cast<long>(g.d)), Real(p, 0L));
    return num / den;
}

Complex eta(Complex const & tau, long prec)
{
    if (tau.im.sign() <= 0)
        throw DomainError("eta: Im(tau) must be positive");
    long wp = prec + kGuardBits;
    Complex t = with_prec(tau, wp);
    Complex factor = one(wp);
    i64 twelfths = 0; /* accumulated multiplier exp(pi i twelfths / 12) */
    Real threshold = Real(wp, 1L) - ldexp(Real(wp, 1L), -wp / 2);
    for (int iter = 0; iter < 10000; ++iter) {
        BigInt n = t.re.round();
        t.re -= Real(wp, n);
        twelfths = mod(twelfths + static_cast<i64>(mpz_fdiv_ui(n.get_mpz_t(), 24)), 24);
        if (!(norm2(t) < threshold))
            break;
        /* eta(t) = eta(-1/t) / sqrt(-i t) */
        Complex minus_it(t.im, -t.re);
        factor /= csqrt(minus_it);
        t = Complex(Real(wp, -1L), Real(wp, 0L)) / t;
    }
    factor *= root_of_unity(wp, frac(twelfths, 24));
    Complex two_pi_i_t(-(Real::pi(wp) * Real(wp, 2L)) * t.im, Real::pi(wp) * Real(wp, 2L) * t.re);
    Complex q = cexp(two_pi_i_t);
    Complex q24 = cexp(two_pi_i_t * Real(wp, Rational(1, 24)));
    Complex r = factor * q24 * pentagonal_series(q, wp);
    return with_prec(r, prec);
}

Complex weber_f(Complex const & tau, long prec)
{
    long wp = prec + kGuardBits;
    Complex t = with_prec(tau, wp);
    Complex shifted = (t + one(wp)) * Real(wp, Rational(1, 2));
    Complex r = zeta48(wp, -1) * eta(shifted, wp) / eta(t, wp);
    return with_prec(r, prec);
}

Complex weber_f1(Complex const & tau, long prec)
{
    long wp = prec + kGuardBits;
    Complex t = with_prec(tau, wp);
    Complex r = eta(t * Real(wp, Rational(1, 2)), wp) / eta(t, wp);
    return with_prec(r, prec);
}

Complex weber_f2(Complex const & tau, long prec)
{
    long wp = prec + kGuardBits;
    Complex t = with_prec(tau, wp);
    Complex r = eta(t * Real(wp, 2L), wp) / eta(t, wp) * sqrt(Real(wp, 2L));
    return with_prec(r, prec);
}

int chi_exponent(Gamma02Element const & g)
{
    if (g.a * g.d - g.b * g.c != 1)
        throw DomainError("chi: determinant must be 1");
    if (mod(g.c, 2) != 0)
        throw DomainError("chi: lower-left entry must be even");
    i64 a = mod(g.a, 48), b = mod(g.b, 48), c = mod(g.c, 96), d = mod(g.d, 48);
    /* 2-part: (2/a) zeta_8^(3a(b + c/2)) */
    i64 e8 = mod(3 * a * (b + c / 2), 8);
    if (kronecker(2, a) == -1)
        e8 = mod(e8 + 4, 8);
    /* 3-part: zeta_3^(-(a+d)c + bd(c^2-1)) */
    i64 e3 = mod(-(a + d) * c + b * d * (c * c - 1), 3);
    return static_cast<int>(mod48(6 * e8 + 16 * e3));
}

Complex zeta48(long prec, i64 e)
{
    return root_of_unity(prec, frac(mod48(e), 48));
}

bool approx_equal(Complex const & x, Complex const & y, long prec)
{
    Real scale = cabs(x);
    Real unit(prec, 1L);
    if (scale < unit)
        scale = unit;
    Real diff = cabs(x - y);
    return diff < ldexp(scale, -prec / 2);
}

bool chi_invariance_check(Gamma02Element const & g, Complex const & tau, long prec)
{
    Complex lhs = weber_f2(gamma_apply(g, tau), prec);
    Complex rhs = zeta48(prec, chi_exponent(g)) * weber_f2(tau, prec);
    return approx_equal(lhs, rhs, prec);
}

Complex cm_point(i64 D, Form const & f, long prec)
{
    if (f.disc() != D || f.a <= 0 || D >= 0)
        throw DomainError("cm_point: form does not match a negative discriminant");
    Real re(prec, frac(-f.b, 2 * f.a));
    Real im = sqrt(Real(prec, static_cast<long>(-D))) / Real(prec, 2 * static_cast<long>(f.a));
    return Complex(re, im);
}

Complex class_invariant(i64 D, Form const & f, long prec)
{
    if (!is_admissible(D))
        throw DomainError("class_invariant: discriminant is not admissible");
    long wp = prec + kGuardBits;
    Complex z = cm_point(D, f, wp);
    i64 a = mod(f.a, 48), b = mod(f.b, 48), c = mod(f.c, 48);
    bool a_even = f.a % 2 == 0, c_even = f.c % 2 == 0;
    Complex value(wp);
    if (a_even && c_even) {
        value = zeta48(wp, b * mod48(a - c - a * mod48(c * c))) * weber_f(z, wp);
    } else if (a_even) {
        value = zeta48(wp, b * mod48(a - c - a * mod48(c * c))) * weber_f1(z, wp);
        if (epsilon_sign(D) < 0)
            value = value * Real(wp, -1L);
    } else if (c_even) {
        value = zeta48(wp, b * mod48(a - c + mod48(a * a) * c)) * weber_f2(z, wp);
        if (epsilon_sign(D) < 0)
            value = value * Real(wp, -1L);
    } else {
        throw DomainError("class_invariant: a and c both odd cannot occur for odd D");
    }
    return with_prec(value, prec);
}

} // namespace weberyz
