#include "weberyz/bigfloat.hpp"

#include <algorithm>
#include <memory>

namespace weberyz {

Real::Real(long prec)
{
    mpfr_init2(v_, prec);
    mpfr_set_zero(v_, 1);
}

Real::Real(long prec, long v)
{
    mpfr_init2(v_, prec);
    mpfr_set_si(v_, v, MPFR_RNDN);
}

Real::Real(long prec, BigInt const & v)
{
    mpfr_init2(v_, prec);
    mpfr_set_z(v_, v.get_mpz_t(), MPFR_RNDN);
}

Real::Real(long prec, Rational const & v)
{
    mpfr_init2(v_, prec);
    mpfr_set_q(v_, v.get_mpq_t(), MPFR_RNDN);
}

Real::Real(Real const & o)
{
    mpfr_init2(v_, mpfr_get_prec(o.v_));
    mpfr_set(v_, o.v_, MPFR_RNDN);
}

Real::Real(Real && o) noexcept
{
    mpfr_init2(v_, mpfr_get_prec(o.v_));
    mpfr_swap(v_, o.v_);
}

Real & Real::operator=(Real const & o)
{
    if (this != &o) {
        mpfr_set_prec(v_, mpfr_get_prec(o.v_));
        mpfr_set(v_, o.v_, MPFR_RNDN);
    }
    return *this;
}

Real & Real::operator=(Real && o) noexcept
{
    mpfr_swap(v_, o.v_);
    return *this;
}

Real::~Real()
{
    mpfr_clear(v_);
}

Real Real::pi(long prec)
{
    Real r(prec);
    mpfr_const_pi(r.v_, MPFR_RNDN);
    return r;
}

namespace {

long max_prec(Real const & a, Real const & b)
{
    return std::max(a.prec(), b.prec());
}

} // namespace

Real Real::operator-() const
{
    Real r(prec());
    mpfr_neg(r.v_, v_, MPFR_RNDN);
    return r;
}

Real & Real::operator+=(Real const & o)
{
    mpfr_prec_round(v_, max_prec(*this, o), MPFR_RNDN);
    mpfr_add(v_, v_, o.v_, MPFR_RNDN);
    return *this;
}

Real & Real::operator-=(Real const & o)
{
    mpfr_prec_round(v_, max_prec(*this, o), MPFR_RNDN);
    mpfr_sub(v_, v_, o.v_, MPFR_RNDN);
    return *this;
}

Real & Real::operator*=(Real const & o)
{
    mpfr_prec_round(v_, max_prec(*this, o), MPFR_RNDN);
    mpfr_mul(v_, v_, o.v_, MPFR_RNDN);
    return *this;
}

Real & Real::operator/=(Real const & o)
{
    mpfr_prec_round(v_, max_prec(*this, o), MPFR_RNDN);
    mpfr_div(v_, v_, o.v_, MPFR_RNDN);
    return *this;
}

long Real::exponent2() const
{
    if (mpfr_zero_p(v_))
        return -(1L << 40);
    return static_cast<long>(mpfr_get_exp(v_));
}

BigInt Real::round() const
{
    BigInt z;
    mpfr_get_z(z.get_mpz_t(), v_, MPFR_RNDN);
    return z;
}

std::string Real::to_string(int digits) const
{
    char * s = nullptr;
    mpfr_asprintf(&s, "%.*Rg", digits, v_);
    std::string out(s);
    mpfr_free_str(s);
    return out;
}

Real operator+(Real a, Real const & b)
{
    a += b;
    return a;
}

Real operator-(Real a, Real const & b)
{
    a -= b;
    return a;
}

Real operator*(Real a, Real const & b)
{
    a *= b;
    return a;
}

Real operator/(Real a, Real const & b)
{
    a /= b;
    return a;
}

bool operator<(Real const & a, Real const & b)
{
    return mpfr_less_p(a.get(), b.get()) != 0;
}

Real abs(Real const & x)
{
    Real r(x.prec());
    mpfr_abs(r.get(), x.get(), MPFR_RNDN);
    return r;
}

Real sqrt(Real const & x)
{
    Real r(x.prec());
    mpfr_sqrt(r.get(), x.get(), MPFR_RNDN);
    return r;
}

Real exp(Real const & x)
{
    Real r(x.prec());
    mpfr_exp(r.get(), x.get(), MPFR_RNDN);
    return r;
}

Real cos(Real const & x)
{
    Real r(x.prec());
    mpfr_cos(r.get(), x.get(), MPFR_RNDN);
    return r;
}

Real sin(Real const & x)
{
    Real r(x.prec());
    mpfr_sin(r.get(), x.get(), MPFR_RNDN);
    return r;
}

Real ldexp(Real const & x, long e)
{
    Real r(x.prec());
    mpfr_mul_2si(r.get(), x.get(), e, MPFR_RNDN);
    return r;
}

Complex & Complex::operator+=(Complex const & o)
{
    re += o.re;
    im += o.im;
    return *this;
}

Complex & Complex::operator-=(Complex const & o)
{
    re -= o.re;
    im -= o.im;
    return *this;
}

Complex & Complex::operator*=(Complex const & o)
{
    Real r = re * o.re - im * o.im;
    Real i = re * o.im + im * o.re;
    re = std::move(r);
    im = std::move(i);
    return *this;
}

Complex & Complex::operator/=(Complex const & o)
{
    Real d = o.re * o.re + o.im * o.im;
    Real r = (re * o.re + im * o.im) / d;
    Real i = (im * o.re - re * o.im) / d;
    re = std::move(r);
    im = std::move(i);
    return *this;
}

Complex operator+(Complex a, Complex const & b)
{
    a += b;
    return a;
}

Complex operator-(Complex a, Complex const & b)
{
    a -= b;
    return a;
}

Complex operator*(Complex a, Complex const & b)
{
    a *= b;
    return a;
}

Complex operator/(Complex a, Complex const & b)
{
    a /= b;
    return a;
}

Complex operator*(Complex a, Real const & b)
{
    a.re *= b;
    a.im *= b;
    return a;
}

Complex conj(Complex const & z)
{
    return Complex(z.re, -z.im);
}

Real norm2(Complex const & z)
{
    return z.re * z.re + z.im * z.im;
}

Real cabs(Complex const & z)
{
    Real r(z.prec());
    mpfr_hypot(r.get(), z.re.get(), z.im.get(), MPFR_RNDN);
    return r;
}

Complex cexp(Complex const & z)
{
    Real m = exp(z.re);
    return Complex(m * cos(z.im), m * sin(z.im));
}

Complex root_of_unity(long prec, Rational const & r)
{
    /* reduce r mod 1 for accuracy */
    Rational f = r;
    BigInt fl;
    mpz_fdiv_q(fl.get_mpz_t(), f.get_num_mpz_t(), f.get_den_mpz_t());
    f -= fl;
    Real theta = Real::pi(prec + 16) * Real(prec + 16, Rational(2 * f));
    Real c = cos(theta), s = sin(theta);
    mpfr_prec_round(c.get(), prec, MPFR_RNDN);
    mpfr_prec_round(s.get(), prec, MPFR_RNDN);
    return Complex(c, s);
}

Complex cpow(Complex const & z, long n)
{
    if (n < 0) {
        Complex one(Real(z.prec(), 1L), Real(z.prec(), 0L));
        return one / cpow(z, -n);
    }
    Complex result(Real(z.prec(), 1L), Real(z.prec(), 0L));
    Complex base = z;
    while (n > 0) {
        if (n & 1)
            result *= base;
        n >>= 1;
        if (n)
            base *= base;
    }
    return result;
}

Complex csqrt(Complex const & z)
{
    Real r = cabs(z);
    long p = z.prec();
    Real half(p, Rational(1, 2));
    Real a = sqrt((r + z.re) * half);
    Real b = sqrt((r - z.re) * half);
    if (z.im.sign() < 0)
        b = -b;
    return Complex(a, b);
}

} // namespace weberyz
