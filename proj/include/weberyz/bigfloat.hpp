#ifndef WEBERYZ_BIGFLOAT_HPP
#define WEBERYZ_BIGFLOAT_HPP

#include <string>

#include <mpfr.h>

#include "weberyz/arith.hpp"

namespace weberyz {

/* RAII wrapper around mpfr_t; results take the larger operand precision. */
class Real
{
  public:
    explicit Real(long prec = 128);
    Real(long prec, long v);
    Real(long prec, BigInt const & v);
    Real(long prec, Rational const & v);
    Real(Real const & o);
    Real(Real && o) noexcept;
    Real & operator=(Real const & o);
    Real & operator=(Real && o) noexcept;
    ~Real();

    long prec() const { return static_cast<long>(mpfr_get_prec(v_)); }
    mpfr_ptr get() { return v_; }
    mpfr_srcptr get() const { return v_; }

    static Real pi(long prec);

    Real operator-() const;
    Real & operator+=(Real const & o);
    Real & operator-=(Real const & o);
    Real & operator*=(Real const & o);
    Real & operator/=(Real const & o);

    double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
    bool is_zero() const { return mpfr_zero_p(v_) != 0; }
    int sign() const { return mpfr_sgn(v_); }
    /* Exponent e with 2^(e-1) <= |x| < 2^e; very negative for zero. */
    long exponent2() const;
    /* Nearest integer. */
    BigInt round() const;
    std::string to_string(int digits) const;

  private:
    mpfr_t v_;
};

Real operator+(Real a, Real const & b);
Real operator-(Real a, Real const & b);
Real operator*(Real a, Real const & b);
Real operator/(Real a, Real const & b);
bool operator<(Real const & a, Real const & b);
Real abs(Real const & x);
Real sqrt(Real const & x);
Real exp(Real const & x);
Real cos(Real const & x);
Real sin(Real const & x);
Real ldexp(Real const & x, long e);

struct Complex
{
    Real re, im;

    explicit Complex(long prec = 128) : re(prec), im(prec) {}
    Complex(Real r, Real i) : re(std::move(r)), im(std::move(i)) {}

    long prec() const { return re.prec(); }
    Complex & operator+=(Complex const & o);
    Complex & operator-=(Complex const & o);
    Complex & operator*=(Complex const & o);
    Complex & operator/=(Complex const & o);
};

Complex operator+(Complex a, Complex const & b);
Complex operator-(Complex a, Complex const & b);
Complex operator*(Complex a, Complex const & b);
Complex operator/(Complex a, Complex const & b);
Complex operator*(Complex a, Real const & b);
Complex conj(Complex const & z);
Real norm2(Complex const & z);
Real cabs(Complex const & z);
Complex cexp(Complex const & z);
/* exp(2 pi i r) for rational r. */
Complex root_of_unity(long prec, Rational const & r);
Complex cpow(Complex const & z, long n);
/* Principal square root. */
Complex csqrt(Complex const & z);

} // namespace weberyz

#endif
