#ifndef WEBERYZ_WEBEREVAL_HPP
#define WEBERYZ_WEBEREVAL_HPP

#include "weberyz/bigfloat.hpp"
#include "weberyz/quadorders.hpp"

namespace weberyz {

/* Element (a b; c d) of Gamma_0(2): ad - bc = 1 and c even. */
struct Gamma02Element
{
    i64 a = 1, b = 0, c = 0, d = 1;
};

Gamma02Element gamma_mul(Gamma02Element const & x, Gamma02Element const & y);
/* Linear fractional action (a tau + b)/(c tau + d). */
Complex gamma_apply(Gamma02Element const & g, Complex const & tau);

/* Dedekind eta; absolute error about 2^(4 - prec). Throws DomainError if Im(tau) <= 0. */
Complex eta(Complex const & tau, long prec);
Complex weber_f(Complex const & tau, long prec);
Complex weber_f1(Complex const & tau, long prec);
Complex weber_f2(Complex const & tau, long prec);

/* Exponent e mod 48 with f2(g tau) = zeta_48^e f2(tau). */
int chi_exponent(Gamma02Element const & g);
/* zeta_48^e. */
Complex zeta48(long prec, i64 e);
bool chi_invariance_check(Gamma02Element const & g, Complex const & tau, long prec);

/* CM point (-b + sqrt(D))/(2a) of the form (a, b, c). */
Complex cm_point(i64 D, Form const & f, long prec);
/* Normalized Weber value of the class of the form (a, b, c) with D = b^2 - 4ac admissible. */
Complex class_invariant(i64 D, Form const & f, long prec);

/* Comparison tolerance 2^(-prec/2), relative to max(1, |x|). */
bool approx_equal(Complex const & x, Complex const & y, long prec);

} // namespace weberyz

#endif
