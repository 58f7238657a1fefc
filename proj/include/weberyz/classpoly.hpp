#ifndef WEBERYZ_CLASSPOLY_HPP
#define WEBERYZ_CLASSPOLY_HPP

#include <string>
#include <vector>

#include "weberyz/bigfloat.hpp"
#include "weberyz/quadorders.hpp"

namespace weberyz {

/* Integer polynomial, coefficients in ascending degree, no trailing zeros. */
struct IntPoly
{
    std::vector<BigInt> c;

    int degree() const { return static_cast<int>(c.size()) - 1; }
    BigInt const & lead() const { return c.back(); }
    bool operator==(IntPoly const & o) const { return c == o.c; }
    std::string to_string() const;
};

IntPoly make_poly(std::vector<BigInt> coeffs);
IntPoly derivative(IntPoly const & p);

/* Largest distance of a coefficient from its rounding, and the precision that certified it. */
struct RoundingReport
{
    double max_offset = 0;
    long prec_used = 0;
};

/* Starting precision: WEBER_YZ_PREC if set, else 192 bits. */
long default_precision();
constexpr long kPrecisionCap = 65536;

/* f(A)^(24/s) for every class of Cl(D), in class-group order. */
std::vector<Complex> class_invariant_powers(ClassGroup const & G, int s, long prec);

struct MinimalPolynomial
{
    IntPoly poly;
    RoundingReport report;
};

/*
 * prod over Cl(D) of (X - f(A)^(24/s)), rounded to integers. Precision doubles
 * from `prec` until rounding is certified; PrecisionError past the cap.
 */
MinimalPolynomial minimal_polynomial(i64 D, int s, long prec);

/* Exact resultant via subresultant pseudo-remainders; Res = lc1^deg2 lc2^deg1 prod (x_i - y_j). */
BigInt resultant(IntPoly const & p, IntPoly const & q);
/* (-1)^(n(n-1)/2) Res(P, P') / lc(P); 1 for degree 1. */
BigInt poly_discriminant(IntPoly const & p);

struct DiscClass
{
    Complex value;
    /* Rational norm of value, rounded. */
    BigInt norm;
    /* "inverse": conj(value) matched disc(D;s,A^-1); "self": A = A^-1 and value*conj(value) used. */
    std::string pairing;
    RoundingReport report;
};

/* disc(D; s, A) = prod over B in Cl(D) of (f(B)^(24/s) - f(BA)^(24/s)); A non-trivial. */
DiscClass disc_class_numeric(i64 D, int s, int cls, long prec);

} // namespace weberyz

#endif
