#ifndef WEBERYZ_LOCALDENSITY_HPP
#define WEBERYZ_LOCALDENSITY_HPP

#include <optional>
#include <string>
#include <vector>

#include "weberyz/arith.hpp"

namespace weberyz {

/* Polynomial in X with rational coefficients, ascending degree. */
using QPoly = std::vector<Rational>;

QPoly qpoly_add(QPoly const & a, QPoly const & b);
QPoly qpoly_mul(QPoly const & a, QPoly const & b);
std::string qpoly_to_string(QPoly const & a);

/*
 * Local Whittaker series p^(half_exp/2) * num(X)/den(X) with X = p^(-s).
 * half_exp is -o(Delta) so that num/den is the normalized |Delta|^(-1/2) W.
 */
struct WhittakerSeries
{
    i64 p = 3;
    int half_exp = 0;
    QPoly num{Rational(0)};
    QPoly den{Rational(1)};
    /* Which closed-form case produced the series, e.g. "integral mu: m = 0". */
    std::string source;

    /* Power-series coefficients of num/den through X^depth. */
    QPoly expand(int depth) const;
    /* num/den at X = 1 (s = 0); nullopt at a pole. */
    std::optional<Rational> value_at_one() const;
    /* d/ds at s = 0 divided by -log p, i.e. X d/dX (num/den) at X = 1; nullopt at a pole. */
    std::optional<Rational> log_derivative_at_one() const;
    bool is_zero() const;
};

/* Local data: F = Q_p with p odd, O_Delta = Z_p + sqrt(Delta) Z_p, quadratic form kappa x xbar, coset mu1 + mu2 sqrt(Delta). */
struct LocalSetup
{
    i64 p = 3;
    i64 Delta = 1;
    i64 kappa = 1;
    Rational mu1 = 0, mu2 = 0;
};

/*
 * Printed formulas with a known discrepancy can be evaluated as printed or in the
 * reading verified against an independent computation.
 *
 * Two spots in the closed form for mu1 = 0, o(Delta mu2) >= 0 admit two readings.
 *   o(alpha/kappa) >= o(mu): first sum over 0 <= n < o(kappa) (Verified) or n <= o(kappa) (AsPrinted).
 *   0 <= o(alpha/kappa) < o(mu), even: last term carries X^o(alpha) (Verified) or X^o(alpha/kappa) (AsPrinted).
 * The Verified reading is the one that matches the shell decomposition; the two agree when o(kappa) = 0
 * in the second spot.
 */
enum class Reading
{
    Verified,
    AsPrinted
};

/* Closed form for |Delta|^(-1/2) W_m(s, mu), dispatched on mu (integral / mu1 = 0 / general). */
WhittakerSeries whittaker_closed(LocalSetup const & setup, Rational const & m,
                                 Reading reading = Reading::Verified);

/* Exact shell decomposition of the defining integral: coefficients of X^0..X^depth of |Delta|^(-1/2) W_m. */
QPoly whittaker_oracle(LocalSetup const & setup, Rational const & m, int depth);

/* Depth through which closed form and oracle are compared by default. */
int whittaker_default_depth(LocalSetup const & setup, Rational const & m);

/*
 * Local factors at p | D = D0 t^2 for n >= 0 and alpha~ = alpha1 + alpha2 sqrt(D0) in a~_0,
 * N(alpha~)/a = -D0 t - n.
 */
Rational delta_p(i64 D0, i64 t, i64 a, Rational const & n, Rational const & alpha1, Rational const & alpha2,
                 i64 p);
Rational delta_p_prime(i64 D0, i64 t, i64 a, Rational const & n, Rational const & alpha1,
                       Rational const & alpha2, i64 p);

/* Same, with membership of p in Diff = S(D0, -n a) supplied by the caller. */
Rational delta_p_known_diff(i64 D0, i64 t, i64 a, Rational const & n, Rational const & alpha1,
                            Rational const & alpha2, i64 p, bool p_in_diff);
Rational delta_p_prime_known_diff(i64 D0, i64 t, i64 a, Rational const & n, Rational const & alpha1,
                                  Rational const & alpha2, i64 p, bool p_in_diff);

/*
 * 2-adic data: alpha <-> (x1, x2) in the lattice {x1 = x2 mod 2} of Z_2^2, with
 * m~ = x1 x2 and m = 1 - m~.
 */
/*
 * For d2 = 8 the rows "m = 5 mod 8, m~ = 20 +- 8 mod 32" and "m = 4 +- 8 mod 32" carry
 * sign markers -+ and +- as printed; the Verified reading exchanges them (m~ = 28 -> +1,
 * m~ = 12 -> -1, m = 12 -> -1, m = 28 -> +1), which is what the counting identity requires.
 */
Rational delta2(i64 x1, i64 x2, int d2, Reading reading = Reading::Verified);
/* Sum of delta2 over d2 | s2. */
Rational delta2_sum(int s2, i64 x1, i64 x2, Reading reading = Reading::Verified);
/* Counting side: s2 * sum over admissible r2 | s2 and AB = 2 r2 of rho_2(m/A^2) [alpha/B in lattice]. */
Rational delta2_counting(int s2, i64 x1, i64 x2);

/*
 * 3-adic data. Split case ((D|3) = 1): alpha <-> (x1, x2) in Z_3^2 with m~ = x1 x2.
 * Inert case ((D|3) = -1): alpha = x1 + x2 sqrt(d) with d = 2 mod 3, m~ = x1^2 - d x2^2.
 */
struct ThreeAdicPoint
{
    int legendre = 1; /* (D|3) */
    i64 x1 = 0, x2 = 0;
    i64 d = -1; /* inert case only */

    BigInt mtilde() const;
    BigInt m() const { return 1 - mtilde(); }
};

Rational delta3(ThreeAdicPoint const & x, int d3);
/* Derivative part; non-zero only in the inert case. */
Rational delta3_prime(ThreeAdicPoint const & x, int d3);
Rational delta3_sum(int s3, ThreeAdicPoint const & x);
Rational delta3_sum_prime(int s3, ThreeAdicPoint const & x);
/* Counting side: sum over s3' | r3 | s3 with m m~/r3^2 = 1 mod s3/r3 and AB = r3 of rho_3(m/A^2) [alpha/B integral], times s3. */
Rational delta3_counting(int s3, ThreeAdicPoint const & x);

/* rho_3(x) in the field with (D|3) = legendre; 0 for non-integral x, 1 at 0. */
Rational rho3_local(int legendre, Rational const & x);

/* For p inert in Q(sqrt D): sum_{j>=1} rho_p(m/p^(2j-1)) = (o_p(m)+1)/2 when o_p(m) is odd; 0 otherwise. */
Rational rho_prime(i64 D, i64 p, Rational const & m);
/* s3 (o_3(m/s3)+1)/2 / s3 -> (o_3(m/s3)+1)/2 when (D|3) = -1, o_3(m) odd >= 1; else 0. */
Rational rho_prime_3s3(i64 D, int s3, Rational const & m);

} // namespace weberyz

#endif
