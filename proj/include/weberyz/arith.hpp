#ifndef WEBERYZ_ARITH_HPP
#define WEBERYZ_ARITH_HPP

#include <climits>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

namespace weberyz {

using BigInt = mpz_class;
using Rational = mpq_class;
using i64 = long;

/* Raised when an argument lies outside the documented domain of an operation. */
class DomainError : public std::invalid_argument
{
  public:
    using std::invalid_argument::invalid_argument;
};

/* Raised when the precision cap is reached without a certified result. */
class PrecisionError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

/* Valuation of zero. */
constexpr int kInfValuation = INT_MAX;

int valuation(i64 n, i64 p);
int valuation(BigInt const & n, i64 p);
int valuation(Rational const & x, i64 p);

/* Part of n coprime to p (n != 0). */
i64 prime_to_part(i64 n, i64 p);

/* Kronecker symbol (a|n). */
int kronecker(i64 a, i64 n);
int kronecker(BigInt const & a, BigInt const & n);

/* Legendre symbol of the p-unit part of a nonzero rational, p odd. */
int unit_legendre(Rational const & x, i64 p);

/* Hilbert symbol (a,b)_p for nonzero rationals; p = 0 denotes the real place. */
int hilbert_symbol(Rational const & a, Rational const & b, i64 p);

bool is_prime(i64 n);
std::vector<i64> primes_up_to(i64 n);
std::vector<i64> prime_divisors(i64 n);
std::vector<i64> divisors(i64 n);
i64 sigma0(i64 n);
i64 gcd(i64 a, i64 b);
i64 mod(i64 a, i64 m);
i64 isqrt(i64 n);
bool is_square(i64 n);
/* Inverse of a modulo m, gcd(a,m) = 1. */
i64 inverse_mod(i64 a, i64 m);
/* Solution x mod lcm of x = r_i mod m_i; throws DomainError if incompatible. */
std::pair<i64, i64> crt(std::vector<std::pair<i64, i64>> const & congruences);
/* All x in [0, m) with x^2 = a mod m (m > 0, small). */
std::vector<i64> sqrt_mod(i64 a, i64 m);

/* Prime factorization of a nonzero integer. */
struct Factorization
{
    int sign = 1;
    std::map<BigInt, int> exponents;
};

/* Composite cofactors above 200 bits left after trial division to 10^6 are kept as single entries. */
Factorization factorize(BigInt const & n);

/*
 * Map prime -> exponent where exponents may be half-integers; exponents are
 * stored doubled so that the map stays exact.
 */
class FactorizationMap
{
  public:
    int sign = 1;

    void add_twice(BigInt const & p, i64 twice_exponent);
    void add(BigInt const & p, Rational const & exponent);
    Rational exponent(BigInt const & p) const;
    i64 twice_exponent(BigInt const & p) const;
    std::map<BigInt, i64> const & entries() const { return twice_; }
    bool all_integral() const;
    /* Equality of the prime/exponent entries, ignoring the sign. */
    bool same_entries(FactorizationMap const & o) const { return twice_ == o.twice_; }
    bool operator==(FactorizationMap const & o) const
    {
        return sign == o.sign && twice_ == o.twice_;
    }
    std::string to_string() const;

    static FactorizationMap from(Factorization const & f);

  private:
    std::map<BigInt, i64> twice_;
};

/* Discriminant data. */
bool is_fundamental(i64 D);
/* D = D0 t^2 with D0 fundamental and t > 0. */
std::pair<i64, i64> split_discriminant(i64 D);
/* D < 0, D = 1 mod 8, 3 does not divide D. */
bool is_admissible(i64 D);
/* Exponent of D = 1 mod 8: (-1)^((D-1)/8). */
int epsilon_sign(i64 D);

std::string rational_to_string(Rational const & x);
/* Canonical n/d, d != 0. */
Rational frac(i64 n, i64 d);

} // namespace weberyz

#endif
