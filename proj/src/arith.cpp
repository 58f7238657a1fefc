#include "weberyz/arith.hpp"

#include <algorithm>
#include <cstdlib>
#include <numeric>
#include <sstream>

namespace weberyz {

int valuation(i64 n, i64 p)
{
    if (p < 2)
        throw DomainError("valuation: p must be a prime");
    if (n == 0)
        return kInfValuation;
    int v = 0;
    while (n % p == 0) {
        n /= p;
        ++v;
    }
    return v;
}

int valuation(BigInt const & n, i64 p)
{
    if (p < 2)
        throw DomainError("valuation: p must be a prime");
    if (n == 0)
        return kInfValuation;
    BigInt pp = static_cast<long>(p);
    BigInt m = abs(n);
    return static_cast<int>(mpz_remove(m.get_mpz_t(), m.get_mpz_t(), pp.get_mpz_t()));
}

int valuation(Rational const & x, i64 p)
{
    if (x == 0)
        return kInfValuation;
    return valuation(BigInt(x.get_num()), p) - valuation(BigInt(x.get_den()), p);
}

i64 prime_to_part(i64 n, i64 p)
{
    if (n == 0)
        throw DomainError("prime_to_part: n = 0");
    while (n % p == 0)
        n /= p;
    return n;
}

int kronecker(i64 a, i64 n)
{
    BigInt A = static_cast<long>(a), N = static_cast<long>(n);
    return mpz_kronecker(A.get_mpz_t(), N.get_mpz_t());
}

int kronecker(BigInt const & a, BigInt const & n)
{
    return mpz_kronecker(a.get_mpz_t(), n.get_mpz_t());
}

namespace {

BigInt unit_part(BigInt n, i64 p)
{
    BigInt pp = static_cast<long>(p);
    mpz_remove(n.get_mpz_t(), n.get_mpz_t(), pp.get_mpz_t());
    return n;
}

/* u mod 8 for a 2-adic unit given as a rational with odd numerator/denominator. */
int unit_mod8(BigInt const & num, BigInt const & den)
{
    BigInt r = num * den; // den^{-1} = den mod 8 for odd den
    BigInt m = r % 8;
    if (m < 0)
        m += 8;
    return static_cast<int>(m.get_si());
}

} // namespace

int unit_legendre(Rational const & x, i64 p)
{
    if (x == 0)
        throw DomainError("unit_legendre: x = 0");
    BigInt P = static_cast<long>(p);
    BigInt u = unit_part(x.get_num(), p) * unit_part(x.get_den(), p);
    return mpz_legendre(u.get_mpz_t(), P.get_mpz_t());
}

int hilbert_symbol(Rational const & a, Rational const & b, i64 p)
{
    if (a == 0 || b == 0)
        throw DomainError("hilbert_symbol: zero argument");
    if (p == 0)
        return (a < 0 && b < 0) ? -1 : 1;
    int alpha = valuation(a, p), beta = valuation(b, p);
    BigInt un = unit_part(a.get_num(), p), ud = unit_part(a.get_den(), p);
    BigInt vn = unit_part(b.get_num(), p), vd = unit_part(b.get_den(), p);
    if (p == 2) {
        int u = unit_mod8(un, ud), v = unit_mod8(vn, vd);
        int eu = ((u - 1) / 2) & 1, ev = ((v - 1) / 2) & 1;
        int wu = ((u * u - 1) / 8) & 1, wv = ((v * v - 1) / 8) & 1;
        int e = eu * ev + (alpha & 1) * wv + (beta & 1) * wu;
        return (e & 1) ? -1 : 1;
    }
    BigInt P = static_cast<long>(p);
    BigInt u = un * ud, v = vn * vd;
    int s = 1;
    if ((alpha & 1) && (beta & 1) && ((p - 1) / 2) % 2 == 1)
        s = -s;
    if (beta & 1)
        s *= mpz_legendre(u.get_mpz_t(), P.get_mpz_t());
    if (alpha & 1)
        s *= mpz_legendre(v.get_mpz_t(), P.get_mpz_t());
    return s;
}

bool is_prime(i64 n)
{
    if (n < 2)
        return false;
    for (i64 q : {2, 3, 5, 7, 11, 13}) {
        if (n % q == 0)
            return n == q;
    }
    BigInt N = static_cast<long>(n);
    return mpz_probab_prime_p(N.get_mpz_t(), 40) > 0;
}

std::vector<i64> primes_up_to(i64 n)
{
    std::vector<i64> out;
    if (n < 2)
        return out;
    std::vector<bool> sieve(static_cast<size_t>(n) + 1, true);
    for (i64 i = 2; i <= n; ++i) {
        if (!sieve[i])
            continue;
        out.push_back(i);
        for (i64 j = i * i; j <= n; j += i)
            sieve[j] = false;
    }
    return out;
}

std::vector<i64> prime_divisors(i64 n)
{
    std::vector<i64> out;
    n = std::llabs(n);
    for (i64 p = 2; p * p <= n; ++p) {
        if (n % p == 0) {
            out.push_back(p);
            while (n % p == 0)
                n /= p;
        }
    }
    if (n > 1)
        out.push_back(n);
    return out;
}

std::vector<i64> divisors(i64 n)
{
    n = std::llabs(n);
    if (n == 0)
        throw DomainError("divisors: n = 0");
    std::vector<i64> small, large;
    for (i64 d = 1; d * d <= n; ++d) {
        if (n % d == 0) {
            small.push_back(d);
            if (d * d != n)
                large.push_back(n / d);
        }
    }
    small.insert(small.end(), large.rbegin(), large.rend());
    return small;
}

i64 sigma0(i64 n)
{
    return static_cast<i64>(divisors(n).size());
}

i64 gcd(i64 a, i64 b)
{
    return std::gcd(a, b);
}

i64 mod(i64 a, i64 m)
{
    i64 r = a % m;
    return r < 0 ? r + m : r;
}

i64 isqrt(i64 n)
{
    if (n < 0)
        throw DomainError("isqrt: negative argument");
    BigInt N = static_cast<long>(n);
    BigInt r = sqrt(N);
    return r.get_si();
}

bool is_square(i64 n)
{
    if (n < 0)
        return false;
    i64 r = isqrt(n);
    return r * r == n;
}

i64 inverse_mod(i64 a, i64 m)
{
    BigInt A = static_cast<long>(mod(a, m)), M = static_cast<long>(m), R;
    if (mpz_invert(R.get_mpz_t(), A.get_mpz_t(), M.get_mpz_t()) == 0)
        throw DomainError("inverse_mod: not invertible");
    return R.get_si();
}

std::pair<i64, i64> crt(std::vector<std::pair<i64, i64>> const & congruences)
{
    BigInt x = 0, m = 1;
    for (auto const & [r, mi] : congruences) {
        BigInt R = static_cast<long>(r), M = static_cast<long>(mi);
        BigInt g;
        mpz_gcd(g.get_mpz_t(), m.get_mpz_t(), M.get_mpz_t());
        BigInt diff = R - x;
        if (diff % g != 0)
            throw DomainError("crt: incompatible congruences");
        BigInt m_g = m / g, M_g = M / g, inv;
        BigInt lhs = m_g % M_g;
        if (lhs < 0)
            lhs += M_g;
        if (M_g == 1)
            inv = 0;
        else
            mpz_invert(inv.get_mpz_t(), lhs.get_mpz_t(), M_g.get_mpz_t());
        BigInt k = (diff / g) * inv % M_g;
        x += m * k;
        m *= M_g;
        x %= m;
        if (x < 0)
            x += m;
    }
    if (!m.fits_slong_p())
        throw DomainError("crt: modulus overflow");
    return {x.get_si(), m.get_si()};
}

std::vector<i64> sqrt_mod(i64 a, i64 m)
{
    std::vector<i64> out;
    a = mod(a, m);
    for (i64 x = 0; x < m; ++x) {
        if (static_cast<__int128>(x) * x % m == a)
            out.push_back(x);
    }
    return out;
}

namespace {

BigInt pollard_brent(BigInt const & n)
{
    if (n % 2 == 0)
        return 2;
    gmp_randclass rng(gmp_randinit_default);
    rng.seed(0x5eed);
    for (;;) {
        BigInt y = rng.get_z_range(n - 1) + 1;
        BigInt c = rng.get_z_range(n - 1) + 1;
        BigInt g = 1, r = 1, q = 1, x, ys;
        const unsigned long block = 128;
        while (g == 1) {
            x = y;
            for (BigInt i = 0; i < r; ++i)
                y = (y * y + c) % n;
            BigInt k = 0;
            while (k < r && g == 1) {
                ys = y;
                for (BigInt i = 0; i < block && i < r - k; ++i) {
                    y = (y * y + c) % n;
                    q = q * abs(x - y) % n;
                }
                mpz_gcd(g.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
                k += block;
            }
            r *= 2;
        }
        if (g == n) {
            do {
                ys = (ys * ys + c) % n;
                BigInt d = abs(x - ys);
                mpz_gcd(g.get_mpz_t(), d.get_mpz_t(), n.get_mpz_t());
            } while (g == 1);
        }
        if (g != n)
            return g;
    }
}

void factor_into(BigInt const & n, std::map<BigInt, int> & out)
{
    if (n == 1)
        return;
    if (mpz_probab_prime_p(n.get_mpz_t(), 40) > 0) {
        out[n] += 1;
        return;
    }
    /* Cofactors this large never arise from smooth inputs; keep them whole rather than stall. */
    if (mpz_sizeinbase(n.get_mpz_t(), 2) > 200) {
        out[n] += 1;
        return;
    }
    BigInt d = pollard_brent(n);
    factor_into(d, out);
    factor_into(n / d, out);
}

} // namespace

Factorization factorize(BigInt const & n)
{
    if (n == 0)
        throw DomainError("factorize: n = 0");
    Factorization f;
    f.sign = n < 0 ? -1 : 1;
    BigInt m = abs(n);
    const unsigned long trial_bound = 1000000;
    for (unsigned long p = 2; p <= trial_bound && m > 1; p = (p == 2 ? 3 : p + 2)) {
        if (mpz_divisible_ui_p(m.get_mpz_t(), p)) {
            int e = 0;
            while (mpz_divisible_ui_p(m.get_mpz_t(), p)) {
                mpz_divexact_ui(m.get_mpz_t(), m.get_mpz_t(), p);
                ++e;
            }
            f.exponents[BigInt(p)] = e;
        }
        if (BigInt(p) * p > m)
            break;
    }
    if (m > 1) {
        std::map<BigInt, int> rest;
        factor_into(m, rest);
        for (auto const & [p, e] : rest)
            f.exponents[p] += e;
    }
    return f;
}

void FactorizationMap::add_twice(BigInt const & p, i64 twice_exponent)
{
    if (twice_exponent == 0)
        return;
    i64 & e = twice_[p];
    e += twice_exponent;
    if (e == 0)
        twice_.erase(p);
}

void FactorizationMap::add(BigInt const & p, Rational const & exponent)
{
    Rational t = exponent * 2;
    if (t.get_den() != 1)
        throw DomainError("FactorizationMap: exponent is not a half-integer");
    add_twice(p, t.get_num().get_si());
}

Rational FactorizationMap::exponent(BigInt const & p) const
{
    Rational r(static_cast<long>(twice_exponent(p)), 2L);
    r.canonicalize();
    return r;
}

i64 FactorizationMap::twice_exponent(BigInt const & p) const
{
    auto it = twice_.find(p);
    return it == twice_.end() ? 0 : it->second;
}

bool FactorizationMap::all_integral() const
{
    return std::all_of(twice_.begin(), twice_.end(), [](auto const & kv) { return kv.second % 2 == 0; });
}

std::string FactorizationMap::to_string() const
{
    std::ostringstream os;
    os << (sign < 0 ? "-" : "");
    if (twice_.empty())
        os << "1";
    bool first = true;
    for (auto const & [p, t] : twice_) {
        if (!first)
            os << " * ";
        first = false;
        os << p.get_str();
        if (t != 2)
        {
            Rational e(static_cast<long>(t), 2L);
            e.canonicalize();
            os << "^" << rational_to_string(e);
        }
    }
    return os.str();
}

FactorizationMap FactorizationMap::from(Factorization const & f)
{
    FactorizationMap m;
    m.sign = f.sign;
    for (auto const & [p, e] : f.exponents)
        m.add_twice(p, 2 * static_cast<i64>(e));
    return m;
}

bool is_fundamental(i64 D)
{
    if (D == 0 || D == 1)
        return false;
    i64 r = mod(D, 4);
    auto squarefree = [](i64 n) {
        n = std::llabs(n);
        for (i64 p = 2; p * p <= n; ++p) {
            if (n % (p * p) == 0)
                return false;
            if (n % p == 0)
                n /= p;
        }
        return true;
    };
    if (r == 1)
        return squarefree(D);
    if (r == 0) {
        i64 m = D / 4;
        i64 mm = mod(m, 4);
        return (mm == 2 || mm == 3) && squarefree(m);
    }
    return false;
}

std::pair<i64, i64> split_discriminant(i64 D)
{
    if (D >= 0 || !(mod(D, 4) == 0 || mod(D, 4) == 1))
        throw DomainError("split_discriminant: not a negative discriminant");
    for (i64 t = isqrt(std::llabs(D)); t >= 1; --t) {
        if (D % (t * t) != 0)
            continue;
        i64 D0 = D / (t * t);
        if (is_fundamental(D0))
            return {D0, t};
    }
    throw DomainError("split_discriminant: no fundamental part");
}

bool is_admissible(i64 D)
{
    return D < 0 && mod(D, 8) == 1 && D % 3 != 0;
}

int epsilon_sign(i64 D)
{
    if (mod(D, 8) != 1)
        throw DomainError("epsilon_sign: D must be 1 mod 8");
    i64 e = (D - 1) / 8;
    return mod(e, 2) == 0 ? 1 : -1;
}

std::string rational_to_string(Rational const & x)
{
    return x.get_str();
}

Rational frac(i64 n, i64 d)
{
    if (d == 0)
        throw DomainError("frac: zero denominator");
    Rational r(n, d);
    r.canonicalize();
    return r;
}

} // namespace weberyz
