#include "weberyz/quadorders.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <tuple>

namespace weberyz {

namespace {

using i128 = __int128;

i64 checked(i128 x)
{
    if (x > static_cast<i128>(LLONG_MAX) || x < static_cast<i128>(LLONG_MIN))
        throw DomainError("quadorders: 64-bit overflow");
    return static_cast<i64>(x);
}

/* Returns g = gcd(a, b) >= 0 with u a + v b = g. */
i64 ext_gcd(i64 a, i64 b, i64 & u, i64 & v)
{
    i64 old_r = a, r = b, old_s = 1, s = 0, old_t = 0, t = 1;
    while (r != 0) {
        i64 q = old_r / r;
        std::tie(old_r, r) = std::make_tuple(r, old_r - q * r);
        std::tie(old_s, s) = std::make_tuple(s, old_s - q * s);
        std::tie(old_t, t) = std::make_tuple(t, old_t - q * t);
    }
    if (old_r < 0) {
        old_r = -old_r;
        old_s = -old_s;
        old_t = -old_t;
    }
    u = old_s;
    v = old_t;
    return old_r;
}

i64 sigma_of(i64 D)
{
    return mod(D, 2);
}

i64 floor_div(i64 a, i64 b)
{
    i64 q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0)))
        --q;
    return q;
}

/* Multiplication of elements x + y*omega. */
std::pair<i64, i64> omega_mul(i64 D, std::pair<i64, i64> p, std::pair<i64, i64> q)
{
    i64 s = sigma_of(D);
    i128 x = static_cast<i128>(p.first) * q.first + static_cast<i128>(p.second) * q.second * ((D - s) / 4);
    i128 y = static_cast<i128>(p.first) * q.second + static_cast<i128>(q.first) * p.second
             + static_cast<i128>(s) * p.second * q.second;
    return {checked(x), checked(y)};
}

std::pair<i64, i64> to_omega(i64 D, HalfElem const & e)
{
    i64 s = sigma_of(D);
    if (mod(e.u - e.v * s, 2) != 0)
        throw DomainError("HalfElem not integral");
    return {(e.u - e.v * s) / 2, e.v};
}

/* Hermite normal form of the Z-lattice spanned by vectors (x, y). */
Ideal hnf(i64 D, std::vector<std::pair<i64, i64>> const & vecs)
{
    std::pair<i64, i64> cur{0, 0};
    i64 A = 0;
    for (auto const & v : vecs) {
        if (v.second == 0) {
            A = gcd(A, v.first);
            continue;
        }
        if (cur.second == 0) {
            A = gcd(A, cur.first);
            cur = v;
            continue;
        }
        i64 s, t;
        i64 g = ext_gcd(cur.second, v.second, s, t);
        std::pair<i64, i64> nw{checked(static_cast<i128>(s) * cur.first + static_cast<i128>(t) * v.first), g};
        i64 k1 = v.second / g, k2 = cur.second / g;
        i64 zero_x = checked(static_cast<i128>(k1) * cur.first - static_cast<i128>(k2) * v.first);
        A = gcd(A, zero_x);
        cur = nw;
    }
    A = std::llabs(A);
    if (A == 0 || cur.second == 0)
        throw DomainError("hnf: lattice is not of full rank");
    if (cur.second < 0)
        cur = {-cur.first, -cur.second};
    Ideal I;
    I.D = D;
    I.A = A;
    I.B = mod(cur.first, A);
    I.C = cur.second;
    return I;
}

std::vector<std::pair<i64, i64>> basis_of(Ideal const & I)
{
    return {{I.A, 0}, {I.B, I.C}};
}

} // namespace

Form reduce(Form f)
{
    i64 D = f.disc();
    if (f.a <= 0 || D >= 0)
        throw DomainError("reduce: form is not positive definite");
    for (;;) {
        if (f.b > f.a || f.b <= -f.a) {
            i64 two_a = 2 * f.a;
            i64 k = floor_div(f.a - f.b, two_a);
            i64 nb = f.b + two_a * k;
            f.c = checked((static_cast<i128>(nb) * nb - D) / (4 * static_cast<i128>(f.a)));
            f.b = nb;
        }
        if (f.a > f.c) {
            std::swap(f.a, f.c);
            f.b = -f.b;
            continue;
        }
        if (f.a == f.c && f.b < 0)
            f.b = -f.b;
        if (f.b > f.a || f.b <= -f.a)
            continue;
        return f;
    }
}

bool is_reduced(Form const & f)
{
    if (!(std::llabs(f.b) <= f.a && f.a <= f.c))
        return false;
    if ((std::llabs(f.b) == f.a || f.a == f.c) && f.b < 0)
        return false;
    return true;
}

Form compose(Form const & f, Form const & g)
{
    i64 D = f.disc();
    if (g.disc() != D)
        throw DomainError("compose: discriminants differ");
    i64 a1 = f.a, b1 = f.b, a2 = g.a, b2 = g.b, c2 = g.c;
    if (a1 > a2) {
        std::swap(a1, a2);
        std::swap(b1, b2);
        c2 = f.c;
    }
    i64 s = (b1 + b2) / 2, n = b2 - s;
    i64 y1, d;
    if (a2 % a1 == 0) {
        y1 = 0;
        d = a1;
    } else {
        i64 u, v;
        d = ext_gcd(a2, a1, u, v);
        y1 = u;
    }
    i64 x2, y2, d1;
    if (s % d == 0) {
        y2 = -1;
        x2 = 0;
        d1 = d;
    } else {
        d1 = ext_gcd(s, d, x2, y2);
        y2 = -y2;
    }
    i64 v1 = a1 / d1, v2 = a2 / d1;
    i128 r128 = (static_cast<i128>(y1) * y2 % v1 * n - static_cast<i128>(x2) * c2) % v1;
    i64 r = mod(checked(r128), v1);
    i64 b3 = checked(b2 + 2 * static_cast<i128>(v2) * r);
    i64 a3 = checked(static_cast<i128>(v1) * v2);
    i64 c3 = checked((static_cast<i128>(b3) * b3 - D) / (4 * static_cast<i128>(a3)));
    return reduce(Form{a3, b3, c3});
}

Form identity_form(i64 D)
{
    i64 s = sigma_of(D);
    return Form{1, s, (s - D) / 4};
}

Form form_from(i64 D, i64 a, i64 b)
{
    i128 num = static_cast<i128>(b) * b - D;
    if (a <= 0 || num % (4 * static_cast<i128>(a)) != 0)
        throw DomainError("form_from: b^2 - D not divisible by 4a");
    return Form{a, b, checked(num / (4 * static_cast<i128>(a)))};
}

ClassGroup::ClassGroup(i64 D) : D_(D)
{
    if (D >= 0 || !(mod(D, 4) == 0 || mod(D, 4) == 1))
        throw DomainError("ClassGroup: D must be a negative discriminant");
    for (i64 a = 1; 3 * a * a <= -D; ++a) {
        for (i64 b = -a + 1; b <= a; ++b) {
            if (mod(b - D, 2) != 0)
                continue;
            i64 num = b * b - D;
            if (num % (4 * a) != 0)
                continue;
            i64 c = num / (4 * a);
            if (c < a)
                continue;
            if (a == c && b < 0)
                continue;
            if (gcd(gcd(a, std::llabs(b)), c) != 1)
                continue;
            forms_.push_back(Form{a, b, c});
        }
    }
    std::sort(forms_.begin(), forms_.end());
    for (size_t i = 0; i < forms_.size(); ++i)
        index_[forms_[i]] = static_cast<int>(i);
    int h = order();
    table_.assign(h, std::vector<int>(h, 0));
    inverse_.assign(h, 0);
    for (int x = 0; x < h; ++x) {
        for (int y = x; y < h; ++y) {
            int z = find(compose(forms_[x], forms_[y]));
            if (z < 0)
                throw DomainError("ClassGroup: composition left the group");
            table_[x][y] = table_[y][x] = z;
            if (z == 0) {
                inverse_[x] = y;
                inverse_[y] = x;
            }
        }
    }
}

int ClassGroup::find(Form const & reduced) const
{
    auto it = index_.find(reduced);
    return it == index_.end() ? -1 : it->second;
}

int ClassGroup::class_of(Form const & f) const
{
    if (f.disc() != D_)
        throw DomainError("class_of: wrong discriminant");
    int idx = find(reduce(f));
    if (idx < 0)
        throw DomainError("class_of: form is not primitive");
    return idx;
}

i64 class_number(i64 D)
{
    return ClassGroup(D).order();
}

Ideal unit_ideal(i64 D)
{
    return Ideal{D, 1, 0, 1};
}

Ideal ideal_generated(i64 D, std::vector<HalfElem> const & gens)
{
    std::vector<std::pair<i64, i64>> vecs;
    const std::pair<i64, i64> omega{0, 1};
    for (auto const & g : gens) {
        auto x = to_omega(D, g);
        vecs.push_back(x);
        vecs.push_back(omega_mul(D, x, omega));
    }
    return hnf(D, vecs);
}

Ideal ideal_ab(i64 D, i64 a, i64 beta)
{
    i64 s = sigma_of(D);
    if (mod(beta - s, 2) != 0)
        throw DomainError("ideal_ab: beta has the wrong parity");
    i128 nrm = (static_cast<i128>(beta) * beta - D) / 4;
    if (a <= 0 || nrm % a != 0)
        throw DomainError("ideal_ab: [a, (beta+sqrt D)/2] is not an ideal");
    return Ideal{D, a, mod((beta - s) / 2, a), 1};
}

Ideal ideal_mul(Ideal const & I, Ideal const & J)
{
    std::vector<std::pair<i64, i64>> vecs;
    for (auto const & x : basis_of(I))
        for (auto const & y : basis_of(J))
            vecs.push_back(omega_mul(I.D, x, y));
    return hnf(I.D, vecs);
}

Ideal ideal_conj(Ideal const & I)
{
    i64 s = sigma_of(I.D);
    std::vector<std::pair<i64, i64>> vecs;
    for (auto const & [x, y] : basis_of(I))
        vecs.push_back({x + y * s, -y});
    return hnf(I.D, vecs);
}

Ideal ideal_scale(Ideal const & I, i64 k)
{
    return Ideal{I.D, I.A * k, I.B * k, I.C * k};
}

bool ideal_contains(Ideal const & I, HalfElem const & e)
{
    auto [x, y] = to_omega(I.D, e);
    if (y % I.C != 0)
        return false;
    i128 r = static_cast<i128>(x) - static_cast<i128>(y / I.C) * I.B;
    return r % I.A == 0;
}

Ideal ideal_of_form(i64 D, Form const & f)
{
    return ideal_ab(D, f.a, -f.b);
}

Form form_of_ideal(Ideal const & I)
{
    i64 A = I.A / I.C, B = I.B / I.C;
    i64 beta = 2 * B + sigma_of(I.D);
    return form_from(I.D, A, -beta);
}

int ideal_class(ClassGroup const & G, Ideal const & I)
{
    return G.class_of(form_of_ideal(I));
}

std::vector<Ideal> ideals_of_norm(i64 D, i64 n)
{
    std::vector<Ideal> out;
    if (n <= 0)
        return out;
    i64 s = sigma_of(D);
    for (i64 c = 1; c * c <= n; ++c) {
        if (n % (c * c) != 0)
            continue;
        i64 m = n / (c * c);
        for (i64 B = 0; B < m; ++B) {
            i128 beta = 2 * B + s;
            i128 nrm = (beta * beta - D) / 4;
            if (nrm % m != 0)
                continue;
            out.push_back(Ideal{D, m * c, B * c, c});
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

Rational elem_norm(i64 D, HalfElem const & x)
{
    Rational r(BigInt(static_cast<long>(x.u)) * x.u - BigInt(static_cast<long>(D)) * x.v * x.v, 4);
    r.canonicalize();
    return r;
}

std::vector<HalfElem> enumerate_elements(Ideal const & I, i64 N)
{
    std::vector<HalfElem> out;
    if (N < 0)
        return out;
    if (N == 0) {
        out.push_back(HalfElem{0, 0});
        return out;
    }
    i64 D = I.D;
    i64 vmax = isqrt(4 * N / (-D)) + 1;
    for (i64 v = -vmax; v <= vmax; ++v) {
        if (v % I.C != 0)
            continue;
        i128 t = 4 * static_cast<i128>(N) + static_cast<i128>(D) * v * v;
        if (t < 0)
            continue;
        i64 tt = checked(t);
        if (!is_square(tt))
            continue;
        i64 u0 = isqrt(tt);
        for (i64 u : {u0, -u0}) {
            HalfElem e{u, v};
            if (mod(u - v * D, 2) != 0)
                continue;
            if (ideal_contains(I, e))
                out.push_back(e);
            if (u0 == 0)
                break;
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

i64 rho_p(i64 D, i64 p, i64 n)
{
    if (n <= 0)
        throw DomainError("rho_p: n must be positive");
    i64 D0 = split_discriminant(D).first;
    int o = valuation(n, p);
    int k = kronecker(D0, p);
    if (k == 1)
        return o + 1;
    if (k == -1)
        return (o % 2 == 0) ? 1 : 0;
    return 1;
}

namespace {

std::optional<i64> as_integer(Rational const & n)
{
    if (n.get_den() != 1 || !n.get_num().fits_slong_p())
        return std::nullopt;
    return n.get_num().get_si();
}

Rational rho_impl(i64 D, Rational const & n, i64 M)
{
    auto v = as_integer(n);
    if (!v || *v < 0)
        return Rational(0);
    i64 D0 = split_discriminant(D).first;
    if (*v == 0)
        return frac(class_number(D0), 2);
    i64 prod = 1;
    for (i64 p : prime_divisors(*v)) {
        if (M != 0 && M % p == 0)
            continue;
        prod *= rho_p(D0, p, *v);
        if (prod == 0)
            break;
    }
    return Rational(prod);
}

} // namespace

Rational rho(i64 D, Rational const & n)
{
    return rho_impl(D, n, 0);
}

Rational rho_M(i64 D, Rational const & n, i64 M)
{
    return rho_impl(D, n, M);
}

Rational r_class(ClassGroup const & G, int cls, Rational const & n)
{
    auto v = as_integer(n);
    if (!v || *v < 0)
        return Rational(0);
    if (*v == 0)
        return Rational(1, 2);
    i64 count = 0;
    for (auto const & I : ideals_of_norm(G.disc(), *v))
        if (ideal_class(G, I) == cls)
            ++count;
    return Rational(count);
}

std::vector<i64> S_set(i64 D, Rational const & n)
{
    if (n == 0)
        throw DomainError("S_set: n = 0");
    std::vector<i64> cand = prime_divisors(2 * D);
    BigInt num = abs(n.get_num()), den = n.get_den();
    for (BigInt const & m : {num, den}) {
        if (!m.fits_slong_p())
            throw DomainError("S_set: argument too large");
        for (i64 p : prime_divisors(m.get_si()))
            cand.push_back(p);
    }
    std::sort(cand.begin(), cand.end());
    cand.erase(std::unique(cand.begin(), cand.end()), cand.end());
    std::vector<i64> out;
    Rational d(BigInt(static_cast<long>(D)));
    for (i64 p : cand)
        if (hilbert_symbol(n, d, p) == -1)
            out.push_back(p);
    return out;
}

std::vector<i64> diff_set(i64 D0, i64 a, Rational const & n)
{
    return S_set(D0, -n * Rational(BigInt(static_cast<long>(a))));
}

std::vector<int> genus_vector(i64 D0, Rational const & c)
{
    std::vector<int> out;
    Rational d(BigInt(static_cast<long>(D0)));
    for (i64 p : prime_divisors(D0))
        out.push_back(hilbert_symbol(c, d, p));
    return out;
}

std::vector<int> genus_of(ClassGroup const & G, int cls)
{
    Form const & f = G.form(cls);
    i64 D = G.disc();
    for (i64 r = 1;; ++r) {
        for (i64 x = -r; x <= r; ++x) {
            for (i64 y = -r; y <= r; ++y) {
                if (std::max(std::llabs(x), std::llabs(y)) != r)
                    continue;
                i64 val = f.a * x * x + f.b * x * y + f.c * y * y;
                if (val > 0 && gcd(val, D) == 1)
                    return genus_vector(D, Rational(BigInt(static_cast<long>(val))));
            }
        }
    }
}

Rational rho_genus(ClassGroup const & G, Rational const & m, Rational const & c)
{
    std::vector<int> target = genus_vector(G.disc(), c);
    Rational total = 0;
    for (int cls = 0; cls < G.order(); ++cls)
        if (genus_of(G, cls) == target)
            total += r_class(G, cls, m);
    return total;
}

namespace {

/* Square root of D modulo an odd prime p via Tonelli-Shanks. */
i64 sqrt_mod_prime(i64 D, i64 p)
{
    BigInt a = static_cast<long>(mod(D, p)), P = static_cast<long>(p);
    if (a == 0)
        return 0;
    auto powm = [&](BigInt const & b, BigInt const & e) {
        BigInt r;
        mpz_powm(r.get_mpz_t(), b.get_mpz_t(), e.get_mpz_t(), P.get_mpz_t());
        return r;
    };
    BigInt q = P - 1;
    int s = 0;
    while (q % 2 == 0) {
        q /= 2;
        ++s;
    }
    BigInt z = 2;
    while (mpz_legendre(z.get_mpz_t(), P.get_mpz_t()) != -1)
        ++z;
    BigInt c = powm(z, q), r = powm(a, (q + 1) / 2), t = powm(a, q);
    int m = s;
    while (t != 1) {
        int i = 0;
        BigInt tt = t;
        while (tt != 1) {
            tt = tt * tt % P;
            ++i;
        }
        BigInt b = powm(c, BigInt(1) << (m - i - 1));
        r = r * b % P;
        c = b * b % P;
        t = t * c % P;
        m = i;
    }
    return r.get_si();
}

struct Rep
{
    i64 a = 0;
    i64 b_mod = 0; /* b mod 2a */
};

std::vector<Rep> find_reps(ClassGroup const & G, int cls, i64 t, size_t count, i64 avoid)
{
    const i64 bound = 1000000;
    std::vector<Rep> out;
    i64 D = G.disc();
    for (i64 a = mod(t, 48); a <= bound && out.size() < count; a += 48) {
        if (a < 5 || a == avoid || !is_prime(a))
            continue;
        if (kronecker(D, a) != 1)
            continue;
        i64 beta = sqrt_mod_prime(D, a);
        if (beta % 2 == 0)
            beta += a;
        for (i64 sgn : {1, -1}) {
            i64 bb = sgn * beta;
            Form f = form_from(D, a, mod(bb, 2 * a) - (mod(bb, 2 * a) > a ? 2 * a : 0));
            if (G.class_of(f) != cls)
                continue;
            /* ideal [a, (t b + sqrt D)/2] has form (a, -t b, .): -t b = f.b mod 2a */
            i64 tinv = inverse_mod(t, 2 * a);
            i64 b = mod(static_cast<i64>(static_cast<__int128>(-f.b) * tinv % (2 * a)), 2 * a);
            out.push_back(Rep{a, b});
            break;
        }
    }
    if (out.size() < count)
        throw DomainError("make_small_cm_pair: no representative below the search bound");
    return out;
}

} // namespace

SmallCMPair make_small_cm_pair(ClassGroup const & G1, int cls1, ClassGroup const & G2, int cls2, i64 skip)
{
    SmallCMPair P;
    P.D1 = G1.disc();
    P.D2 = G2.disc();
    if (!is_admissible(P.D1) || !is_admissible(P.D2))
        throw DomainError("make_small_cm_pair: discriminants must be admissible");
    auto [d01, t1] = split_discriminant(P.D1);
    auto [d02, t2] = split_discriminant(P.D2);
    if (d01 != d02)
        throw DomainError("make_small_cm_pair: discriminants have different fundamental parts");
    P.D0 = d01;
    P.t1 = t1;
    P.t2 = t2;
    P.cls1 = cls1;
    P.cls2 = cls2;
    std::vector<Rep> r1 = find_reps(G1, cls1, t1, static_cast<size_t>(skip) + 1, 0);
    Rep rep1 = r1.back();
    std::vector<Rep> r2 = find_reps(G2, cls2, t2, static_cast<size_t>(skip) + 1, rep1.a);
    Rep rep2 = r2.back();
    P.a1 = rep1.a;
    P.a2 = rep2.a;
    P.a = P.a1 * P.a2;
    auto [b, mb] = crt({{rep1.b_mod, 2 * P.a1}, {rep2.b_mod, 2 * P.a2}, {1, 48}});
    P.b = b;
    i64 Dabs = -P.D0 * t1 * t2;
    auto [bt, mbt] = crt({{mod(b, 2 * P.a1), 2 * P.a1}, {mod(-b, 2 * P.a2), 2 * P.a2}, {mod(b, 4 * Dabs), 4 * Dabs}});
    P.btilde = bt;
    P.a0tilde = ideal_ab(P.D0, P.a, -bt);
    ClassGroup G0(P.D0);
    P.a0_class = ideal_class(G0, P.a0tilde);
    return P;
}

} // namespace weberyz
