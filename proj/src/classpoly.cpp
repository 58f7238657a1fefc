#include "weberyz/classpoly.hpp"

#include <cstdlib>
#include <sstream>

#include "weberyz/webereval.hpp"

namespace weberyz {

namespace {

IntPoly trimmed(std::vector<BigInt> c)
{
    while (c.size() > 1 && c.back() == 0)
        c.pop_back();
    if (c.empty())
        c.push_back(0);
    return IntPoly{std::move(c)};
}

bool is_zero(IntPoly const & p)
{
    return p.c.size() == 1 && p.c[0] == 0;
}

BigInt content(IntPoly const & p)
{
    BigInt g = 0;
    for (auto const & x : p.c)
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
    return g;
}

IntPoly divide_exact(IntPoly p, BigInt const & d)
{
    for (auto & x : p.c)
        mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), d.get_mpz_t());
    return p;
}

BigInt power(BigInt const & b, long e)
{
    BigInt r;
    mpz_pow_ui(r.get_mpz_t(), b.get_mpz_t(), static_cast<unsigned long>(e));
    return r;
}

/* lc(B)^(deg A - deg B + 1) A mod B. */
IntPoly pseudo_remainder(IntPoly a, IntPoly const & b)
{
    int db = b.degree();
    BigInt lb = b.lead();
    int e = a.degree() - db + 1;
    while (!is_zero(a) && a.degree() >= db) {
        BigInt la = a.lead();
        int shift = a.degree() - db;
        for (auto & x : a.c)
            x *= lb;
        for (int i = 0; i <= db; ++i)
            a.c[i + shift] -= la * b.c[i];
        a = trimmed(std::move(a.c));
        --e;
    }
    BigInt f = power(lb, e);
    for (auto & x : a.c)
        x *= f;
    return a;
}

/* Coefficients of prod (X - r_i), ascending. */
std::vector<Complex> expand_roots(std::vector<Complex> const & roots, long prec)
{
    std::vector<Complex> poly;
    poly.emplace_back(Real(prec, 1L), Real(prec, 0L));
    for (auto const & r : roots) {
        std::vector<Complex> next(poly.size() + 1, Complex(prec));
        for (size_t i = 0; i < poly.size(); ++i) {
            next[i + 1] += poly[i];
            next[i] -= poly[i] * r;
        }
        poly = std::move(next);
    }
    return poly;
}

struct Rounded
{
    bool ok = true;
    double offset = 0;
    BigInt value;
};

/* Round a complex number known to within err to the unique nearby integer, if certified. */
Rounded certify(Complex const & z, Real const & err)
{
    Rounded r;
    r.value = z.re.round();
    Real fr = abs(z.re - Real(z.prec(), r.value));
    Real im = abs(z.im);
    r.offset = (fr + im).to_double();
    Real quarter(z.prec(), Rational(1, 4));
    r.ok = (fr + err) < quarter && (im + err) < quarter;
    return r;
}

Real error_bound(Complex const & lo, Complex const & hi, long prec)
{
    Real scale = cabs(hi);
    Real unit(hi.prec(), 1L);
    if (scale < unit)
        scale = unit;
    return cabs(lo - hi) + ldexp(scale, -prec / 2) * ldexp(unit, -16);
}

long raised(long prec)
{
    return prec + std::max(64L, prec / 2);
}

} // namespace

std::string IntPoly::to_string() const
{
    std::ostringstream os;
    bool first = true;
    for (int i = degree(); i >= 0; --i) {
        BigInt const & x = c[i];
        if (x == 0)
            continue;
        BigInt ax = abs(x);
        if (first)
            os << (x < 0 ? "-" : "");
        else
            os << (x < 0 ? " - " : " + ");
        first = false;
        if (ax != 1 || i == 0)
            os << ax.get_str();
        if (i >= 1)
            os << "X";
        if (i >= 2)
            os << "^" << i;
    }
    if (first)
        os << "0";
    return os.str();
}

IntPoly make_poly(std::vector<BigInt> coeffs)
{
    return trimmed(std::move(coeffs));
}

IntPoly derivative(IntPoly const & p)
{
    if (p.degree() <= 0)
        return make_poly({0});
    std::vector<BigInt> d;
    for (int i = 1; i <= p.degree(); ++i)
        d.push_back(p.c[i] * i);
    return trimmed(std::move(d));
}

long default_precision()
{
    if (char const * env = std::getenv("WEBER_YZ_PREC")) {
        char * end = nullptr;
        long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v >= 64 && v <= kPrecisionCap)
            return v;
    }
    return 192;
}

std::vector<Complex> class_invariant_powers(ClassGroup const & G, int s, long prec)
{
    if (s <= 0 || 24 % s != 0)
        throw DomainError("class invariant power: s must divide 24");
    std::vector<Complex> out;
    for (auto const & f : G.forms())
        out.push_back(cpow(class_invariant(G.disc(), f, prec), 24 / s));
    return out;
}

MinimalPolynomial minimal_polynomial(i64 D, int s, long prec)
{
    if (!is_admissible(D))
        throw DomainError("minimal_polynomial: discriminant is not admissible");
    ClassGroup G(D);
    for (long p = prec; p <= kPrecisionCap; p *= 2) {
        long p2 = raised(p);
        auto lo = expand_roots(class_invariant_powers(G, s, p), p);
        auto hi = expand_roots(class_invariant_powers(G, s, p2), p2);
        MinimalPolynomial out;
        out.report.prec_used = p2;
        bool ok = true;
        std::vector<BigInt> coeffs;
        for (size_t i = 0; i < hi.size() && ok; ++i) {
            Rounded r = certify(hi[i], error_bound(lo[i], hi[i], p));
            ok = r.ok;
            out.report.max_offset = std::max(out.report.max_offset, r.offset);
            coeffs.push_back(r.value);
        }
        if (ok) {
            out.poly = make_poly(std::move(coeffs));
            return out;
        }
    }
    throw PrecisionError("minimal_polynomial: rounding not certified below the precision cap");
}

BigInt resultant(IntPoly const & p, IntPoly const & q)
{
    if (is_zero(p) || is_zero(q))
        return 0;
    IntPoly a = p, b = q;
    int sign = 1;
    if (a.degree() < b.degree()) {
        std::swap(a, b);
        if (a.degree() % 2 == 1 && b.degree() % 2 == 1)
            sign = -sign;
    }
    if (b.degree() == 0)
        return power(b.c[0], a.degree()) * sign;
    BigInt ca = content(a), cb = content(b);
    a = divide_exact(a, ca);
    b = divide_exact(b, cb);
    BigInt t = power(ca, b.degree()) * power(cb, a.degree());
    BigInt g = 1, h = 1;
    for (;;) {
        int delta = a.degree() - b.degree();
        if (a.degree() % 2 == 1 && b.degree() % 2 == 1)
            sign = -sign;
        IntPoly r = pseudo_remainder(a, b);
        a = b;
        if (is_zero(r))
            return 0;
        b = divide_exact(r, g * power(h, delta));
        g = a.lead();
        /* h = h^(1-delta) g^delta */
        if (delta > 0) {
            BigInt num = power(g, delta);
            BigInt den = power(h, delta - 1);
            mpz_divexact(h.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
        }
        if (b.degree() == 0)
            break;
    }
    int da = a.degree();
    BigInt num = power(b.lead(), da);
    BigInt den = power(h, da - 1);
    BigInt hf;
    mpz_divexact(hf.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    return hf * t * sign;
}

BigInt poly_discriminant(IntPoly const & p)
{
    int n = p.degree();
    if (n < 1)
        throw DomainError("poly_discriminant: degree must be at least 1");
    if (n == 1)
        return 1;
    BigInt r = resultant(p, derivative(p));
    BigInt d;
    mpz_divexact(d.get_mpz_t(), r.get_mpz_t(), p.lead().get_mpz_t());
    if ((static_cast<long>(n) * (n - 1) / 2) % 2 == 1)
        d = -d;
    return d;
}

DiscClass disc_class_numeric(i64 D, int s, int cls, long prec)
{
    if (!is_admissible(D))
        throw DomainError("disc_class_numeric: discriminant is not admissible");
    ClassGroup G(D);
    if (cls <= 0 || cls >= G.order())
        throw DomainError("disc_class_numeric: class must be non-trivial");
    int inv = G.inverse(cls);
    auto product = [&](std::vector<Complex> const & r, int c, long p) {
        Complex acc(Real(p, 1L), Real(p, 0L));
        for (int b = 0; b < G.order(); ++b)
            acc *= r[b] - r[G.mul(b, c)];
        return acc;
    };
    for (long p = prec; p <= kPrecisionCap; p *= 2) {
        long p2 = raised(p);
        auto rlo = class_invariant_powers(G, s, p);
        auto rhi = class_invariant_powers(G, s, p2);
        Complex vlo = product(rlo, cls, p), vhi = product(rhi, cls, p2);
        Complex wlo = product(rlo, inv, p), whi = product(rhi, inv, p2);
        DiscClass out{vhi, 0, "self", {}};
        Complex nlo(p), nhi(p2);
        if (inv == cls) {
            nlo = vlo * conj(vlo);
            nhi = vhi * conj(vhi);
        } else {
            if (!approx_equal(conj(vhi), whi, p2))
                throw DomainError("disc_class_numeric: conjugation does not match class inversion");
            out.pairing = "inverse";
            nlo = vlo * wlo;
            nhi = vhi * whi;
        }
        Rounded r = certify(nhi, error_bound(nlo, nhi, p));
        out.report.prec_used = p2;
        out.report.max_offset = r.offset;
        if (r.ok) {
            out.norm = r.value;
            return out;
        }
    }
    throw PrecisionError("disc_class_numeric: norm rounding not certified below the precision cap");
}

} // namespace weberyz
