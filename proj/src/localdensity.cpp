#include "weberyz/localdensity.hpp"

#include <algorithm>
#include <sstream>

#include "weberyz/quadorders.hpp"

namespace weberyz {

namespace {

Rational ppow(i64 p, int e)
{
    BigInt r;
    mpz_ui_pow_ui(r.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(e < 0 ? -e : e));
    return e < 0 ? Rational(BigInt(1), r) : Rational(r);
}

bool p_integral(Rational const & x, i64 p)
{
    return x == 0 || valuation(x, p) >= 0;
}

int floor_div2(int x)
{
    return x >= 0 ? x / 2 : -((-x + 1) / 2);
}

int ceil_div2(int x)
{
    return -floor_div2(-x);
}

/* sum_{n = lo}^{hi} c^n X^(d n) */
QPoly power_sum(Rational const & c, int d, int lo, int hi)
{
    QPoly out;
    for (int n = std::max(lo, 0); n <= hi; ++n) {
        size_t deg = static_cast<size_t>(d * n);
        if (out.size() <= deg)
            out.resize(deg + 1, Rational(0));
        Rational cn = 1;
        for (int k = 0; k < n; ++k)
            cn *= c;
        out[deg] += cn;
    }
    if (out.empty())
        out.push_back(Rational(0));
    return out;
}

QPoly monomial(Rational const & c, int deg)
{
    QPoly out(static_cast<size_t>(deg) + 1, Rational(0));
    out[static_cast<size_t>(deg)] = c;
    return out;
}

void trim(QPoly & a)
{
    while (a.size() > 1 && a.back() == 0)
        a.pop_back();
    if (a.empty())
        a.push_back(Rational(0));
}

/* (1 - X) sum_{n=0}^{hi} (qX)^n */
QPoly head_sum(i64 q, int hi)
{
    return qpoly_mul({Rational(1), Rational(-1)}, power_sum(Rational(q), 1, 0, hi));
}

/* (1 - X^2) (qX)^k sum_{n=0}^{hi} (qX^2)^n */
QPoly middle_sum(i64 q, int k, int hi)
{
    QPoly s = qpoly_mul({Rational(1), Rational(0), Rational(-1)}, power_sum(Rational(q), 2, 0, hi));
    return qpoly_mul(monomial(ppow(q, k), k), s);
}

int chi_delta_pi(LocalSetup const & s)
{
    int oD = valuation(s.Delta, s.p);
    if (oD % 2 != 0)
        return 0;
    return unit_legendre(Rational(BigInt(static_cast<long>(s.Delta))), s.p);
}

Rational Q(i64 v)
{
    return Rational(BigInt(static_cast<long>(v)));
}

WhittakerSeries integral_mu(LocalSetup const & s, Rational const & m)
{
    WhittakerSeries W;
    W.p = s.p;
    i64 q = s.p;
    int oD = valuation(s.Delta, q);
    int ok = valuation(s.kappa, q);
    W.half_exp = -oD;
    if (!p_integral(m, q)) {
        W.source = "integral mu: m not integral";
        return W;
    }
    int chi = chi_delta_pi(s);
    QPoly A0 = head_sum(q, ok - 1);
    Rational mk = m * Q(s.kappa);
    if (m == 0) {
        W.source = "integral mu: m = 0";
        QPoly num = qpoly_add(A0, middle_sum(q, ok, oD / 2 - 1));
        Rational c = ppow(q, floor_div2(2 * ok + oD));
        int deg = ok + 2 * (oD / 2);
        /* c X^deg (1 - chi X / q) / (1 - chi X) */
        QPoly lfac = qpoly_mul(monomial(c, deg), {Rational(1), -Rational(chi) / Rational(q)});
        QPoly den{Rational(1), Rational(-chi)};
        W.num = qpoly_add(qpoly_mul(num, den), lfac);
        W.den = den;
        trim(W.num);
        trim(W.den);
        return W;
    }
    int om = valuation(m, q);
    int omk = om - ok;
    if (omk < 0) {
        W.source = "integral mu: o(m/kappa) < 0";
        W.num = head_sum(q, om);
    } else if (omk < oD) {
        W.source = "integral mu: 0 <= o(m/kappa) < o(Delta)";
        QPoly num = qpoly_add(A0, middle_sum(q, ok, ceil_div2(omk) - 1));
        if (omk % 2 == 0) {
            QPoly tail = qpoly_mul(monomial(ppow(q, (om + ok) / 2), om),
                                   {Rational(1), Rational(unit_legendre(mk, q))});
            num = qpoly_add(num, tail);
        }
        W.num = num;
    } else if (oD % 2 == 0) {
        W.source = "integral mu: o(m/kappa) >= o(Delta), o(Delta) even";
        QPoly num = qpoly_add(A0, middle_sum(q, ok, oD / 2 - 1));
        QPoly tail = qpoly_mul(monomial(ppow(q, (2 * ok + oD) / 2), ok),
                               qpoly_mul({Rational(1), -Rational(chi) / Rational(q)},
                                         power_sum(Rational(chi), 1, oD, omk)));
        W.num = qpoly_add(num, tail);
    } else {
        W.source = "integral mu: o(m/kappa) >= o(Delta), o(Delta) odd";
        QPoly num = qpoly_add(A0, middle_sum(q, ok, (oD - 1) / 2 - 1));
        int chim = hilbert_symbol(mk, Q(s.Delta), q);
        QPoly inner = qpoly_add({Rational(1)}, monomial(Rational(chim), omk - oD + 2));
        QPoly tail = qpoly_mul(monomial(ppow(q, (2 * ok + oD - 1) / 2), ok + oD - 1), inner);
        W.num = qpoly_add(num, tail);
    }
    trim(W.num);
    return W;
}

WhittakerSeries imaginary_mu(LocalSetup const & s, Rational const & m, Reading reading)
{
    WhittakerSeries W;
    W.p = s.p;
    i64 q = s.p;
    int oD = valuation(s.Delta, q);
    int ok = valuation(s.kappa, q);
    W.half_exp = -oD;
    Rational alpha = m + Q(s.kappa) * Q(s.Delta) * s.mu2 * s.mu2;
    if (!p_integral(alpha, q)) {
        W.source = "mu1 = 0: alpha not integral";
        return W;
    }
    int omu = valuation(s.mu2, q) + oD;
    int omm = alpha == 0 ? kInfValuation : valuation(alpha, q) - ok;
    QPoly A0 = head_sum(q, ok - 1);
    if (omm < 0) {
        W.source = "mu1 = 0: o(alpha/kappa) < 0";
        W.num = head_sum(q, omm + ok);
    } else if (omm < omu) {
        W.source = "mu1 = 0: 0 <= o(alpha/kappa) < o(mu)";
        QPoly num = qpoly_add(A0, middle_sum(q, ok, ceil_div2(omm) - 1));
        if (omm % 2 == 0) {
            Rational ka = alpha * Q(s.kappa);
            int xdeg = reading == Reading::AsPrinted ? omm : omm + ok;
            QPoly tail =
                qpoly_mul(monomial(ppow(q, ok + omm / 2), xdeg), {Rational(1), Rational(unit_legendre(ka, q))});
            num = qpoly_add(num, tail);
        }
        W.num = num;
    } else {
        W.source = "mu1 = 0: o(alpha/kappa) >= o(mu)";
        int first_hi = reading == Reading::AsPrinted ? ok : ok - 1;
        QPoly num = qpoly_add(head_sum(q, first_hi), middle_sum(q, ok, floor_div2(omu) - 1));
        int h = floor_div2(omu);
        num = qpoly_add(num, monomial(ppow(q, h + ok), 2 * h + ok));
        W.num = num;
    }
    trim(W.num);
    return W;
}

WhittakerSeries general_mu(LocalSetup const & s, Rational const & mu1, Rational const & mu2, Rational const & m)
{
    WhittakerSeries W;
    W.p = s.p;
    i64 q = s.p;
    int oD = valuation(s.Delta, q);
    int ok = valuation(s.kappa, q);
    W.half_exp = -oD;
    int o1 = mu1 == 0 ? kInfValuation : valuation(mu1, q);
    int o2 = mu2 == 0 ? kInfValuation : valuation(mu2, q) + oD;
    int omu = std::min(o1, o2);
    Rational alpha = m - Q(s.kappa) * (mu1 * mu1 - Q(s.Delta) * mu2 * mu2);
    int omm = alpha == 0 ? kInfValuation : valuation(alpha, q) - ok;
    if (omm < omu) {
        W.source = "general mu: o(alpha/kappa) < o(mu)";
        W.num = head_sum(q, omm + ok);
    } else {
        W.source = "general mu: o(alpha/kappa) >= o(mu)";
        W.num = qpoly_add(head_sum(q, ok + omu - 1), monomial(ppow(q, ok + omu), ok + omu));
    }
    trim(W.num);
    return W;
}

void check_setup(LocalSetup const & s)
{
    if (s.p < 3 || !is_prime(s.p))
        throw DomainError("local setup: p must be an odd prime");
    if (s.Delta == 0 || s.kappa == 0)
        throw DomainError("local setup: Delta and kappa must be nonzero");
    int oD = valuation(s.Delta, s.p);
    int ok = valuation(s.kappa, s.p);
    if ((s.mu1 != 0 && valuation(s.mu1, s.p) < -ok) || (s.mu2 != 0 && valuation(s.mu2, s.p) < -ok - oD))
        throw DomainError("local setup: mu outside the dual lattice");
}

Rational reduce_mod_integers(Rational const & x, i64 p)
{
    return p_integral(x, p) ? Rational(0) : x;
}

/* Measure of {y in Z_p^2 : v(g(y)) >= j} for j = 0..depth, g = kappa Nm(mu + y) - m. */
struct OracleState
{
    i64 p;
    Rational kappa, Delta, mu1, mu2, m;
    int ok;
    int depth;
    std::vector<Rational> P;
};

void oracle_box(OracleState & st, int i, BigInt const & c1, BigInt const & c2, Rational const & box)
{
    Rational x1 = st.mu1 + Rational(c1), x2 = st.mu2 + Rational(c2);
    Rational g0 = st.kappa * (x1 * x1 - st.Delta * x2 * x2) - st.m;
    Rational g1 = 2 * st.kappa * x1, g2 = -2 * st.kappa * st.Delta * x2;
    int v0 = g0 == 0 ? kInfValuation : valuation(g0, st.p);
    int v1 = g1 == 0 ? kInfValuation : valuation(g1, st.p);
    int v2 = g2 == 0 ? kInfValuation : valuation(g2, st.p);
    long vmin = std::min(v1, v2);
    long e = vmin >= kInfValuation ? static_cast<long>(kInfValuation) : i + vmin;
    long qv = 2L * i + st.ok;
    long lo = std::min(e, qv);
    if (v0 < lo) {
        for (int j = 0; j <= st.depth && j <= v0; ++j)
            st.P[static_cast<size_t>(j)] += box;
        return;
    }
    if (e < qv) {
        for (int j = 0; j <= st.depth; ++j) {
            if (j <= e)
                st.P[static_cast<size_t>(j)] += box;
            else
                st.P[static_cast<size_t>(j)] += box * ppow(st.p, static_cast<int>(e - j));
        }
        return;
    }
    if (lo >= st.depth) {
        for (int j = 0; j <= st.depth; ++j)
            st.P[static_cast<size_t>(j)] += box;
        return;
    }
    BigInt step;
    mpz_ui_pow_ui(step.get_mpz_t(), static_cast<unsigned long>(st.p), static_cast<unsigned long>(i));
    Rational child = box / Rational(st.p * st.p);
    for (i64 t1 = 0; t1 < st.p; ++t1)
        for (i64 t2 = 0; t2 < st.p; ++t2)
            oracle_box(st, i + 1, c1 + step * t1, c2 + step * t2, child);
}

} // namespace

QPoly qpoly_add(QPoly const & a, QPoly const & b)
{
    QPoly out(std::max(a.size(), b.size()), Rational(0));
    for (size_t i = 0; i < a.size(); ++i)
        out[i] += a[i];
    for (size_t i = 0; i < b.size(); ++i)
        out[i] += b[i];
    trim(out);
    return out;
}

QPoly qpoly_mul(QPoly const & a, QPoly const & b)
{
    QPoly out(a.size() + b.size() - 1, Rational(0));
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j)
            out[i + j] += a[i] * b[j];
    trim(out);
    return out;
}

std::string qpoly_to_string(QPoly const & a)
{
    std::ostringstream os;
    bool first = true;
    for (size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0)
            continue;
        if (!first)
            os << " + ";
        first = false;
        os << rational_to_string(a[i]);
        if (i > 0)
            os << "*X^" << i;
    }
    if (first)
        os << "0";
    return os.str();
}

QPoly WhittakerSeries::expand(int depth) const
{
    QPoly out(static_cast<size_t>(depth) + 1, Rational(0));
    if (den.empty() || den[0] == 0)
        throw DomainError("WhittakerSeries: denominator must have nonzero constant term");
    for (int k = 0; k <= depth; ++k) {
        Rational acc = static_cast<size_t>(k) < num.size() ? num[static_cast<size_t>(k)] : Rational(0);
        for (int j = 1; j <= k && static_cast<size_t>(j) < den.size(); ++j)
            acc -= den[static_cast<size_t>(j)] * out[static_cast<size_t>(k - j)];
        out[static_cast<size_t>(k)] = acc / den[0];
    }
    return out;
}

namespace {

Rational eval_at_one(QPoly const & a)
{
    Rational s = 0;
    for (auto const & c : a)
        s += c;
    return s;
}

Rational deriv_at_one(QPoly const & a)
{
    Rational s = 0;
    for (size_t i = 1; i < a.size(); ++i)
        s += a[i] * Rational(static_cast<long>(i));
    return s;
}

} // namespace

std::optional<Rational> WhittakerSeries::value_at_one() const
{
    Rational d = eval_at_one(den);
    if (d == 0)
        return std::nullopt;
    return eval_at_one(num) / d;
}

std::optional<Rational> WhittakerSeries::log_derivative_at_one() const
{
    Rational d = eval_at_one(den);
    if (d == 0)
        return std::nullopt;
    return (deriv_at_one(num) * d - eval_at_one(num) * deriv_at_one(den)) / (d * d);
}

bool WhittakerSeries::is_zero() const
{
    return std::all_of(num.begin(), num.end(), [](Rational const & c) { return c == 0; });
}

WhittakerSeries whittaker_closed(LocalSetup const & setup, Rational const & m, Reading reading)
{
    check_setup(setup);
    i64 p = setup.p;
    Rational mu1 = reduce_mod_integers(setup.mu1, p);
    Rational mu2 = reduce_mod_integers(setup.mu2, p);
    int oD = valuation(setup.Delta, p);
    if (mu1 == 0 && mu2 == 0)
        return integral_mu(setup, m);
    if (mu1 == 0 && valuation(mu2, p) + oD >= 0) {
        LocalSetup s = setup;
        s.mu1 = 0;
        s.mu2 = mu2;
        return imaginary_mu(s, m, reading);
    }
    return general_mu(setup, mu1, mu2, m);
}

QPoly whittaker_oracle(LocalSetup const & setup, Rational const & m, int depth)
{
    check_setup(setup);
    OracleState st;
    st.p = setup.p;
    st.kappa = Q(setup.kappa);
    st.Delta = Q(setup.Delta);
    st.mu1 = setup.mu1;
    st.mu2 = setup.mu2;
    st.m = m;
    st.ok = valuation(setup.kappa, setup.p);
    st.depth = depth;
    st.P.assign(static_cast<size_t>(depth) + 1, Rational(0));
    oracle_box(st, 0, BigInt(0), BigInt(0), Rational(1));
    QPoly c(static_cast<size_t>(depth) + 1, Rational(0));
    c[0] = st.P[0];
    for (int j = 1; j <= depth; ++j)
        c[static_cast<size_t>(j)] = ppow(setup.p, j) * st.P[static_cast<size_t>(j)]
                                    - ppow(setup.p, j - 1) * st.P[static_cast<size_t>(j - 1)];
    return c;
}

int whittaker_default_depth(LocalSetup const & setup, Rational const & m)
{
    i64 p = setup.p;
    int oD = valuation(setup.Delta, p);
    int ok = valuation(setup.kappa, p);
    Rational mu1 = reduce_mod_integers(setup.mu1, p), mu2 = reduce_mod_integers(setup.mu2, p);
    Rational alpha = m - Q(setup.kappa) * (mu1 * mu1 - Q(setup.Delta) * mu2 * mu2);
    int oa = alpha == 0 ? 0 : std::max(0, valuation(alpha, p));
    int om = m == 0 ? 0 : std::max(0, valuation(m, p));
    return std::max(oa, om) + ok + oD + 4;
}

/* ---------- Local factors at p | D ---------- */

namespace {

struct DpData
{
    int r, r0, on, oa1, oa2, oalpha;
    int eps;
    bool sqrtD;
    Rational alpha;
};

int val_or_inf(Rational const & x, i64 p)
{
    return x == 0 ? kInfValuation : valuation(x, p);
}

DpData dp_data(i64 D0, i64 t, i64 a, Rational const & n, Rational const & alpha1, Rational const & alpha2, i64 p)
{
    DpData d;
    d.r = valuation(D0 * t, p);
    d.r0 = valuation(D0, p);
    d.on = val_or_inf(n, p);
    d.oa1 = val_or_inf(alpha1, p);
    d.oa2 = val_or_inf(alpha2, p);
    d.alpha = 1 - alpha2 * alpha2 / (Q(a) * Q(t));
    d.oalpha = val_or_inf(d.alpha, p);
    d.eps = kronecker(D0, p);
    d.sqrtD = d.oa1 >= d.r && d.oa2 >= d.r - d.r0;
    return d;
}

void check_dp(i64 D0, i64 t, i64 p)
{
    if (p < 3 || !is_prime(p) || (D0 * t) % p != 0)
        throw DomainError("delta_p: p must be an odd prime dividing D");
    if (valuation(D0, p) > 1)
        throw DomainError("delta_p: D0 must be fundamental at p");
}

/* 1/L(1, eps) = 1 - eps(p)/p */
Rational inv_L1(int eps, i64 p)
{
    return 1 - Rational(eps) / Q(p);
}

} // namespace

namespace {

bool in_diff(i64 D0, i64 a, Rational const & n, i64 p)
{
    auto diff = diff_set(D0, a, n);
    return std::find(diff.begin(), diff.end(), p) != diff.end();
}

} // namespace

Rational delta_p(i64 D0, i64 t, i64 a, Rational const & n, Rational const & alpha1, Rational const & alpha2, i64 p)
{
    check_dp(D0, t, p);
    bool diff = n != 0 && in_diff(D0, a, n, p);
    return delta_p_known_diff(D0, t, a, n, alpha1, alpha2, p, diff);
}

Rational delta_p_prime(i64 D0, i64 t, i64 a, Rational const & n, Rational const & alpha1,
                       Rational const & alpha2, i64 p)
{
    check_dp(D0, t, p);
    bool diff = n != 0 && in_diff(D0, a, n, p);
    return delta_p_prime_known_diff(D0, t, a, n, alpha1, alpha2, p, diff);
}

Rational delta_p_known_diff(i64 D0, i64 t, i64 a, Rational const & n, Rational const & alpha1,
                            Rational const & alpha2, i64 p, bool p_in_diff)
{
    DpData d = dp_data(D0, t, a, n, alpha1, alpha2, p);
    if (n == 0) {
        if (d.r == d.r0)
            return d.sqrtD ? Rational(1) : Rational(0);
        return Rational(0);
    }
    if (p_in_diff)
        return Rational(0);
    if (d.sqrtD && 2 * d.r - d.r0 <= d.on && d.on < 2 * d.r && (d.on - d.r0) % 2 == 0)
        return ppow(p, (d.on - d.r0) / 2) * (1 + unit_legendre(Q(a) * n / Q(D0), p));
    if (d.sqrtD && 2 * d.r <= d.on && d.eps == 1) {
        /* r0 = 0 here since eps(p) = 1 */
        return ppow(p, d.r) * inv_L1(d.eps, p) * Rational(d.on - 2 * d.r + 1);
    }
    if (d.sqrtD && 2 * d.r <= d.on && d.eps != 1)
        return ppow(p, d.r - ceil_div2(d.r0)) * inv_L1(d.eps, p) * Rational(2 + d.eps);
    if (0 <= d.oalpha && d.oalpha < d.oa1 && d.oa1 < d.r && d.r == d.r0 && d.oalpha % 2 == 0)
        return ppow(p, d.oalpha) * (1 + unit_legendre(-Q(a) * Q(t) * d.alpha, p));
    if (d.oa1 <= std::min(d.oalpha, d.r - 1) && d.r == d.r0)
        return ppow(p, floor_div2(d.oa1));
    if (std::min(d.oa1, d.oa2) == 0 && d.r0 < d.r)
        return Rational(1);
    return Rational(0);
}

Rational delta_p_prime_known_diff(i64 D0, i64 t, i64 a, Rational const & n, Rational const & alpha1,
                                  Rational const & alpha2, i64 p, bool p_in_diff)
{
    DpData d = dp_data(D0, t, a, n, alpha1, alpha2, p);
    if (n == 0) {
        if (d.r > d.r0)
            return Rational(1 - d.eps);
        return Rational(0);
    }
    if (!p_in_diff)
        return Rational(0);
    Rational pm1 = Q(p - 1);
    if (d.sqrtD && d.r <= d.on && d.on < 2 * d.r - d.r0)
        return (ppow(p, d.on - d.r + 1) - 1) / pm1;
    if (d.sqrtD && 2 * d.r - d.r0 <= d.on && d.on < 2 * d.r)
        return (ppow(p, ceil_div2(d.on - d.r0 + 1)) + ppow(p, floor_div2(d.on - d.r0 + 1)) - ppow(p, d.r - d.r0) - 1)
               / pm1;
    if (d.sqrtD && 2 * d.r <= d.on) {
        Rational pr = ppow(p, d.r - ceil_div2(d.r0));
        Rational first = (2 * pr - ppow(p, d.r - d.r0) - 1) / pm1;
        Rational second = Rational(2 + d.eps) * pr * inv_L1(d.eps, p) / 2
                          * Rational(d.on - 2 * floor_div2(d.r0) + d.r0 - 2 * d.r + 1);
        return first + second;
    }
    int ot = d.r - d.r0;
    if (d.oa1 >= ot && d.oa2 >= ot && !d.sqrtD && d.r0 < d.r)
        return Rational(1);
    if (d.oalpha < d.oa1 && d.oa1 < d.r && d.r == d.r0) {
        Rational v = 2 * (ppow(p, ceil_div2(d.oalpha)) - 1) / pm1;
        if (d.oalpha % 2 == 0)
            v += ppow(p, d.oalpha / 2);
        return v;
    }
    int mn = std::min(d.oa1, d.oa2);
    if (0 < mn && mn < d.r - d.r0)
        return Rational(1);
    return Rational(0);
}

/* ---------- 2-adic factors ---------- */

namespace {

BigInt B(i64 v)
{
    return BigInt(static_cast<long>(v));
}

i64 bmod(BigInt const & x, i64 m)
{
    BigInt r;
    mpz_fdiv_r_ui(r.get_mpz_t(), x.get_mpz_t(), static_cast<unsigned long>(m));
    return r.get_si();
}

/* k | alpha with alpha <-> (x1, x2) in Z_2^2 */
bool divides_alpha(i64 k, i64 x1, i64 x2)
{
    return x1 % k == 0 && x2 % k == 0 && (x1 / k - x2 / k) % 2 == 0;
}

bool exactly_divides_alpha(i64 k, i64 x1, i64 x2)
{
    return divides_alpha(k, x1, x2) && !divides_alpha(2 * k, x1, x2);
}

Rational rho2_local(Rational const & x)
{
    if (x == 0)
        return Rational(1);
    if (!p_integral(x, 2))
        return Rational(0);
    return Rational(valuation(x, 2) + 1);
}

/* x = c mod M for rational x; modulus 1 is always satisfied. */
bool rational_congruent(Rational const & x, i64 c, i64 M)
{
    if (M == 1)
        return true;
    BigInt den = x.get_den();
    BigInt g;
    BigInt Mb = B(M);
    mpz_gcd(g.get_mpz_t(), den.get_mpz_t(), Mb.get_mpz_t());
    if (g != 1)
        return false;
    BigInt diff = x.get_num() - den * B(c);
    return mpz_divisible_ui_p(diff.get_mpz_t(), static_cast<unsigned long>(M)) != 0;
}

void check_lattice(i64 x1, i64 x2)
{
    if (mod(x1 - x2, 2) != 0)
        throw DomainError("2-adic data: need x1 = x2 mod 2");
}

} // namespace

Rational delta2(i64 x1, i64 x2, int d2, Reading reading)
{
    check_lattice(x1, x2);
    BigInt mt = B(x1) * B(x2);
    BigInt m = 1 - mt;
    int om = m == 0 ? kInfValuation : valuation(m, 2);
    auto mmod = [&](i64 M) { return bmod(m, M); };
    auto mtmod = [&](i64 M) { return bmod(mt, M); };
    switch (d2) {
    case 1:
        if (om == 0 && divides_alpha(2, x1, x2))
            return 1;
        if (m != 0 && om >= 2)
            return om - 1;
        if (m == 0)
            return 1;
        return 0;
    case 2:
        if (divides_alpha(4, x1, x2))
            return 1;
        if (exactly_divides_alpha(2, x1, x2)) {
            if (mmod(8) == 5)
                return 1;
            if (mmod(8) == 1)
                return -1;
        }
        if (om == 2)
            return 1;
        if (m != 0 && om >= 3)
            return om - 5;
        if (m == 0)
            return 1;
        return 0;
    case 4: {
        int v = 0;
        if (divides_alpha(8, x1, x2))
            v = 1;
        else if (exactly_divides_alpha(4, x1, x2) && (mmod(32) == 17 || mmod(32) == 1))
            v = mmod(32) == 17 ? 1 : -1;
        else if (mmod(8) == 5 && (mtmod(16) == 4 || mtmod(16) == 12))
            v = mtmod(16) == 4 ? -1 : 1;
        else if (mmod(16) == 4 || mmod(16) == 12)
            v = mmod(16) == 4 ? -1 : 1;
        else if (om == 4)
            v = 1;
        else if (m != 0 && om >= 5)
            v = om - 7;
        else if (m == 0)
            v = 1;
        return 2 * v;
    }
    case 8: {
        int const flip = reading == Reading::AsPrinted ? 1 : -1;
        int v = 0;
        if (divides_alpha(16, x1, x2))
            v = 1;
        else if (exactly_divides_alpha(8, x1, x2) && (mmod(128) == 65 || mmod(128) == 1))
            v = mmod(128) == 65 ? 1 : -1;
        else if (exactly_divides_alpha(4, x1, x2) && (mmod(64) == 17 || mmod(64) == 49))
            v = mmod(64) == 17 ? 1 : -1;
        else if (mmod(8) == 5 && (mtmod(32) == 28 || mtmod(32) == 12))
            v = (mtmod(32) == 28 ? -1 : 1) * flip;
        else if (mmod(32) == 12 || mmod(32) == 28)
            v = (mmod(32) == 12 ? 1 : -1) * flip;
        else if (mmod(64) == 16 || mmod(64) == 48)
            v = mmod(64) == 16 ? -1 : 1;
        else if (om == 6)
            v = 1;
        else if (m != 0 && om >= 7)
            v = om - 9;
        else if (m == 0)
            v = 1;
        return 4 * v;
    }
    default:
        throw DomainError("delta2: d2 must divide 8");
    }
}

Rational delta2_sum(int s2, i64 x1, i64 x2, Reading reading)
{
    if (s2 != 1 && s2 != 2 && s2 != 4 && s2 != 8)
        throw DomainError("delta2_sum: s2 must divide 8");
    Rational total = 0;
    for (int d = 1; d <= s2; d *= 2)
        total += delta2(x1, x2, d, reading);
    return total;
}

Rational delta2_counting(int s2, i64 x1, i64 x2)
{
    if (s2 != 1 && s2 != 2 && s2 != 4 && s2 != 8)
        throw DomainError("delta2_counting: s2 must divide 8");
    check_lattice(x1, x2);
    BigInt mt = B(x1) * B(x2);
    Rational m(1 - mt), mtr(mt);
    Rational total = 0;
    for (int r2 = 1; r2 <= s2; r2 *= 2) {
        if (!rational_congruent(m * mtr / Rational(4 * r2 * r2), 3, s2 / r2))
            continue;
        for (int A = 1; A <= 2 * r2; A *= 2) {
            int Bv = 2 * r2 / A;
            if (divides_alpha(Bv, x1, x2))
                total += rho2_local(m / Rational(A * A));
        }
    }
    return total * s2;
}

/* ---------- 3-adic factors ---------- */

BigInt ThreeAdicPoint::mtilde() const
{
    if (legendre == 1)
        return B(x1) * B(x2);
    return B(x1) * B(x1) - B(d) * B(x2) * B(x2);
}

Rational rho3_local(int legendre, Rational const & x)
{
    if (x == 0)
        return Rational(1);
    if (!p_integral(x, 3))
        return Rational(0);
    int o = valuation(x, 3);
    if (legendre == 1)
        return Rational(o + 1);
    if (legendre == -1)
        return Rational(o % 2 == 0 ? 1 : 0);
    return Rational(1);
}

namespace {

void check_three(ThreeAdicPoint const & x)
{
    if (x.legendre != 1 && x.legendre != -1)
        throw DomainError("3-adic data: (D|3) must be +1 or -1");
    if (x.legendre == -1 && mod(x.d, 3) != 2)
        throw DomainError("3-adic data: inert case needs d = 2 mod 3");
}

bool divides3(ThreeAdicPoint const & x, i64 k)
{
    return x.x1 % k == 0 && x.x2 % k == 0;
}

} // namespace

Rational delta3(ThreeAdicPoint const & x, int d3)
{
    check_three(x);
    BigInt m = x.m(), mt = x.mtilde();
    Rational mr(m);
    if (d3 == 1) {
        if (x.legendre == 1)
            return rho3_local(1, mr);
        if (m == 0 || valuation(m, 3) % 2 == 0)
            return rho3_local(-1, mr);
        return Rational(0);
    }
    if (d3 != 3)
        throw DomainError("delta3: d3 must divide 3");
    BigInt prod = m * mt;
    int op = prod == 0 ? kInfValuation : valuation(prod, 3);
    int om = m == 0 ? kInfValuation : valuation(m, 3);
    if (x.legendre == 1) {
        if (op == 0)
            return 2;
        if (m != 0 && om == op && om >= 1)
            return 2 * (om - 2);
        if (m == 0)
            return 2;
        if (op > om && om == 0)
            return 3 * (divides3(x, 3) ? 1 : 0) - 1;
        return 0;
    }
    if (op == 0)
        return -1;
    if (op >= 1 && (op == kInfValuation || op % 2 == 0))
        return 2;
    return 0;
}

Rational delta3_prime(ThreeAdicPoint const & x, int d3)
{
    check_three(x);
    if (x.legendre == 1)
        return Rational(0);
    BigInt m = x.m();
    if (m == 0)
        return Rational(0);
    int om = valuation(m, 3);
    if (om % 2 == 0)
        return Rational(0);
    if (d3 == 1)
        return frac(om + 1, 2);
    if (d3 == 3)
        return Rational(om) - Rational(1, 2);
    throw DomainError("delta3_prime: d3 must divide 3");
}

Rational delta3_sum(int s3, ThreeAdicPoint const & x)
{
    if (s3 != 1 && s3 != 3)
        throw DomainError("delta3_sum: s3 must divide 3");
    Rational total = delta3(x, 1);
    if (s3 == 3)
        total += delta3(x, 3);
    return total;
}

Rational delta3_sum_prime(int s3, ThreeAdicPoint const & x)
{
    if (s3 != 1 && s3 != 3)
        throw DomainError("delta3_sum_prime: s3 must divide 3");
    Rational total = delta3_prime(x, 1);
    if (s3 == 3)
        total += delta3_prime(x, 3);
    return total;
}

Rational delta3_counting(int s3, ThreeAdicPoint const & x)
{
    check_three(x);
    if (s3 != 1 && s3 != 3)
        throw DomainError("delta3_counting: s3 must divide 3");
    int s3p = x.legendre == 1 ? 1 : s3;
    Rational m(x.m()), mt(x.mtilde());
    Rational total = 0;
    for (int r3 = 1; r3 <= s3; r3 *= 3) {
        if (r3 % s3p != 0)
            continue;
        if (!rational_congruent(m * mt / Rational(r3 * r3), 1, s3 / r3))
            continue;
        for (int A = 1; A <= r3; A *= 3) {
            int Bv = r3 / A;
            if (divides3(x, Bv))
                total += rho3_local(x.legendre, m / Rational(A * A));
        }
    }
    return total * s3;
}

Rational rho_prime(i64 D, i64 p, Rational const & m)
{
    if (m == 0 || !p_integral(m, p))
        return Rational(0);
    i64 D0 = split_discriminant(D).first;
    if (kronecker(D0, p) != -1)
        return Rational(0);
    int o = valuation(m, p);
    if (o % 2 == 0)
        return Rational(0);
    return frac(o + 1, 2);
}

Rational rho_prime_3s3(i64 D, int s3, Rational const & m)
{
    if (s3 != 1 && s3 != 3)
        throw DomainError("rho_prime_3s3: s3 must divide 3");
    if (m == 0 || !p_integral(m, 3))
        return Rational(0);
    i64 D0 = split_discriminant(D).first;
    if (kronecker(D0, 3) != -1)
        return Rational(0);
    int o = valuation(m, 3);
    if (o % 2 == 0 || o < 1)
        return Rational(0);
    return frac(o - valuation(s3, 3) + 1, 2);
}

} // namespace weberyz
