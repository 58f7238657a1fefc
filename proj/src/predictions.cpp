#include "weberyz/predictions.hpp"

#include <algorithm>
#include <cmath>

#include "weberyz/localdensity.hpp"

namespace weberyz {

namespace {

using i128 = __int128;

Rational Q(i64 v)
{
    return Rational(BigInt(static_cast<long>(v)));
}

i64 ipow(i64 p, int e)
{
    i64 r = 1;
    for (int i = 0; i < e; ++i)
        r *= p;
    return r;
}

/* x = c mod M for rational x; modulus 1 is always satisfied. */
bool congruent(Rational const & x, i64 c, i64 M)
{
    if (M == 1)
        return true;
    BigInt g, Mb = BigInt(static_cast<long>(M));
    BigInt den = x.get_den();
    mpz_gcd(g.get_mpz_t(), den.get_mpz_t(), Mb.get_mpz_t());
    if (g != 1)
        return false;
    BigInt diff = x.get_num() - den * BigInt(static_cast<long>(c));
    return mpz_divisible_ui_p(diff.get_mpz_t(), static_cast<unsigned long>(M)) != 0;
}

/* Integer value of a rational, or -1 when it is not a non-negative integer. */
i64 as_index(Rational const & x)
{
    if (x.get_den() != 1 || x < 0 || !x.get_num().fits_slong_p())
        return -1;
    return x.get_num().get_si();
}

/* Representation counts of f(x, y) = n for 0 < n <= N. */
std::vector<i64> representation_counts(Form const & f, i64 N)
{
    std::vector<i64> out(static_cast<size_t>(N) + 1, 0);
    i64 D = f.disc();
    /* 4 a f(x, y) = (2 a x + b y)^2 - D y^2 */
    i64 ymax = isqrt(4 * f.a * N / (-D)) + 1;
    for (i64 y = -ymax; y <= ymax; ++y) {
        i128 rest = static_cast<i128>(4) * f.a * N + static_cast<i128>(D) * y * y;
        if (rest < 0)
            continue;
        i64 w = isqrt(static_cast<i64>(rest)) + 1;
        /* |2 a x + b y| <= w */
        i64 xlo = static_cast<i64>(std::floor(static_cast<double>(-w - f.b * y) / (2.0 * f.a))) - 1;
        i64 xhi = static_cast<i64>(std::ceil(static_cast<double>(w - f.b * y) / (2.0 * f.a))) + 1;
        for (i64 x = xlo; x <= xhi; ++x) {
            i128 v = static_cast<i128>(f.a) * x * x + static_cast<i128>(f.b) * x * y + static_cast<i128>(f.c) * y * y;
            if (v > 0 && v <= N)
                ++out[static_cast<size_t>(v)];
        }
    }
    return out;
}

/* Elements of I with norm a k, k <= N, grouped by k. */
std::shared_ptr<ElementTable> build_element_table(Ideal const & I, i64 a, i64 N)
{
    auto T = std::make_shared<ElementTable>();
    T->a = a;
    T->by_norm.assign(static_cast<size_t>(N) + 1, {});
    i64 D = I.D;
    i128 Nmax = static_cast<i128>(a) * N;
    /* (u + v sqrt D)/2 = x A + y (B + C omega), omega = (1 + sqrt D)/2 */
    i64 vmax = static_cast<i64>(std::sqrt(static_cast<long double>(4 * Nmax) / static_cast<long double>(-D))) + 1;
    for (i64 y = -vmax / I.C - 1; y <= vmax / I.C + 1; ++y) {
        i64 v = y * I.C;
        i128 rest = 4 * Nmax + static_cast<i128>(D) * v * v;
        if (rest < 0)
            continue;
        i64 umax = static_cast<i64>(std::sqrt(static_cast<long double>(rest))) + 1;
        i64 u0 = 2 * y * I.B + y * I.C;
        /* u = 2 x A + u0 */
        i64 xlo = static_cast<i64>(std::floor(static_cast<long double>(-umax - u0) / (2.0L * I.A))) - 1;
        i64 xhi = static_cast<i64>(std::ceil(static_cast<long double>(umax - u0) / (2.0L * I.A))) + 1;
        for (i64 x = xlo; x <= xhi; ++x) {
            i64 u = 2 * x * I.A + u0;
            i128 nrm4 = static_cast<i128>(u) * u - static_cast<i128>(D) * v * v;
            if (nrm4 > 4 * Nmax || nrm4 % (4 * a) != 0)
                continue;
            i64 k = static_cast<i64>(nrm4 / (4 * a));
            T->by_norm[static_cast<size_t>(k)].push_back(HalfElem{u, v});
        }
    }
    return T;
}

std::vector<i64> divisors_of(i64 n)
{
    return divisors(n);
}

} // namespace

/* ---------- context ---------- */

PredictionContext::PredictionContext(i64 D1_, i64 D2_, int s_) : D1(D1_), D2(D2_), s(s_)
{
    if (24 % s != 0 || s <= 0)
        throw DomainError("prediction context: s must divide 24");
    if (!is_admissible(D1) || !is_admissible(D2))
        throw DomainError("prediction context: discriminants must be admissible");
    auto [d01, tt1] = split_discriminant(D1);
    auto [d02, tt2] = split_discriminant(D2);
    if (d01 != d02)
        throw DomainError("prediction context: D1 D2 must be a square");
    D0 = d01;
    t1 = tt1;
    t2 = tt2;
    t = t1 * t2;
    N = -D0 * t;
    D = D0 * t * t;
    int leg = kronecker(D0, 3);
    s_prime = static_cast<int>(gcd(s, leg == 1 ? 1 : 9));
    D0t = gcd(-D0, t);
    D0prime = -D0 / D0t;
    G0_ = std::make_shared<ClassGroup>(D0);
    G1_ = D1 == D0 ? G0_ : std::make_shared<ClassGroup>(D1);
    G2_ = D2 == D1 ? G1_ : (D2 == D0 ? G0_ : std::make_shared<ClassGroup>(D2));
    for (int c = 0; c < G0_->order(); ++c) {
        rcount_.push_back(representation_counts(G0_->form(c), N));
        genus_.push_back(genus_of(*G0_, c));
    }
}

int PredictionContext::s_part(i64 ell) const
{
    return ell == 2 || ell == 3 ? static_cast<int>(ipow(ell, valuation(s, ell))) : 1;
}

int PredictionContext::s_prime_part(i64 ell) const
{
    return ell == 3 ? s_prime : 1;
}

Rational PredictionContext::r_class(int cls, Rational const & n) const
{
    i64 k = as_index(n);
    if (k < 0)
        return Rational(0);
    if (k == 0)
        return Rational(1, 2);
    if (k > N)
        return weberyz::r_class(*G0_, cls, n);
    return frac(rcount_[static_cast<size_t>(cls)][static_cast<size_t>(k)], 2);
}

Rational PredictionContext::rho_genus(Rational const & m, Rational const & c) const
{
    std::vector<int> target = genus_vector(D0, c);
    Rational total = 0;
    for (int cls = 0; cls < G0_->order(); ++cls)
        if (genus_[static_cast<size_t>(cls)] == target)
            total += r_class(cls, m);
    return total;
}

std::pair<SmallCMPair, std::shared_ptr<ElementTable const>> PredictionContext::elements(int cls1, int cls2,
                                                                                        i64 skip) const
{
    std::lock_guard<std::mutex> lock(mu_);
    auto key = std::make_tuple(cls1, cls2, skip);
    auto it = elems_.find(key);
    if (it != elems_.end())
        return it->second;
    SmallCMPair P = make_small_cm_pair(*G1_, cls1, *G2_, cls2, skip);
    auto T = build_element_table(P.a0tilde, P.a, N);
    auto entry = std::make_pair(P, std::shared_ptr<ElementTable const>(T));
    elems_.emplace(key, entry);
    return entry;
}

std::vector<std::vector<PredictionContext::IdealEntry>> const & PredictionContext::ideals() const
{
    std::lock_guard<std::mutex> lock(mu_);
    if (!ideals_built_) {
        ideals_.assign(static_cast<size_t>(N) + 1, {});
        for (i64 n = 1; n <= N; ++n)
            for (auto const & I : ideals_of_norm(D0, n))
                ideals_[static_cast<size_t>(n)].push_back({I, ideal_class(*G0_, I)});
        ideals_built_ = true;
    }
    return ideals_;
}

/* ---------- weights and kappa ---------- */

i64 kappa_ell(i64 D0, i64 ell, int index)
{
    std::vector<i64> ps = prime_divisors(-D0);
    int found = 0;
    for (i64 k = 1;; ++k) {
        if (gcd(k, -D0) != 1)
            continue;
        bool ok = true;
        for (i64 p : ps) {
            bool want = p != ell;
            if ((kronecker(-k, p) == 1) != want) {
                ok = false;
                break;
            }
        }
        if (ok && found++ == index)
            return -k;
    }
}

i64 w_weight(i64 D, i64 ell, i64 n)
{
    if (n <= 0)
        throw DomainError("w_weight: n must be positive");
    std::vector<i64> S = S_set(D, -Q(n));
    if (S.size() != 1 || S[0] != ell)
        return 0;
    i64 Dabs = -D;
    return sigma0(gcd(n, Dabs / gcd(ell, Dabs)));
}

/* ---------- main identity ---------- */

Rational ord_disc_main(PredictionContext const & ctx, int cls1, int cls2, i64 ell, i64 rep_skip)
{
    if (!is_prime(ell))
        throw DomainError("ord_disc_main: l must be prime");
    if (ctx.same_disc() && cls1 == cls2)
        throw DomainError("ord_disc_main: the two classes must differ when D1 = D2");
    auto [P, T] = ctx.elements(cls1, cls2, rep_skip);
    i64 a = P.a;
    i64 D0 = ctx.D0, t = ctx.t, D = ctx.D, N = ctx.N;
    bool ell_divides_D = D % ell == 0;
    if (ell == 3 && ell_divides_D)
        throw DomainError("ord_disc_main: 3 cannot divide an admissible discriminant");
    std::vector<i64> pD = prime_divisors(-D);
    int sl = ctx.s_part(ell), spl = ctx.s_prime_part(ell);
    i64 S = ctx.s / sl, Sp = ctx.s_prime / spl;
    int s3 = ctx.s_part(3);
    i64 M = -D * ell;
    Rational total = 0;
    for (i64 n = 0; n <= N; ++n) {
        i64 nt = N - n;
        Rational nq = Q(n);
        Rational ell_factor_common = 0;
        if (!ell_divides_D)
            ell_factor_common = ell == 3 ? rho_prime_3s3(D0, s3, nq) : rho_prime(D0, ell, nq);
        if (!ell_divides_D && ell_factor_common == 0)
            continue;
        std::vector<i64> diff;
        if (n != 0)
            diff = diff_set(D0, a, nq);
        auto in_diff = [&](i64 p) { return std::find(diff.begin(), diff.end(), p) != diff.end(); };
        for (i64 r : divisors_of(S)) {
            if (r % Sp != 0)
                continue;
            if (!congruent(Q(n) * Q(nt) / Q(4 * r * r), 19, S / r))
                continue;
            for (i64 A : divisors_of(2 * r)) {
                i64 B = 2 * r / A;
                Rational rv = rho_M(D0, nq / Q(A * A), M);
                if (rv == 0)
                    continue;
                if (nt % (B * B) != 0)
                    continue;
                i64 k = nt / (B * B);
                Rational inner = 0;
                for (HalfElem const & e : T->by_norm[static_cast<size_t>(k)]) {
                    Rational a1 = frac(e.u, 2), a2 = frac(e.v, 2);
                    Rational term = 1;
                    for (i64 p : pD) {
                        if (p == ell)
                            continue;
                        term *= delta_p_known_diff(D0, t, a, nq, a1, a2, p, n != 0 && in_diff(p));
                        if (term == 0)
                            break;
                    }
                    if (term == 0)
                        continue;
                    if (ell_divides_D)
                        term *= delta_p_prime_known_diff(D0, t, a, nq, a1, a2, ell, n != 0 && in_diff(ell));
                    else
                        term *= ell_factor_common;
                    inner += term;
                }
                total += rv * inner;
            }
        }
    }
    return total / 2;
}

/* ---------- ideal pairs ---------- */

std::vector<IdealPairWitness> ideal_pair_witnesses(PredictionContext const & ctx, int Atilde, i64 ell,
                                                   Reading reading)
{
    std::vector<IdealPairWitness> out;
    if (!ctx.same_disc() || ctx.t != 1)
        throw DomainError("ideal pairs: D must be fundamental with D1 = D2");
    i64 Dabs = ctx.N;
    auto [P, T] = ctx.elements(ctx.G0().identity(), Atilde);
    (void)T;
    i64 a = P.a;
    auto const & ideals = ctx.ideals();
    i64 twos = 2 * ctx.s_prime;
    i64 mod_c = ctx.s / ctx.s_prime;
    for (i64 n2 = 1; n2 < Dabs; ++n2) {
        i64 rest = Dabs - n2;
        int j = valuation(rest, ell);
        if (j == 0)
            continue;
        i64 weight = w_weight(ctx.D, ell, rest * a);
        for (auto const & e2 : ideals[static_cast<size_t>(n2)]) {
            if (e2.cls != Atilde)
                continue;
            /* every j' in 1..j with l^j' n1' = rest */
            for (int jj = 1; jj <= j; ++jj) {
                i64 m1 = rest / ipow(ell, jj);
                for (auto const & e1 : ideals[static_cast<size_t>(m1)]) {
                    Ideal prod = ideal_mul(e1.ideal, e2.ideal);
                    if (prod.content() % twos != 0)
                        continue;
                    Ideal aa{prod.D, prod.A / twos, prod.B / twos, prod.C / twos};
                    i64 c = aa.content();
                    i64 nrm = aa.norm();
                    i64 L = reading == Reading::AsPrinted ? ell : ipow(ell, jj);
                    bool ok = mod_c == 1 || mod(c * (L * (nrm / (c * c)) + 5), mod_c) == 0;
                    IdealPairWitness w;
                    w.b1 = e1.ideal;
                    w.b2 = e2.ideal;
                    w.j = jj;
                    w.content_check = ok;
                    w.weight = weight;
                    if (ok)
                        out.push_back(w);
                }
            }
        }
    }
    return out;
}

Rational ord_disc_pairs(PredictionContext const & ctx, int Atilde, i64 ell, Reading reading)
{
    if (!ctx.same_disc() || ctx.t != 1)
        throw DomainError("ord_disc_pairs: D must be fundamental with D1 = D2");
    if (Atilde == ctx.G0().identity())
        throw DomainError("ord_disc_pairs: the class must be non-trivial");
    i64 D = ctx.D0, Dabs = ctx.N;
    int k = kronecker(D, ell);
    if (k == 1)
        return Rational(0);
    auto [P, T] = ctx.elements(ctx.G0().identity(), Atilde);
    (void)T;
    i64 a = P.a;
    if (ell == 3) {
        int s3 = ctx.s_part(3);
        i64 S = ctx.s / s3;
        int Atilde_inv = ctx.G0().inverse(Atilde);
        Rational total = 0;
        for (i64 n = 1; n <= Dabs; ++n) {
            i64 nt = Dabs - n;
            i64 w = w_weight(D, 3, n * a);
            if (w == 0)
                continue;
            for (i64 r : divisors_of(S)) {
                if (!congruent(Q(n) * Q(nt) / Q(4 * r * r), 19, S / r))
                    continue;
                for (i64 A : divisors_of(2 * r)) {
                    i64 B = 2 * r / A;
                    Rational rt = ctx.r_class(Atilde_inv, Q(nt) / Q(B * B));
                    if (rt == 0)
                        continue;
                    Rational rs = 0;
                    for (i64 p3 = 3; p3 <= n; p3 *= 3)
                        rs += rho(D, Q(n) / Q(p3 * A * A)) + rho(D, Q(n) / Q(p3 * s3 * A * A));
                    total += Q(w) * rs * rt;
                }
            }
        }
        return total / 2;
    }
    Rational total = 0;
    for (auto const & w : ideal_pair_witnesses(ctx, Atilde, ell, reading))
        total += Q(w.weight);
    if (D % ell == 0)
        total += frac(w_weight(D, ell, Dabs * a), 2);
    return total;
}

/* ---------- resultant ---------- */

Rational ord_resultant(PredictionContext const & ctx, i64 ell, i64 kappa)
{
    if (ctx.t <= 1)
        throw DomainError("ord_resultant: needs t = t1 t2 > 1");
    i64 D0 = ctx.D0, t = ctx.t, N = ctx.N;
    for (i64 p : prime_divisors(t))
        if (kronecker(D0, p) == 1)
            throw DomainError("ord_resultant: primes dividing t must be non-split");
    if (!is_prime(ell))
        throw DomainError("ord_resultant: l must be prime");
    if (kronecker(D0, ell) == 1)
        return Rational(0);
    if (kappa == 0)
        kappa = kappa_ell(D0, ell);
    i64 t2 = t * t;
    i64 D0t = ctx.D0t, D0p = ctx.D0prime;
    Rational total = 0;
    if (ell == 3) {
        int s2 = ctx.s_part(2), s3 = ctx.s_part(3);
        for (i64 n = 1; n < N; ++n) {
            i64 nt = N - n;
            if (D0t % gcd(n, t2) != 0)
                continue;
            Rational sig = frac(sigma0(gcd(n, D0p)), 2);
            for (i64 r : divisors_of(s2)) {
                if (!congruent(Q(n) * Q(nt) / Q(4 * r * r), 19, s2 / r))
                    continue;
                for (i64 A : divisors_of(2 * r)) {
                    i64 B = 2 * r / A;
                    Rational g = ctx.rho_genus(Q(nt) / Q(B * B), -Q(n));
                    if (g == 0)
                        continue;
                    Rational rs = 0;
                    for (i64 p3 = 3; p3 <= n; p3 *= 3)
                        rs += rho(D0, Q(n) / Q(A * A * p3)) + rho(D0, Q(n) / Q(s3 * A * A * p3));
                    total += sig * rs * g;
                }
            }
        }
        return total;
    }
    if (t % ell != 0) {
        int o_ell = valuation(D0, ell);
        i64 sg = D0p / gcd(ell, D0p);
        for (i64 n = 1; n < N; ++n) {
            i64 nt = N - n;
            if (D0t % gcd(n, t2) != 0)
                continue;
            i64 sig = sigma0(gcd(n, sg));
            Rational c = -Q(kappa) * Q(n);
            for (i64 r : divisors_of(ctx.s)) {
                if (r % ctx.s_prime != 0)
                    continue;
                if (!congruent(Q(n) * Q(nt) / Q(4 * r * r), 19, ctx.s / r))
                    continue;
                for (i64 A : divisors_of(2 * r)) {
                    i64 B = 2 * r / A;
                    Rational g = ctx.rho_genus(Q(nt) / Q(B * B), c);
                    if (g == 0)
                        continue;
                    Rational rs = 0;
                    for (i64 pj = ipow(ell, o_ell); pj <= n; pj *= ell)
                        rs += rho(D0, Q(n) / Q(A * A * pj));
                    total += Q(sig) * rs * g;
                }
            }
        }
        return total;
    }
    /* l | t */
    i64 lg = ell * gcd(ell, D0t);
    for (i64 n = 1; n <= N; ++n) {
        i64 nt = N - n;
        i64 nl = prime_to_part(n, ell);
        if (D0t % gcd(nl, t2) != 0)
            continue;
        i64 sig = sigma0(gcd(n, D0p));
        Rational c = -Q(kappa) * Q(n);
        for (i64 r : divisors_of(ctx.s)) {
            if (r % ctx.s_prime != 0)
                continue;
            if (!congruent(Q(n) * Q(nt) / Q(4 * r * r), 19, ctx.s / r))
                continue;
            for (i64 A : divisors_of(2 * r)) {
                i64 B = 2 * r / A;
                Rational rv = rho(D0, Q(n) / Q(A * A * lg));
                if (rv == 0)
                    continue;
                total += Q(sig) * rv * ctx.rho_genus(Q(nt) / Q(B * B), c);
            }
        }
    }
    if (prime_divisors(t) == std::vector<i64>{ell})
        total += rho(D0, Rational(0)) * Q(1 - kronecker(D0, ell)) * rho(D0, Q(N));
    return total;
}

/* ---------- aggregates ---------- */

FactorizationMap predicted_disc_class(PredictionContext const & ctx, int cls, DiscRoute route)
{
    FactorizationMap F;
    for (i64 ell : primes_up_to(ctx.N)) {
        Rational v = route == DiscRoute::Main ? ord_disc_main(ctx, ctx.G1().identity(), cls, ell)
                                              : ord_disc_pairs(ctx, cls, ell);
        if (v != 0)
            F.add(BigInt(static_cast<long>(ell)), v);
    }
    return F;
}

FactorizationMap predicted_disc(PredictionContext const & ctx, DiscRoute route)
{
    if (!ctx.same_disc())
        throw DomainError("predicted_disc: needs D1 = D2");
    FactorizationMap F;
    for (int cls = 0; cls < ctx.G1().order(); ++cls) {
        if (cls == ctx.G1().identity())
            continue;
        FactorizationMap part = predicted_disc_class(ctx, cls, route);
        for (auto const & [p, e2] : part.entries())
            F.add_twice(p, e2);
    }
    return F;
}

FactorizationMap predicted_resultant(PredictionContext const & ctx)
{
    FactorizationMap F;
    for (i64 ell : primes_up_to(ctx.N)) {
        Rational v = ord_resultant(ctx, ell);
        if (v != 0)
            F.add(BigInt(static_cast<long>(ell)), v);
    }
    return F;
}

} // namespace weberyz
