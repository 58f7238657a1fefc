#ifndef WEBERYZ_PREDICTIONS_HPP
#define WEBERYZ_PREDICTIONS_HPP

#include <map>
#include <memory>
#include <mutex>
#include <tuple>
#include <vector>

#include "weberyz/arith.hpp"
#include "weberyz/localdensity.hpp"
#include "weberyz/quadorders.hpp"

namespace weberyz {

/* Elements of a fixed ideal a~_0 grouped by Nm(alpha~)/a. */
struct ElementTable
{
    i64 a = 0;
    std::vector<std::vector<HalfElem>> by_norm; /* index k: Nm(alpha~) = a k */
};

/* Shared data for valuation predictions attached to (D1, D2, s). */
class PredictionContext
{
  public:
    PredictionContext(i64 D1, i64 D2, int s);

    i64 D1, D2;
    int s;
    i64 D0, t1, t2, t;
    /* |D0| t = sqrt(D1 D2) */
    i64 N;
    /* D = D0 t^2 */
    i64 D;
    /* gcd(s, 3^(1 - (D|3))) */
    int s_prime;
    /* gcd(D0, t) > 0 and |D0| / gcd(D0, t) */
    i64 D0t, D0prime;

    ClassGroup const & G0() const { return *G0_; }
    ClassGroup const & G1() const { return *G1_; }
    ClassGroup const & G2() const { return *G2_; }
    bool same_disc() const { return D1 == D2; }

    /* l-part of s and of s' */
    int s_part(i64 ell) const;
    int s_prime_part(i64 ell) const;

    /* r_A(n) for 0 <= n <= N from form representation counts; r_A(0) = 1/2. */
    Rational r_class(int cls, Rational const & n) const;
    /* Sum of r_A(m) over classes A in the genus of c. */
    Rational rho_genus(Rational const & m, Rational const & c) const;
    std::vector<int> const & genus(int cls) const { return genus_[static_cast<size_t>(cls)]; }

    /* Elements of the a~_0 of make_small_cm_pair(G1, cls1, G2, cls2, skip) up to norm a N (memoized). */
    std::pair<SmallCMPair, std::shared_ptr<ElementTable const>> elements(int cls1, int cls2, i64 skip = 0) const;

    /* Integral ideals of O_{D0} by norm up to N together with their classes (memoized). */
    struct IdealEntry
    {
        Ideal ideal;
        int cls;
    };
    std::vector<std::vector<IdealEntry>> const & ideals() const;

  private:
    std::shared_ptr<ClassGroup> G0_, G1_, G2_;
    std::vector<std::vector<i64>> rcount_; /* [cls][n], doubled counts */
    std::vector<std::vector<int>> genus_;
    mutable std::mutex mu_;
    mutable std::map<std::tuple<int, int, i64>, std::pair<SmallCMPair, std::shared_ptr<ElementTable const>>> elems_;
    mutable std::vector<std::vector<IdealEntry>> ideals_;
    mutable bool ideals_built_ = false;
};

/* Admissible kappa_l: negative, coprime to D0, (kappa|p) = 1 exactly for p | D0 with p != l; index-th by |kappa|. */
i64 kappa_ell(i64 D0, i64 ell, int index = 0);

/* w(l, n) = sigma0(gcd(n, |D| / gcd(l, |D|))) if S(D, -n) = {l}, else 0. */
i64 w_weight(i64 D, i64 ell, i64 n);

/* Half the right side of the main identity for ord_l of the product attached to (A1, A2). */
Rational ord_disc_main(PredictionContext const & ctx, int cls1, int cls2, i64 ell, i64 rep_skip = 0);

struct IdealPairWitness
{
    Ideal b1, b2;
    int j = 0;
    bool content_check = false;
    i64 weight = 0;
};

/*
 * Pairs (b1, b2) with [b2] = A~, l^j Nm b1 + Nm b2 = |D|, b1 b2 = 2 s' a integral and
 * c(a) (L Nm(a)/c(a)^2 + 5) = 0 mod s/s'. The Verified reading takes L = l^j, the value that
 * n n~/(4 r^2) takes on such a pair; AsPrinted takes L = l. They differ only when j >= 2 and s/s' > 1.
 */
std::vector<IdealPairWitness> ideal_pair_witnesses(PredictionContext const & ctx, int Atilde, i64 ell,
                                                   Reading reading = Reading::Verified);

/* ord_l(disc(D; s, A~)) by ideal-pair counting (l != 3), the l = 3 sum, or 0 for split l. */
Rational ord_disc_pairs(PredictionContext const & ctx, int Atilde, i64 ell, Reading reading = Reading::Verified);

/* ord_l of the resultant of the two class polynomials (t > 1); kappa = 0 selects kappa_ell(D0, l). */
Rational ord_resultant(PredictionContext const & ctx, i64 ell, i64 kappa = 0);

enum class DiscRoute
{
    Main,
    Pairs
};

/* ord over all primes l <= |D0 t| for disc(D; s, A~) with A~ = cls. */
FactorizationMap predicted_disc_class(PredictionContext const & ctx, int cls, DiscRoute route = DiscRoute::Main);
/* Full discriminant: sum over non-trivial classes. */
FactorizationMap predicted_disc(PredictionContext const & ctx, DiscRoute route = DiscRoute::Pairs);
FactorizationMap predicted_resultant(PredictionContext const & ctx);

} // namespace weberyz

#endif
