#ifndef WEBERYZ_QUADORDERS_HPP
#define WEBERYZ_QUADORDERS_HPP

#include <map>
#include <optional>
#include <vector>

#include "weberyz/arith.hpp"

namespace weberyz {

/* Positive definite binary quadratic form a x^2 + b x y + c y^2. */
struct Form
{
    i64 a = 0, b = 0, c = 0;

    i64 disc() const { return b * b - 4 * a * c; }
    bool operator==(Form const & o) const { return a == o.a && b == o.b && c == o.c; }
    bool operator<(Form const & o) const
    {
        return a != o.a ? a < o.a : (b != o.b ? b < o.b : c < o.c);
    }
};

Form reduce(Form f);
bool is_reduced(Form const & f);
Form compose(Form const & f, Form const & g);
Form identity_form(i64 D);
/* Form of discriminant D with leading coefficient a and middle coefficient b. */
Form form_from(i64 D, i64 a, i64 b);

/* Form class group of primitive positive definite forms of discriminant D < 0. */
class ClassGroup
{
  public:
    explicit ClassGroup(i64 D);

    i64 disc() const { return D_; }
    int order() const { return static_cast<int>(forms_.size()); }
    Form const & form(int cls) const { return forms_.at(cls); }
    std::vector<Form> const & forms() const { return forms_; }
    int identity() const { return 0; }
    int mul(int x, int y) const { return table_[x][y]; }
    int inverse(int x) const { return inverse_[x]; }
    /* Index of the class of an arbitrary primitive form of discriminant D. */
    int class_of(Form const & f) const;
    /* Class index of the reduced form with these coefficients, or -1. */
    int find(Form const & reduced) const;

  private:
    i64 D_;
    std::vector<Form> forms_;
    std::map<Form, int> index_;
    std::vector<std::vector<int>> table_;
    std::vector<int> inverse_;
};

i64 class_number(i64 D);

/*
 * Element (u + v sqrt(D))/2 of the maximal order of discriminant D, stored
 * with doubled coordinates; u = v D mod 2.
 */
struct HalfElem
{
    i64 u = 0, v = 0;

    bool operator==(HalfElem const & o) const { return u == o.u && v == o.v; }
    bool operator<(HalfElem const & o) const { return u != o.u ? u < o.u : v < o.v; }
};

/*
 * Integral ideal of the maximal order O_D (D fundamental) in Hermite normal
 * form: Z-basis {A, B + C*omega} with omega = (sigma + sqrt(D))/2, sigma = D mod 2,
 * C | A, C | B, 0 <= B < A.
 */
struct Ideal
{
    i64 D = 0;
    i64 A = 1, B = 0, C = 1;

    i64 norm() const { return A * C; }
    i64 content() const { return C; }
    bool operator==(Ideal const & o) const { return D == o.D && A == o.A && B == o.B && C == o.C; }
    bool operator<(Ideal const & o) const
    {
        return A != o.A ? A < o.A : (B != o.B ? B < o.B : C < o.C);
    }
};

Ideal unit_ideal(i64 D);
/* Ideal generated (as O_D-module) by the given elements. */
Ideal ideal_generated(i64 D, std::vector<HalfElem> const & gens);
/* Z-module [a, (beta + sqrt(D))/2]; must be an ideal. */
Ideal ideal_ab(i64 D, i64 a, i64 beta);
Ideal ideal_mul(Ideal const & I, Ideal const & J);
Ideal ideal_conj(Ideal const & I);
Ideal ideal_scale(Ideal const & I, i64 k);
bool ideal_contains(Ideal const & I, HalfElem const & x);
/* Primitive ideal [a, (-b + sqrt(D))/2] attached to the form (a, b, c) and back. */
Ideal ideal_of_form(i64 D, Form const & f);
Form form_of_ideal(Ideal const & I);
int ideal_class(ClassGroup const & G, Ideal const & I);
std::vector<Ideal> ideals_of_norm(i64 D, i64 n);
/* All elements of I of norm N. */
std::vector<HalfElem> enumerate_elements(Ideal const & I, i64 N);
Rational elem_norm(i64 D, HalfElem const & x);

/* Local ideal counts in the field of discriminant D (the fundamental part of D is used). */
i64 rho_p(i64 D, i64 p, i64 n);
/* rho(n) with rho(0) = h/2 and rho(x) = 0 for non-integral or negative x. */
Rational rho(i64 D, Rational const & n);
/* prod over p not dividing M of rho_p(n); rho(0) at n = 0. */
Rational rho_M(i64 D, Rational const & n, i64 M);
/* Number of integral ideals of norm n in the class cls of Cl(D), D fundamental; 1/2 at n = 0. */
Rational r_class(ClassGroup const & G, int cls, Rational const & n);

/* Primes p (finite) with Hilbert symbol (n, D)_p = -1. */
std::vector<i64> S_set(i64 D, Rational const & n);
/* Diff set for the small CM pair: S(D0, -n a). */
std::vector<i64> diff_set(i64 D0, i64 a, Rational const & n);

/* Genus vector ((c, D0)_p) over p | D0. */
std::vector<int> genus_vector(i64 D0, Rational const & c);
std::vector<int> genus_of(ClassGroup const & G, int cls);
/* Sum of r_A(m) over classes whose genus represents c. */
Rational rho_genus(ClassGroup const & G, Rational const & m, Rational const & c);

/* Representatives for the small CM construction. */
struct SmallCMPair
{
    i64 D0 = 0, t1 = 1, t2 = 1, D1 = 0, D2 = 0;
    int cls1 = 0, cls2 = 0;
    i64 a1 = 0, a2 = 0, b = 0, btilde = 0;
    i64 a = 0;
    Ideal a0tilde;
    /* Class of a0tilde in Cl(D0). */
    int a0_class = 0;
};

SmallCMPair make_small_cm_pair(ClassGroup const & G1, int cls1, ClassGroup const & G2, int cls2,
                               i64 skip = 0);

} // namespace weberyz

#endif
