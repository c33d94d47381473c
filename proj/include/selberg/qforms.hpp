// Reduction theory of primitive indefinite binary quadratic forms:
// rho-cycles of reduced forms, class numbers h(D), the analytic class
// number cross-check, and the form <-> hyperbolic matrix correspondence.
#pragma once

#include <vector>

#include <gmpxx.h>

#include "selberg/arith.hpp"

namespace selberg::qforms {

// Q(x,y) = a x^2 + b xy + c y^2, written [a,b,c].
struct QuadForm {
    long long a = 0;
    long long b = 0;
    long long c = 0;

    friend bool operator==(const QuadForm&, const QuadForm&) = default;
    friend auto operator<=>(const QuadForm&, const QuadForm&) = default;
};

bool is_primitive(const QuadForm& q);

// b^2 - 4ac as a plain integer (no validity checks).
long long disc_raw(const QuadForm& q);

// b^2 - 4ac as a checked Discriminant; throws if the form is not a valid
// indefinite anisotropic primitive form.
arith::Discriminant discriminant(const QuadForm& q);

// Integer 2x2 matrix acting on forms on the right: (Q.g)(x,y) = Q((x,y) g).
struct Mat2i {
    long long m11 = 1, m12 = 0, m21 = 0, m22 = 1;
};

// Equivalent form Q.g.  Requires det g = 1; throws otherwise or on
// coefficient overflow.
QuadForm apply_transform(const QuadForm& q, const Mat2i& g);

// Reduced in the standard sense: 0 < b < sqrt(D), sqrt(D)-b < 2|a| < sqrt(D)+b.
bool is_reduced(const QuadForm& q);

// Right neighbor [c, b', c'] with b' = -b (mod 2|c|) chosen closest below
// sqrt(D).  Requires a reduced input; the output is reduced.
QuadForm rho_step(const QuadForm& q);

// Some reduced form equivalent to q (canonical neighbor choice, so the
// result is deterministic).
QuadForm reduce(const QuadForm& q);

// All reduced primitive forms of discriminant D, sorted.
std::vector<QuadForm> reduced_forms(arith::Discriminant D);

namespace detail {
// The two enumeration strategies behind reduced_forms, exposed so tests can
// cross-validate them on the same D: the divisor-window loop (direct from
// the definition, O(D) work) and the congruence-class enumeration used for
// large D (square roots of D mod 4|a|, ~O(sqrt(D)) work).
std::vector<QuadForm> reduced_forms_divisor_path(arith::Discriminant D);
std::vector<QuadForm> reduced_forms_congruence_path(arith::Discriminant D);
}  // namespace detail

// The rho-orbits partitioning reduced_forms(D); each cycle is listed in
// rho order starting from its smallest form.
std::vector<std::vector<QuadForm>> reduced_cycles(arith::Discriminant D);

// h(D): the number of rho-cycles of reduced primitive forms.
long long class_number(arith::Discriminant D);

// sqrt(D) L(1,chi_D) / log eps_1(D), with the L-truncation tolerance chosen
// so the value rounds to the exact class number.
double class_number_via_formula(arith::Discriminant D);

struct Mat2z {
    mpz_class m11, m12, m21, m22;
};

mpz_class det(const Mat2z& g);
mpz_class trace(const Mat2z& g);

// gamma(Q,(t,u)) = [[(t+bu)/2, -cu], [au, (t-bu)/2]].  Requires
// disc(Q) = sol.D; determinant 1 and trace t by the Pell identity.
Mat2z form_to_matrix(const QuadForm& q, const arith::PellSolution& sol);

struct FormTU {
    QuadForm q;
    mpz_class t;
    mpz_class u;
};

// Inverse map: t = g11+g22, u = gcd(g21, g11-g22, -g12),
// Q = [g21/u, (g11-g22)/u, -g12/u].  Requires |trace| > 2, det 1.
FormTU matrix_to_form(const Mat2z& g);

}  // namespace selberg::qforms
