#pragma once

#include "orbital.hpp"

namespace orbq {

// Invariant polynomial delta with its factor data and regularity flags.
struct InvariantProfile {
    Poly delta; // monic over F
    FactorProfile profile;
    bool separable = false;
    bool nonzero_at_0 = false;
    bool nonzero_at_1 = false;

    bool regular_semisimple() const { return separable && nonzero_at_0 && nonzero_at_1; }
};

InvariantProfile profile_of(const Poly& delta, int prec);

// Inv(gamma(x); T) = char(x; T)
InvariantProfile inv_linear(const Mat& x, int prec);

// Inv(g(x); T) = char(x sigma(x) pi^eps; T), checked F-rational
InvariantProfile inv_quaternion(const Mat& x, Lambda lambda, int prec);

// Inv of a 2n x 2n element through the monic square root of char(z^2).
// Errors: NotRegular for singular blocks, NotASquare propagated.
InvariantProfile inv_general(const Mat& gamma, int prec);

// Definition-level matching: exact equality of invariant polynomials.
bool match_test(const InvariantProfile& a, const InvariantProfile& b);

// number of factors with B_i a division algebra (lambda = 0), or with
// B_i mismatching B_{1/2} (x) L_i (lambda = 1/2)
int ord_lambda(const InvariantProfile& p, Lambda lambda);

// functional equation sign (-1)^{n + v(delta(0))}
int epsilon_sign(const InvariantProfile& p);

bool matching_exists(const InvariantProfile& p, Lambda lambda);

enum class ShiftClass { TopNilpotent, IntegralUnitPart, NonIntegral };

struct ShiftedInvariant {
    Poly shifted; // pi^{-n} delta(pi T)
    ShiftClass cls;
};

ShiftedInvariant shift_invariant(const Poly& delta);

const char* shift_class_name(ShiftClass c);

} // namespace orbq
