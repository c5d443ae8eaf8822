#include "invariant.hpp"

namespace orbq {

InvariantProfile profile_of(const Poly& delta, int prec)
{
    InvariantProfile p;
    p.delta = delta;
    p.separable = is_separable(delta);
    p.nonzero_at_0 = !delta[0].is_zero();
    p.nonzero_at_1 = !delta.eval(Local::one(delta.field())).is_zero();
    if (p.separable && p.nonzero_at_0)
        p.profile = newton_profile(delta, prec);
    return p;
}

InvariantProfile inv_linear(const Mat& x, int prec)
{
    Poly chi = x.charpoly();
    if (x.field().k == 2)
        chi = chi.demoted();
    return profile_of(chi, prec);
}

InvariantProfile inv_quaternion(const Mat& x, Lambda lambda, int prec)
{
    if (x.field().k != 2)
        fail(Err::WrongField, "quaternion side lives over E");
    Mat z = x * x.sigma();
    Poly chi = z.charpoly().demoted(); // CoefficientNotRational on failure
    if (epsilon_of(lambda))
        chi = chi.scale_roots(-1);
    return profile_of(chi, prec);
}

InvariantProfile inv_general(const Mat& gamma, int prec)
{
    FieldId fid = gamma.field();
    int n2 = gamma.rows();
    if (n2 % 2 != 0)
        fail(Err::Internal, "general invariant needs an even-size matrix");
    int n = n2 / 2;
    // gamma_+ = diagonal blocks, gamma_- = antidiagonal blocks
    Mat A(fid, n, n), B(fid, n, n), C(fid, n, n), D(fid, n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            A.at(i, j) = gamma.at(i, j);
            B.at(i, j) = gamma.at(i, n + j);
            C.at(i, j) = gamma.at(n + i, j);
            D.at(i, j) = gamma.at(n + i, n + j);
        }
    if (A.det().is_zero() || D.det().is_zero() || B.det().is_zero() || C.det().is_zero())
        fail(Err::NotRegular, "singular block in the plus/minus decomposition");
    // z = gamma_+^{-1} gamma_-; char(z^2) = char(A^{-1}B D^{-1}C) * conjugate
    Mat z(fid, n2, n2);
    Mat Ai = A.inverse_to(prec), Di = D.inverse_to(prec);
    Mat ul = Ai * B, lr = Di * C;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            z.at(i, n + j) = ul.at(i, j);
            z.at(n + i, j) = lr.at(i, j);
        }
    Poly cz2 = (z * z).charpoly();
    Poly root = poly_sqrt(cz2, prec);
    return profile_of(root, prec);
}

bool match_test(const InvariantProfile& a, const InvariantProfile& b)
{
    if (!a.regular_semisimple() || !b.regular_semisimple())
        fail(Err::NotRegular, "matching is defined on regular semi-simple invariants");
    return a.delta == b.delta;
}

// B_i is a division algebra iff f_i is odd and c_i / f_i is odd (E/F
// unramified turns the cyclic-algebra test into a norm-valuation parity)
static bool factor_is_division(const LocalFactor& lf)
{
    if (lf.f % 2 == 0)
        return false;
    if (lf.c % lf.f != 0)
        fail(Err::Internal, "constant-term valuation not divisible by the inertia degree");
    return ((lf.c / lf.f) % 2 + 2) % 2 == 1;
}

int ord_lambda(const InvariantProfile& p, Lambda lambda)
{
    if (!p.regular_semisimple())
        fail(Err::NotRegular, "ord needs a regular semi-simple invariant");
    if (!p.profile.complete)
        fail(Err::ProfileIncomplete, "factor profile incomplete");
    int ord = 0;
    for (const auto& lf : p.profile.factors) {
        bool division = factor_is_division(lf);
        bool odd_deg = lf.d % 2 == 1;
        if (lambda == Lambda::Zero)
            ord += division ? 1 : 0;
        else
            ord += ((!division && odd_deg) || (division && !odd_deg)) ? 1 : 0;
    }
    return ord;
}

int epsilon_sign(const InvariantProfile& p)
{
    if (!p.regular_semisimple())
        fail(Err::NotRegular, "epsilon needs a regular semi-simple invariant");
    long r = p.delta[0].valuation();
    long n = p.delta.deg();
    return ((n + r) % 2 + 2) % 2 == 0 ? 1 : -1;
}

bool matching_exists(const InvariantProfile& p, Lambda lambda)
{
    return ord_lambda(p, lambda) == 0;
}

ShiftedInvariant shift_invariant(const Poly& delta)
{
    ShiftedInvariant out;
    out.shifted = delta.scale_roots(1); // pi^{-n} delta(pi T)
    bool integral = out.shifted.integral();
    if (!integral) {
        out.cls = ShiftClass::NonIntegral;
        return out;
    }
    bool nilpotent = true;
    for (int i = 0; i < out.shifted.deg(); ++i) {
        Local c = out.shifted[i];
        if (!c.is_zero() && c.valuation() < 1)
            nilpotent = false;
    }
    out.cls = nilpotent ? ShiftClass::TopNilpotent : ShiftClass::IntegralUnitPart;
    return out;
}

const char* shift_class_name(ShiftClass c)
{
    switch (c) {
    case ShiftClass::TopNilpotent:     return "TOP_NILPOTENT";
    case ShiftClass::IntegralUnitPart: return "INTEGRAL_UNIT_PART";
    case ShiftClass::NonIntegral:      return "NON_INTEGRAL";
    }
    return "?";
}

} // namespace orbq
