#pragma once

#include <vector>

#include "local.hpp"

namespace orbq {

// Polynomial in T with Local coefficients, ascending order, no zero leading
// coefficient.  Monicity is required by most factorization entry points.
class Poly {
public:
    Poly() = default;
    explicit Poly(FieldId fid) : fid_(fid) {}
    Poly(FieldId fid, std::vector<Local> coeffs);

    static Poly constant(const Local& c);
    static Poly tvar(FieldId fid); // the polynomial T

    FieldId field() const { return fid_; }
    int deg() const { return int(c_.size()) - 1; } // -1 for zero
    bool is_zero() const { return c_.empty(); }
    Local operator[](int i) const; // zero outside the stored range
    const std::vector<Local>& coeffs() const { return c_; }

    bool monic() const;
    bool integral() const; // all coefficients in O
    int min_prec() const;  // EXACT or the smallest coefficient precision

    Poly operator+(const Poly& o) const;
    Poly operator-(const Poly& o) const;
    Poly operator-() const;
    Poly operator*(const Poly& o) const;
    Poly operator*(const Local& s) const;

    // divmod by a monic divisor (exact in each coefficient operation)
    std::pair<Poly, Poly> divmod(const Poly& monic_div) const;

    Local eval(const Local& x) const;
    Poly derivative() const;
    Poly truncated(int order) const; // coefficient-wise precision cap
    Poly reduced(int order) const;   // coefficient-wise support reduction
    Poly promoted() const;
    Poly demoted() const;

    // P(t^m T) * t^{-m deg}; roots scale by t^{-m}, monicity preserved
    Poly scale_roots(int m) const;
    // P(T + r)
    Poly shift_roots(const Local& r) const;
    // monic polynomial with roots t^m / r over the roots r of *this;
    // requires P(0) != 0; divides by P(0), so coefficients truncate at prec
    Poly reflect_roots(int m, int prec) const;

    bool operator==(const Poly& o) const;
    std::string str() const;

private:
    void trim();

    FieldId fid_;
    std::vector<Local> c_;
};

// Polynomial grammar: terms c*T^j with c in the element grammar.
Poly parse_poly(const std::string& text, FieldId fid);

// gcd-free separability decision through the resultant of (P, P').
// Errors: InsufficientPrecision when the decision is hidden by truncation.
bool is_separable(const Poly& P);

Local resultant(const Poly& P, const Poly& Q);

// Unique monic square root of a monic even-degree polynomial.
// Errors: NotASquare.
Poly poly_sqrt(const Poly& P, int prec);

// Hensel unit/nilpotent splitting: P = P0 * P1 with P0 = T^k mod t and
// P1(0) a unit.  Requires integral monic P.  Errors: NotIntegral.
std::pair<Poly, Poly> hensel_split(const Poly& P, int prec);

// Lift a coprime residue factorization abar * bbar = P mod t to precision.
std::pair<Poly, Poly> hensel_lift(const Poly& P, const std::vector<Fq>& abar,
                                  const std::vector<Fq>& bbar, int prec);

// One irreducible factor of a monic separable P over F, or a certified
// profile-only entry when coefficients cannot be produced over F.
struct LocalFactor {
    Poly poly;            // monic factor to working precision (empty if !has_poly)
    bool has_poly = false;
    int e = 1;            // ramification index
    int f = 1;            // inertia degree
    int c = 0;            // valuation of the factor's constant term
    int d = 1;            // e * f
};

struct FactorProfile {
    std::vector<LocalFactor> factors; // sorted by (c*? slope, f, e)
    bool complete = false;            // every factor certified irreducible
};

// Coprime factorization into irreducible factors with certified (e, f, c).
// Requires monic separable integral P with P(0) != 0.  Factors that exist
// over F but whose coefficients are not constructible by this engine are
// returned with has_poly = false; callers needing idempotents must check.
// Errors: ProfileIncomplete when even (e, f, c) cannot be certified.
std::vector<LocalFactor> factor_coprime(const Poly& P, int prec, int depth_cap = 32);

// Newton-polygon profile of a monic separable polynomial.
// Errors: NotIntegral, NotSeparable, ProfileIncomplete.
FactorProfile newton_profile(const Poly& P, int prec);

} // namespace orbq
