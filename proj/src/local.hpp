#pragma once

#include <climits>
#include <map>
#include <string>

#include "fq.hpp"

namespace orbq {

// Element of F = F_q((t)) or E = F_{q^2}((t)) with finite support and explicit
// precision: prec() == EXACT means every coefficient is known, otherwise the
// element is known modulo t^prec.
class Local {
public:
    static constexpr int EXACT = INT_MAX;

    Local() = default;
    explicit Local(FieldId fid, int prec = EXACT) : fid_(fid), prec_(prec) {}

    static Local zero(FieldId fid) { return Local(fid); }
    static Local one(FieldId fid) { return monomial(fid, Fq::one(fid), 0); }
    static Local t(FieldId fid, int k = 1) { return monomial(fid, Fq::one(fid), k); }
    static Local monomial(FieldId fid, const Fq& c, int k);
    static Local from_fq(const Fq& c) { return monomial(c.field(), c, 0); }

    FieldId field() const { return fid_; }
    int prec() const { return prec_; }
    bool exact() const { return prec_ == EXACT; }
    bool is_zero() const { return c_.empty(); } // zero to known precision
    const std::map<int, Fq>& coeffs() const { return c_; }

    Fq coeff(int k) const;
    void set_coeff(int k, const Fq& v);

    // Valuation of a nonzero element.  Errors: ZeroValuation for exact zero,
    // InsufficientPrecision when no support is visible below the truncation.
    int valuation() const;
    // (-1)^v(x); only for elements over F.
    int eta() const;

    bool is_monomial() const { return c_.size() == 1; }
    // true when every visible coefficient lies in O (no negative exponents)
    bool integral() const { return c_.empty() || c_.begin()->first >= 0; }

    Local operator+(const Local& o) const;
    Local operator-(const Local& o) const;
    Local operator-() const;
    Local operator*(const Local& o) const;
    Local operator*(const Fq& s) const;

    // Multiplicative inverse known modulo t^order.  Exact if *this is a monomial.
    Local inv_to(int order) const;
    // Quotient; exact when the divisor is a monomial, otherwise truncated.
    Local div(const Local& o, int order) const;
    // Exact division: requires the quotient to be a finite Laurent polynomial.
    Local div_exact(const Local& o) const;

    // truncated: declares the element known only modulo t^order
    Local truncated(int order) const;
    // reduced: drops support at exponents >= order without weakening the
    // precision claim (choosing a representative modulo t^order)
    Local reduced(int order) const;
    // exact representative modulo t^order; requires prec >= order
    Local exact_rep(int order) const;
    Local shifted(int k) const; // multiply by t^k

    // coefficient-wise q-power Frobenius (fixes t); requires an E-element
    Local sigma() const;
    // x * sigma(x) retagged over F
    Local norm_to_base() const;
    Local promoted() const; // F -> E
    Local demoted() const;  // E -> F, requires all coefficients rational

    bool operator==(const Local& o) const; // equality at common precision
    bool eq_exact(const Local& o) const;
    bool eq_mod(const Local& o, int order) const;

    // Strict total order on (support, coefficients); precision ignored.
    // Used only for canonical dedup keys.
    std::strong_ordering cmp(const Local& o) const;

    std::string str() const;
    std::string key() const; // compact stable key for dedup maps

private:
    void drop_zeros_and_tail();

    FieldId fid_;
    std::map<int, Fq> c_;
    int prec_ = EXACT;
};

int min_prec(int a, int b);

// Element grammar: sums of terms c*t^k, coefficients integers mod p over F or
// parenthesised polynomials in w over E, whitespace insensitive.
Local parse_local(const std::string& text, FieldId fid);

} // namespace orbq
