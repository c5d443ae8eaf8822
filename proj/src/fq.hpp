#pragma once

#include <cstdint>
#include <string>

#include "error.hpp"

namespace orbq {

// Identifies F_q (k = 1) or F_{q^2} (k = 2) for a prime q = p in {2, 3, 5, 7}.
// F_{q^2} = F_q[w] / (w^2 + a w + b) with (a, b) the fixed quadratic below.
struct FieldId {
    uint8_t p = 3;
    uint8_t k = 1;

    bool operator==(const FieldId&) const = default;
    bool is_quadratic() const { return k == 2; }
    FieldId base() const { return {p, 1}; }
    FieldId ext() const { return {p, 2}; }
};

// Declared irreducible quadratic w^2 + a w + b over F_p (Conway polynomials).
struct QuadraticMin {
    uint8_t a, b;
};

QuadraticMin quadratic_min(uint8_t p);
void check_supported_prime(int p);

// Element of F_q or F_{q^2}.  c0 + c1 * w, coefficients mod p.
class Fq {
public:
    Fq() = default;
    Fq(FieldId fid, int c0, int c1 = 0);

    static Fq zero(FieldId fid) { return Fq(fid, 0); }
    static Fq one(FieldId fid) { return Fq(fid, 1); }
    static Fq gen(FieldId fid); // w, requires k = 2

    FieldId field() const { return fid_; }
    int c0() const { return c0_; }
    int c1() const { return c1_; }
    bool is_zero() const { return c0_ == 0 && c1_ == 0; }
    bool in_base() const { return c1_ == 0; }

    Fq operator+(const Fq& o) const;
    Fq operator-(const Fq& o) const;
    Fq operator-() const;
    Fq operator*(const Fq& o) const;
    Fq inv() const;
    Fq pow(long e) const;

    // q-power Frobenius; identity on F_q, w -> -a - w on F_{q^2}.
    Fq frob() const;
    // x * frob(x), lands in the base field.
    Fq norm() const;

    bool operator==(const Fq& o) const { return fid_ == o.fid_ && c0_ == o.c0_ && c1_ == o.c1_; }
    bool operator!=(const Fq& o) const { return !(*this == o); }

    // Promote an F_q element into F_{q^2}.
    Fq promoted() const { return Fq(fid_.ext(), c0_, c1_); }
    // Demote an F_{q^2} element with zero w-part back to F_q.
    Fq demoted() const;

    std::string str() const;

private:
    void check_same(const Fq& o) const;

    FieldId fid_;
    int16_t c0_ = 0, c1_ = 0;
};

} // namespace orbq
