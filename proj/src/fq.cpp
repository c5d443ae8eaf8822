#include "fq.hpp"

namespace orbq {

void check_supported_prime(int p)
{
    if (p != 2 && p != 3 && p != 5 && p != 7)
        fail(Err::Parse, "unsupported residue cardinality q = " + std::to_string(p) +
                             " (supported: 2, 3, 5, 7)");
}

QuadraticMin quadratic_min(uint8_t p)
{
    // Conway polynomials w^2 + a w + b for p^2.
    switch (p) {
    case 2: return {1, 1};
    case 3: return {2, 2};
    case 5: return {4, 2};
    case 7: return {6, 3};
    }
    fail(Err::Internal, "no quadratic for p = " + std::to_string(p));
}

static int mod(long v, int p)
{
    long r = v % p;
    return int(r < 0 ? r + p : r);
}

Fq::Fq(FieldId fid, int c0, int c1) : fid_(fid)
{
    check_supported_prime(fid.p);
    c0_ = int16_t(mod(c0, fid.p));
    c1_ = int16_t(mod(c1, fid.p));
    if (fid.k == 1 && c1_ != 0)
        fail(Err::WrongField, "w-component in a base-field element");
}

Fq Fq::gen(FieldId fid)
{
    if (fid.k != 2)
        fail(Err::WrongField, "generator w only exists in F_{q^2}");
    return Fq(fid, 0, 1);
}

void Fq::check_same(const Fq& o) const
{
    if (!(fid_ == o.fid_))
        fail(Err::WrongField, "mixed finite-field operands");
}

Fq Fq::operator+(const Fq& o) const
{
    check_same(o);
    return Fq(fid_, c0_ + o.c0_, c1_ + o.c1_);
}

Fq Fq::operator-(const Fq& o) const
{
    check_same(o);
    return Fq(fid_, c0_ - o.c0_, c1_ - o.c1_);
}

Fq Fq::operator-() const
{
    return Fq(fid_, -c0_, -c1_);
}

Fq Fq::operator*(const Fq& o) const
{
    check_same(o);
    int p = fid_.p;
    if (fid_.k == 1)
        return Fq(fid_, mod(long(c0_) * o.c0_, p));
    // (c0 + c1 w)(d0 + d1 w) with w^2 = -a w - b
    auto [a, b] = quadratic_min(fid_.p);
    long cross = long(c0_) * o.c1_ + long(c1_) * o.c0_;
    long ww = long(c1_) * o.c1_;
    return Fq(fid_, int(mod(long(c0_) * o.c0_ - ww * b, p)), int(mod(cross - ww * a, p)));
}

Fq Fq::inv() const
{
    if (is_zero())
        fail(Err::ZeroValuation, "inverse of zero in a finite field");
    long order = long(fid_.p) * (fid_.k == 2 ? fid_.p : 1);
    return pow(order - 2);
}

Fq Fq::pow(long e) const
{
    if (e < 0)
        return inv().pow(-e);
    Fq r = one(fid_), x = *this;
    while (e) {
        if (e & 1)
            r = r * x;
        x = x * x;
        e >>= 1;
    }
    return r;
}

Fq Fq::frob() const
{
    if (fid_.k == 1)
        return *this;
    // conjugate root: w^q = -a - w
    auto [a, b] = quadratic_min(fid_.p);
    (void)b;
    return Fq(fid_, c0_ - c1_ * a, -c1_);
}

Fq Fq::norm() const
{
    Fq n = *this * frob();
    if (n.c1_ != 0)
        fail(Err::Internal, "norm left the base field");
    return n;
}

Fq Fq::demoted() const
{
    if (c1_ != 0)
        fail(Err::CoefficientNotRational, "element has a nonzero w-component");
    return Fq(fid_.base(), c0_);
}

std::string Fq::str() const
{
    if (fid_.k == 1 || c1_ == 0)
        return std::to_string(c0_);
    std::string w = c1_ == 1 ? "w" : std::to_string(c1_) + "*w";
    if (c0_ == 0)
        return "(" + w + ")";
    return "(" + w + "+" + std::to_string(c0_) + ")";
}

} // namespace orbq
