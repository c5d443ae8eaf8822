#include "poly.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "linalg.hpp"

namespace orbq {

Poly::Poly(FieldId fid, std::vector<Local> coeffs) : fid_(fid), c_(std::move(coeffs))
{
    trim();
}

Poly Poly::constant(const Local& c)
{
    return Poly(c.field(), {c});
}

Poly Poly::tvar(FieldId fid)
{
    return Poly(fid, {Local::zero(fid), Local::one(fid)});
}

void Poly::trim()
{
    while (!c_.empty() && c_.back().is_zero() && c_.back().exact())
        c_.pop_back();
}

Local Poly::operator[](int i) const
{
    if (i < 0 || i >= int(c_.size()))
        return Local::zero(fid_);
    return c_[i];
}

bool Poly::monic() const
{
    return !c_.empty() && c_.back() == Local::one(fid_) && !c_.back().is_zero();
}

bool Poly::integral() const
{
    for (const auto& x : c_)
        if (!x.integral())
            return false;
    return true;
}

int Poly::min_prec() const
{
    int m = Local::EXACT;
    for (const auto& x : c_)
        m = orbq::min_prec(m, x.prec());
    return m;
}

Poly Poly::operator+(const Poly& o) const
{
    std::vector<Local> r(std::max(c_.size(), o.c_.size()), Local::zero(fid_));
    for (size_t i = 0; i < r.size(); ++i) {
        Local a = i < c_.size() ? c_[i] : Local::zero(fid_);
        Local b = i < o.c_.size() ? o.c_[i] : Local::zero(fid_);
        r[i] = a + b;
    }
    return Poly(fid_, std::move(r));
}

Poly Poly::operator-() const
{
    std::vector<Local> r = c_;
    for (auto& x : r)
        x = -x;
    return Poly(fid_, std::move(r));
}

Poly Poly::operator-(const Poly& o) const
{
    return *this + (-o);
}

Poly Poly::operator*(const Poly& o) const
{
    if (c_.empty() || o.c_.empty())
        return Poly(fid_);
    std::vector<Local> r(c_.size() + o.c_.size() - 1, Local::zero(fid_));
    for (size_t i = 0; i < c_.size(); ++i)
        for (size_t j = 0; j < o.c_.size(); ++j)
            r[i + j] = r[i + j] + c_[i] * o.c_[j];
    return Poly(fid_, std::move(r));
}

Poly Poly::operator*(const Local& s) const
{
    std::vector<Local> r = c_;
    for (auto& x : r)
        x = x * s;
    return Poly(fid_, std::move(r));
}

std::pair<Poly, Poly> Poly::divmod(const Poly& d) const
{
    if (!d.monic())
        fail(Err::Internal, "divmod requires a monic divisor");
    int dd = d.deg();
    std::vector<Local> rem = c_;
    if (int(rem.size()) - 1 < dd)
        return {Poly(fid_), *this};
    std::vector<Local> quot(rem.size() - dd, Local::zero(fid_));
    for (int k = int(rem.size()) - 1; k >= dd; --k) {
        Local q = rem[k];
        if (q.is_zero())
            continue;
        quot[k - dd] = q;
        for (int j = 0; j <= dd; ++j)
            rem[k - dd + j] = rem[k - dd + j] - q * d.c_[j];
    }
    rem.resize(dd);
    return {Poly(fid_, std::move(quot)), Poly(fid_, std::move(rem))};
}

Local Poly::eval(const Local& x) const
{
    Local acc = Local::zero(fid_);
    for (int i = int(c_.size()) - 1; i >= 0; --i)
        acc = acc * x + c_[i];
    return acc;
}

Poly Poly::derivative() const
{
    std::vector<Local> r;
    for (size_t i = 1; i < c_.size(); ++i)
        r.push_back(c_[i] * Fq(fid_, int(i % fid_.p)));
    return Poly(fid_, std::move(r));
}

Poly Poly::truncated(int order) const
{
    std::vector<Local> r = c_;
    for (auto& x : r)
        x = x.truncated(order);
    return Poly(fid_, std::move(r));
}

Poly Poly::reduced(int order) const
{
    std::vector<Local> r = c_;
    for (auto& x : r)
        x = x.reduced(order);
    return Poly(fid_, std::move(r));
}

Poly Poly::promoted() const
{
    std::vector<Local> r;
    r.reserve(c_.size());
    for (const auto& x : c_)
        r.push_back(x.promoted());
    return Poly(fid_.ext(), std::move(r));
}

Poly Poly::demoted() const
{
    std::vector<Local> r;
    r.reserve(c_.size());
    for (const auto& x : c_)
        r.push_back(x.demoted());
    return Poly(fid_.base(), std::move(r));
}

Poly Poly::scale_roots(int m) const
{
    int n = deg();
    std::vector<Local> r = c_;
    for (int i = 0; i <= n; ++i)
        r[i] = r[i].shifted(-m * (n - i));
    return Poly(fid_, std::move(r));
}

Poly Poly::shift_roots(const Local& r) const
{
    // Taylor shift by synthetic division
    std::vector<Local> a = c_;
    int n = deg();
    for (int k = 0; k < n; ++k)
        for (int i = n - 1; i >= k; --i)
            a[i] = a[i] + a[i + 1] * r;
    return Poly(fid_, std::move(a));
}

Poly Poly::reflect_roots(int m, int prec) const
{
    int n = deg();
    if (n < 0 || c_[0].is_zero())
        fail(Err::Internal, "reflect_roots needs a nonzero constant term");
    std::vector<Local> r(n + 1, Local::zero(fid_));
    for (int i = 0; i <= n; ++i)
        r[n - i] = (c_[i].shifted(m * i)).div(c_[0], prec + m * i + 8);
    return Poly(fid_, std::move(r));
}

bool Poly::operator==(const Poly& o) const
{
    if (c_.size() != o.c_.size())
        return false;
    for (size_t i = 0; i < c_.size(); ++i)
        if (!(c_[i] == o.c_[i]))
            return false;
    return true;
}

std::string Poly::str() const
{
    if (c_.empty())
        return "0";
    std::ostringstream os;
    bool first = true;
    for (int i = deg(); i >= 0; --i) {
        if (c_[i].is_zero() && !(deg() == 0 && i == 0))
            continue;
        if (!first)
            os << " + ";
        first = false;
        std::string cs = c_[i].str();
        bool wrap = cs.find('+') != std::string::npos || cs.find(' ') != std::string::npos;
        if (wrap)
            cs = "(" + cs + ")";
        if (i == 0) {
            os << cs;
        } else {
            std::string ts = i == 1 ? "T" : "T^" + std::to_string(i);
            if (cs == "1")
                os << ts;
            else
                os << cs << "*" << ts;
        }
    }
    return os.str();
}

Poly parse_poly(const std::string& text, FieldId fid)
{
    // split into signed top-level terms c*T^j; +/- after '^' or '*' is unary
    struct Term {
        int sign;
        std::string chunk;
    };
    std::vector<Term> terms;
    int depth = 0, sign = 1;
    char last_meaning = '\0';
    std::string cur;
    auto flush = [&]() {
        if (cur.find_first_not_of(" \t") != std::string::npos)
            terms.push_back({sign, cur});
        cur.clear();
    };
    for (char ch : text) {
        if (ch == '(')
            ++depth;
        if (ch == ')')
            --depth;
        bool splitter = depth == 0 && (ch == '+' || ch == '-') && last_meaning != '^' &&
                        last_meaning != '*' && last_meaning != '(';
        if (splitter) {
            if (cur.find_first_not_of(" \t") == std::string::npos) {
                // unary sign before the first factor
                if (ch == '-')
                    sign = -sign;
            } else {
                flush();
                sign = ch == '-' ? -1 : 1;
            }
        } else {
            cur.push_back(ch);
        }
        if (!std::isspace(uint8_t(ch)))
            last_meaning = ch;
    }
    flush();
    if (terms.empty())
        fail(Err::Parse, "empty polynomial");

    std::vector<Local> coeffs;
    auto bump = [&](int j, const Local& v) {
        if (int(coeffs.size()) <= j)
            coeffs.resize(j + 1, Local::zero(fid));
        coeffs[j] = coeffs[j] + v;
    };
    for (const auto& term : terms) {
        const std::string& s = term.chunk;
        int d = 0, tpos = -1;
        for (size_t j = 0; j < s.size(); ++j) {
            if (s[j] == '(')
                ++d;
            if (s[j] == ')')
                --d;
            if (d == 0 && s[j] == 'T') {
                tpos = int(j);
                break;
            }
        }
        int expo = 0;
        std::string pre = s, post;
        if (tpos >= 0) {
            expo = 1;
            pre = s.substr(0, tpos);
            post = s.substr(tpos + 1);
            size_t r = 0;
            while (r < post.size() && std::isspace(uint8_t(post[r])))
                ++r;
            if (r < post.size() && post[r] == '^') {
                ++r;
                size_t used = 0;
                expo = std::stoi(post.substr(r), &used);
                post = post.substr(r + used);
            } else {
                post = post.substr(r);
            }
            auto strip_star = [](std::string v, bool back) {
                auto drop = [&](std::string& s) {
                    if (back)
                        s.pop_back();
                    else
                        s.erase(s.begin());
                };
                while (!v.empty() && std::isspace(uint8_t(back ? v.back() : v.front())))
                    drop(v);
                if (!v.empty() && (back ? v.back() : v.front()) == '*')
                    drop(v);
                return v;
            };
            pre = strip_star(pre, true);
            post = strip_star(post, false);
        }
        if (expo < 0)
            fail(Err::Parse, "negative power of T");
        Local cv = Local::one(fid);
        if (pre.find_first_not_of(" \t") != std::string::npos)
            cv = cv * parse_local(pre, fid);
        if (post.find_first_not_of(" \t") != std::string::npos)
            cv = cv * parse_local(post, fid);
        if (term.sign < 0)
            cv = -cv;
        bump(expo, cv);
    }
    return Poly(fid, std::move(coeffs));
}

Local resultant(const Poly& P, const Poly& Q)
{
    int n = P.deg(), m = Q.deg();
    FieldId fid = P.field();
    if (n < 0 || m < 0)
        return Local::zero(fid);
    if (n == 0)
        return P[0]; // deg-0 convention: enough for separability use
    if (m == 0) {
        Local r = Local::one(fid);
        for (int i = 0; i < n; ++i)
            r = r * Q[0];
        return r;
    }
    size_t s = size_t(n + m);
    Grid S(s, std::vector<Local>(s, Local::zero(fid)));
    for (int row = 0; row < m; ++row)
        for (int i = 0; i <= n; ++i)
            S[row][row + (n - i)] = P[i];
    for (int row = 0; row < n; ++row)
        for (int i = 0; i <= m; ++i)
            S[m + row][row + (m - i)] = Q[i];
    return det_grid(S, fid);
}

bool is_separable(const Poly& P)
{
    if (P.deg() <= 0)
        fail(Err::Internal, "separability of a constant");
    if (P.deg() == 1)
        return true;
    // cheap pass on truncated coefficients; a visibly nonzero resultant
    // already certifies separability
    Local fast = resultant(P.truncated(24), P.derivative().truncated(24));
    if (!fast.is_zero())
        return true;
    Local r = resultant(P, P.derivative());
    if (!r.is_zero())
        return true;
    if (r.exact())
        return false;
    fail(Err::InsufficientPrecision, "discriminant vanishes to working precision");
}

Poly poly_sqrt(const Poly& P, int prec)
{
    FieldId fid = P.field();
    int n2 = P.deg();
    if (!P.monic() || n2 < 0 || n2 % 2 != 0)
        fail(Err::NotASquare, "monic even degree required");
    int n = n2 / 2;
    if (fid.p == 2) {
        // in characteristic 2 squaring acts coefficient-wise: Q^2 = sum Q_i^2 T^{2i}
        // and s^2 = v is solved by s = v^{|F|/2}
        std::vector<Local> q(n + 1, Local::zero(fid));
        long fsize = long(fid.p) * (fid.k == 2 ? fid.p : 1);
        for (int i = 0; i <= n2; ++i) {
            Local a = P[i];
            if (a.is_zero())
                continue;
            if (i % 2 != 0)
                fail(Err::NotASquare, "odd T-power survives in characteristic 2");
            Local root(fid, a.exact() ? Local::EXACT : a.prec() / 2);
            for (const auto& [k, v] : a.coeffs()) {
                if (k % 2 != 0)
                    fail(Err::NotASquare, "odd t-exponent in characteristic 2");
                root.set_coeff(k / 2, v.pow(fsize / 2));
            }
            q[i / 2] = root;
        }
        Poly Q(fid, std::move(q));
        Poly diff = (Q * Q - P).truncated(prec);
        for (const auto& cc : diff.coeffs())
            if (!cc.is_zero())
                fail(Err::NotASquare, "square check failed");
        return Q;
    }
    // odd characteristic: determine coefficients top-down
    std::vector<Local> q(n + 1, Local::zero(fid));
    q[n] = Local::one(fid);
    Fq half = Fq(fid, 2).inv();
    for (int k = n - 1; k >= 0; --k) {
        // coefficient of T^{n+k} in Q^2: 2 q_k + sum_{i+j=n+k, i,j<n... i,j != n pairs}
        Local acc = Local::zero(fid);
        for (int i = k + 1; i <= n - 1; ++i) {
            int j = n + k - i;
            if (j > i)
                continue;
            Local term = q[i] * q[j];
            if (j < i)
                term = term + term;
            acc = acc + term;
        }
        q[k] = ((P[n + k] - acc) * half).truncated(prec);
    }
    Poly Q(fid, std::move(q));
    Poly diff = (Q * Q - P).truncated(prec);
    for (const auto& cc : diff.coeffs())
        if (!cc.is_zero())
            fail(Err::NotASquare, "no monic square root");
    return Q;
}

// ---------------------------------------------------------------------------
// residue polynomials over F_q

using FqVec = std::vector<Fq>;

static FqVec fq_trim(FqVec v)
{
    while (!v.empty() && v.back().is_zero())
        v.pop_back();
    return v;
}

static FqVec fq_mul(const FqVec& a, const FqVec& b, FieldId fid)
{
    if (a.empty() || b.empty())
        return {};
    FqVec r(a.size() + b.size() - 1, Fq::zero(fid));
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j)
            r[i + j] = r[i + j] + a[i] * b[j];
    return fq_trim(r);
}

static std::pair<FqVec, FqVec> fq_divmod(FqVec a, const FqVec& b, FieldId fid)
{
    a = fq_trim(a);
    FqVec bb = b;
    if (bb.empty())
        fail(Err::Internal, "residue division by zero");
    Fq leadi = bb.back().inv();
    if (a.size() < bb.size())
        return {{}, a};
    FqVec q(a.size() - bb.size() + 1, Fq::zero(fid));
    for (int k = int(a.size()) - 1; k >= int(bb.size()) - 1; --k) {
        Fq c = a[k] * leadi;
        if (c.is_zero())
            continue;
        q[k - (bb.size() - 1)] = c;
        for (size_t j = 0; j < bb.size(); ++j)
            a[k - (bb.size() - 1) + j] = a[k - (bb.size() - 1) + j] - c * bb[j];
    }
    return {fq_trim(q), fq_trim(a)};
}

// distinct monic irreducible factors with multiplicities, by trial division
static std::vector<std::pair<FqVec, int>> fq_factor(FqVec f, FieldId fid)
{
    f = fq_trim(f);
    std::vector<std::pair<FqVec, int>> out;
    if (f.size() <= 1)
        return out;
    // normalize monic
    Fq leadi = f.back().inv();
    for (auto& c : f)
        c = c * leadi;
    int q = fid.p * (fid.k == 2 ? fid.p : 1);
    for (int d = 1; int(f.size()) - 1 >= d; ++d) {
        // enumerate monic candidates of degree d
        long count = 1;
        for (int i = 0; i < d; ++i)
            count *= q;
        for (long code = 0; code < count && int(f.size()) - 1 >= d; ++code) {
            FqVec cand(d + 1, Fq::zero(fid));
            long c = code;
            for (int i = 0; i < d; ++i) {
                int digit = int(c % q);
                c /= q;
                cand[i] = fid.k == 2 ? Fq(fid, digit % fid.p, digit / fid.p) : Fq(fid, digit);
            }
            cand[d] = Fq::one(fid);
            int mult = 0;
            for (;;) {
                auto [quo, rem] = fq_divmod(f, cand, fid);
                if (!rem.empty())
                    break;
                f = quo;
                ++mult;
            }
            if (mult)
                out.push_back({cand, mult});
        }
    }
    if (f.size() > 1)
        out.push_back({f, 1}); // leftover is irreducible (degree > half)
    return out;
}

static FqVec residues(const Poly& P)
{
    FqVec r(P.deg() + 1, Fq::zero(P.field()));
    for (int i = 0; i <= P.deg(); ++i) {
        const Local& c = P[i];
        if (!c.integral())
            fail(Err::NotIntegral, "coefficient with negative valuation");
        r[i] = c.coeff(0);
    }
    return fq_trim(r);
}

// ---------------------------------------------------------------------------
// Hensel lifting

static Poly lift_fqvec(const FqVec& v, FieldId fid)
{
    std::vector<Local> c;
    c.reserve(v.size());
    for (const auto& x : v)
        c.push_back(Local::from_fq(x));
    return Poly(fid, std::move(c));
}

// extended euclid over F_q[T]
static void fq_extgcd(const FqVec& a, const FqVec& b, FieldId fid, FqVec& u, FqVec& v)
{
    FqVec r0 = fq_trim(a), r1 = fq_trim(b);
    FqVec s0 = {Fq::one(fid)}, s1 = {};
    FqVec t0 = {}, t1 = {Fq::one(fid)};
    while (!r1.empty()) {
        auto [q, r] = fq_divmod(r0, r1, fid);
        FqVec qs = fq_mul(q, s1, fid), qt = fq_mul(q, t1, fid);
        FqVec s2 = s0, t2 = t0;
        s2.resize(std::max(s2.size(), qs.size()), Fq::zero(fid));
        for (size_t i = 0; i < qs.size(); ++i)
            s2[i] = s2[i] - qs[i];
        t2.resize(std::max(t2.size(), qt.size()), Fq::zero(fid));
        for (size_t i = 0; i < qt.size(); ++i)
            t2[i] = t2[i] - qt[i];
        r0 = r1;
        r1 = r;
        s0 = s1;
        s1 = fq_trim(s2);
        t0 = t1;
        t1 = fq_trim(t2);
    }
    if (r0.size() != 1)
        fail(Err::Internal, "residue factors not coprime");
    Fq gi = r0[0].inv();
    u = s0;
    v = t0;
    for (auto& x : u)
        x = x * gi;
    for (auto& x : v)
        x = x * gi;
}

// drop spurious top terms (all ≡ 0 mod the lifting modulus) and pin the lead to 1
static Poly force_monic_deg(const Poly& X, int d, FieldId fid)
{
    std::vector<Local> c(d + 1, Local::zero(fid));
    for (int i = 0; i < d; ++i)
        c[i] = X[i];
    c[d] = Local::one(fid);
    for (int i = d + 1; i <= X.deg(); ++i)
        if (!X[i].is_zero() && X[i].valuation() < 1)
            fail(Err::Internal, "hensel factor degree overflow");
    return Poly(fid, std::move(c));
}

std::pair<Poly, Poly> hensel_lift(const Poly& P, const FqVec& abar, const FqVec& bbar, int prec)
{
    FieldId fid = P.field();
    FqVec su, tv;
    fq_extgcd(abar, bbar, fid, su, tv); // su*abar + tv*bbar = 1
    Poly A = lift_fqvec(abar, fid), B = lift_fqvec(bbar, fid);
    Poly S = lift_fqvec(su, fid), Tc = lift_fqvec(tv, fid);
    int degA = A.deg(), degB = P.deg() - degA;
    // work with exact representatives reduced modulo t^k
    Poly Pr = P.reduced(prec);
    int k = 1;
    while (k < prec) {
        int k2 = std::min(2 * k, prec);
        Poly e = (Pr - A * B).reduced(k2);
        // solve A*dB + B*dA = e with deg dA < deg A
        auto [q, r] = (Tc * e).divmod(A);
        Poly A2 = force_monic_deg((A + r).reduced(k2), degA, fid);
        Poly B2 = force_monic_deg((B + S * e + q * B).reduced(k2), degB, fid);
        // refresh the Bezout pair: solve dS*A2 + dT*B2 = b with deg dT < deg A2
        Poly b = (S * A2 + Tc * B2 - Poly::constant(Local::one(fid))).reduced(k2);
        auto [q2, r2] = (Tc * b).divmod(A2);
        S = (S - S * b - q2 * B2).reduced(k2);
        Tc = (Tc - r2).reduced(k2);
        A = A2;
        B = B2;
        k = k2;
    }
    Poly check = (Pr - A * B).truncated(prec);
    for (const auto& cc : check.coeffs())
        if (!cc.is_zero())
            fail(Err::Internal, "hensel product verification failed");
    return {A, B};
}

std::pair<Poly, Poly> hensel_split(const Poly& P, int prec)
{
    FieldId fid = P.field();
    if (!P.monic())
        fail(Err::Internal, "hensel_split requires monic input");
    if (!P.integral())
        fail(Err::NotIntegral, "coefficient with negative valuation");
    FqVec res = residues(P);
    // res = T^m * unit-part
    size_t m = 0;
    while (m < res.size() && res[m].is_zero())
        ++m;
    if (m == 0)
        return {Poly::constant(Local::one(fid)), P};
    if (m + 1 == res.size() && size_t(P.deg()) == m)
        return {P, Poly::constant(Local::one(fid))};
    FqVec tm(m + 1, Fq::zero(fid));
    tm[m] = Fq::one(fid);
    FqVec unit(res.begin() + m, res.end());
    auto [A, B] = hensel_lift(P, tm, unit, prec);
    return {A, B};
}

// ---------------------------------------------------------------------------
// Newton polygon machinery

namespace {

struct Group {
    long num;  // root valuation = num/den
    long den;  // > 0, reduced
    int count; // number of roots
};

// ascending root valuation
std::vector<Group> polygon_groups(const Poly& P)
{
    int n = P.deg();
    std::vector<std::pair<long, long>> pts; // (i, v(a_i))
    for (int i = 0; i <= n; ++i) {
        const Local& a = P[i];
        if (a.is_zero()) {
            if (i == 0)
                fail(Err::Internal, "polygon needs P(0) != 0");
            continue;
        }
        pts.push_back({i, a.valuation()});
    }
    // lower hull, slopes strictly increasing left to right
    std::vector<std::pair<long, long>> hull;
    for (const auto& p : pts) {
        while (hull.size() >= 2) {
            auto& a = hull[hull.size() - 2];
            auto& b = hull[hull.size() - 1];
            // drop b if slope(a,b) >= slope(a,p)
            if ((b.second - a.second) * (p.first - a.first) >=
                (p.second - a.second) * (b.first - a.first))
                hull.pop_back();
            else
                break;
        }
        hull.push_back(p);
    }
    std::vector<Group> out;
    for (size_t s = 0; s + 1 < hull.size(); ++s) {
        long di = hull[s + 1].first - hull[s].first;
        long dy = hull[s + 1].second - hull[s].second;
        long num = -dy, den = di;
        long g = std::gcd(std::abs(num), den);
        if (g == 0)
            g = 1;
        out.push_back({num / g, den / g, int(di)});
    }
    std::sort(out.begin(), out.end(),
              [](const Group& a, const Group& b) { return a.num * b.den < b.num * a.den; });
    return out;
}

// residual polynomial of a single-segment polygon (whole polynomial)
FqVec segment_residual(const Poly& P, long a, long b)
{
    FieldId fid = P.field();
    int n = P.deg();
    int lp = int(n / b);
    long y0 = P[0].valuation();
    FqVec R(lp + 1, Fq::zero(fid));
    for (int j = 0; j <= lp; ++j) {
        const Local& coef = P[int(j * b)];
        long want = y0 - j * a;
        if (!coef.is_zero())
            R[j] = coef.coeff(int(want));
    }
    return R;
}

struct Engine {
    FieldId fid;
    int prec;
    int depth_cap;

    std::vector<LocalFactor> run(const Poly& P, int depth)
    {
        if (depth > depth_cap)
            fail(Err::ProfileIncomplete, "factor recursion exceeded depth cap");
        int n = P.deg();
        if (n <= 0)
            return {};
        if (P[0].is_zero())
            fail(Err::ProfileIncomplete, "constant term vanishes to working precision");
        if (n == 1) {
            LocalFactor lf;
            lf.poly = P;
            lf.has_poly = true;
            lf.e = 1;
            lf.f = 1;
            lf.c = P[0].valuation();
            lf.d = 1;
            return {lf};
        }
        auto groups = polygon_groups(P);
        if (groups.size() >= 2)
            return split_groups(P, groups, depth);
        return single_slope(P, groups[0], depth);
    }

    std::vector<LocalFactor> merge(std::vector<LocalFactor> a, std::vector<LocalFactor> b)
    {
        for (auto& x : b)
            a.push_back(std::move(x));
        return a;
    }

    std::vector<LocalFactor> split_groups(const Poly& P, const std::vector<Group>& groups,
                                          int depth)
    {
        const Group& lo = groups.front();
        const Group& hi = groups.back();
        if (lo.den == 1) {
            // roots of minimal valuation are split off as the unit part after
            // scaling by t^{mu_min}
            Poly Q = P.scale_roots(int(lo.num));
            auto [Q0, Q1] = hensel_split(Q, prec);
            Poly A = Q1.scale_roots(-int(lo.num)); // the mu_min group
            Poly B = Q0.scale_roots(-int(lo.num)); // everything above
            return merge(run(A, depth + 1), run(B, depth + 1));
        }
        if (hi.den == 1) {
            // reflect so the maximal-valuation group becomes the unit part
            Poly G = P.reflect_roots(int(hi.num), prec);
            auto [G0, G1] = hensel_split(G, prec);
            Poly A = G1.reflect_roots(int(hi.num), prec); // the mu_max group
            Poly B = G0.reflect_roots(int(hi.num), prec);
            return merge(run(A, depth + 1), run(B, depth + 1));
        }
        // both polygon ends fractional: cannot isolate factor coefficients
        // over F; fall back to per-segment profile data when regular
        return ore_profile_only(P);
    }

    std::vector<LocalFactor> single_slope(const Poly& P, const Group& g, int depth)
    {
        int n = P.deg();
        if (g.den == 1) {
            Poly W = P.scale_roots(int(g.num));
            FqVec Wr = residues(W);
            auto rf = fq_factor(Wr, fid);
            if (rf.empty())
                fail(Err::Internal, "unit residue expected");
            if (rf.size() >= 2) {
                // split along the first residue factor
                FqVec A = rf[0].first;
                for (int k = 1; k < rf[0].second; ++k)
                    A = fq_mul(A, rf[0].first, fid);
                FqVec B = {Fq::one(fid)};
                for (size_t i = 1; i < rf.size(); ++i)
                    for (int k = 0; k < rf[i].second; ++k)
                        B = fq_mul(B, rf[i].first, fid);
                auto [PA, PB] = hensel_lift(W, A, B, prec);
                return merge(run(PA.scale_roots(-int(g.num)), depth + 1),
                             run(PB.scale_roots(-int(g.num)), depth + 1));
            }
            const FqVec& gbar = rf[0].first;
            int mult = rf[0].second;
            if (mult == 1) {
                LocalFactor lf;
                lf.poly = P;
                lf.has_poly = true;
                lf.e = 1;
                lf.f = n;
                lf.c = P[0].valuation();
                lf.d = n;
                return {lf};
            }
            if (gbar.size() == 2) {
                // repeated rational residue root: shift and recurse
                Fq rbar = -gbar[0]; // root of Y + gbar[0]
                Local rhat = Local::from_fq(rbar);
                Local val = W.eval(rhat);
                if (val.is_zero() || val.valuation() * 2 >= prec) {
                    // rhat is a root to working precision; split it off
                    Poly lin(fid, {-rhat, Local::one(fid)});
                    auto [quo, rem] = W.divmod(lin);
                    (void)rem; // ≡ 0 at working precision by construction
                    LocalFactor lf;
                    lf.poly = lin.scale_roots(-int(g.num));
                    lf.has_poly = true;
                    lf.e = 1;
                    lf.f = 1;
                    lf.c = lf.poly[0].valuation();
                    lf.d = 1;
                    auto rest = run(quo.scale_roots(-int(g.num)), depth + 1);
                    rest.push_back(lf);
                    return rest;
                }
                Poly Wsh = W.shift_roots(rhat);
                auto sub = run(Wsh, depth + 1);
                // undo the shift, then the scaling
                std::vector<LocalFactor> out;
                for (auto& lf : sub) {
                    if (lf.has_poly) {
                        lf.poly = lf.poly.shift_roots(-rhat).scale_roots(-int(g.num));
                        lf.c = lf.poly[0].valuation();
                    } else {
                        // all roots of W in this cluster are units, so the
                        // W-level factor has c = 0 and scaling adds g.num per root
                        lf.c = int(g.num) * lf.d;
                    }
                    out.push_back(std::move(lf));
                }
                return out;
            }
            // repeated non-rational residue factor: needs an unramified
            // coefficient extension this engine does not perform
            fail(Err::ProfileIncomplete,
                 "repeated residue factor of degree >= 2 (inertia extension required)");
        }
        // fractional slope a/b
        FqVec R = segment_residual(P, g.num, g.den);
        auto rf = fq_factor(R, fid);
        bool squarefree = true;
        for (auto& [fac, m] : rf)
            if (m > 1)
                squarefree = false;
        if (!squarefree)
            fail(Err::ProfileIncomplete,
                 "repeated residual factor on a fractional slope (ramified shift required)");
        if (rf.size() == 1) {
            LocalFactor lf;
            lf.poly = P;
            lf.has_poly = true;
            lf.e = int(g.den);
            lf.f = int(rf[0].first.size()) - 1;
            lf.c = P[0].valuation();
            lf.d = n;
            return {lf};
        }
        // regular Ore segment with several residual factors: profiles are
        // certified, coefficients are not constructible over F here
        std::vector<LocalFactor> out;
        for (auto& [fac, m] : rf) {
            LocalFactor lf;
            lf.has_poly = false;
            lf.e = int(g.den);
            lf.f = int(fac.size()) - 1;
            lf.d = lf.e * lf.f;
            lf.c = int(g.num) * lf.f;
            out.push_back(std::move(lf));
        }
        return out;
    }

    std::vector<LocalFactor> ore_profile_only(const Poly& P)
    {
        // read (e, f, c) off each segment's residual when all are squarefree
        int n = P.deg();
        std::vector<LocalFactor> out;
        // rebuild hull to locate segment endpoints
        std::vector<std::pair<long, long>> pts;
        for (int i = 0; i <= n; ++i)
            if (!P[i].is_zero())
                pts.push_back({i, P[i].valuation()});
        std::vector<std::pair<long, long>> hull;
        for (const auto& p : pts) {
            while (hull.size() >= 2) {
                auto& a = hull[hull.size() - 2];
                auto& b = hull[hull.size() - 1];
                if ((b.second - a.second) * (p.first - a.first) >=
                    (p.second - a.second) * (b.first - a.first))
                    hull.pop_back();
                else
                    break;
            }
            hull.push_back(p);
        }
        for (size_t s = 0; s + 1 < hull.size(); ++s) {
            long i1 = hull[s].first, y1 = hull[s].second;
            long i2 = hull[s + 1].first, y2 = hull[s + 1].second;
            long num = y1 - y2, den = i2 - i1;
            long g = std::gcd(std::abs(num), den);
            if (g == 0)
                g = 1;
            long a = num / g, b = den / g;
            int lp = int((i2 - i1) / b);
            FqVec R(lp + 1, Fq::zero(fid));
            for (int j = 0; j <= lp; ++j) {
                const Local& coef = P[int(i1 + j * b)];
                long want = y1 - j * a;
                if (!coef.is_zero())
                    R[j] = coef.coeff(int(want));
            }
            auto rf = fq_factor(R, fid);
            for (auto& [fac, m] : rf) {
                if (m > 1)
                    fail(Err::ProfileIncomplete,
                         "irregular segment in a polygon that cannot be split over F");
                LocalFactor lf;
                lf.has_poly = false;
                lf.e = int(b);
                lf.f = int(fac.size()) - 1;
                lf.d = lf.e * lf.f;
                lf.c = int(a) * lf.f;
                out.push_back(std::move(lf));
            }
        }
        return out;
    }
};

} // namespace

std::vector<LocalFactor> factor_coprime(const Poly& P, int prec, int depth_cap)
{
    if (!P.monic())
        fail(Err::Internal, "factorization requires a monic polynomial");
    if (P.deg() == 0)
        return {};
    Engine eng{P.field(), prec, depth_cap};
    auto out = eng.run(P, 0);
    // canonical order: by slope c/d, then f, then e, then coefficients
    std::sort(out.begin(), out.end(), [](const LocalFactor& x, const LocalFactor& y) {
        long lx = long(x.c) * y.d, ly = long(y.c) * x.d;
        if (lx != ly)
            return lx < ly;
        if (x.f != y.f)
            return x.f < y.f;
        if (x.e != y.e)
            return x.e < y.e;
        if (x.has_poly && y.has_poly) {
            for (int i = 0; i <= std::min(x.poly.deg(), y.poly.deg()); ++i) {
                auto c = x.poly[i].cmp(y.poly[i]);
                if (c != std::strong_ordering::equal)
                    return c == std::strong_ordering::less;
            }
        }
        return false;
    });
    int dsum = 0;
    for (const auto& lf : out)
        dsum += lf.d;
    if (dsum != P.deg())
        fail(Err::Internal, "factor degrees do not sum to deg P");
    return out;
}

FactorProfile newton_profile(const Poly& P, int prec)
{
    if (P.deg() <= 0)
        fail(Err::Internal, "profile of a constant");
    if (!is_separable(P))
        fail(Err::NotSeparable, "inseparable polynomial");
    auto factors = factor_coprime(P, prec);
    FactorProfile fp;
    fp.factors = std::move(factors);
    fp.complete = true;
    return fp;
}

} // namespace orbq
