#include "local.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace orbq {

int min_prec(int a, int b)
{
    return a < b ? a : b;
}

Local Local::monomial(FieldId fid, const Fq& c, int k)
{
    Local x(fid);
    if (!c.is_zero())
        x.c_[k] = c;
    return x;
}

Fq Local::coeff(int k) const
{
    auto it = c_.find(k);
    return it == c_.end() ? Fq::zero(fid_) : it->second;
}

void Local::set_coeff(int k, const Fq& v)
{
    if (v.is_zero())
        c_.erase(k);
    else
        c_[k] = v;
}

void Local::drop_zeros_and_tail()
{
    for (auto it = c_.begin(); it != c_.end();) {
        if (it->second.is_zero() || (prec_ != EXACT && it->first >= prec_))
            it = c_.erase(it);
        else
            ++it;
    }
}

int Local::valuation() const
{
    if (!c_.empty()) {
        int v = c_.begin()->first;
        if (prec_ != EXACT && v >= prec_)
            fail(Err::InsufficientPrecision, "support not visible below truncation");
        return v;
    }
    if (exact())
        fail(Err::ZeroValuation, "valuation of zero");
    fail(Err::InsufficientPrecision,
         "zero modulo t^" + std::to_string(prec_) + ", valuation undetermined");
}

int Local::eta() const
{
    if (fid_.k != 1)
        fail(Err::WrongField, "eta is defined on F, not E");
    return valuation() % 2 == 0 ? 1 : -1;
}

static void check_fields(const Local& a, const Local& b)
{
    if (!(a.field() == b.field()))
        fail(Err::WrongField, "mixed local-field operands");
}

Local Local::operator+(const Local& o) const
{
    check_fields(*this, o);
    Local r(fid_, min_prec(prec_, o.prec_));
    r.c_ = c_;
    for (const auto& [k, v] : o.c_) {
        auto it = r.c_.find(k);
        if (it == r.c_.end())
            r.c_[k] = v;
        else
            it->second = it->second + v;
    }
    r.drop_zeros_and_tail();
    return r;
}

Local Local::operator-() const
{
    Local r = *this;
    for (auto& [k, v] : r.c_)
        v = -v;
    return r;
}

Local Local::operator-(const Local& o) const
{
    return *this + (-o);
}

// effective valuation: min support, else the truncation order, else "infinity"
static long eff_val(const Local& x)
{
    if (!x.coeffs().empty())
        return x.coeffs().begin()->first;
    return x.exact() ? long(Local::EXACT) : long(x.prec());
}

Local Local::operator*(const Local& o) const
{
    check_fields(*this, o);
    long pa = prec_, pb = o.prec_;
    long p = std::min(pa == EXACT ? long(EXACT) : pa + eff_val(o),
                      pb == EXACT ? long(EXACT) : pb + eff_val(*this));
    p = std::min(p, long(EXACT));
    Local r(fid_, int(std::max(p, long(INT_MIN / 2))));
    for (const auto& [ka, va] : c_)
        for (const auto& [kb, vb] : o.c_) {
            int k = ka + kb;
            if (r.prec_ != EXACT && k >= r.prec_)
                continue;
            Fq prod = va * vb;
            auto it = r.c_.find(k);
            if (it == r.c_.end())
                r.c_[k] = prod;
            else
                it->second = it->second + prod;
        }
    r.drop_zeros_and_tail();
    return r;
}

Local Local::operator*(const Fq& s) const
{
    Local r = *this;
    for (auto& [k, v] : r.c_)
        v = v * s;
    r.drop_zeros_and_tail();
    return r;
}

Local Local::inv_to(int order) const
{
    int v = valuation();
    if (is_monomial()) {
        Local r = monomial(fid_, c_.begin()->second.inv(), -v);
        if (!exact()) {
            r.prec_ = prec_ - 2 * v;
            r = r.truncated(std::min(order, r.prec_));
        }
        return r;
    }
    // unit part u = x * t^{-v}; invert as a series up to the needed order
    int unit_order = order + v; // b known below this exponent
    if (!exact())
        unit_order = std::min(unit_order, prec_ - v);
    Fq u0 = c_.begin()->second;
    Fq u0i = u0.inv();
    std::map<int, Fq> b;
    b[0] = u0i;
    for (int k = 1; k < unit_order; ++k) {
        Fq acc = Fq::zero(fid_);
        for (const auto& [i, ui] : c_) {
            int e = i - v;
            if (e <= 0 || e > k)
                continue;
            auto it = b.find(k - e);
            if (it != b.end())
                acc = acc + ui * it->second;
        }
        Fq bk = -(u0i * acc);
        if (!bk.is_zero())
            b[k] = bk;
    }
    Local r(fid_, unit_order - v);
    for (const auto& [k, vb] : b)
        r.c_[k - v] = vb;
    r.drop_zeros_and_tail();
    return r;
}

Local Local::div(const Local& o, int order) const
{
    int vo = o.valuation();
    if (c_.empty())
        return exact() ? zero(fid_) : Local(fid_, prec_ - vo);
    int va = c_.begin()->first;
    Local binv = o.inv_to(order - va);
    return (*this * binv).truncated(order);
}

Local Local::div_exact(const Local& o) const
{
    check_fields(*this, o);
    if (o.c_.empty())
        fail(Err::ZeroValuation, "exact division by zero");
    if (c_.empty())
        return Local(fid_, prec_);
    if (o.is_monomial()) {
        Local r = shifted(-o.c_.begin()->first);
        return r * o.c_.begin()->second.inv();
    }
    // long division from the top (both finite Laurent polynomials)
    int va = c_.begin()->first, vb = o.c_.begin()->first;
    int db = o.c_.rbegin()->first;
    Local rem = *this;
    Local quot(fid_, min_prec(prec_, o.prec_));
    Fq leadi = o.c_.rbegin()->second.inv();
    while (!rem.c_.empty()) {
        int kq = rem.c_.rbegin()->first - db;
        if (kq < va - vb)
            break; // an exact quotient cannot reach below v(a) - v(b)
        Fq cq = rem.c_.rbegin()->second * leadi;
        quot.set_coeff(kq, cq);
        rem = rem - o * monomial(fid_, cq, kq);
    }
    if (!rem.c_.empty())
        fail(Err::Internal, "division is not exact");
    return quot;
}

Local Local::truncated(int order) const
{
    Local r = *this;
    r.prec_ = min_prec(r.prec_, order);
    r.drop_zeros_and_tail();
    return r;
}

Local Local::reduced(int order) const
{
    Local r = *this;
    for (auto it = r.c_.begin(); it != r.c_.end();)
        it = it->first >= order ? r.c_.erase(it) : std::next(it);
    return r;
}

Local Local::exact_rep(int order) const
{
    if (prec_ < order)
        fail(Err::InsufficientPrecision,
             "representative modulo t^" + std::to_string(order) + " not determined");
    Local r = reduced(order);
    r.prec_ = EXACT;
    return r;
}

Local Local::shifted(int k) const
{
    Local r(fid_, exact() ? EXACT : prec_ + k);
    for (const auto& [e, v] : c_)
        r.c_[e + k] = v;
    return r;
}

Local Local::sigma() const
{
    if (fid_.k != 2)
        fail(Err::WrongField, "sigma acts on E-elements");
    Local r = *this;
    for (auto& [k, v] : r.c_)
        v = v.frob();
    return r;
}

Local Local::norm_to_base() const
{
    return (*this * sigma()).demoted();
}

Local Local::promoted() const
{
    if (fid_.k == 2)
        return *this;
    Local r(fid_.ext(), prec_);
    for (const auto& [k, v] : c_)
        r.c_[k] = v.promoted();
    return r;
}

Local Local::demoted() const
{
    if (fid_.k == 1)
        return *this;
    Local r(fid_.base(), prec_);
    for (const auto& [k, v] : c_)
        r.c_[k] = v.demoted();
    return r;
}

bool Local::operator==(const Local& o) const
{
    int n = min_prec(prec_, o.prec_);
    if (n == EXACT)
        return eq_exact(o);
    return eq_mod(o, n);
}

bool Local::eq_exact(const Local& o) const
{
    return fid_ == o.fid_ && c_ == o.c_;
}

bool Local::eq_mod(const Local& o, int order) const
{
    Local d = (*this - o).truncated(order);
    return d.c_.empty();
}

std::strong_ordering Local::cmp(const Local& o) const
{
    auto a = c_.begin(), b = o.c_.begin();
    for (; a != c_.end() && b != o.c_.end(); ++a, ++b) {
        if (a->first != b->first)
            return a->first <=> b->first;
        if (a->second.c0() != b->second.c0())
            return a->second.c0() <=> b->second.c0();
        if (a->second.c1() != b->second.c1())
            return a->second.c1() <=> b->second.c1();
    }
    return c_.size() <=> o.c_.size();
}

std::string Local::str() const
{
    if (c_.empty())
        return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [k, v] : c_) {
        if (!first)
            os << " + ";
        first = false;
        std::string cs = v.str();
        if (k == 0) {
            os << cs;
        } else {
            std::string ts = k == 1 ? "t" : "t^" + std::to_string(k);
            if (cs == "1")
                os << ts;
            else
                os << cs << "*" << ts;
        }
    }
    return os.str();
}

std::string Local::key() const
{
    std::ostringstream os;
    for (const auto& [k, v] : c_)
        os << k << ':' << v.c0() << ':' << v.c1() << ';';
    return os.str();
}

// ---------------------------------------------------------------------------
// element grammar

namespace {

struct Parser {
    const std::string& s;
    size_t i = 0;
    FieldId fid;

    explicit Parser(const std::string& text, FieldId f) : s(text), fid(f) {}

    void skip()
    {
        while (i < s.size() && std::isspace(uint8_t(s[i])))
            ++i;
    }

    bool eat(char c)
    {
        skip();
        if (i < s.size() && s[i] == c) {
            ++i;
            return true;
        }
        return false;
    }

    char peek()
    {
        skip();
        return i < s.size() ? s[i] : '\0';
    }

    long integer()
    {
        skip();
        bool neg = false;
        if (i < s.size() && (s[i] == '-' || s[i] == '+')) {
            neg = s[i] == '-';
            ++i;
        }
        skip();
        if (i >= s.size() || !std::isdigit(uint8_t(s[i])))
            fail(Err::Parse, "expected integer at offset " + std::to_string(i));
        long v = 0;
        while (i < s.size() && std::isdigit(uint8_t(s[i])))
            v = v * 10 + (s[i++] - '0');
        return neg ? -v : v;
    }

    Local factor()
    {
        char c = peek();
        if (c == '(') {
            eat('(');
            Local v = expr();
            if (!eat(')'))
                fail(Err::Parse, "missing ')'");
            return v;
        }
        if (c == 't') {
            ++i;
            long k = 1;
            if (eat('^'))
                k = integer();
            return Local::t(fid, int(k));
        }
        if (c == 'w') {
            if (fid.k != 2)
                fail(Err::Parse, "'w' only valid over E");
            ++i;
            long k = 1;
            if (eat('^'))
                k = integer();
            return Local::from_fq(Fq::gen(fid).pow(k));
        }
        if (std::isdigit(uint8_t(c)))
            return Local::from_fq(Fq(fid, int(integer() % fid.p)));
        fail(Err::Parse, std::string("unexpected character '") + c + "'");
    }

    Local term()
    {
        Local v = factor();
        while (eat('*'))
            v = v * factor();
        return v;
    }

    Local expr()
    {
        bool neg = false;
        if (peek() == '+' || peek() == '-')
            neg = eat('-') || (eat('+'), false);
        Local v = term();
        if (neg)
            v = -v;
        for (;;) {
            char c = peek();
            if (c == '+') {
                eat('+');
                v = v + term();
            } else if (c == '-') {
                eat('-');
                v = v - term();
            } else {
                break;
            }
        }
        return v;
    }
};

} // namespace

Local parse_local(const std::string& text, FieldId fid)
{
    Parser p(text, fid);
    p.skip();
    if (p.i >= text.size())
        fail(Err::Parse, "empty element");
    Local v = p.expr();
    p.skip();
    if (p.i != text.size())
        fail(Err::Parse, "trailing characters in element: " + text.substr(p.i));
    return v;
}

} // namespace orbq
