#include "orbital.hpp"

#include <sstream>

namespace orbq {

QsLaurent QsLaurent::monomial(int k, long long c)
{
    QsLaurent q;
    q.add_term(k, c);
    return q;
}

long long QsLaurent::coeff(int k) const
{
    auto it = c_.find(k);
    return it == c_.end() ? 0 : it->second;
}

void QsLaurent::add_term(int k, long long c)
{
    if (c == 0)
        return;
    auto [it, fresh] = c_.try_emplace(k, 0);
    (void)fresh;
    it->second += c;
    if (it->second == 0)
        c_.erase(it);
}

QsLaurent QsLaurent::operator+(const QsLaurent& o) const
{
    QsLaurent r = *this;
    for (const auto& [k, c] : o.c_)
        r.add_term(k, c);
    return r;
}

QsLaurent QsLaurent::operator*(const QsLaurent& o) const
{
    QsLaurent r;
    for (const auto& [k1, c1] : c_)
        for (const auto& [k2, c2] : o.c_)
            r.add_term(k1 + k2, c1 * c2);
    return r;
}

QsLaurent QsLaurent::shifted(int k) const
{
    QsLaurent r;
    for (const auto& [e, c] : c_)
        r.add_term(e + k, c);
    return r;
}

QsLaurent QsLaurent::negated_s() const
{
    QsLaurent r;
    for (const auto& [e, c] : c_)
        r.add_term(-e, c);
    return r;
}

long long QsLaurent::value_at_zero() const
{
    long long s = 0;
    for (const auto& [k, c] : c_)
        s += c;
    return s;
}

long long QsLaurent::derivative_log_q() const
{
    long long s = 0;
    for (const auto& [k, c] : c_)
        s += k * c;
    return s;
}

std::optional<int> QsLaurent::vanishing_order(int cap) const
{
    if (c_.empty())
        return std::nullopt;
    // order of vanishing at s = 0 equals the multiplicity of y = 1 in
    // y^{-min} * sum c_k y^k; count exact synthetic divisions by (y - 1)
    int mn = c_.begin()->first, mx = c_.rbegin()->first;
    std::vector<long long> poly(size_t(mx - mn) + 1, 0);
    for (const auto& [k, c] : c_)
        poly[size_t(k - mn)] = c;
    int order = 0;
    while (order < cap) {
        // divide by (y - 1): remainder is the value at 1
        long long rem = 0;
        for (auto it = poly.rbegin(); it != poly.rend(); ++it)
            rem += *it;
        if (rem != 0)
            break;
        std::vector<long long> quot(poly.size() - 1, 0);
        long long carry = 0;
        for (size_t i = poly.size(); i-- > 1;) {
            carry += poly[i];
            quot[i - 1] = carry;
        }
        poly = std::move(quot);
        ++order;
        if (poly.empty())
            break;
    }
    return order;
}

std::string QsLaurent::str() const
{
    if (c_.empty())
        return "0";
    std::ostringstream os;
    bool first = true;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) {
        auto [k, c] = *it;
        if (!first)
            os << (c > 0 ? " + " : " - ");
        else if (c < 0)
            os << "-";
        first = false;
        long long a = std::abs(c);
        if (k == 0)
            os << a;
        else {
            if (a != 1)
                os << a << "*";
            os << "q^" << (k == 1 ? "s" : "{" + std::to_string(k) + "s}");
        }
    }
    return os.str();
}

std::pair<long long, long long> central_value_and_derivative(const QsLaurent& p)
{
    return {p.value_at_zero(), p.derivative_log_q()};
}

// ---------------------------------------------------------------------------
// transfer factors

namespace {

struct GammaImage {
    Lattice plus, minus;
};

// gamma(x) = (1 x; 1 1) applied to L+ ⊕ L-, split into plus/minus parts
GammaImage gamma_image_parts(const Mat& x, const LatticePair& pair)
{
    FieldId fid = x.field();
    int n = x.rows();
    Mat gamma(fid, 2 * n, 2 * n);
    for (int i = 0; i < n; ++i) {
        gamma.at(i, i) = Local::one(fid);
        gamma.at(n + i, n + i) = Local::one(fid);
        gamma.at(n + i, i) = Local::one(fid);
        for (int j = 0; j < n; ++j)
            gamma.at(i, n + j) = x.at(i, j);
    }
    Mat pb = Mat::diag_join(pair.plus.basis(), pair.minus.basis());
    Mat gens = gamma * pb;
    Lattice full = Lattice::from_generators(gens);
    Lattice P = Lattice::from_generators(gens.rows_slice(0, n));
    Lattice M = Lattice::from_generators(gens.rows_slice(n, 2 * n));
    Lattice split = Lattice::from_generators(Mat::diag_join(P.basis(), M.basis()));
    if (!(split == full))
        fail(Err::NotLattice, "gamma image is not a plus/minus direct sum");
    return {P, M};
}

} // namespace

TransferFactor transfer_block(const Mat& x, const LatticePair& pair)
{
    GammaImage im = gamma_image_parts(x, pair);
    long vdetx = x.det().valuation();
    long sgn = im.plus.vdet() - im.minus.vdet();
    long expo = im.minus.vdet() - im.plus.vdet() + vdetx + pair.minus.vdet() - pair.plus.vdet();
    TransferFactor tf;
    tf.sign = (sgn % 2 + 2) % 2 == 0 ? 1 : -1;
    tf.exponent = int(expo);
    return tf;
}

TransferFactor transfer_indices(const Mat& x, const LatticePair& pair, IndexOrientation orient)
{
    GammaImage im = gamma_image_parts(x, pair);
    // z = antidiag(x, 1) maps (u, w) to (xw, u): z(L)_- = L+, z(L)_+ = x L-
    long i1 = lattice_index(im.minus, pair.plus);            // [(gL)_- : zL_+]
    long i2 = lattice_index(im.minus, pair.minus);           // [(gL)_- : L_-]
    long i3 = lattice_index(im.plus, pair.minus.apply(x));   // [(gL)_+ : zL_-]
    TransferFactor tf;
    tf.sign = ((i1 + i2) % 2 + 2) % 2 == 0 ? 1 : -1;
    tf.exponent = int(orient == IndexOrientation::Sum ? i3 + i1 : i3 - i1);
    return tf;
}

// ---------------------------------------------------------------------------
// orbital integrals

static void check_linear_rss(const Poly& chi)
{
    if (!is_separable(chi))
        fail(Err::NotSeparable, "invariant polynomial inseparable");
    FieldId fid = chi.field();
    if (chi[0].is_zero())
        fail(Err::NotRegular, "Inv(0) = 0");
    Local at1 = chi.eval(Local::one(fid));
    if (at1.is_zero())
        fail(Err::NotRegular, "Inv(1) = 0");
}

static bool top_nilpotent(const Poly& chi)
{
    for (int i = 0; i < chi.deg(); ++i) {
        Local c = chi[i];
        if (!c.is_zero() && c.valuation() < 1)
            return false;
        if (c.is_zero() && !c.exact() && c.prec() < 1)
            return false;
    }
    return true;
}

OrbResult orb_linear(const LinearRep& rep, const OrbConfig& cfg)
{
    Poly chi = rep.x.charpoly();
    check_linear_rss(chi);
    Mat enum_matrix = rep.x;
    int shift = 0;
    if (rep.lambda == Lambda::Half) {
        enum_matrix = rep.x.shifted(-1); // x / pi
        shift = -rep.n;
    } else if (!top_nilpotent(chi)) {
        fail(Err::NotNilpotent, "lambda = 0 requires a topologically nilpotent x");
    }
    OrbitList pairs = enum_pairs(enum_matrix, cfg.enumeration);
    OrbResult out;
    out.window = pairs.window;
    out.window_stable = pairs.window_stable;
    out.terms = pairs.pairs.size();
    for (const LatticePair& pair : pairs.pairs) {
        TransferFactor tf = transfer_block(rep.x, pair);
        if (cfg.cross_check) {
            TransferFactor ti = transfer_indices(rep.x, pair, cfg.orientation);
            if (ti.sign != tf.sign || ti.exponent != tf.exponent)
                out.cross_checked = false;
        }
        out.poly.add_term(tf.exponent + shift, tf.sign);
    }
    return out;
}

OrbResult orb_par(const LinearRep& rep, const OrbConfig& cfg)
{
    if (rep.lambda != Lambda::Half)
        fail(Err::Internal, "orb_par is the lambda = 1/2 normalization");
    OrbResult r = orb_linear(rep, cfg);
    r.poly = r.poly.shifted(rep.n);
    return r;
}

// quaternionic invariant char(x sigma(x) pi^eps; T) over F
static Poly quaternion_invariant(const Mat& x, Lambda lambda)
{
    Mat z = x * x.sigma();
    Poly chi = z.charpoly().demoted();
    return epsilon_of(lambda) ? chi.scale_roots(-1) : chi;
}

static void check_quaternion_rss(const Poly& inv)
{
    if (!is_separable(inv))
        fail(Err::NotSeparable, "invariant polynomial inseparable");
    if (inv[0].is_zero())
        fail(Err::NotRegular, "Inv(0) = 0");
    if (inv.eval(Local::one(inv.field())).is_zero())
        fail(Err::NotRegular, "Inv(1) = 0");
}

// select d independent columns of a truncated idempotent
static std::vector<int> idem_pivot_cols(const Mat& e, int want_rank)
{
    Mat work = e;
    int n = e.rows();
    std::vector<int> cols;
    std::vector<bool> used(n, false);
    for (int step = 0; step < want_rank; ++step) {
        int bi = -1, bj = -1;
        long bv = LONG_MAX;
        for (int j = 0; j < n; ++j) {
            if (used[j])
                continue;
            for (int i = 0; i < n; ++i) {
                const Local& v = work.at(i, j);
                if (v.is_zero())
                    continue;
                if (v.valuation() < bv) {
                    bv = v.valuation();
                    bi = i;
                    bj = j;
                }
            }
        }
        if (bj < 0)
            fail(Err::TorusData, "idempotent column rank deficient");
        cols.push_back(bj);
        used[bj] = true;
        Local piv = work.at(bi, bj);
        for (int j = 0; j < n; ++j) {
            if (used[j] || work.at(bi, j).is_zero())
                continue;
            Local f = work.at(bi, j).div(piv, 20);
            for (int i = 0; i < n; ++i)
                work.at(i, j) = work.at(i, j) - work.at(i, bj) * f;
        }
    }
    std::sort(cols.begin(), cols.end());
    return cols;
}

CountResult orb_quaternion(const QuaternionRep& rep, const OrbConfig& cfg)
{
    if (rep.x.field().k != 2)
        fail(Err::WrongField, "quaternion representative lives over E");
    Poly inv = quaternion_invariant(rep.x, rep.lambda);
    check_quaternion_rss(inv);
    Mat z = rep.x * rep.x.sigma();
    Poly chi = z.charpoly().demoted();

    CountResult out;
    if (rep.lambda == Lambda::Zero) {
        if (!top_nilpotent(chi))
            fail(Err::NotNilpotent, "lambda = 0 requires x sigma(x) topologically nilpotent");
        OrbitList l = enum_sigma(rep.x, cfg.enumeration);
        out.count = (long long)l.size();
        out.window = l.window;
        out.window_stable = l.window_stable;
        return out;
    }
    if (!chi.integral()) {
        out.count = 0;
        out.vanished = true;
        out.window_stable = true;
        return out;
    }
    // Hensel split of O_F[x sigma(x)]: multiply the block counts
    auto [chi0, chi1] = hensel_split(chi, cfg.enumeration.prec);
    if (chi0.deg() == 0 || chi1.deg() == 0) {
        OrbitList l = enum_sigma(rep.x, cfg.enumeration);
        out.count = (long long)l.size();
        out.window = l.window;
        out.window_stable = l.window_stable;
        return out;
    }
    // two-block idempotent split of E^n preserved by v -> x sigma(v)
    FieldId fid = rep.x.field();
    int n = rep.x.rows();
    int prec = cfg.enumeration.prec;
    // e0 = (V * chi1)(z) with V = chi1^{-1} mod chi0
    FieldId pfid = chi.field();
    int d0 = chi0.deg(), d1 = chi1.deg();
    auto [q0, R0] = chi1.divmod(chi0);
    (void)q0;
    Grid A(d0, std::vector<Local>(d0, Local::zero(pfid)));
    std::vector<Local> rhs(d0, Local::zero(pfid));
    rhs[0] = Local::one(pfid);
    for (int c = 0; c < d0; ++c) {
        std::vector<Local> cc(c + 1, Local::zero(pfid));
        cc[c] = Local::one(pfid);
        auto [qq, rr] = (Poly(pfid, cc) * R0).divmod(chi0);
        (void)qq;
        for (int r = 0; r < d0; ++r)
            A[r][c] = rr[r];
    }
    Poly V(pfid, solve_linear(A, rhs, pfid, prec));
    Poly e0p = (V * chi1).truncated(prec);
    Mat E0 = eval_poly_at(e0p.promoted(), z).truncated(prec - 4);
    Mat E1 = Mat::identity(fid, n) - E0;
    std::vector<int> cols0 = idem_pivot_cols(E0, d0);
    std::vector<int> cols1 = idem_pivot_cols(E1, d1);
    Mat W(fid, n, n);
    for (int j = 0; j < d0; ++j)
        for (int i = 0; i < n; ++i)
            W.at(i, j) = E0.at(i, cols0[size_t(j)]);
    for (int j = 0; j < d1; ++j)
        for (int i = 0; i < n; ++i)
            W.at(i, d0 + j) = E1.at(i, cols1[size_t(j)]);
    Mat xprime = W.inverse_to(prec) * rep.x * W.sigma();
    // blocks of the semilinear action; off-blocks must vanish to precision
    int guard = prec / 2;
    Mat x0(fid, d0, d0), x1(fid, d1, d1);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            bool in0 = i < d0 && j < d0, in1 = i >= d0 && j >= d0;
            if (in0)
                x0.at(i, j) = xprime.at(i, j);
            else if (in1)
                x1.at(i - d0, j - d0) = xprime.at(i, j);
            else if (!xprime.at(i, j).truncated(guard).is_zero())
                fail(Err::Internal, "hensel block split left a nonzero off-block");
        }
    OrbitList l0 = enum_sigma(x0, cfg.enumeration);
    OrbitList l1 = enum_sigma(x1, cfg.enumeration);
    out.count = (long long)l0.size() * (long long)l1.size();
    out.window = std::max(l0.window, l1.window);
    out.window_stable = l0.window_stable && l1.window_stable;
    return out;
}

CountResult orb_conjugation(const Mat& x, const OrbConfig& cfg)
{
    Poly chi = x.charpoly();
    if (x.field().k == 2)
        chi = chi.demoted();
    if (!is_separable(chi))
        fail(Err::NotSeparable, "char poly inseparable");
    CountResult out;
    if (!chi.integral()) {
        out.vanished = true;
        out.window_stable = true;
        return out;
    }
    OrbitList l = enum_stable(x, cfg.enumeration);
    out.count = (long long)l.size();
    out.window = l.window;
    out.window_stable = l.window_stable;
    return out;
}

CountResult orb_twisted(const Mat& x, const OrbConfig& cfg)
{
    if (x.field().k != 2)
        fail(Err::WrongField, "twisted integral lives over E");
    Mat z = x * x.sigma();
    Poly chi = z.charpoly().demoted();
    if (!is_separable(chi))
        fail(Err::NotSeparable, "char(x sigma(x)) inseparable");
    CountResult out;
    if (!chi.integral() || chi[0].valuation() != 0) {
        out.vanished = true;
        out.window_stable = true;
        return out;
    }
    OrbitList l = enum_sigma(x, cfg.enumeration, /*equal_only=*/true);
    out.count = (long long)l.size();
    out.window = l.window;
    out.window_stable = l.window_stable;
    return out;
}

} // namespace orbq
