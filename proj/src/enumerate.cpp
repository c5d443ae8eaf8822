#include "enumerate.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>

namespace orbq {

// ---------------------------------------------------------------------------
// small F_q linear algebra on residue quotients

using FqVec = std::vector<Fq>;
using FqGrid = std::vector<FqVec>;

// coordinates of the columns of m in the basis of L (exact back-substitution)
static Mat coords_in_basis(const Lattice& L, const Mat& m)
{
    int n = L.rank();
    const Mat& B = L.basis();
    Mat X(m.field(), n, m.cols());
    for (int j = 0; j < m.cols(); ++j)
        for (int i = n - 1; i >= 0; --i) {
            Local acc = m.at(i, j);
            for (int k = i + 1; k < n; ++k)
                acc = acc - B.at(i, k) * X.at(k, j);
            X.at(i, j) = acc.shifted(-L.pivots()[i]);
        }
    return X;
}

static FqGrid mod_t(const Mat& m)
{
    FqGrid g(m.rows(), FqVec(m.cols(), Fq::zero(m.field())));
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) {
            const Local& e = m.at(i, j);
            if (!e.is_zero() && e.valuation() < 0)
                fail(Err::Internal, "non-integral entry in a residue reduction");
            g[i][j] = e.coeff(0);
        }
    return g;
}

// enumerate projectively normalized nonzero vectors of F_q^n
static std::vector<FqVec> proj_vectors(FieldId fid, int n)
{
    std::vector<FqVec> out;
    int q = fid.p * (fid.k == 2 ? fid.p : 1);
    std::vector<int> digits(n, 0);
    auto decode = [&](int code, int len) {
        FqVec v(len, Fq::zero(fid));
        for (int i = 0; i < len; ++i) {
            int d = code % q;
            code /= q;
            v[i] = fid.k == 2 ? Fq(fid, d % fid.p, d / fid.p) : Fq(fid, d);
        }
        return v;
    };
    for (int lead = 0; lead < n; ++lead) {
        long count = 1;
        for (int i = 0; i < n - lead - 1; ++i)
            count *= q;
        for (long code = 0; code < count; ++code) {
            FqVec v(n, Fq::zero(fid));
            v[lead] = Fq::one(fid);
            FqVec tail = decode(int(code), n - lead - 1);
            for (int i = 0; i < n - lead - 1; ++i)
                v[lead + 1 + i] = tail[i];
            out.push_back(std::move(v));
        }
    }
    return out;
}

static FqVec apply_grid(const FqGrid& C, const FqVec& v, FieldId fid)
{
    int n = int(C.size());
    FqVec w(n, Fq::zero(fid));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            w[i] = w[i] + C[i][j] * v[j];
    return w;
}

static bool parallel(const FqVec& a, const FqVec& b)
{
    // b in span(a), a != 0
    int lead = -1;
    for (size_t i = 0; i < a.size(); ++i)
        if (!a[i].is_zero()) {
            lead = int(i);
            break;
        }
    if (lead < 0)
        return false;
    Fq lambda = b[lead] * a[lead].inv();
    for (size_t i = 0; i < a.size(); ++i)
        if (!(b[i] == lambda * a[i]))
            return false;
    return true;
}

// nonzero left-kernel functionals of Tbar up to scalar
static std::vector<FqVec> left_kernel_functionals(const FqGrid& Tbar, FieldId fid)
{
    int n = int(Tbar.size());
    // row-reduce Tbar^T to find the kernel of phi -> phi*Tbar
    FqGrid A(n, FqVec(n, Fq::zero(fid)));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            A[i][j] = Tbar[j][i]; // A * phi^T = 0
    std::vector<int> pivot_col;
    int r = 0;
    for (int c = 0; c < n && r < n; ++c) {
        int p = -1;
        for (int i = r; i < n; ++i)
            if (!A[i][c].is_zero()) {
                p = i;
                break;
            }
        if (p < 0)
            continue;
        std::swap(A[r], A[p]);
        Fq inv = A[r][c].inv();
        for (int j = 0; j < n; ++j)
            A[r][j] = A[r][j] * inv;
        for (int i = 0; i < n; ++i)
            if (i != r && !A[i][c].is_zero()) {
                Fq f = A[i][c];
                for (int j = 0; j < n; ++j)
                    A[i][j] = A[i][j] - f * A[r][j];
            }
        pivot_col.push_back(c);
        ++r;
    }
    std::vector<int> free_cols;
    for (int c = 0; c < n; ++c)
        if (std::find(pivot_col.begin(), pivot_col.end(), c) == pivot_col.end())
            free_cols.push_back(c);
    // kernel basis
    std::vector<FqVec> basis;
    for (int fc : free_cols) {
        FqVec v(n, Fq::zero(fid));
        v[fc] = Fq::one(fid);
        for (int i = 0; i < r; ++i)
            v[pivot_col[i]] = -A[i][fc];
        basis.push_back(std::move(v));
    }
    // all projective combinations
    std::vector<FqVec> out;
    int k = int(basis.size());
    if (k == 0)
        return out;
    for (const FqVec& coef : proj_vectors(fid, k)) {
        FqVec phi(n, Fq::zero(fid));
        for (int i = 0; i < k; ++i)
            for (int j = 0; j < n; ++j)
                phi[j] = phi[j] + coef[i] * basis[i][j];
        out.push_back(std::move(phi));
    }
    return out;
}

static Mat fqvec_to_col(const FqVec& v, FieldId fid)
{
    Mat m(fid, int(v.size()), 1);
    for (size_t i = 0; i < v.size(); ++i)
        m.at(int(i), 0) = Local::from_fq(v[i]);
    return m;
}

// ---------------------------------------------------------------------------
// torus data

static long min_minor_val(const Mat& m, int r)
{
    // minimal valuation over all r x r minors using the first r rows of m
    int cols = m.cols();
    std::vector<int> idx(r);
    for (int i = 0; i < r; ++i)
        idx[i] = i;
    long best = LONG_MAX;
    for (;;) {
        Grid sub(r, std::vector<Local>(r));
        for (int i = 0; i < r; ++i)
            for (int j = 0; j < r; ++j)
                sub[i][j] = m.at(i, idx[j]);
        Local d = det_grid(sub, m.field());
        if (!d.is_zero())
            best = std::min(best, long(d.valuation()));
        int pos = r - 1;
        while (pos >= 0 && idx[pos] == cols - r + pos)
            --pos;
        if (pos < 0)
            break;
        ++idx[pos];
        for (int j = pos + 1; j < r; ++j)
            idx[j] = idx[j - 1] + 1;
    }
    if (best == LONG_MAX)
        fail(Err::InsufficientPrecision, "projected lattice rank not visible");
    return best;
}

static Mat select_rows(const Mat& m, const std::vector<int>& rows)
{
    Mat r(m.field(), int(rows.size()), m.cols());
    for (size_t i = 0; i < rows.size(); ++i)
        for (int j = 0; j < m.cols(); ++j)
            r.at(int(i), j) = m.at(rows[i], j);
    return r;
}

// raw projected determinant valuation; Gamma generator i translates this
// grading by exactly f_i, other generators leave it fixed
long factor_vdet(const Lattice& L, const TorusData& td, int i)
{
    if (td.num_factors() == 1)
        return L.vdet();
    Mat proj = select_rows(td.idem[size_t(i)] * L.basis(), td.proj_rows[size_t(i)]);
    return min_minor_val(proj, td.factors[size_t(i)].d);
}

// pivot rows of a truncated idempotent (its rank is the factor degree)
static std::vector<int> idem_pivot_rows(const Mat& e, int want_rank)
{
    Mat work = e;
    int n = e.rows();
    std::vector<int> rows;
    std::vector<bool> used(n, false);
    for (int step = 0; step < want_rank; ++step) {
        int bi = -1, bj = -1;
        long bv = LONG_MAX;
        for (int i = 0; i < n; ++i) {
            if (used[i])
                continue;
            for (int j = 0; j < n; ++j) {
                const Local& x = work.at(i, j);
                if (x.is_zero())
                    continue;
                long v = x.valuation();
                if (v < bv) {
                    bv = v;
                    bi = i;
                    bj = j;
                }
            }
        }
        if (bi < 0)
            fail(Err::TorusData, "idempotent rank deficient");
        rows.push_back(bi);
        used[bi] = true;
        Local piv = work.at(bi, bj);
        for (int i = 0; i < n; ++i) {
            if (used[i])
                continue;
            const Local& x = work.at(i, bj);
            if (x.is_zero())
                continue;
            Local f = x.div(piv, 20);
            for (int j = 0; j < n; ++j)
                work.at(i, j) = work.at(i, j) - f * work.at(bi, j);
        }
    }
    std::sort(rows.begin(), rows.end());
    return rows;
}

static long localized_det_val(const Mat& y_loc)
{
    Local d = y_loc.det();
    if (d.is_zero())
        fail(Err::TorusData, "candidate determinant not visible");
    return d.valuation();
}

TorusData torus_data(const Mat& x, const Poly& designated, const EnumConfig& cfg)
{
    TorusData td;
    td.mat_field = x.field();
    td.n = x.rows();
    td.designated = designated;
    if (!is_separable(designated))
        fail(Err::NotSeparable, "designated polynomial is inseparable");
    if (!designated.integral())
        fail(Err::NotIntegral, "designated polynomial is not integral");
    td.factors = factor_coprime(designated, cfg.prec);
    for (const auto& lf : td.factors)
        if (!lf.has_poly)
            fail(Err::TorusData, "factor coefficients not constructible for torus data");
    int k = td.num_factors();
    FieldId mfid = x.field();
    Mat id = Mat::identity(mfid, td.n);

    // idempotents
    if (k == 1) {
        td.idem.push_back(id);
    } else {
        FieldId pfid = designated.field();
        for (int i = 0; i < k; ++i) {
            Poly Ri = Poly::constant(Local::one(pfid));
            for (int j = 0; j < k; ++j)
                if (j != i)
                    Ri = (Ri * td.factors[j].poly).truncated(cfg.prec);
            // solve V * Ri == 1 mod Q_i, deg V < d_i
            const Poly& Qi = td.factors[i].poly;
            int di = Qi.deg();
            auto [q0, Rred] = Ri.divmod(Qi);
            (void)q0;
            Grid A(di, std::vector<Local>(di, Local::zero(pfid)));
            std::vector<Local> rhs(di, Local::zero(pfid));
            rhs[0] = Local::one(pfid);
            for (int c = 0; c < di; ++c) {
                // column c: T^c * Rred mod Qi
                Poly tc(pfid, std::vector<Local>(c + 1, Local::zero(pfid)));
                {
                    std::vector<Local> cc(c + 1, Local::zero(pfid));
                    cc[c] = Local::one(pfid);
                    tc = Poly(pfid, std::move(cc));
                }
                auto [qq, rr] = (tc * Rred).divmod(Qi);
                (void)qq;
                for (int r = 0; r < di; ++r)
                    A[r][c] = rr[r];
            }
            std::vector<Local> V = solve_linear(A, rhs, pfid, cfg.prec);
            Poly Vp(pfid, V);
            Poly ei = (Vp * Ri).truncated(cfg.prec);
            Mat E = eval_poly_at(mfid.k == 2 ? ei.promoted() : ei, x);
            td.idem.push_back(E.truncated(cfg.prec - 4));
        }
        // verify: idempotency, partition of unity, commutation with x
        Mat sum(mfid, td.n, td.n);
        int check_ord = cfg.prec / 2;
        for (int i = 0; i < k; ++i) {
            const Mat& E = td.idem[i];
            if (!((E * E - E).truncated(check_ord) == Mat(mfid, td.n, td.n).truncated(check_ord)))
                fail(Err::TorusData, "idempotent verification failed");
            if (!((E * x - x * E).truncated(check_ord) ==
                  Mat(mfid, td.n, td.n).truncated(check_ord)))
                fail(Err::TorusData, "idempotent does not commute with x");
            sum = sum + E;
        }
        if (!((sum - id).truncated(check_ord) == Mat(mfid, td.n, td.n).truncated(check_ord)))
            fail(Err::TorusData, "idempotents do not sum to one");
    }

    for (int i = 0; i < k; ++i)
        td.proj_rows.push_back(k == 1 ? std::vector<int>{} : idem_pivot_rows(td.idem[i], td.factors[i].d));
    if (k == 1) {
        std::vector<int> all(td.n);
        std::iota(all.begin(), all.end(), 0);
        td.proj_rows[0] = all;
    }

    // per-factor generators with v_i = 1
    Local tt = Local::t(mfid);
    for (int i = 0; i < k; ++i) {
        int fi = td.factors[i].f;
        auto localize = [&](const Mat& y) {
            if (k == 1)
                return y;
            return td.idem[i] * y + (id - td.idem[i]);
        };
        // candidate pool: t, x, x - r t^j, x^2 - r t^j
        std::vector<Mat> cands;
        cands.push_back(Mat::scalar(mfid, td.n, tt));
        cands.push_back(x);
        int cmax = 2;
        for (const auto& lf : td.factors)
            cmax = std::max(cmax, std::abs(lf.c) + 2);
        Mat x2 = x * x;
        for (int r = 1; r < mfid.p; ++r)
            for (int j = 0; j <= cmax; ++j) {
                Local rt = Local::monomial(mfid, Fq(mfid, r), j);
                cands.push_back(x - Mat::scalar(mfid, td.n, rt));
                if (td.factors[i].d >= 2)
                    cands.push_back(x2 - Mat::scalar(mfid, td.n, rt));
            }
        long g = 0;
        std::map<size_t, long> combo; // candidate index -> exponent
        std::vector<std::pair<Mat, long>> loc; // localized matrix, its v_i
        for (size_t c = 0; c < cands.size() && g != 1; ++c) {
            Mat yl = localize(cands[c]);
            Local d = yl.det();
            if (d.is_zero())
                continue;
            long v = d.valuation();
            if (v % fi != 0)
                continue; // truncated noise; skip defensively
            long vi = v / fi;
            if (vi == 0)
                continue;
            size_t idx = loc.size();
            loc.push_back({yl, vi});
            if (g == 0) {
                g = std::abs(vi);
                combo.clear();
                combo[idx] = vi > 0 ? 1 : -1;
            } else {
                // extended gcd step
                long a = g, b = vi;
                long x0 = 1, x1 = 0, y0 = 0, y1 = 1;
                while (b) {
                    long q = a / b;
                    std::tie(a, b) = std::make_pair(b, a - q * b);
                    std::tie(x0, x1) = std::make_pair(x1, x0 - q * x1);
                    std::tie(y0, y1) = std::make_pair(y1, y0 - q * y1);
                }
                if (std::abs(a) < g) {
                    std::map<size_t, long> nc;
                    for (auto& [ci, e] : combo)
                        nc[ci] = e * x0;
                    nc[idx] += y0;
                    if (a < 0)
                        for (auto& [ci, e] : nc)
                            e = -e;
                    combo = std::move(nc);
                    g = std::abs(a);
                }
            }
        }
        if (g != 1)
            fail(Err::TorusData, "no unit-valuation generator found for a factor");
        Mat gi = id;
        for (auto& [ci, e] : combo) {
            if (e == 0)
                continue;
            Mat base = e > 0 ? loc[ci].first : loc[ci].first.inverse_to(cfg.prec);
            for (long r = 0; r < std::abs(e); ++r)
                gi = gi * base;
        }
        gi = gi.truncated(cfg.prec - 6);
        Mat gi_inv = gi.inverse_to(cfg.prec - 6);
        // verify the valuation vector
        for (int j = 0; j < k; ++j) {
            Mat yl = k == 1 ? gi : td.idem[j] * gi + (id - td.idem[j]);
            long v = localized_det_val(yl);
            long expect = j == i ? td.factors[j].f : 0;
            if (v != expect)
                fail(Err::TorusData, "generator valuation vector verification failed");
        }
        td.gen.push_back(gi);
        td.gen_inv.push_back(gi_inv);
    }
    return td;
}

// ---------------------------------------------------------------------------
// window enumeration

Lattice gamma_normalize(const Lattice& L, const TorusData& td)
{
    Lattice cur = L;
    for (int i = 0; i < td.num_factors(); ++i) {
        long v = factor_vdet(cur, td, i);
        long f = td.factors[i].f;
        long a = v >= 0 ? v / f : -((-v + f - 1) / f);
        const Mat& step = a > 0 ? td.gen_inv[i] : td.gen[i];
        for (long r = 0; r < std::abs(a); ++r)
            cur = cur.apply(step);
    }
    return cur;
}

// all x-stable lattices between t^M O^n and t^{-M} O^n (x integral entries)
std::vector<Lattice> stable_lattices_window(const Mat& x, int M, const EnumConfig& cfg,
                                            const TorusData* gauge)
{
    FieldId fid = x.field();
    int n = x.rows();
    if (n > cfg.max_rank)
        fail(Err::Internal, "enumeration rank bound exceeded");
    auto lines = proj_vectors(fid, n);

    // children construction shared by both modes
    auto children = [&](const Lattice& L, std::vector<Lattice>& out) {
        Mat xc = coords_in_basis(L, x * L.basis());
        FqGrid C = mod_t(xc);
        out.push_back(L.scaled(1)); // dim 0: tL
        auto push_child = [&](const std::vector<FqVec>& span_vecs) {
            Mat gens = L.basis().shifted(1); // t L columns
            for (const auto& v : span_vecs)
                gens = gens.hstack(L.basis() * fqvec_to_col(v, fid));
            out.push_back(Lattice::from_generators(gens));
        };
        if (n >= 2) {
            for (const auto& v : lines) {
                FqVec w = apply_grid(C, v, fid);
                if (parallel(v, w))
                    push_child({v});
            }
        }
        if (n == 3) {
            // stable planes: functionals with phi . C parallel to phi
            for (const auto& phi : lines) {
                FqVec phiC(n, Fq::zero(fid));
                for (int j = 0; j < n; ++j)
                    for (int i = 0; i < n; ++i)
                        phiC[j] = phiC[j] + phi[i] * C[i][j];
                if (!parallel(phi, phiC))
                    continue;
                int lead = 0;
                while (phi[lead].is_zero())
                    ++lead;
                std::vector<FqVec> span_vecs;
                Fq inv = phi[lead].inv();
                for (int kk = 0; kk < n; ++kk) {
                    if (kk == lead)
                        continue;
                    FqVec v(n, Fq::zero(fid));
                    v[kk] = Fq::one(fid);
                    v[lead] = -(phi[kk] * inv);
                    span_vecs.push_back(std::move(v));
                }
                push_child(span_vecs);
            }
        }
    };

    if (!gauge) {
        // plain window enumeration
        Lattice top = Lattice::standard(fid, n, -M);
        Lattice floor = Lattice::standard(fid, n, M);
        std::map<std::string, Lattice> seen;
        std::vector<Lattice> stack = {top};
        while (!stack.empty()) {
            Lattice L = stack.back();
            stack.pop_back();
            std::string key = L.key();
            if (seen.count(key))
                continue;
            seen.emplace(key, L);
            std::vector<Lattice> kids;
            children(L, kids);
            for (auto& child : kids)
                if (child.contains(floor))
                    stack.push_back(std::move(child));
        }
        std::vector<Lattice> out;
        out.reserve(seen.size());
        for (auto& [kk, vv] : seen)
            out.push_back(std::move(vv));
        return out;
    }

    // orbit-quotient descent: every node is Gamma-normalized, children are
    // normalized before dedup, and the translation-invariant depth budget
    // replaces the absolute window floor
    const TorusData& td = *gauge;
    long budget = long(n) * (2L * M + 2);

    // u_t = t * prod gen_i^{-e_i} is the unit part of t in L^x; the scaled
    // standard lattices fall into finitely many Gamma-orbits, the <u_t>-orbit
    // of the standard one: those are the entry points
    Mat ut = Mat::scalar(fid, n, Local::t(fid));
    Mat ut_inv = Mat::scalar(fid, n, Local::t(fid, -1));
    for (int i = 0; i < td.num_factors(); ++i)
        for (int e = 0; e < td.factors[i].e; ++e) {
            ut = ut * td.gen_inv[i];
            ut_inv = ut_inv * td.gen[i];
        }
    std::map<std::string, long> depth; // normal form key -> best depth
    std::map<std::string, Lattice> found;
    std::vector<std::pair<Lattice, long>> stack;
    auto push = [&](const Lattice& nf, long d) {
        if (d > budget)
            return;
        auto it = depth.find(nf.key());
        if (it != depth.end() && it->second <= d)
            return;
        depth[nf.key()] = d;
        found.emplace(nf.key(), nf);
        stack.push_back({nf, d});
    };
    Lattice base = gamma_normalize(Lattice::standard(fid, n, -M), td);
    push(base, 0);
    for (const Mat* u : {&ut, &ut_inv}) {
        Lattice cur = base;
        for (int it = 0; it < 64; ++it) {
            cur = gamma_normalize(cur.apply(*u), td);
            if (depth.count(cur.key()))
                break;
            push(cur, 0);
        }
    }
    while (!stack.empty()) {
        auto [L, d] = stack.back();
        stack.pop_back();
        if (depth[L.key()] < d)
            continue; // re-found shallower in the meantime
        std::vector<Lattice> kids;
        children(L, kids);
        for (auto& child : kids)
            push(gamma_normalize(child, td), d + 1);
    }
    std::vector<Lattice> out;
    out.reserve(found.size());
    for (auto& [kk, vv] : found)
        out.push_back(std::move(vv));
    return out;
}

// all lattices between lo and hi (lo <= hi enforced by construction)
static std::vector<Lattice> between(const Lattice& hi, const Lattice& lo)
{
    FieldId fid = hi.field();
    int n = hi.rank();
    std::map<std::string, Lattice> seen;
    std::vector<Lattice> stack = {hi};
    while (!stack.empty()) {
        Lattice S = stack.back();
        stack.pop_back();
        std::string key = S.key();
        if (seen.count(key))
            continue;
        seen.emplace(key, S);
        // N = tS + lo in S-coordinates
        Mat gens = S.basis().shifted(1).hstack(lo.basis());
        Lattice N = Lattice::from_generators(gens);
        Mat T = coords_in_basis(S, N.basis());
        FqGrid Tbar = mod_t(T);
        for (const auto& phi : left_kernel_functionals(Tbar, fid)) {
            int lead = 0;
            while (phi[lead].is_zero())
                ++lead;
            Fq inv = phi[lead].inv();
            Mat child_gens = N.basis();
            for (int kk = 0; kk < n; ++kk) {
                if (kk == lead)
                    continue;
                FqVec v(n, Fq::zero(fid));
                v[kk] = Fq::one(fid);
                v[lead] = -(phi[kk] * inv);
                child_gens = child_gens.hstack(S.basis() * fqvec_to_col(v, fid));
            }
            stack.push_back(Lattice::from_generators(child_gens));
        }
    }
    std::vector<Lattice> out;
    out.reserve(seen.size());
    for (auto& [kk, vv] : seen)
        out.push_back(std::move(vv));
    return out;
}

static int initial_window(const Mat& x, int n)
{
    // valuation spread of the elementary divisors
    std::vector<long> D(n + 1, 0);
    for (int r = 1; r <= n; ++r) {
        // minimal valuation over r x r minors (all row and column subsets)
        long best = LONG_MAX;
        std::vector<int> ri(r), ci(r);
        std::function<void(int, int)> rec_rows = [&](int pos, int start) {
            if (pos == r) {
                std::vector<int> cj(r);
                std::function<void(int, int)> rec_cols = [&](int p2, int s2) {
                    if (p2 == r) {
                        Grid sub(r, std::vector<Local>(r));
                        for (int i = 0; i < r; ++i)
                            for (int j = 0; j < r; ++j)
                                sub[i][j] = x.at(ri[i], cj[j]);
                        Local d = det_grid(sub, x.field());
                        if (!d.is_zero())
                            best = std::min(best, long(d.valuation()));
                        return;
                    }
                    for (int c = s2; c < n; ++c) {
                        cj[p2] = c;
                        rec_cols(p2 + 1, c + 1);
                    }
                };
                rec_cols(0, 0);
                return;
            }
            for (int rr = start; rr < n; ++rr) {
                ri[pos] = rr;
                rec_rows(pos + 1, rr + 1);
            }
        };
        rec_rows(0, 0);
        if (best == LONG_MAX)
            return 1 + n; // singular-looking; let stability growth handle it
        D[r] = best;
    }
    long emin = LONG_MAX, emax = LONG_MIN;
    for (int r = 1; r <= n; ++r) {
        long e = D[r] - D[r - 1];
        emin = std::min(emin, e);
        emax = std::max(emax, e);
    }
    long spread = emax - emin;
    return int(std::max(1L, spread)) + n;
}

// conjugate x into a basis where it acts integrally (the O[x]-span of O^n)
struct WorkingFrame {
    Mat x;          // integral-entry matrix in the working basis
    Lattice frame;  // working basis as a lattice (results map back through it)
    bool changed = false;
};

static WorkingFrame integral_frame(const Mat& x, const EnumConfig& cfg)
{
    WorkingFrame wf;
    wf.x = x;
    wf.frame = Lattice::standard(x.field(), x.rows(), 0);
    if (x.integral())
        return wf;
    int n = x.rows();
    Mat gens = Mat::identity(x.field(), n);
    Mat pw = Mat::identity(x.field(), n);
    for (int j = 1; j < n; ++j) {
        pw = pw * x;
        gens = gens.hstack(pw);
    }
    Lattice L0 = Lattice::from_generators(gens);
    Mat xw = coords_in_basis(L0, x * L0.basis());
    if (!xw.integral())
        fail(Err::Internal, "stable frame did not integralize x");
    wf.x = xw;
    wf.frame = L0;
    wf.changed = true;
    (void)cfg;
    return wf;
}

OrbitList enum_pairs(const Mat& x, const EnumConfig& cfg)
{
    Poly chi = x.charpoly();
    if (!is_separable(chi))
        fail(Err::NotSeparable, "char poly inseparable");
    OrbitList result;
    if (!chi.integral()) {
        result.window_stable = true;
        return result;
    }
    WorkingFrame wf = integral_frame(x, cfg);
    TorusData td = torus_data(wf.x, chi, cfg);

    auto collect = [&](int M) {
        std::map<std::string, LatticePair> reps;
        for (const Lattice& Lm : stable_lattices_window(wf.x, M, cfg, &td)) {
            // minus components come back Gamma-normalized
            Lattice xLm = Lm.apply(wf.x);
            for (const Lattice& Lp : between(Lm, xLm)) {
                LatticePair pair{Lp, Lm};
                reps.emplace(pair.key(), pair);
            }
        }
        return reps;
    };

    int M = cfg.window_override >= 0 ? cfg.window_override : initial_window(wf.x, x.rows());
    for (int attempt = 0;; ++attempt) {
        std::map<std::string, LatticePair> reps = collect(M);
        std::map<std::string, LatticePair> reps_next = collect(M + 1);
        if (reps.size() == reps_next.size()) {
            result.window = M;
            result.window_stable = true;
            for (auto& [k, p] : reps) {
                LatticePair mapped = p;
                if (wf.changed) {
                    mapped.plus = mapped.plus.apply(wf.frame.basis());
                    mapped.minus = mapped.minus.apply(wf.frame.basis());
                }
                // defining containments, re-verified post hoc
                if (!mapped.minus.contains(mapped.plus) ||
                    !mapped.plus.contains(mapped.minus.apply(x)))
                    fail(Err::Internal, "pair containment verification failed");
                result.pairs.push_back(std::move(mapped));
            }
            return result;
        }
        if (attempt >= cfg.window_growth)
            fail(Err::WindowUnstable, "representative count did not stabilize");
        ++M;
    }
}

static OrbitList enum_lattices_generic(const Mat& stab_matrix, const Poly& chi,
                                       const EnumConfig& cfg,
                                       const std::function<bool(const Lattice&)>& filter)
{
    OrbitList result;
    WorkingFrame wf = integral_frame(stab_matrix, cfg);
    TorusData td = torus_data(wf.x, chi, cfg);

    // filters are expressed in original coordinates; map candidates out
    auto collect = [&](int M) {
        std::map<std::string, Lattice> reps;
        for (const Lattice& L : stable_lattices_window(wf.x, M, cfg, &td)) {
            Lattice amb = wf.changed ? L.apply(wf.frame.basis()) : L;
            if (!filter(amb))
                continue;
            reps.emplace(L.key(), L);
        }
        return reps;
    };

    int M = cfg.window_override >= 0 ? cfg.window_override
                                     : initial_window(wf.x, stab_matrix.rows());
    for (int attempt = 0;; ++attempt) {
        std::map<std::string, Lattice> reps = collect(M);
        std::map<std::string, Lattice> reps_next = collect(M + 1);
        if (reps.size() == reps_next.size()) {
            result.window = M;
            result.window_stable = true;
            for (auto& [k, L] : reps) {
                Lattice amb = wf.changed ? L.apply(wf.frame.basis()) : L;
                if (!filter(amb))
                    fail(Err::Internal, "normalized representative fails its filter");
                result.lattices.push_back(amb);
            }
            return result;
        }
        if (attempt >= cfg.window_growth)
            fail(Err::WindowUnstable, "representative count did not stabilize");
        ++M;
    }
}

OrbitList enum_sigma(const Mat& x, const EnumConfig& cfg, bool equal_only)
{
    if (x.field().k != 2)
        fail(Err::WrongField, "enum_sigma needs a matrix over E");
    Mat z = x * x.sigma();
    Poly chiE = z.charpoly();
    Poly chi = chiE.demoted();
    if (!is_separable(chi))
        fail(Err::NotSeparable, "char(x sigma(x)) inseparable");
    if (!chi.integral()) {
        OrbitList r;
        r.window_stable = true;
        return r;
    }
    auto filter = [&](const Lattice& L) {
        Lattice img = L.conj().apply(x);
        if (!L.contains(img))
            return false;
        if (equal_only && !img.contains(L))
            return false;
        return true;
    };
    return enum_lattices_generic(z, chi, cfg, filter);
}

OrbitList enum_stable(const Mat& x, const EnumConfig& cfg)
{
    Poly chi = x.charpoly();
    if (x.field().k == 2)
        chi = chi.demoted();
    if (!is_separable(chi))
        fail(Err::NotSeparable, "char poly inseparable");
    if (!chi.integral()) {
        OrbitList r;
        r.window_stable = true;
        return r;
    }
    auto filter = [&](const Lattice& L) { return L.contains(L.apply(x)); };
    return enum_lattices_generic(x, chi, cfg, filter);
}

} // namespace orbq
