#include "lattice.hpp"

#include <algorithm>
#include <sstream>

namespace orbq {

Lattice Lattice::standard(FieldId fid, int n, int scale)
{
    Lattice L;
    L.fid_ = fid;
    L.n_ = n;
    L.b_ = Mat::identity(fid, n).shifted(scale);
    L.d_.assign(n, scale);
    return L;
}

long Lattice::vdet() const
{
    long s = 0;
    for (int d : d_)
        s += d;
    return s;
}

namespace {

// one elimination attempt with representatives modulo t^cap; the result is
// valid when cap exceeds the codepth [O^n : span] (the modulus error then
// lies inside the lattice)
struct HnfAttempt {
    bool ok = false;
    bool rank_visible = true;
    Mat basis;
    std::vector<int> piv;
};

HnfAttempt hnf_mod(const Mat& g, int cap)
{
    FieldId fid = g.field();
    int n = g.rows(), k = g.cols();
    HnfAttempt out;
    std::vector<std::vector<Local>> cols;
    for (int j = 0; j < k; ++j) {
        std::vector<Local> col(n);
        bool all_zero = true;
        for (int i = 0; i < n; ++i) {
            col[i] = g.at(i, j).exact_rep(cap);
            all_zero = all_zero && col[i].is_zero();
        }
        if (!all_zero)
            cols.push_back(std::move(col));
    }
    Mat basis(fid, n, n);
    std::vector<int> piv(n, 0);
    std::vector<bool> used(cols.size(), false);
    for (int row = n - 1; row >= 0; --row) {
        int pc = -1;
        long pv = LONG_MAX;
        for (size_t j = 0; j < cols.size(); ++j) {
            if (used[j] || cols[j][row].is_zero())
                continue;
            long v = cols[j][row].valuation();
            if (v < pv) {
                pv = v;
                pc = int(j);
            }
        }
        if (pc < 0) {
            out.rank_visible = false;
            return out; // pivot hidden above the modulus (or rank deficient)
        }
        Local unit = cols[pc][row].shifted(-int(pv));
        Local uinv = unit.inv_to(cap).exact_rep(std::max(1, cap - int(pv)));
        for (int i = 0; i < row; ++i)
            cols[pc][i] = (cols[pc][i] * uinv).reduced(cap);
        cols[pc][row] = Local::t(fid, int(pv));
        for (size_t j = 0; j < cols.size(); ++j) {
            if (used[j] || int(j) == pc || cols[j][row].is_zero())
                continue;
            Local q = cols[j][row].shifted(-int(pv));
            for (int i = 0; i < row; ++i)
                cols[j][i] = (cols[j][i] - cols[pc][i] * q).reduced(cap);
            cols[j][row] = Local::zero(fid);
        }
        used[pc] = true;
        for (int i = 0; i < n; ++i)
            basis.at(i, row) = cols[pc][i];
        piv[row] = int(pv);
    }
    out.ok = true;
    out.basis = std::move(basis);
    out.piv = std::move(piv);
    return out;
}

} // namespace

Lattice Lattice::from_generators(const Mat& gens)
{
    FieldId fid = gens.field();
    int n = gens.rows(), k = gens.cols();
    if (k < n)
        fail(Err::RankDeficient, "fewer generators than the rank");

    // scale into O^n
    int shift = 0;
    int minprec = Local::EXACT;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < k; ++j) {
            const Local& e = gens.at(i, j);
            if (!e.is_zero())
                shift = std::max(shift, -e.valuation());
            minprec = min_prec(minprec, e.prec());
        }
    Mat g = gens.shifted(shift);
    int cap_limit = minprec == Local::EXACT ? 256 : minprec + shift;

    Mat basis(fid, n, n);
    std::vector<int> piv;
    bool precision_wall = false;
    for (int cap = 8;; cap *= 2) {
        if (cap > cap_limit) {
            cap = cap_limit;
            precision_wall = true;
        }
        HnfAttempt at = hnf_mod(g, cap);
        long D = 0;
        if (at.ok)
            for (int d : at.piv)
                D += d;
        if (at.ok && D + 1 <= cap) {
            basis = std::move(at.basis);
            piv = std::move(at.piv);
            break;
        }
        if (precision_wall) {
            if (!at.rank_visible && minprec != Local::EXACT)
                fail(Err::InsufficientPrecision, "rank not visible at working precision");
            fail(at.rank_visible ? Err::Internal : Err::RankDeficient,
                 "generators do not span");
        }
    }

    // reduce entries right of each pivot modulo the pivot power
    for (int j = 0; j < n; ++j)
        for (int i = j - 1; i >= 0; --i) {
            Local e = basis.at(i, j);
            if (e.is_zero())
                continue;
            Local keep = e.reduced(piv[i]); // the part below t^{d_i} stays
            Local sub = (e - keep).shifted(-piv[i]);
            if (sub.is_zero())
                continue;
            for (int r = 0; r <= i; ++r)
                basis.at(r, j) = basis.at(r, j) - basis.at(r, i) * sub;
        }

    Lattice L;
    L.fid_ = fid;
    L.n_ = n;
    L.b_ = basis.shifted(-shift);
    L.d_.resize(n);
    for (int i = 0; i < n; ++i)
        L.d_[i] = piv[i] - shift;
    return L;
}

bool Lattice::contains(const Lattice& sub) const
{
    if (n_ != sub.n_ || !(fid_ == sub.fid_))
        fail(Err::Internal, "lattice shape mismatch");
    for (int j = 0; j < n_; ++j) {
        std::vector<Local> x(n_);
        for (int i = n_ - 1; i >= 0; --i) {
            Local acc = sub.b_.at(i, j);
            for (int m = i + 1; m < n_; ++m)
                acc = acc - b_.at(i, m) * x[m];
            x[i] = acc.shifted(-d_[i]);
            if (!x[i].is_zero() && x[i].valuation() < 0)
                return false;
        }
    }
    return true;
}

Lattice Lattice::apply(const Mat& m) const
{
    return from_generators(m * b_);
}

Lattice Lattice::conj() const
{
    if (fid_.k != 2)
        fail(Err::WrongField, "conjugation needs an O_E-lattice");
    Lattice L = *this;
    L.b_ = b_.sigma(); // canonical form is preserved coefficient-wise
    return L;
}

Lattice Lattice::scaled(int k) const
{
    Lattice L = *this;
    L.b_ = b_.shifted(k);
    for (auto& d : L.d_)
        d += k;
    return L;
}

bool Lattice::operator==(const Lattice& o) const
{
    return n_ == o.n_ && fid_ == o.fid_ && d_ == o.d_ && b_ == o.b_;
}

std::string Lattice::key() const
{
    std::ostringstream os;
    for (int d : d_)
        os << d << ',';
    os << '#';
    for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j)
            os << b_.at(i, j).key() << '/';
    return os.str();
}

long lattice_index(const Lattice& L1, const Lattice& L2)
{
    if (!L1.contains(L2))
        fail(Err::NotContained, "index of a non-contained lattice");
    return L2.vdet() - L1.vdet();
}

} // namespace orbq
