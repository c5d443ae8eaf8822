#include "matrix.hpp"

#include <sstream>

namespace orbq {

Mat Mat::identity(FieldId fid, int n)
{
    Mat m(fid, n, n);
    for (int i = 0; i < n; ++i)
        m.at(i, i) = Local::one(fid);
    return m;
}

Mat Mat::scalar(FieldId fid, int n, const Local& s)
{
    Mat m(fid, n, n);
    for (int i = 0; i < n; ++i)
        m.at(i, i) = s;
    return m;
}

Mat Mat::operator+(const Mat& o) const
{
    Mat r = *this;
    for (size_t i = 0; i < a_.size(); ++i)
        r.a_[i] = r.a_[i] + o.a_[i];
    return r;
}

Mat Mat::operator-(const Mat& o) const
{
    Mat r = *this;
    for (size_t i = 0; i < a_.size(); ++i)
        r.a_[i] = r.a_[i] - o.a_[i];
    return r;
}

Mat Mat::operator*(const Mat& o) const
{
    if (c_ != o.r_)
        fail(Err::Internal, "matrix shape mismatch");
    Mat r(fid_, r_, o.c_);
    for (int i = 0; i < r_; ++i)
        for (int k = 0; k < c_; ++k) {
            const Local& x = at(i, k);
            if (x.is_zero() && x.exact())
                continue;
            for (int j = 0; j < o.c_; ++j)
                r.at(i, j) = r.at(i, j) + x * o.at(k, j);
        }
    return r;
}

Mat Mat::operator*(const Local& s) const
{
    Mat r = *this;
    for (auto& x : r.a_)
        x = x * s;
    return r;
}

Mat Mat::sigma() const
{
    Mat r = *this;
    for (auto& x : r.a_)
        x = x.sigma();
    return r;
}

Mat Mat::promoted() const
{
    Mat r(fid_.ext(), r_, c_);
    for (size_t i = 0; i < a_.size(); ++i)
        r.a_[i] = a_[i].promoted();
    return r;
}

Mat Mat::demoted() const
{
    Mat r(fid_.base(), r_, c_);
    for (size_t i = 0; i < a_.size(); ++i)
        r.a_[i] = a_[i].demoted();
    return r;
}

Mat Mat::truncated(int order) const
{
    Mat r = *this;
    for (auto& x : r.a_)
        x = x.truncated(order);
    return r;
}

Mat Mat::shifted(int k) const
{
    Mat r = *this;
    for (auto& x : r.a_)
        x = x.shifted(k);
    return r;
}

bool Mat::integral() const
{
    for (const auto& x : a_)
        if (!x.integral())
            return false;
    return true;
}

static Grid to_grid(const Mat& m)
{
    Grid g(m.rows(), std::vector<Local>(m.cols()));
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j)
            g[i][j] = m.at(i, j);
    return g;
}

Local Mat::det() const
{
    if (r_ != c_)
        fail(Err::Internal, "determinant of a non-square matrix");
    return det_grid(to_grid(*this), fid_);
}

Poly Mat::charpoly() const
{
    if (r_ != c_)
        fail(Err::Internal, "charpoly of a non-square matrix");
    return Poly(fid_, charpoly_grid(to_grid(*this), fid_));
}

Mat Mat::inverse_to(int order) const
{
    // Cayley-Hamilton: X^{-1} = -(X^{n-1} + c_{n-1} X^{n-2} + ... + c_1) / c_0
    if (r_ != c_)
        fail(Err::Internal, "inverse of a non-square matrix");
    Poly cp = charpoly();
    Local c0 = cp[0];
    if (c0.is_zero())
        fail(Err::RankDeficient, "singular matrix");
    Mat acc(fid_, r_, r_);
    Mat pw = identity(fid_, r_);
    for (int k = 1; k <= r_; ++k) {
        // add c_k X^{k-1}
        Mat term = pw * cp[k];
        acc = acc + term;
        if (k < r_)
            pw = pw * *this;
    }
    Mat r(fid_, r_, r_);
    Local neg_c0 = -c0;
    for (int i = 0; i < r_; ++i)
        for (int j = 0; j < r_; ++j)
            r.at(i, j) = acc.at(i, j).div(neg_c0, order);
    return r;
}

Mat Mat::hstack(const Mat& o) const
{
    Mat r(fid_, r_, c_ + o.c_);
    for (int i = 0; i < r_; ++i) {
        for (int j = 0; j < c_; ++j)
            r.at(i, j) = at(i, j);
        for (int j = 0; j < o.c_; ++j)
            r.at(i, c_ + j) = o.at(i, j);
    }
    return r;
}

Mat Mat::rows_slice(int i0, int i1) const
{
    Mat r(fid_, i1 - i0, c_);
    for (int i = i0; i < i1; ++i)
        for (int j = 0; j < c_; ++j)
            r.at(i - i0, j) = at(i, j);
    return r;
}

Mat Mat::diag_join(const Mat& a, const Mat& b)
{
    Mat r(a.field(), a.rows() + b.rows(), a.cols() + b.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j)
            r.at(i, j) = a.at(i, j);
    for (int i = 0; i < b.rows(); ++i)
        for (int j = 0; j < b.cols(); ++j)
            r.at(a.rows() + i, a.cols() + j) = b.at(i, j);
    return r;
}

bool Mat::operator==(const Mat& o) const
{
    if (r_ != o.r_ || c_ != o.c_)
        return false;
    for (size_t i = 0; i < a_.size(); ++i)
        if (!(a_[i] == o.a_[i]))
            return false;
    return true;
}

std::string Mat::str() const
{
    std::ostringstream os;
    for (int i = 0; i < r_; ++i) {
        if (i)
            os << "; ";
        for (int j = 0; j < c_; ++j) {
            if (j)
                os << ", ";
            os << at(i, j).str();
        }
    }
    return os.str();
}

Mat parse_matrix(const std::string& text, FieldId fid)
{
    std::vector<std::vector<Local>> rows;
    std::string row;
    std::istringstream is(text);
    while (std::getline(is, row, ';')) {
        std::vector<Local> entries;
        std::string cell;
        std::istringstream rs(row);
        while (std::getline(rs, cell, ','))
            entries.push_back(parse_local(cell, fid));
        if (!entries.empty())
            rows.push_back(std::move(entries));
    }
    if (rows.empty())
        fail(Err::Parse, "empty matrix");
    size_t n = rows[0].size();
    for (const auto& r : rows)
        if (r.size() != n)
            fail(Err::Parse, "ragged matrix rows");
    Mat m(fid, int(rows.size()), int(n));
    for (size_t i = 0; i < rows.size(); ++i)
        for (size_t j = 0; j < n; ++j)
            m.at(int(i), int(j)) = rows[i][j];
    return m;
}

Mat eval_poly_at(const Poly& p, const Mat& x)
{
    FieldId fid = x.field();
    Mat acc(fid, x.rows(), x.cols());
    for (int i = p.deg(); i >= 0; --i) {
        acc = acc * x;
        Local ci = p[i];
        if (fid.k == 2 && ci.field().k == 1)
            ci = ci.promoted();
        acc = acc + Mat::scalar(fid, x.rows(), ci);
    }
    return acc;
}

} // namespace orbq
