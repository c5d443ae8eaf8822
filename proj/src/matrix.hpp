#pragma once

#include "linalg.hpp"
#include "poly.hpp"

namespace orbq {

// Dense matrix over F or E with Local entries.
class Mat {
public:
    Mat() = default;
    Mat(FieldId fid, int rows, int cols)
        : fid_(fid), r_(rows), c_(cols), a_(size_t(rows) * cols, Local::zero(fid)) {}

    static Mat identity(FieldId fid, int n);
    static Mat scalar(FieldId fid, int n, const Local& s);

    FieldId field() const { return fid_; }
    int rows() const { return r_; }
    int cols() const { return c_; }

    Local& at(int i, int j) { return a_[size_t(i) * c_ + j]; }
    const Local& at(int i, int j) const { return a_[size_t(i) * c_ + j]; }

    Mat operator+(const Mat& o) const;
    Mat operator-(const Mat& o) const;
    Mat operator*(const Mat& o) const;
    Mat operator*(const Local& s) const;

    Mat sigma() const; // entrywise Frobenius on coefficients (E only)
    Mat promoted() const;
    Mat demoted() const;
    Mat truncated(int order) const;
    Mat shifted(int k) const; // multiply by t^k

    bool integral() const;
    Local det() const;
    Poly charpoly() const; // det(T*I - *this)
    // inverse with divisions carried to `order`
    Mat inverse_to(int order) const;

    Mat hstack(const Mat& o) const;
    Mat rows_slice(int i0, int i1) const;
    // block-diagonal join
    static Mat diag_join(const Mat& a, const Mat& b);

    bool operator==(const Mat& o) const;
    std::string str() const;

private:
    FieldId fid_;
    int r_ = 0, c_ = 0;
    std::vector<Local> a_;
};

// matrix grammar: rows separated by ';', entries by ','
Mat parse_matrix(const std::string& text, FieldId fid);

// evaluate a polynomial with F-coefficients at a matrix (promoting as needed)
Mat eval_poly_at(const Poly& p, const Mat& x);

} // namespace orbq
