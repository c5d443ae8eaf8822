#include "linalg.hpp"

#include "error.hpp"

namespace orbq {

std::vector<Local> charpoly_grid(const Grid& A, FieldId fid)
{
    size_t n = A.size();
    Local one = Local::one(fid);
    // C holds char(A_r) with C[i] the coefficient of T^{r-i}, C[0] = 1.
    std::vector<Local> C = {one};
    for (size_t r = 1; r <= n; ++r) {
        // Toeplitz column for the r-th principal minor:
        // v[0] = 1, v[1] = -a_rr, v[k] = -(R . M^{k-2} . S)
        std::vector<Local> v(r + 1, Local::zero(fid));
        v[0] = one;
        v[1] = -A[r - 1][r - 1];
        if (r >= 2) {
            std::vector<Local> s(r - 1);
            for (size_t i = 0; i < r - 1; ++i)
                s[i] = A[i][r - 1];
            for (size_t k = 2; k <= r; ++k) {
                Local dot = Local::zero(fid);
                for (size_t i = 0; i < r - 1; ++i)
                    dot = dot + A[r - 1][i] * s[i];
                v[k] = -dot;
                if (k == r)
                    break;
                std::vector<Local> s2(r - 1, Local::zero(fid));
                for (size_t i = 0; i < r - 1; ++i)
                    for (size_t j = 0; j < r - 1; ++j)
                        s2[i] = s2[i] + A[i][j] * s[j];
                s = std::move(s2);
            }
        }
        std::vector<Local> next(r + 1, Local::zero(fid));
        for (size_t i = 0; i <= r; ++i)
            for (size_t j = 0; j < C.size() && j <= i; ++j)
                next[i] = next[i] + v[i - j] * C[j];
        C = std::move(next);
    }
    // C[i] multiplies T^{n-i}; return ascending coefficients.
    std::vector<Local> out(n + 1, Local::zero(fid));
    for (size_t i = 0; i <= n; ++i)
        out[n - i] = C[i];
    return out;
}

Local det_grid(const Grid& A, FieldId fid)
{
    if (A.empty())
        return Local::one(fid);
    std::vector<Local> cp = charpoly_grid(A, fid);
    Local c0 = cp[0]; // det(-A)
    return A.size() % 2 == 0 ? c0 : -c0;
}

std::vector<Local> solve_linear(Grid A, std::vector<Local> b, FieldId fid, int prec)
{
    size_t n = A.size();
    std::vector<size_t> colperm(n);
    for (size_t i = 0; i < n; ++i)
        colperm[i] = i;
    for (size_t k = 0; k < n; ++k) {
        // minimal-valuation pivot over the remaining block
        size_t pi = n, pj = n;
        long best = LONG_MAX;
        for (size_t i = k; i < n; ++i)
            for (size_t j = k; j < n; ++j) {
                if (A[i][colperm[j]].is_zero())
                    continue;
                long v = A[i][colperm[j]].valuation();
                if (v < best) {
                    best = v;
                    pi = i;
                    pj = j;
                }
            }
        if (pi == n)
            fail(Err::RankDeficient, "singular system");
        std::swap(A[k], A[pi]);
        std::swap(b[k], b[pi]);
        std::swap(colperm[k], colperm[pj]);
        Local piv = A[k][colperm[k]];
        for (size_t i = k + 1; i < n; ++i) {
            Local& e = A[i][colperm[k]];
            if (e.is_zero())
                continue;
            Local factor = e.div(piv, prec);
            for (size_t j = k; j < n; ++j)
                A[i][colperm[j]] = A[i][colperm[j]] - factor * A[k][colperm[j]];
            b[i] = b[i] - factor * b[k];
        }
    }
    std::vector<Local> x(n, Local::zero(fid));
    for (size_t k = n; k-- > 0;) {
        Local acc = b[k];
        for (size_t j = k + 1; j < n; ++j)
            acc = acc - A[k][colperm[j]] * x[colperm[j]];
        x[colperm[k]] = acc.div(A[k][colperm[k]], prec);
    }
    return x;
}

} // namespace orbq
