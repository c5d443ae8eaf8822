#pragma once

#include "matrix.hpp"

namespace orbq {

// Full-rank O-lattice in F^n or E^n, stored by its canonical column-echelon
// basis: upper triangular, pivot t^{d_j} at (j, j), entries right of a pivot
// reduced modulo the pivot power.  Two bases generate the same lattice iff
// their canonical forms are identical, so equality is structural.
class Lattice {
public:
    Lattice() = default;

    static Lattice standard(FieldId fid, int n, int scale = 0);
    // canonical basis of the O-span of the columns of gens (n x k, k >= n).
    // Errors: RankDeficient, InsufficientPrecision.
    static Lattice from_generators(const Mat& gens);

    FieldId field() const { return fid_; }
    int rank() const { return n_; }
    const Mat& basis() const { return b_; }
    const std::vector<int>& pivots() const { return d_; }
    long vdet() const; // sum of pivot exponents

    bool contains(const Lattice& sub) const;
    Lattice apply(const Mat& m) const; // canonical basis of m * L
    Lattice conj() const;              // entrywise sigma, O_E only
    Lattice scaled(int k) const;       // t^k L

    bool operator==(const Lattice& o) const;
    std::string key() const;
    std::string str() const { return b_.str(); }

private:
    FieldId fid_;
    int n_ = 0;
    Mat b_;
    std::vector<int> d_;
};

// length of L1/L2 as an O-module (O_E-length over E).  Errors: NotContained.
long lattice_index(const Lattice& L1, const Lattice& L2);

// O-module pair (plus, minus) of equal rank over F.
struct LatticePair {
    Lattice plus, minus;

    bool operator==(const LatticePair& o) const { return plus == o.plus && minus == o.minus; }
    std::string key() const { return plus.key() + "|" + minus.key(); }
};

} // namespace orbq
