#pragma once

#include "enumerate.hpp"

namespace orbq {

// Exact element of Z[q^s, q^{-s}]: finite map exponent -> integer coefficient.
class QsLaurent {
public:
    QsLaurent() = default;

    static QsLaurent zero() { return {}; }
    static QsLaurent monomial(int k, long long c);

    const std::map<int, long long>& coeffs() const { return c_; }
    bool is_zero() const { return c_.empty(); }
    long long coeff(int k) const;

    void add_term(int k, long long c);
    QsLaurent operator+(const QsLaurent& o) const;
    QsLaurent operator*(const QsLaurent& o) const;
    QsLaurent shifted(int k) const;  // multiply by q^{ks}
    QsLaurent negated_s() const;     // s -> -s

    bool operator==(const QsLaurent& o) const { return c_ == o.c_; }

    long long value_at_zero() const;      // sum of coefficients
    long long derivative_log_q() const;   // sum k * c_k
    // smallest j >= 0 with sum k^j c_k != 0; nullopt for the zero polynomial
    std::optional<int> vanishing_order(int cap = 64) const;

    std::string str() const;

private:
    std::map<int, long long> c_;
};

enum class Lambda { Zero, Half };

inline int epsilon_of(Lambda l) { return l == Lambda::Half ? 1 : 0; }

// gamma(x) = 1 + z with z = antidiag(x, 1); lambda selects the test function
struct LinearRep {
    int n = 0;
    Mat x; // over F
    Lambda lambda = Lambda::Half;
};

// g(x) = 1 + x * varpi with varpi^2 = pi^{2 lambda}
struct QuaternionRep {
    int n = 0;
    Mat x; // over E
    Lambda lambda = Lambda::Half;
};

enum class IndexOrientation { Difference, Sum };

struct TransferFactor {
    int sign = 1;  // +1 or -1
    int exponent = 0;
};

// Normative block formula: split gamma(x)(L+ ⊕ L-) back into plus/minus
// parts and read the sign and q^s-exponent off determinant valuations.
// Errors: NotLattice when the image fails to split.
TransferFactor transfer_block(const Mat& x, const LatticePair& pair);

// Index formula cross-check; orientation selects how the two indices combine
// into the exponent.  Errors: NotContained.
TransferFactor transfer_indices(const Mat& x, const LatticePair& pair,
                                IndexOrientation orient);

struct OrbResult {
    QsLaurent poly;
    int window = 0;
    bool window_stable = false;
    size_t terms = 0;          // enumerated pairs/lattices
    bool cross_checked = true; // block vs index transfer factors agreed
};

struct OrbConfig {
    EnumConfig enumeration;
    IndexOrientation orientation = IndexOrientation::Difference;
    bool cross_check = true;
};

// Orb(gamma(x), f'_lambda, s) as an exact q^s-Laurent polynomial.
// lambda = 1/2: q^{-ns}-prefactored sum over L(x/pi); empty enumeration
// gives the zero polynomial.  lambda = 0: requires x topologically nilpotent.
OrbResult orb_linear(const LinearRep& rep, const OrbConfig& cfg);

// Orb(gamma, 1_Par, s) = q^{ns} Orb(gamma, f'_{1/2}, s)
OrbResult orb_par(const LinearRep& rep, const OrbConfig& cfg);

struct CountResult {
    long long count = 0;
    int window = 0;
    bool window_stable = false;
    bool vanished = false; // non-integral case short-circuited to 0
};

// Orb(g(x), 1_{GL_n(O_B)}): lattice count, multiplied across the Hensel
// split of x sigma(x).  lambda = 1/2 accepts any x (returns 0 when
// x sigma(x) is not integral); lambda = 0 requires it topologically nilpotent.
CountResult orb_quaternion(const QuaternionRep& rep, const OrbConfig& cfg);

// conjugation orbital integral: number of x-stable lattice classes
CountResult orb_conjugation(const Mat& x, const OrbConfig& cfg);

// twisted orbital integral: classes with x sigma(L) = L; requires
// x sigma(x) integral with unit determinant (else 0)
CountResult orb_twisted(const Mat& x, const OrbConfig& cfg);

std::pair<long long, long long> central_value_and_derivative(const QsLaurent& p);

} // namespace orbq
