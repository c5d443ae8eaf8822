#pragma once

#include <optional>

#include "lattice.hpp"

namespace orbq {

struct EnumConfig {
    int prec = 40;            // working precision
    int window_override = -1; // fixed window when >= 0
    int window_growth = 6;    // extra attempts before WindowUnstable
    int max_rank = 3;         // subspace enumeration bound
};

// The etale algebra L = F[x] acting on F^n (or F[x sigma(x) pi^eps] on E^n):
// coprime factor data, idempotents and a free cocompact family of generators,
// one per field factor, with valuation exactly 1 in its factor.
struct TorusData {
    FieldId mat_field;
    int n = 0;
    Poly designated; // over F
    std::vector<LocalFactor> factors;
    std::vector<Mat> idem;      // truncated idempotent matrices
    std::vector<Mat> gen;       // per-factor generators
    std::vector<Mat> gen_inv;   // their inverses (truncated)
    std::vector<std::vector<int>> proj_rows; // row chart for each factor projection

    int num_factors() const { return int(factors.size()); }
};

TorusData torus_data(const Mat& x, const Poly& designated, const EnumConfig& cfg);

struct OrbitList {
    std::vector<LatticePair> pairs;  // for pair enumerations
    std::vector<Lattice> lattices;   // for single-lattice enumerations
    int window = 0;
    bool window_stable = false;

    size_t size() const { return pairs.empty() ? lattices.size() : pairs.size(); }
};

// Gamma-orbit representatives of {(L+, L-) : x L- <= L+ <= L-}.
// Empty when char(x) is not integral.  Errors: NotSeparable, WindowUnstable.
OrbitList enum_pairs(const Mat& x, const EnumConfig& cfg);

// Gamma-orbit representatives of {O_E-lattices L : x sigma(L) <= L}; with
// equal_only, of {L : x sigma(L) = L}.  Empty when char(x sigma(x)) is not
// integral over O_F.
OrbitList enum_sigma(const Mat& x, const EnumConfig& cfg, bool equal_only = false);

// Gamma-orbit representatives of {L : x L <= L} over F or E.
OrbitList enum_stable(const Mat& x, const EnumConfig& cfg);

// Gamma-normalized form of a lattice: the unique orbit member whose projected
// determinant valuations lie in [0, f_i).  Exposed for tests.
Lattice gamma_normalize(const Lattice& L, const TorusData& td);

// all x-stable lattices between t^M O^n and t^{-M} O^n; x needs integral
// entries.  Exposed for brute-force oracles and the unit-orbit identity check.
// With a gauge, descent is pruned to factor_vdet < f_i for every factor (the
// projected valuations only grow along sublattice descent, so every orbit with
// a gauge-box member in the window is still reached).
std::vector<Lattice> stable_lattices_window(const Mat& x, int M, const EnumConfig& cfg,
                                            const TorusData* gauge = nullptr);

// valuation of det restricted to the i-th factor block, divided by f_i;
// the grading by which the Gamma generators translate
long factor_vdet(const Lattice& L, const TorusData& td, int i);

} // namespace orbq
