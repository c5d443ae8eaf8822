#pragma once

#include <vector>

#include "local.hpp"

namespace orbq {

using Grid = std::vector<std::vector<Local>>;

// Coefficients (ascending) of det(T*I - A), computed division-free
// (Samuelson-Berkowitz), so exact inputs give exact outputs.
std::vector<Local> charpoly_grid(const Grid& A, FieldId fid);

Local det_grid(const Grid& A, FieldId fid);

// Solve A x = b by Gaussian elimination with minimal-valuation pivoting,
// divisions carried to `prec`.  A must be square invertible.
std::vector<Local> solve_linear(Grid A, std::vector<Local> b, FieldId fid, int prec);

} // namespace orbq
