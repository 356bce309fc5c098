#pragma once

#include <string>
#include <vector>

#include "lamebethe/master.hpp"
#include "lamebethe/poly.hpp"

namespace lamebethe {

/// Monic y_1..y_r; y_{r+1} = 1 is implicit.
struct PolyTuple {
  std::vector<Poly<Complex>> polys;

  int rank() const { return static_cast<int>(polys.size()); }

  /// y_i = prod_j (x - t^(i)_j).
  static PolyTuple from_coords(const Coords& t);
};

inline constexpr double kRootSeparation = 1e-8;

struct OffDiagonalReport {
  bool ok = true;
  int clause = 0;  // 1: multiple root, 2: common root of y_i, y_{i+1}, 3: y_i(z_s) = 0
  int color = -1;
  std::string detail;
  std::vector<Complex> offending;
};

/// Checks the three off-diagonality clauses; never throws on violation.
/// Shape problems (wrong rank) throw InvalidInput.
OffDiagonalReport check_off_diagonal(const WeightSystem& ws, const PolyTuple& y,
                                     double separation = kRootSeparation);

/// Same three clauses evaluated directly on color-grouped roots.
OffDiagonalReport check_off_diagonal(const WeightSystem& ws, const Coords& roots,
                                     double separation = kRootSeparation);

/// Roots of each y_i as color groups.
Coords roots_of(const PolyTuple& y);

}  // namespace lamebethe
