#include "lamebethe/polytuple.hpp"

#include <cmath>
#include <limits>

namespace lamebethe {

PolyTuple PolyTuple::from_coords(const Coords& t) {
  PolyTuple y;
  for (const auto& group : t) y.polys.push_back(Poly<Complex>::from_roots(group));
  return y;
}

Coords roots_of(const PolyTuple& y) {
  Coords out;
  for (const auto& p : y.polys) out.push_back(poly_roots(p));
  return out;
}

OffDiagonalReport check_off_diagonal(const WeightSystem& ws, const PolyTuple& y,
                                     double separation) {
  if (y.rank() != ws.rank()) fail(ErrorCode::InvalidInput, "tuple must have r polynomials");
  return check_off_diagonal(ws, roots_of(y), separation);
}

OffDiagonalReport check_off_diagonal(const WeightSystem& ws, const Coords& roots,
                                     double separation) {
  if (static_cast<int>(roots.size()) != ws.rank()) {
    fail(ErrorCode::InvalidInput, "roots must have r color groups");
  }
  const int rank = ws.rank();
  OffDiagonalReport report;
  auto violate = [&](int clause, int color, std::string detail, std::vector<Complex> bad) {
    report.ok = false;
    report.clause = clause;
    report.color = color;
    report.detail = std::move(detail);
    report.offending = std::move(bad);
  };
  const std::string roman[] = {"", "(i)", "(ii)", "(iii)"};
  for (int i = 0; i < rank && report.ok; ++i) {
    const auto& ri = roots[i];
    for (std::size_t a = 0; a < ri.size() && report.ok; ++a) {
      for (std::size_t b = a + 1; b < ri.size(); ++b) {
        if (std::abs(ri[a] - ri[b]) <= separation) {
          violate(1, i, roman[1] + " y_" + std::to_string(i + 1) + " has a multiple root",
                  {ri[a], ri[b]});
          break;
        }
      }
    }
  }
  for (int i = 0; i + 1 < rank && report.ok; ++i) {
    for (const auto& a : roots[i]) {
      for (const auto& b : roots[i + 1]) {
        if (std::abs(a - b) <= separation) {
          violate(2, i,
                  roman[2] + " y_" + std::to_string(i + 1) + " and y_" + std::to_string(i + 2) +
                      " have a common root",
                  {a, b});
          break;
        }
      }
      if (!report.ok) break;
    }
  }
  for (int i = 0; i < rank && report.ok; ++i) {
    for (int s = 0; s < ws.n() && report.ok; ++s) {
      if (ws.pairing(s, i) == Complex{}) continue;
      for (const auto& a : roots[i]) {
        if (std::abs(a - ws.z()[s]) <= separation) {
          violate(3, i,
                  roman[3] + " y_" + std::to_string(i + 1) + " vanishes at z_" +
                      std::to_string(s + 1),
                  {a, ws.z()[s]});
          break;
        }
      }
    }
  }
  return report;
}

}  // namespace lamebethe
