#include "lamebethe/jet.hpp"

#include <Eigen/Dense>

namespace lamebethe {

Jet jet_determinant(const std::vector<std::vector<Jet>>& m) {
  const std::size_t n = m.size();
  if (n == 0) return Jet::constant(1.0, 16);
  if (n == 1) return m[0][0];
  Jet acc;
  bool first = true;
  for (std::size_t col = 0; col < n; ++col) {
    std::vector<std::vector<Jet>> minor;
    for (std::size_t row = 1; row < n; ++row) {
      std::vector<Jet> r;
      for (std::size_t c = 0; c < n; ++c) {
        if (c != col) r.push_back(m[row][c]);
      }
      minor.push_back(std::move(r));
    }
    Jet term = m[0][col] * jet_determinant(minor);
    if (col % 2 == 1) term = -term;
    acc = first ? term : acc + term;
    first = false;
  }
  return acc;
}

Jet wronskian(const std::vector<Jet>& fs) {
  const std::size_t k = fs.size();
  std::vector<std::vector<Jet>> m(k);
  for (std::size_t j = 0; j < k; ++j) {
    Jet d = fs[j];
    for (std::size_t i = 0; i < k; ++i) {
      m[i].push_back(d);
      if (i + 1 < k) d = d.derivative();
    }
  }
  return jet_determinant(m);
}

std::complex<double> wronskian_values(
    const std::vector<std::vector<std::complex<double>>>& columns) {
  const auto k = static_cast<Eigen::Index>(columns.size());
  if (k == 0) return 1.0;
  Eigen::MatrixXcd m(k, k);
  for (Eigen::Index j = 0; j < k; ++j) {
    for (Eigen::Index i = 0; i < k; ++i) m(i, j) = columns[j][i];
  }
  return m.determinant();
}

}  // namespace lamebethe
