#include "lamebethe/master.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "lamebethe/errors.hpp"

namespace lamebethe {

namespace {

std::string describe_color(int i, int j) {
  return "t^(" + std::to_string(i + 1) + ")_" + std::to_string(j + 1);
}

Complex checked_difference(Complex a, Complex b, const std::string& what) {
  const Complex d = a - b;
  if (d == Complex{}) fail(ErrorCode::SingularConfiguration, what + " vanishes");
  return d;
}

std::vector<int> offsets(const WeightSystem& ws) {
  std::vector<int> off(ws.rank() + 1, 0);
  for (int i = 0; i < ws.rank(); ++i) off[i + 1] = off[i] + ws.l().entries[i];
  return off;
}

}  // namespace

void check_shape(const WeightSystem& ws, const Coords& t) {
  if (static_cast<int>(t.size()) != ws.rank()) {
    fail(ErrorCode::InvalidInput, "coordinates must have r color groups");
  }
  for (int i = 0; i < ws.rank(); ++i) {
    if (static_cast<int>(t[i].size()) != ws.l().entries[i]) {
      fail(ErrorCode::InvalidInput,
           "color group " + std::to_string(i + 1) + " must have l_i entries");
    }
  }
}

std::vector<Complex> flatten(const Coords& t) {
  std::vector<Complex> flat;
  for (const auto& group : t) flat.insert(flat.end(), group.begin(), group.end());
  return flat;
}

Coords unflatten(const WeightSystem& ws, const std::vector<Complex>& flat) {
  if (static_cast<int>(flat.size()) != ws.total_l()) {
    fail(ErrorCode::InvalidInput, "flat coordinate vector has the wrong length");
  }
  Coords t(ws.rank());
  auto it = flat.begin();
  for (int i = 0; i < ws.rank(); ++i) {
    t[i].assign(it, it + ws.l().entries[i]);
    it += ws.l().entries[i];
  }
  return t;
}

Complex log_master(const WeightSystem& ws, const Coords& t) {
  check_shape(ws, t);
  const int r = ws.rank();
  Complex total{};
  for (int i = 0; i < r; ++i) {
    for (std::size_t j = 0; j < t[i].size(); ++j) {
      const Complex x = t[i][j];
      for (int s = 0; s < ws.n(); ++s) {
        const Complex p = ws.pairing(s, i);
        if (p == Complex{}) continue;
        total -= p * std::log(checked_difference(x, ws.z()[s],
                                                 describe_color(i, j) + " - z_" +
                                                     std::to_string(s + 1)));
      }
      for (std::size_t k = j + 1; k < t[i].size(); ++k) {
        total += 2.0 * std::log(checked_difference(
                           x, t[i][k], describe_color(i, j) + " - " + describe_color(i, k)));
      }
      if (i + 1 < r) {
        for (std::size_t k = 0; k < t[i + 1].size(); ++k) {
          total -= std::log(checked_difference(
              x, t[i + 1][k], describe_color(i, j) + " - " + describe_color(i + 1, k)));
        }
      }
    }
  }
  return total;
}

std::vector<Complex> bae_residual(const WeightSystem& ws, const Coords& t) {
  check_shape(ws, t);
  const int r = ws.rank();
  std::vector<Complex> out;
  out.reserve(ws.total_l());
  for (int i = 0; i < r; ++i) {
    for (std::size_t j = 0; j < t[i].size(); ++j) {
      const Complex x = t[i][j];
      Complex acc{};
      for (int s = 0; s < ws.n(); ++s) {
        const Complex p = ws.pairing(s, i);
        if (p == Complex{}) continue;
        acc += p / checked_difference(
                       x, ws.z()[s], describe_color(i, j) + " - z_" + std::to_string(s + 1));
      }
      for (std::size_t k = 0; k < t[i].size(); ++k) {
        if (k == j) continue;
        acc -= 2.0 / checked_difference(
                         x, t[i][k], describe_color(i, j) + " - " + describe_color(i, k));
      }
      for (int nb : {i - 1, i + 1}) {
        if (nb < 0 || nb >= r) continue;
        for (std::size_t k = 0; k < t[nb].size(); ++k) {
          acc += 1.0 / checked_difference(
                           x, t[nb][k], describe_color(i, j) + " - " + describe_color(nb, k));
        }
      }
      out.push_back(acc);
    }
  }
  return out;
}

Eigen::MatrixXcd bae_jacobian(const WeightSystem& ws, const Coords& t) {
  check_shape(ws, t);
  const int r = ws.rank();
  const auto off = offsets(ws);
  Eigen::MatrixXcd jac = Eigen::MatrixXcd::Zero(ws.total_l(), ws.total_l());
  for (int i = 0; i < r; ++i) {
    for (std::size_t j = 0; j < t[i].size(); ++j) {
      const int row = off[i] + static_cast<int>(j);
      const Complex x = t[i][j];
      Complex diag{};
      for (int s = 0; s < ws.n(); ++s) {
        const Complex p = ws.pairing(s, i);
        if (p == Complex{}) continue;
        const Complex d = checked_difference(x, ws.z()[s], "t - z");
        diag -= p / (d * d);
      }
      for (std::size_t k = 0; k < t[i].size(); ++k) {
        if (k == j) continue;
        const Complex d = checked_difference(x, t[i][k], "t - t");
        const Complex w = 2.0 / (d * d);
        diag += w;
        jac(row, off[i] + static_cast<int>(k)) = -w;
      }
      for (int nb : {i - 1, i + 1}) {
        if (nb < 0 || nb >= r) continue;
        for (std::size_t k = 0; k < t[nb].size(); ++k) {
          const Complex d = checked_difference(x, t[nb][k], "t - t'");
          const Complex w = 1.0 / (d * d);
          diag -= w;
          jac(row, off[nb] + static_cast<int>(k)) = w;
        }
      }
      jac(row, row) = diag;
    }
  }
  return jac;
}

double max_norm(const std::vector<Complex>& v) {
  double m = 0.0;
  for (const auto& x : v) m = std::max(m, std::abs(x));
  return m;
}

std::string canonicalize(const Coords& t, double quantum) {
  std::ostringstream key;
  for (std::size_t i = 0; i < t.size(); ++i) {
    std::vector<std::pair<long long, long long>> cells;
    cells.reserve(t[i].size());
    for (const auto& x : t[i]) {
      cells.emplace_back(std::llround(x.real() / quantum), std::llround(x.imag() / quantum));
    }
    std::sort(cells.begin(), cells.end());
    key << 'c' << i << '[';
    for (const auto& [re, im] : cells) key << '(' << re << ',' << im << ')';
    key << ']';
  }
  return key.str();
}

double jacobian_conditioning(const WeightSystem& ws, const Coords& t) {
  if (ws.total_l() == 0) return 1.0;
  const Eigen::JacobiSVD<Eigen::MatrixXcd> svd(bae_jacobian(ws, t));
  const auto& sv = svd.singularValues();
  const double largest = sv(0);
  if (largest == 0.0) return 0.0;
  return sv(sv.size() - 1) / largest;
}

}  // namespace lamebethe
