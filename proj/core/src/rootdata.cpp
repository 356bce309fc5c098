#include "lamebethe/rootdata.hpp"

#include <cmath>
#include <map>
#include <numeric>
#include <string>

#include "lamebethe/errors.hpp"

namespace lamebethe {

std::optional<long long> as_integer(Complex v, double tol) {
  const double nearest = std::round(v.real());
  if (std::abs(v.real() - nearest) < tol && std::abs(v.imag()) < tol) {
    return static_cast<long long>(nearest);
  }
  return std::nullopt;
}

int Multidegree::total() const {
  return std::accumulate(entries.begin(), entries.end(), 0);
}

Multidegree Multidegree::make(std::vector<int> entries) {
  for (int e : entries) {
    if (e < 0) fail(ErrorCode::InvalidInput, "multidegree entries must be >= 0");
  }
  return Multidegree{std::move(entries)};
}

WeightRow derive_m_inf(const std::vector<WeightRow>& m, const Multidegree& l) {
  const int r = l.rank();
  WeightRow out(r + 1, Complex{});
  for (const auto& row : m) {
    for (int i = 0; i <= r; ++i) out[i] += row[i];
  }
  for (int i = 0; i <= r; ++i) {
    const int li = i < r ? l.entries[i] : 0;
    const int prev = i > 0 ? l.entries[i - 1] : 0;
    out[i] += static_cast<double>(prev - li);
  }
  return out;
}

WeightSystem WeightSystem::make(int r, std::vector<Complex> z,
                                std::vector<WeightRow> m, std::vector<int> l) {
  if (r < 1) fail(ErrorCode::InvalidInput, "rank r must be >= 1");
  if (z.empty()) fail(ErrorCode::InvalidInput, "need at least one singular point");
  if (m.size() != z.size()) {
    fail(ErrorCode::InvalidInput, "m must have one row per singular point");
  }
  for (const auto& row : m) {
    if (static_cast<int>(row.size()) != r + 1) {
      fail(ErrorCode::InvalidInput, "each row of m must have r+1 entries");
    }
  }
  if (static_cast<int>(l.size()) != r) {
    fail(ErrorCode::InvalidInput, "l must have r entries");
  }
  for (std::size_t a = 0; a < z.size(); ++a) {
    for (std::size_t b = a + 1; b < z.size(); ++b) {
      if (z[a] == z[b]) fail(ErrorCode::InvalidInput, "singular points must be distinct");
    }
  }
  WeightSystem ws;
  ws.r_ = r;
  ws.z_ = std::move(z);
  ws.m_ = std::move(m);
  ws.l_ = Multidegree::make(std::move(l));
  ws.m_inf_ = derive_m_inf(ws.m_, ws.l_);
  return ws;
}

Complex WeightSystem::pairing(int s, int color) const {
  return pair_weight_root(m_.at(s), color);
}

Complex WeightSystem::inf_pairing(int color) const {
  return pair_weight_root(m_inf_, color);
}

Complex pair_weight_root(std::span<const Complex> row, int i) {
  if (i < 0 || i + 1 >= static_cast<int>(row.size())) {
    fail(ErrorCode::InvalidInput, "root index " + std::to_string(i) + " out of range");
  }
  return row[i] - row[i + 1];
}

Multidegree admissible_from_sequences(const std::vector<WeightRow>& m,
                                      std::span<const Complex> m_inf) {
  const int width = static_cast<int>(m_inf.size());
  if (width < 2) fail(ErrorCode::InvalidInput, "weights need at least two coordinates");
  for (const auto& row : m) {
    if (static_cast<int>(row.size()) != width) {
      fail(ErrorCode::InvalidInput, "row length mismatch");
    }
  }
  // diff = sum_s Lambda_s - Lambda_inf; in e* coordinates diff_j = l_j - l_{j-1}.
  std::vector<Complex> diff(m_inf.begin(), m_inf.end());
  for (auto& d : diff) d = -d;
  for (const auto& row : m) {
    for (int j = 0; j < width; ++j) diff[j] += row[j];
  }
  std::vector<int> l;
  Complex running{};
  for (int j = 0; j + 1 < width; ++j) {
    running += diff[j];
    auto li = as_integer(running);
    if (!li) {
      fail(ErrorCode::NonAdmissible,
           "l_" + std::to_string(j + 1) + " is not an integer");
    }
    if (*li < 0) {
      fail(ErrorCode::NonAdmissible, "l_" + std::to_string(j + 1) + " is negative");
    }
    l.push_back(static_cast<int>(*li));
  }
  running += diff[width - 1];
  if (!as_integer(running) || *as_integer(running) != 0) {
    fail(ErrorCode::NonAdmissible, "difference is not in the root lattice");
  }
  return Multidegree{std::move(l)};
}

Complex separating_form(std::span<const Complex> m_inf, std::span<const int> c) {
  const int r = static_cast<int>(c.size());
  Complex value{};
  int csum = 0;
  for (int j = 0; j <= r; ++j) {
    const int beta = (j < r ? c[j] : 0) - (j > 0 ? c[j - 1] : 0);
    value += (2.0 * m_inf[j] + static_cast<double>(beta)) * static_cast<double>(beta);
  }
  for (int ci : c) csum += ci;
  return value + 2.0 * csum;
}

SeparatingResult is_separating(const WeightSystem& ws, const Caps& caps) {
  const auto& l = ws.l().entries;
  std::uint64_t count = 1;
  for (int li : l) {
    count *= static_cast<std::uint64_t>(li) + 1;
    if (count - 1 > caps.separating) {
      fail(ErrorCode::ResourceLimit, "separating check exceeds the vector cap");
    }
  }
  std::vector<int> c(l.size(), 0);
  SeparatingResult result;
  // Odometer over the box, skipping c = 0.
  while (true) {
    std::size_t k = 0;
    while (k < c.size() && c[k] == l[k]) c[k++] = 0;
    if (k == c.size()) break;
    ++c[k];
    const Complex v = separating_form(ws.m_inf(), c);
    if (std::abs(v) <= kIntegerTolerance) {
      result.separating = false;
      result.witness = c;
      result.value = v;
      return result;
    }
  }
  return result;
}

bool is_dominant_integral(std::span<const Complex> weight, double tol) {
  for (std::size_t i = 0; i + 1 < weight.size(); ++i) {
    auto d = as_integer(weight[i] - weight[i + 1], tol);
    if (!d || *d < 0) return false;
  }
  return true;
}

std::vector<std::vector<int>> positive_roots(int r) {
  std::vector<std::vector<int>> roots;
  // e_{a,b} with a > b covers colors b..a-1 (0-based: b..a-1 with a in b+1..r).
  for (int b = 0; b < r; ++b) {
    for (int a = b + 1; a <= r; ++a) {
      std::vector<int> v(r, 0);
      for (int i = b; i < a; ++i) v[i] = 1;
      roots.push_back(std::move(v));
    }
  }
  return roots;
}

namespace {

struct Box {
  std::vector<int> dims;     // l_i + 1
  std::vector<std::size_t> strides;
  std::size_t size = 1;

  explicit Box(const Multidegree& l) {
    dims.reserve(l.entries.size());
    for (int li : l.entries) dims.push_back(li + 1);
    strides.assign(dims.size(), 1);
    for (int i = static_cast<int>(dims.size()) - 1; i >= 0; --i) {
      strides[i] = size;
      size *= static_cast<std::size_t>(dims[i]);
    }
  }

  std::vector<int> unflatten(std::size_t idx) const {
    std::vector<int> v(dims.size());
    for (std::size_t i = 0; i < dims.size(); ++i) {
      v[i] = static_cast<int>(idx / strides[i]);
      idx %= strides[i];
    }
    return v;
  }
};

}  // namespace

std::vector<mpz_class> kostant_table(int r, const Multidegree& l) {
  if (l.rank() != r) fail(ErrorCode::InvalidInput, "multidegree must have r entries");
  const Box box(l);
  std::vector<mpz_class> dp(box.size, 0);
  dp[0] = 1;
  for (const auto& root : positive_roots(r)) {
    std::size_t offset = 0;
    for (int i = 0; i < r; ++i) offset += root[i] * box.strides[i];
    for (std::size_t idx = 0; idx < box.size; ++idx) {
      const auto v = box.unflatten(idx);
      bool fits = true;
      for (int i = 0; i < r && fits; ++i) fits = v[i] >= root[i];
      if (fits) dp[idx] += dp[idx - offset];
    }
  }
  return dp;
}

mpz_class kostant_partitions(int r, const Multidegree& l) {
  return kostant_table(r, l).back();
}

mpz_class d_dimension(int k, int r, const Multidegree& l, const Caps& caps) {
  if (k < 1) fail(ErrorCode::InvalidInput, "tensor power k must be >= 1");
  if (l.rank() != r) fail(ErrorCode::InvalidInput, "multidegree must have r entries");
  const Box box(l);
  // Work per convolution round: sum over v of prod(v_i + 1).
  mpz_class work = k - 1;
  for (int li : l.entries) work *= mpz_class((li + 1) * (li + 2) / 2);
  if (work > mpz_class(std::to_string(caps.compositions))) {
    fail(ErrorCode::ResourceLimit, "d(k, l) convolution exceeds the composition cap");
  }
  const auto kostant = kostant_table(r, l);
  std::vector<mpz_class> acc = kostant;
  for (int round = 1; round < k; ++round) {
    const bool last = round + 1 == k;
    std::vector<mpz_class> next(box.size, 0);
    const std::size_t first = last ? box.size - 1 : 0;
    for (std::size_t vi = first; vi < box.size; ++vi) {
      const auto v = box.unflatten(vi);
      // Sum over w <= v of acc[w] * kostant[v - w].
      std::vector<int> w(v.size(), 0);
      while (true) {
        std::size_t wi = 0;
        std::size_t di = 0;
        for (std::size_t i = 0; i < v.size(); ++i) {
          wi += w[i] * box.strides[i];
          di += (v[i] - w[i]) * box.strides[i];
        }
        if (acc[wi] != 0 && kostant[di] != 0) next[vi] += acc[wi] * kostant[di];
        std::size_t j = 0;
        while (j < w.size() && w[j] == v[j]) w[j++] = 0;
        if (j == w.size()) break;
        ++w[j];
      }
    }
    acc = std::move(next);
  }
  return acc.back();
}

mpz_class sl2_multiplicity(std::span<const int> m_s, int m_inf) {
  for (int m : m_s) {
    if (m < 0) fail(ErrorCode::InvalidInput, "sl2 highest weights must be >= 0");
  }
  if (m_inf < 0) return 0;
  std::map<int, mpz_class> current{{0, 1}};
  for (int b : m_s) {
    std::map<int, mpz_class> next;
    for (const auto& [a, count] : current) {
      for (int j = std::abs(a - b); j <= a + b; j += 2) next[j] += count;
    }
    current = std::move(next);
  }
  auto it = current.find(m_inf);
  return it == current.end() ? mpz_class(0) : it->second;
}

Complex fuchs_defect(const WeightSystem& ws) {
  const int r = ws.rank();
  Complex total{};
  for (const auto& row : ws.m()) {
    for (int i = 0; i <= r; ++i) total += -row[i] + static_cast<double>(i);
  }
  for (int i = 0; i <= r; ++i) total += ws.m_inf()[i] - static_cast<double>(i);
  return total - static_cast<double>((ws.n() - 1) * r * (r + 1)) / 2.0;
}

}  // namespace lamebethe
