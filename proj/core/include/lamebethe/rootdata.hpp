#pragma once

// Root-system bookkeeping for gl_{r+1}: weights in gl-coordinates
// m_{s,i} = <Lambda_s, e_{i,i}>, admissibility, the separating predicate and
// the PBW dimension counts that bound the number of critical-point orbits.
//
// Index conventions: colors (simple roots) are 0-based, color i stands for
// alpha_{i+1} = e*_{i+1,i+1} - e*_{i+2,i+2}. Weight rows have r+1 entries.

#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <gmpxx.h>

namespace lamebethe {

using Complex = std::complex<double>;

/// Guardrails for the exhaustive loops; both are CLI-configurable.
struct Caps {
  std::uint64_t separating = 10'000'000;
  std::uint64_t compositions = 100'000'000;
};

/// Integer tolerance used when complex inputs must be integral.
inline constexpr double kIntegerTolerance = 1e-9;

/// Returns the nearest integer if |Re v - k| < tol and |Im v| < tol.
std::optional<long long> as_integer(Complex v, double tol = kIntegerTolerance);

struct Multidegree {
  std::vector<int> entries;

  int rank() const { return static_cast<int>(entries.size()); }
  int total() const;
  bool is_zero() const { return total() == 0; }

  /// Throws InvalidInput on negative entries.
  static Multidegree make(std::vector<int> entries);
};

using WeightRow = std::vector<Complex>;

/// The full problem datum: singular points, weights and the multidegree.
/// `m_inf` is always derived, never supplied.
class WeightSystem {
 public:
  /// Validates shapes, distinct z and nonnegative l; throws InvalidInput.
  static WeightSystem make(int r, std::vector<Complex> z,
                           std::vector<WeightRow> m, std::vector<int> l);

  int rank() const { return r_; }
  int n() const { return static_cast<int>(z_.size()); }
  const std::vector<Complex>& z() const { return z_; }
  const std::vector<WeightRow>& m() const { return m_; }
  const WeightRow& m_inf() const { return m_inf_; }
  const Multidegree& l() const { return l_; }
  int total_l() const { return l_.total(); }

  /// (Lambda_s, alpha_i) = m_{s,i} - m_{s,i+1}.
  Complex pairing(int s, int color) const;
  /// (Lambda_inf, alpha_i).
  Complex inf_pairing(int color) const;

 private:
  int r_ = 0;
  std::vector<Complex> z_;
  std::vector<WeightRow> m_;
  Multidegree l_;
  WeightRow m_inf_;
};

/// m_inf[i] = sum_s m[s,i] - l_i + l_{i-1}, with l_0 = l_{r+1} = 0.
WeightRow derive_m_inf(const std::vector<WeightRow>& m, const Multidegree& l);

/// (Lambda, alpha_i) for a weight row; throws InvalidInput when i is not in
/// [0, row.size()-1).
Complex pair_weight_root(std::span<const Complex> row, int i);

/// Recovers l from sum_s Lambda_s - Lambda_inf = sum_i l_i alpha_i.
/// Throws NonAdmissible if the difference is not a nonnegative integral
/// combination of simple roots.
Multidegree admissible_from_sequences(const std::vector<WeightRow>& m,
                                      std::span<const Complex> m_inf);

struct SeparatingResult {
  bool separating = true;
  std::vector<int> witness;  // violating c when !separating
  Complex value{};           // the form evaluated at the witness
};

/// Checks (2 Lambda_inf + beta, beta) + 2 sum c_i != 0 for
/// beta = sum c_i alpha_i over all 0 <= c <= l, c != 0.
/// Throws ResourceLimit when prod(l_i + 1) - 1 exceeds caps.separating.
SeparatingResult is_separating(const WeightSystem& ws, const Caps& caps = {});

/// The form (2 Lambda_inf + beta, beta) + 2 sum c_i for one vector c.
Complex separating_form(std::span<const Complex> m_inf, std::span<const int> c);

/// Differences of consecutive entries are nonnegative integers.
bool is_dominant_integral(std::span<const Complex> weight,
                          double tol = kIntegerTolerance);

/// Positive roots e_{a,b}, a > b, as 0/1 vectors over the r colors.
std::vector<std::vector<int>> positive_roots(int r);

/// Number of PBW monomials of U(n_-) of weight l (Kostant partition
/// function), exact.
mpz_class kostant_partitions(int r, const Multidegree& l);

/// Kostant values for every v in the box 0 <= v <= l, row-major with the
/// last color varying fastest.
std::vector<mpz_class> kostant_table(int r, const Multidegree& l);

/// d(k, l) = dim U(n_-)^{(x) k}[l]. Throws InvalidInput for k < 1 and
/// ResourceLimit when the convolution work exceeds caps.compositions.
mpz_class d_dimension(int k, int r, const Multidegree& l,
                      const Caps& caps = {});

/// Multiplicity of L_{m_inf} in (x)_s L_{m_s} for sl_2 (iterated
/// Clebsch-Gordan).
mpz_class sl2_multiplicity(std::span<const int> m_s, int m_inf);

/// Fuchs-type bookkeeping: sum of the prescribed exponents at z_1..z_n and
/// infinity minus (n-1) r (r+1) / 2. Zero for admissible data.
Complex fuchs_defect(const WeightSystem& ws);

}  // namespace lamebethe
