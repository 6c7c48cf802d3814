#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>

#include "cdfs/structure.hpp"

namespace cdfs {

namespace detail {

inline double lchoose(int n, int k) {
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

// Exact binomials up to n = 120 (c fits __int128; the running product is
// always divisible by i).
inline unsigned __int128 binom128(int n, int k) {
  if (k < 0 || k > n) return 0;
  if (n > 120) throw std::out_of_range("binom128: n too large for the exact path");
  if (k > n - k) k = n - k;
  unsigned __int128 c = 1;
  for (int i = 1; i <= k; ++i)
    c = c * static_cast<unsigned>(n - k + i) / static_cast<unsigned>(i);
  return c;
}

}  // namespace detail

// log of dim V(k) = C(n,k) - C(n,k-1) = C(n,k) (n-2k+1)/(n-k+1), in a form
// that never cancels.
inline double df_dimension_ln(int n, int k) {
  if (k < 0 || n - 2 * k + 1 <= 0) throw std::domain_error("zero-dimensional DF sector");
  return detail::lchoose(n, k) + std::log(static_cast<double>(n - 2 * k + 1)) -
         std::log(static_cast<double>(n - k + 1));
}

// logical qubits per physical qubit in sector k
inline double d_df(int n, int k) { return df_dimension_ln(n, k) / (n * std::numbers::ln2); }

inline double d_df_asymptotic(double r) {
  if (!(r > 0.0) || r > 0.5) throw std::domain_error("r must lie in (0, 1/2]");
  return -(r * std::log2(r) + (1.0 - r) * std::log2(1.0 - r));
}

// DF fraction of W(k); exact integer ratio when the binomials fit
inline double p_df(int n, int k) {
  if (k < 0 || 2 * k > n) throw std::domain_error("need 0 <= k <= n/2");
  if (n <= 62) {
    return static_cast<double>(df_dimension(n, k)) / static_cast<double>(binomial(n, k));
  }
  return static_cast<double>(n - 2 * k + 1) / static_cast<double>(n - k + 1);
}

inline double p_df_asymptotic(double r) {
  if (r < 0.0 || r > 0.5) throw std::domain_error("r must lie in [0, 1/2]");
  return (1.0 - 2.0 * r) / (1.0 - r);
}

inline double encoding_product(double r) { return d_df_asymptotic(r) * p_df_asymptotic(r); }

// argmax of d_df_asymptotic * p_df_asymptotic by golden-section search
inline double product_optimum() {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = 1e-6, b = 0.5;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = encoding_product(c), fd = encoding_product(d);
  while (b - a > 1e-10) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = encoding_product(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = encoding_product(d);
    }
  }
  return 0.5 * (a + b);
}

// number of spin-J irreps of n qubits, as the lowest-weight count
inline unsigned __int128 irrep_multiplicity_exact(int n, int j) {
  if (n % 2 != 0 || j < 0 || j > n / 2) throw std::domain_error("need even n and 0 <= J <= n/2");
  return detail::binom128(n, n / 2 - j) - detail::binom128(n, n / 2 - j - 1);
}

// the same count written as the closed-form summand
// (2J+1) n! / ((n/2+J+1)! (n/2-J)!)
inline unsigned __int128 irrep_multiplicity_summand(int n, int j) {
  if (n % 2 != 0 || j < 0 || j > n / 2) throw std::domain_error("need even n and 0 <= J <= n/2");
  return static_cast<unsigned __int128>(2 * j + 1) * detail::binom128(n, n / 2 - j) /
         static_cast<unsigned>(n / 2 + j + 1);
}

// DFS-to-leakage-target ratio, log-space with compensated summation; the
// exact path is the test oracle for n <= 120.
inline double p_df_jtot(int n, int j_tot) {
  if (n % 2 != 0) throw std::domain_error("p_df_jtot needs even n");
  if (j_tot < 1 || j_tot > n / 2) throw std::domain_error("need 1 <= j_tot <= n/2");

  const double ln_num = df_dimension_ln(n, n / 2);  // dim DFS(n) = mult(J = 0)
  double ln_max = -1e300;
  for (int j = 1; j <= j_tot; ++j)
    ln_max = std::max(ln_max, df_dimension_ln(n, n / 2 - j));
  double sum = 0.0, comp = 0.0;  // Kahan
  for (int j = 1; j <= j_tot; ++j) {
    const double term = std::exp(df_dimension_ln(n, n / 2 - j) - ln_max);
    const double y = term - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
  return std::exp(ln_num - ln_max - std::log(sum));
}

inline double p_df_jtot_exact(int n, int j_tot) {
  if (n % 2 != 0) throw std::domain_error("p_df_jtot needs even n");
  if (j_tot < 1 || j_tot > n / 2) throw std::domain_error("need 1 <= j_tot <= n/2");
  unsigned __int128 den = 0;
  for (int j = 1; j <= j_tot; ++j) den += irrep_multiplicity_exact(n, j);
  const long double num = static_cast<long double>(irrep_multiplicity_exact(n, 0));
  return static_cast<double>(num / static_cast<long double>(den));
}

}  // namespace cdfs
