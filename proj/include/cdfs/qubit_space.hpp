#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <bit>
#include <complex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace cdfs {

using cplx = std::complex<double>;
using Operator = Eigen::MatrixXcd;

// Qubit 1 is the leftmost tensor factor: bitstring b1..bn maps to
// index sum(b_i * 2^(n-i)).  |0> is the ground state, sigma_z|0> = -|0>.
inline int hilbert_dim(int n) {
  if (n < 1 || n > 24) throw std::out_of_range("qubit count out of range");
  return 1 << n;
}

inline int qubit_mask(int n, int i) {
  if (i < 1 || i > n) throw std::out_of_range("qubit index out of range");
  return 1 << (n - i);
}

struct StateVector {
  Eigen::VectorXcd amplitudes;
  std::optional<int> excitation;
};

struct WeightSector {
  int n = 0;
  int k = 0;
  std::vector<int> basis_indices;  // ascending, popcount == k
  int dim() const { return static_cast<int>(basis_indices.size()); }
  // J_z eigenvalue on every sector basis ket
  int weight() const { return -(n - 2 * k); }
};

inline int basis_index(const std::string& bits) {
  int idx = 0;
  for (char c : bits) {
    if (c != '0' && c != '1') throw std::invalid_argument("bitstring must be 0/1");
    idx = (idx << 1) | (c - '0');
  }
  return idx;
}

inline StateVector computational_state(const std::string& bits) {
  const int n = static_cast<int>(bits.size());
  StateVector s;
  s.amplitudes = Eigen::VectorXcd::Zero(hilbert_dim(n));
  s.amplitudes(basis_index(bits)) = 1.0;
  s.excitation = static_cast<int>(std::count(bits.begin(), bits.end(), '1'));
  return s;
}

enum class PauliKind { plus, minus, z };
enum class CollectiveKind { J, Jdag, Jz };

inline Operator single_qubit_op(int n, int i, PauliKind kind) {
  const int dim = hilbert_dim(n);
  const int mask = qubit_mask(n, i);
  Operator m = Operator::Zero(dim, dim);
  for (int col = 0; col < dim; ++col) {
    const bool excited = col & mask;
    switch (kind) {
      case PauliKind::minus:
        if (excited) m(col ^ mask, col) = 1.0;
        break;
      case PauliKind::plus:
        if (!excited) m(col | mask, col) = 1.0;
        break;
      case PauliKind::z:
        m(col, col) = excited ? 1.0 : -1.0;
        break;
    }
  }
  return m;
}

inline Operator collective_op(int n, CollectiveKind kind) {
  const int dim = hilbert_dim(n);
  Operator m = Operator::Zero(dim, dim);
  const PauliKind part = kind == CollectiveKind::J    ? PauliKind::minus
                         : kind == CollectiveKind::Jdag ? PauliKind::plus
                                                        : PauliKind::z;
  for (int i = 1; i <= n; ++i) m += single_qubit_op(n, i, part);
  return m;
}

inline WeightSector weight_sector(int n, int k) {
  if (k < 0 || k > n) throw std::out_of_range("excitation count out of range");
  WeightSector w;
  w.n = n;
  w.k = k;
  const int dim = hilbert_dim(n);
  for (int idx = 0; idx < dim; ++idx)
    if (std::popcount(static_cast<unsigned>(idx)) == k) w.basis_indices.push_back(idx);
  return w;
}

// J restricted to W(k), written as a map W(k) -> W(k-1).  Rows index
// W(k-1), columns index W(k); every entry is 0 or 1.  Avoids 2^n storage.
inline Eigen::MatrixXd collective_lowering_block(int n, int k) {
  if (k < 1 || k > n) throw std::out_of_range("excitation count out of range");
  const WeightSector lo = weight_sector(n, k - 1);
  const WeightSector hi = weight_sector(n, k);
  std::vector<int> pos(hilbert_dim(n), -1);
  for (int r = 0; r < lo.dim(); ++r) pos[lo.basis_indices[r]] = r;
  Eigen::MatrixXd block = Eigen::MatrixXd::Zero(lo.dim(), hi.dim());
  for (int c = 0; c < hi.dim(); ++c) {
    const int idx = hi.basis_indices[c];
    for (int i = 1; i <= n; ++i) {
      const int mask = qubit_mask(n, i);
      if (idx & mask) block(pos[idx ^ mask], c) = 1.0;
    }
  }
  return block;
}

// Embed a sector-coefficient vector into the full 2^n space.
inline StateVector embed(const WeightSector& sector, const Eigen::VectorXcd& coeffs) {
  if (coeffs.size() != sector.dim()) throw std::invalid_argument("coefficient length mismatch");
  StateVector s;
  s.amplitudes = Eigen::VectorXcd::Zero(hilbert_dim(sector.n));
  for (int i = 0; i < sector.dim(); ++i) s.amplitudes(sector.basis_indices[i]) = coeffs(i);
  s.excitation = sector.k;
  return s;
}

inline Eigen::VectorXcd restrict_to(const WeightSector& sector, const Eigen::VectorXcd& full) {
  Eigen::VectorXcd out(sector.dim());
  for (int i = 0; i < sector.dim(); ++i) out(i) = full(sector.basis_indices[i]);
  return out;
}

inline Operator sector_block(const Operator& full, const WeightSector& sector) {
  Operator out(sector.dim(), sector.dim());
  for (int r = 0; r < sector.dim(); ++r)
    for (int c = 0; c < sector.dim(); ++c)
      out(r, c) = full(sector.basis_indices[r], sector.basis_indices[c]);
  return out;
}

}  // namespace cdfs
