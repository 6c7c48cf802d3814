#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "cdfs/linalg.hpp"
#include "cdfs/qubit_space.hpp"

namespace cdfs {

struct SubspaceBasis {
  std::vector<StateVector> vectors;
  WeightSector sector;
  int dim() const { return static_cast<int>(vectors.size()); }
  Eigen::MatrixXcd as_columns() const {
    const int rows = sector.n > 0 ? hilbert_dim(sector.n)
                                  : (vectors.empty() ? 0 : static_cast<int>(vectors[0].amplitudes.size()));
    Eigen::MatrixXcd m(rows, dim());
    for (int c = 0; c < dim(); ++c) m.col(c) = vectors[c].amplitudes;
    return m;
  }
};

struct IrrepTower {
  double j_label = 0.0;                // spin of the irrep, (n-2k)/2
  std::vector<StateVector> ladder;     // lowest weight first, length 2j+1
  const StateVector& lowest_weight() const { return ladder.front(); }
};

struct CdfsResult {
  SubspaceBasis basis;
  int iterations = 0;  // fixpoint refinement steps
};

inline std::uint64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  if (n > 62) throw std::out_of_range("binomial: n too large for exact 64-bit path");
  if (k > n - k) k = n - k;
  std::uint64_t c = 1;
  for (int i = 1; i <= k; ++i) {
    // multiply before divide; the running product is always divisible by i
    c = c * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
  }
  return c;
}

// dim V(k) = C(n,k) - C(n,k-1); zero once k-excitation sectors stop
// bringing new lowest-weight vectors (2k > n+1).
inline long long df_dimension(int n, int k) {
  if (k > n || k < 0) throw std::out_of_range("df_dimension: k out of range");
  const long long d = static_cast<long long>(binomial(n, k)) -
                      static_cast<long long>(binomial(n, k - 1));
  return d > 0 ? d : 0;
}

inline long long strong_collective_dimension(int n) {
  if (n % 2 != 0) throw std::invalid_argument("strong_collective_dimension needs even n");
  return df_dimension(n, n / 2);
}

namespace detail {

// Kernel of J restricted to W(k), as sector-coordinate columns.
inline Eigen::MatrixXcd lowest_weight_coeffs(int n, int k) {
  if (k == 0) return Eigen::MatrixXcd::Identity(1, 1);
  const Eigen::MatrixXd block = collective_lowering_block(n, k);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(block, Eigen::ComputeFullV);
  const int rank = linalg::numeric_rank(svd.singularValues());
  return svd.matrixV().rightCols(block.cols() - rank).cast<cplx>();
}

inline void require_sector_hamiltonian(const Eigen::MatrixXcd& h, int n) {
  const double scale = std::max(1.0, h.cwiseAbs().maxCoeff());
  if ((h - h.adjoint()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw std::invalid_argument("hamiltonian must be Hermitian");
  const Operator jz = collective_op(n, CollectiveKind::Jz);
  if ((jz * h - h * jz).cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw std::invalid_argument("hamiltonian must commute with J_z");
}

}  // namespace detail

inline SubspaceBasis df_subspace(int n, int k) {
  SubspaceBasis out;
  out.sector = weight_sector(n, k);
  const Eigen::MatrixXcd coeffs = detail::lowest_weight_coeffs(n, k);
  for (Eigen::Index c = 0; c < coeffs.cols(); ++c)
    out.vectors.push_back(embed(out.sector, linalg::canonical_phase(coeffs.col(c))));
  return out;
}

inline std::vector<IrrepTower> irrep_decompose(int n) {
  if (n > 8) throw std::out_of_range("irrep_decompose capped at n = 8");
  std::vector<IrrepTower> towers;
  const Operator jdag = collective_op(n, CollectiveKind::Jdag);
  for (int k = 0; 2 * k <= n; ++k) {
    const SubspaceBasis seeds = df_subspace(n, k);
    for (const StateVector& seed : seeds.vectors) {
      IrrepTower tower;
      tower.j_label = 0.5 * (n - 2 * k);
      tower.ladder.push_back(seed);
      Eigen::VectorXcd v = seed.amplitudes;
      for (int m = 1; m <= n - 2 * k; ++m) {
        v = jdag * v;
        v /= v.norm();  // raising within a tower never annihilates below the top
        tower.ladder.push_back(StateVector{v, k + m});
      }
      towers.push_back(std::move(tower));
    }
  }
  return towers;
}

// Maximal H_S-invariant subspace of V(k): the joint kernel of
// J H^m over m = 0..dimW(k)-1, taken inside W(k).  H is normalized first
// so the powers stay conditioned.
inline CdfsResult cdf_subspace(int n, int k, const Operator& hamiltonian) {
  detail::require_sector_hamiltonian(hamiltonian, n);
  CdfsResult result;
  result.basis.sector = weight_sector(n, k);
  const int dw = result.basis.sector.dim();

  const Eigen::MatrixXcd vc = detail::lowest_weight_coeffs(n, k);
  if (vc.cols() == 0) return result;

  Eigen::MatrixXcd hw = sector_block(hamiltonian, result.basis.sector);
  const double hnorm = linalg::spectral_norm(hw);
  if (hnorm > 0) hw /= hnorm;
  const Eigen::MatrixXcd lower =
      k == 0 ? Eigen::MatrixXcd::Zero(0, dw)
             : Eigen::MatrixXcd(collective_lowering_block(n, k).cast<cplx>());

  // observability-style stacked constraints; all factors are O(1) after
  // the normalization, so the operator scale anchors the rank cut
  const double constraint_scale = std::max(1.0, linalg::spectral_norm(lower));
  Eigen::MatrixXcd stacked(lower.rows() * dw, vc.cols());
  Eigen::MatrixXcd power = vc;
  for (int m = 0; m < dw; ++m) {
    stacked.block(m * lower.rows(), 0, lower.rows(), vc.cols()) = lower * power;
    power = hw * power;
  }
  const Eigen::MatrixXcd joint = vc * linalg::nullspace(stacked, linalg::kRankRtol, constraint_scale);

  // fixpoint cross-check supplies the iteration count
  Eigen::MatrixXcd q = linalg::orthonormalize(vc);
  while (q.cols() > 0) {
    const Eigen::MatrixXcd residual = hw * q - q * (q.adjoint() * (hw * q));
    const Eigen::MatrixXcd keep = linalg::nullspace(residual, linalg::kRankRtol, 1.0);
    ++result.iterations;
    if (keep.cols() == q.cols()) break;
    q = linalg::orthonormalize(q * keep);
  }

  const Eigen::MatrixXcd basis = linalg::orthonormalize(joint);
  for (Eigen::Index c = 0; c < basis.cols(); ++c)
    result.basis.vectors.push_back(
        embed(result.basis.sector, linalg::canonical_phase(basis.col(c))));
  return result;
}

inline bool verify_cdf_state(const StateVector& x, const Operator& hamiltonian,
                             double tol = 1e-8) {
  const int dim = static_cast<int>(x.amplitudes.size());
  int n = 0;
  while ((1 << n) < dim) ++n;
  if ((1 << n) != dim) throw std::invalid_argument("state length is not a power of two");
  detail::require_sector_hamiltonian(hamiltonian, n);

  int steps = dim;
  if (x.excitation) steps = weight_sector(n, *x.excitation).dim();

  Eigen::MatrixXcd h = hamiltonian;
  const double hnorm = linalg::spectral_norm(h);
  if (hnorm > 0) h /= hnorm;
  const Operator j = collective_op(n, CollectiveKind::J);

  Eigen::VectorXcd v = x.amplitudes;
  for (int m = 0; m < steps; ++m) {
    if ((j * v).norm() > tol) return false;
    v = h * v;
  }
  return true;
}

}  // namespace cdfs
