#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>
#include <utility>
#include <vector>

#include "cdfs/linalg.hpp"
#include "cdfs/qubit_space.hpp"

namespace cdfs {

using DensityMatrix = Eigen::MatrixXcd;

// (a_ab) sets the nonunitary rates, (b_ab) the bath-induced unitary part.
// In collective mode a = (lambda/N) * ones, so lambda = N*a_entry is the
// single nonzero eigenvalue of (a_ab).
struct CouplingModel {
  Eigen::MatrixXcd a;
  Eigen::MatrixXcd b;
  std::optional<double> lambda;

  int qubits() const { return static_cast<int>(b.rows()); }

  static CouplingModel collective(int n, double lambda, Eigen::MatrixXcd b_matrix) {
    if (lambda < 0) throw std::invalid_argument("collective rate must be nonnegative");
    CouplingModel m;
    m.a = Eigen::MatrixXcd::Constant(n, n, lambda / n);
    m.b = std::move(b_matrix);
    m.lambda = lambda;
    m.validate();
    return m;
  }

  static CouplingModel general(Eigen::MatrixXcd a_matrix, Eigen::MatrixXcd b_matrix) {
    CouplingModel m;
    m.a = std::move(a_matrix);
    m.b = std::move(b_matrix);
    m.validate();
    const int n = m.qubits();
    const cplx a00 = m.a(0, 0);
    if ((m.a.array() - a00).abs().maxCoeff() <= 1e-14 * std::max(1.0, std::abs(a00)))
      m.lambda = n * a00.real();
    return m;
  }

  void validate() const {
    if (a.rows() != a.cols() || b.rows() != b.cols() || a.rows() != b.rows())
      throw std::invalid_argument("coupling matrices must be square and same size");
    const double sa = std::max(1.0, a.cwiseAbs().maxCoeff());
    const double sb = std::max(1.0, b.cwiseAbs().maxCoeff());
    if ((a - a.adjoint()).cwiseAbs().maxCoeff() > 1e-12 * sa)
      throw std::invalid_argument("coupling matrix a must be Hermitian");
    if ((b - b.adjoint()).cwiseAbs().maxCoeff() > 1e-12 * sb)
      throw std::invalid_argument("coupling matrix b must be Hermitian");
  }
};

// Deterministic across platforms: raw mt19937_64 bits mapped to [-1,1).
inline Eigen::MatrixXcd random_symmetric_b(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto draw = [&rng]() {
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    return 2.0 * u - 1.0;
  };
  Eigen::MatrixXcd b = Eigen::MatrixXcd::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) b(i, j) = b(j, i) = draw();
  return b;
}

inline Operator system_hamiltonian(const CouplingModel& model, int n) {
  if (model.qubits() != n) throw std::invalid_argument("model size does not match qubit count");
  std::vector<Operator> plus(n), minus(n);
  for (int i = 0; i < n; ++i) {
    plus[i] = single_qubit_op(n, i + 1, PauliKind::plus);
    minus[i] = single_qubit_op(n, i + 1, PauliKind::minus);
  }
  Operator h = Operator::Zero(hilbert_dim(n), hilbert_dim(n));
  for (int al = 0; al < n; ++al)
    for (int be = 0; be < n; ++be)
      if (model.b(al, be) != cplx(0.0)) h += model.b(al, be) * (plus[al] * minus[be]);
  return h;
}

// H_S restricted to W(k), built directly from (b_ab) by moving one
// excitation at a time; independent of the full-space construction.
// Sector indices ascend, so at k = 1 the basis order is (qubit n excited,
// ..., qubit 1 excited): the block is (b_ab) under that qubit reversal.
inline Eigen::MatrixXcd sector_hamiltonian(const Eigen::MatrixXcd& b, int n, int k) {
  const WeightSector sector = weight_sector(n, k);
  std::vector<int> pos(hilbert_dim(n), -1);
  for (int r = 0; r < sector.dim(); ++r) pos[sector.basis_indices[r]] = r;
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(sector.dim(), sector.dim());
  for (int c = 0; c < sector.dim(); ++c) {
    const int idx = sector.basis_indices[c];
    for (int be = 1; be <= n; ++be) {
      const int mb = qubit_mask(n, be);
      if (!(idx & mb)) continue;
      const int mid = idx ^ mb;
      for (int al = 1; al <= n; ++al) {
        const int ma = qubit_mask(n, al);
        if (mid & ma) continue;
        h(pos[mid | ma], c) += b(al - 1, be - 1);
      }
    }
  }
  return h;
}

// Full Lindblad generator.  Dissipator in the standard half convention:
//   L_D[rho] = sum_ab a_ab (S_b rho S_a^dag - 1/2 {S_a^dag S_b, rho}),
// which with a = (lambda/N) X reproduces the one-excitation determinant
// closed form exactly.
struct JumpChannel {
  double rate = 0.0;  // eigenvalue of (a_ab)
  Operator op;        // L = sum_b conj(v_b) sigma_{b-}
  Operator op_dag;
};

struct Lindbladian {
  int n = 0;
  Operator h;
  Eigen::MatrixXcd a;
  std::vector<Operator> s;          // sigma_{i-}
  std::vector<JumpChannel> jumps;   // spectral form of the double sum over (a_ab)
  Operator damping;                 // K = sum_ab a_ab S_a^dag S_b

  Eigen::MatrixXcd dissipator(const DensityMatrix& rho) const {
    if (jumps.empty()) return Eigen::MatrixXcd::Zero(rho.rows(), rho.cols());
    Eigen::MatrixXcd out = -0.5 * (damping * rho + rho * damping);
    for (const JumpChannel& j : jumps) out += j.rate * (j.op * rho * j.op_dag);
    return out;
  }

  Eigen::MatrixXcd apply(const DensityMatrix& rho) const {
    const cplx i(0.0, 1.0);
    return -i * (h * rho - rho * h) + dissipator(rho);
  }

  // conservative bound on the generator's spectral scale, for the step guard
  double scale() const {
    double rates = 0.0;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(a);
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
      rates += std::abs(es.eigenvalues()(i));
    return 2.0 * linalg::spectral_norm(h) + 2.0 * n * rates;
  }
};

inline Lindbladian make_lindbladian(const CouplingModel& model, int n) {
  model.validate();
  Lindbladian l;
  l.n = n;
  l.h = system_hamiltonian(model, n);
  l.a = model.a;
  l.s.resize(n);
  for (int i = 0; i < n; ++i) l.s[i] = single_qubit_op(n, i + 1, PauliKind::minus);

  // diagonalizing (a_ab) turns the n^2-term double sum into at most n
  // jump channels; uniform damping leaves a single channel J/sqrt(n)
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(model.a);
  const double amax = es.eigenvalues().cwiseAbs().maxCoeff();
  l.damping = Operator::Zero(hilbert_dim(n), hilbert_dim(n));
  for (int mu = 0; mu < n; ++mu) {
    const double rate = es.eigenvalues()(mu);
    if (std::abs(rate) <= 1e-15 * std::max(amax, 1.0)) continue;
    JumpChannel ch;
    ch.rate = rate;
    ch.op = Operator::Zero(hilbert_dim(n), hilbert_dim(n));
    for (int be = 0; be < n; ++be) ch.op += std::conj(es.eigenvectors()(be, mu)) * l.s[be];
    ch.op_dag = ch.op.adjoint();
    l.damping += rate * (ch.op_dag * ch.op);
    l.jumps.push_back(std::move(ch));
  }
  return l;
}

inline Eigen::MatrixXcd dissipator(const CouplingModel& model, const DensityMatrix& rho) {
  int n = 0;
  while ((1 << n) < rho.rows()) ++n;
  if ((1 << n) != rho.rows()) throw std::invalid_argument("density matrix is not on a qubit space");
  return make_lindbladian(model, n).dissipator(rho);
}

// Matrix form of the generator on vec(rho), column major.  With a sector
// pair (k_row, k_col) only terms mapping that operator block to itself are
// kept; quantum-jump feeding leaves the block, so the sector version is
// pure damping and not trace preserving.
inline Eigen::MatrixXcd liouvillian_matrix(const CouplingModel& model, int n,
                                           std::optional<std::pair<int, int>> sector = {}) {
  const cplx i(0.0, 1.0);
  if (!sector) {
    const Lindbladian l = make_lindbladian(model, n);
    const int d = hilbert_dim(n);
    const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(d, d);
    Eigen::MatrixXcd m = -i * (linalg::kron(id, l.h) - linalg::kron(l.h.transpose(), id));
    m -= 0.5 * (linalg::kron(id, l.damping) + linalg::kron(l.damping.transpose(), id));
    for (int al = 0; al < n; ++al)
      for (int be = 0; be < n; ++be)
        if (model.a(al, be) != cplx(0.0))
          m += model.a(al, be) * linalg::kron(l.s[al].conjugate(), l.s[be]);
    return m;
  }

  const auto [k_row, k_col] = *sector;
  if (k_row < 0 || k_row > n || k_col < 0 || k_col > n)
    throw std::invalid_argument("invalid excitation sector");
  const Eigen::MatrixXcd h1 = sector_hamiltonian(model.b, n, k_row);
  const Eigen::MatrixXcd h2 = sector_hamiltonian(model.b, n, k_col);
  // the damping operator K = sum a_ab S_a^dag S_b moves excitations like
  // H_S does, so its sector blocks follow the same direct construction
  const Eigen::MatrixXcd k1 = sector_hamiltonian(model.a, n, k_row);
  const Eigen::MatrixXcd k2 = sector_hamiltonian(model.a, n, k_col);
  const Eigen::MatrixXcd id1 = Eigen::MatrixXcd::Identity(h1.rows(), h1.rows());
  const Eigen::MatrixXcd id2 = Eigen::MatrixXcd::Identity(h2.rows(), h2.rows());
  return -i * (linalg::kron(id2, h1) - linalg::kron(h2.transpose(), id1)) -
         0.5 * (linalg::kron(id2, k1) + linalg::kron(k2.transpose(), id1));
}

struct Trajectory {
  std::vector<double> times;
  std::vector<DensityMatrix> states;
  std::vector<double> fidelity;  // against the initial state
  std::vector<double> trace;
  std::vector<double> purity;
};

inline double fidelity(const DensityMatrix& rho_u, const DensityMatrix& rho) {
  if (rho_u.rows() != rho.rows() || rho_u.cols() != rho.cols())
    throw std::invalid_argument("fidelity: dimension mismatch");
  return (rho_u * rho).trace().real();
}

inline DensityMatrix pure_density(const StateVector& psi) {
  return psi.amplitudes * psi.amplitudes.adjoint();
}

inline void require_physical(const DensityMatrix& rho) {
  const double scale = std::max(1.0, rho.cwiseAbs().maxCoeff());
  if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > 1e-10 * scale)
    throw std::invalid_argument("density matrix must be Hermitian");
  if (std::abs(rho.trace().real() - 1.0) > 1e-8 || std::abs(rho.trace().imag()) > 1e-10)
    throw std::invalid_argument("density matrix must have unit trace");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho);
  if (es.eigenvalues().minCoeff() < -1e-8)
    throw std::invalid_argument("density matrix must be positive semidefinite");
}

// Classical fixed-step RK4.  Deterministic; no adaptive control.  Records
// every record_stride-th step plus the endpoint.
inline Trajectory evolve(const DensityMatrix& rho0, const CouplingModel& model,
                         double t_final, double dt, int record_stride = 1) {
  if (t_final <= 0 || dt <= 0) throw std::invalid_argument("t_final and dt must be positive");
  if (record_stride < 1) throw std::invalid_argument("record_stride must be >= 1");
  require_physical(rho0);

  int n = 0;
  while ((1 << n) < rho0.rows()) ++n;
  if ((1 << n) != rho0.rows()) throw std::invalid_argument("density matrix is not on a qubit space");
  const Lindbladian l = make_lindbladian(model, n);

  const double scale = l.scale();
  if (dt * scale > 0.1) {
    std::ostringstream msg;
    msg << "time step too large for stability: dt * generator scale = " << dt * scale
        << " > 0.1 (generator scale " << scale << "; use dt <= " << 0.1 / scale << ")";
    throw std::invalid_argument(msg.str());
  }

  const long steps = std::lround(t_final / dt);
  Trajectory traj;
  DensityMatrix rho = rho0;
  auto record = [&](long step) {
    traj.times.push_back(step * dt);
    traj.states.push_back(rho);
    traj.fidelity.push_back(fidelity(rho, rho0));
    traj.trace.push_back(rho.trace().real());
    traj.purity.push_back((rho * rho).trace().real());
  };
  record(0);
  for (long step = 1; step <= steps; ++step) {
    const Eigen::MatrixXcd k1 = l.apply(rho);
    const Eigen::MatrixXcd k2 = l.apply(rho + (0.5 * dt) * k1);
    const Eigen::MatrixXcd k3 = l.apply(rho + (0.5 * dt) * k2);
    const Eigen::MatrixXcd k4 = l.apply(rho + dt * k3);
    rho += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (step % record_stride == 0 || step == steps) record(step);
  }
  return traj;
}

// Inverse square root of twice the energy variance; +inf when the state
// is (numerically) an eigenstate.
inline double tau2(const StateVector& psi, const Operator& hamiltonian) {
  const Eigen::VectorXcd hp = hamiltonian * psi.amplitudes;
  const double mean = psi.amplitudes.dot(hp).real();
  const double second = hp.squaredNorm();
  const double var = second - mean * mean;
  if (var < 1e-14) return std::numeric_limits<double>::infinity();
  return 1.0 / std::sqrt(2.0 * var);
}

inline Eigen::MatrixXcd steady_states(const Eigen::MatrixXcd& liouvillian) {
  if (liouvillian.rows() != liouvillian.cols())
    throw std::invalid_argument("liouvillian must be square");
  return linalg::nullspace(liouvillian);
}

}  // namespace cdfs
