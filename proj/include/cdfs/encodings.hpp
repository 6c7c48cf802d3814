#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "cdfs/dynamics.hpp"
#include "cdfs/qubit_space.hpp"
#include "cdfs/structure.hpp"

namespace cdfs {

struct NamedBasis {
  int n = 0;
  std::vector<std::string> labels;
  std::vector<StateVector> states;

  const StateVector* find(const std::string& label) const {
    for (std::size_t i = 0; i < labels.size(); ++i)
      if (labels[i] == label) return &states[i];
    return nullptr;
  }
  const StateVector& state(const std::string& label) const {
    const StateVector* s = find(label);
    if (!s) throw std::invalid_argument("no named state '" + label + "'");
    return *s;
  }
};

namespace detail {

inline StateVector combine(int n, std::initializer_list<std::pair<const char*, double>> terms,
                           int excitation) {
  StateVector s;
  s.amplitudes = Eigen::VectorXcd::Zero(hilbert_dim(n));
  double norm2 = 0;
  for (const auto& [bits, w] : terms) {
    s.amplitudes(basis_index(bits)) += w;
    norm2 += w * w;
  }
  s.amplitudes /= std::sqrt(norm2);
  s.excitation = excitation;
  return s;
}

}  // namespace detail

// Six 3-qubit collective states.  b and c span V(1); e and f are their
// images one rung up the ladder, J^dag b = e and J^dag c = f with
// coefficient exactly 1.
inline NamedBasis three_qubit_basis() {
  NamedBasis nb;
  nb.n = 3;
  nb.labels = {"a", "b", "c", "d", "e", "f"};
  nb.states = {
      computational_state("000"),
      detail::combine(3, {{"100", 1}, {"010", 1}, {"001", -2}}, 1),
      detail::combine(3, {{"010", 1}, {"100", -1}}, 1),
      detail::combine(3, {{"100", 1}, {"010", 1}, {"001", 1}}, 1),
      detail::combine(3, {{"110", 2}, {"101", -1}, {"011", -1}}, 2),
      detail::combine(3, {{"011", 1}, {"101", -1}}, 2),
  };
  return nb;
}

// u = c/2 - (sqrt3/2) b, v = (sqrt3/2) c + b/2.  For b12 = b23 the state
// u is an exact H_S eigenvector and stays CDF.
inline std::pair<StateVector, StateVector> uv_states() {
  const NamedBasis nb = three_qubit_basis();
  const Eigen::VectorXcd b = nb.state("b").amplitudes;
  const Eigen::VectorXcd c = nb.state("c").amplitudes;
  const double s3 = std::sqrt(3.0) / 2.0;
  StateVector u{0.5 * c - s3 * b, 1};
  StateVector v{s3 * c + 0.5 * b, 1};
  return {u, v};
}

// Ten 4-qubit collective states: a..d carry one excitation, e..j two.
// i and j span the strong-collective DFS at k = 2.
inline NamedBasis four_qubit_basis() {
  NamedBasis nb;
  nb.n = 4;
  nb.labels = {"a", "b", "c", "d", "e", "f", "g", "h", "i", "j"};
  nb.states = {
      detail::combine(4, {{"1000", 1}, {"0100", 1}, {"0010", 1}, {"0001", 1}}, 1),
      detail::combine(4, {{"0001", 1}, {"0010", -1}}, 1),
      detail::combine(4, {{"0100", 1}, {"1000", -1}}, 1),
      detail::combine(4, {{"1000", 1}, {"0100", 1}, {"0010", -1}, {"0001", -1}}, 1),
      detail::combine(4, {{"1100", 1}, {"1010", 1}, {"1001", 1}, {"0110", 1}, {"0101", 1}, {"0011", 1}}, 2),
      detail::combine(4, {{"1100", 1}, {"0011", -1}}, 2),
      detail::combine(4, {{"0110", 1}, {"0101", 1}, {"1010", -1}, {"1001", -1}}, 2),
      detail::combine(4, {{"1001", 1}, {"1010", -1}, {"0101", 1}, {"0110", -1}}, 2),
      detail::combine(4, {{"0101", 1}, {"0110", -1}, {"1001", -1}, {"1010", 1}}, 2),
      detail::combine(4, {{"0011", 2}, {"1100", 2}, {"0101", -1}, {"1010", -1}, {"0110", -1}, {"1001", -1}}, 2),
  };
  return nb;
}

// Project H_S onto a list of same-sector named states.  Both the named
// coefficients and the sector Hamiltonian are exact, so this equals the
// projection of the full-space H_S for any Hermitian b.
inline Eigen::MatrixXcd named_block(const Eigen::MatrixXcd& b, const NamedBasis& basis,
                                    const std::vector<std::string>& labels) {
  if (labels.empty()) return {};
  const int k = basis.state(labels.front()).excitation.value();
  const WeightSector sector = weight_sector(basis.n, k);
  Eigen::MatrixXcd v(sector.dim(), labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const StateVector& s = basis.state(labels[i]);
    if (s.excitation != k) throw std::invalid_argument("named states span different sectors");
    v.col(i) = restrict_to(sector, s.amplitudes);
  }
  return v.adjoint() * sector_hamiltonian(b, basis.n, k) * v;
}

// 3x3 block of H_S over {b, c, d}.
inline Eigen::MatrixXcd three_qubit_H1(const Eigen::MatrixXcd& b) {
  return named_block(b, three_qubit_basis(), {"b", "c", "d"});
}

// Second-order transfer rate of c_u|u> + c_v|v> when b12 = b23, printed
// closed form.  Nonpositive; its magnitude is twice the energy variance.
inline double tau2_case_ii(double b12, double b13, double c_u, double c_v) {
  if (std::abs(c_u * c_u + c_v * c_v - 1.0) > 1e-12)
    throw std::invalid_argument("coefficients must be normalized");
  const double bracket = b13 * c_u * c_u - (b13 - 4.0 * b12) / 3.0 * c_v * c_v;
  return 2.0 * bracket * bracket - 2.0 * b13 * b13 * c_u * c_u -
         (2.0 / 3.0) * (6.0 * b12 * b12 - 4.0 * b12 * b13 + b13 * b13) * c_v * c_v;
}

struct FourQubitBlocks {
  Eigen::MatrixXcd one_exc;  // over {a, b, c, d}
  Eigen::MatrixXcd two_exc;  // over {e, f, g, h, i, j}
};

inline FourQubitBlocks four_qubit_blocks(const Eigen::MatrixXcd& b) {
  const NamedBasis nb = four_qubit_basis();
  FourQubitBlocks blocks;
  blocks.one_exc = named_block(b, nb, {"a", "b", "c", "d"});
  blocks.two_exc = named_block(b, nb, {"e", "f", "g", "h", "i", "j"});
  return blocks;
}

struct OmegaPair {
  double omega1 = 0;
  double omega2 = 0;
  double magnitude() const { return std::hypot(omega1, omega2); }
};

inline OmegaPair omega_pair(const Eigen::MatrixXcd& b) {
  const double b13 = b(0, 2).real(), b14 = b(0, 3).real();
  const double b23 = b(1, 2).real(), b24 = b(1, 3).real();
  return {(b14 - b13 - b23 + b24) / std::sqrt(2.0), (b13 + b14 - b23 - b24) / std::sqrt(2.0)};
}

// Logical pair in span{f, g, h}.  These are exact eigenvectors of the
// coupling (off-diagonal) part of the {f,g,h} block; the block's diagonal
// only contributes phase evolution, which the encoding absorbs.  Residuals
// below are measured against that coupling part.
struct OmegaEncoding {
  OmegaPair omega;
  bool degenerate = false;
  StateVector zero_l;
  StateVector one_l_plus;
  StateVector one_l_minus;
  double residual_zero = 0;
  double residual_plus = 0;
  double residual_minus = 0;
  std::string validity;
};

inline OmegaEncoding omega_encoding(const Eigen::MatrixXcd& b) {
  const NamedBasis nb = four_qubit_basis();
  const Eigen::VectorXcd f = nb.state("f").amplitudes;
  const Eigen::VectorXcd g = nb.state("g").amplitudes;
  const Eigen::VectorXcd h = nb.state("h").amplitudes;

  OmegaEncoding enc;
  enc.omega = omega_pair(b);
  const double w1 = enc.omega.omega1, w2 = enc.omega.omega2;
  const double s2 = w1 * w1 + w2 * w2;

  const Eigen::MatrixXcd block =
      named_block(b, nb, {"f", "g", "h"});
  Eigen::MatrixXcd coupling = block;
  coupling.diagonal().setZero();

  auto residual = [&coupling](const Eigen::Vector3cd& v) {
    const cplx mean = v.dot(coupling * v);
    return (coupling * v - mean * v).norm();
  };

  if (s2 <= 1e-14) {
    enc.degenerate = true;
    enc.zero_l = StateVector{g, 2};
    enc.one_l_plus = StateVector{h, 2};
    enc.one_l_minus = StateVector{h, 2};
    enc.residual_zero = residual(Eigen::Vector3cd(0, 1, 0));
    enc.residual_plus = enc.residual_minus = residual(Eigen::Vector3cd(0, 0, 1));
    enc.validity =
        "degenerate: omega1 = omega2 = 0 (b13 = b14 = b23 = b24), encoding direction "
        "undefined; returning the orthonormal pair {g, h}";
    return enc;
  }

  const double s = std::sqrt(s2);
  enc.zero_l = StateVector{(w1 * g - w2 * h) / s, 2};
  enc.one_l_plus = StateVector{(s * f + w2 * g + w1 * h) / (s * std::sqrt(2.0)), 2};
  enc.one_l_minus = StateVector{(-s * f + w2 * g + w1 * h) / (s * std::sqrt(2.0)), 2};
  enc.residual_zero = residual(Eigen::Vector3cd(0, w1 / s, -w2 / s));
  enc.residual_plus =
      residual(Eigen::Vector3cd(1 / std::sqrt(2.0), w2 / (s * std::sqrt(2.0)), w1 / (s * std::sqrt(2.0))));
  enc.residual_minus =
      residual(Eigen::Vector3cd(-1 / std::sqrt(2.0), w2 / (s * std::sqrt(2.0)), w1 / (s * std::sqrt(2.0))));
  enc.validity =
      "CDF against arbitrary real symmetric b until a quantum jump occurs; eigenvectors of "
      "the coupling part of the {f,g,h} block, diagonal phase evolution absorbed";
  return enc;
}

// Deterministic presentation order: descending maximum overlap with the
// given named states (used by the CLI for n = 3, 4).
inline SubspaceBasis align_to_named(SubspaceBasis basis, const std::vector<StateVector>& named) {
  auto key = [&named](const StateVector& v) {
    double best = 0;
    for (const StateVector& s : named)
      best = std::max(best, std::abs(s.amplitudes.dot(v.amplitudes)));
    return best;
  };
  std::stable_sort(basis.vectors.begin(), basis.vectors.end(),
                   [&key](const StateVector& x, const StateVector& y) { return key(x) > key(y); });
  return basis;
}

}  // namespace cdfs
