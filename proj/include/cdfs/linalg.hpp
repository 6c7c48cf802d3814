#pragma once

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <cmath>
#include <stdexcept>

namespace cdfs::linalg {

// Singular values below rtol * sigma_max count as zero everywhere.
inline constexpr double kRankRtol = 1e-10;

inline Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

// scale guards against matrices that are zero up to roundoff, where the
// largest singular value is itself noise and a relative cut misreads it.
inline int numeric_rank(const Eigen::VectorXd& sv, double rtol = kRankRtol, double scale = 0.0) {
  if (sv.size() == 0) return 0;
  const double cut = rtol * std::max(sv(0), scale);  // sv sorted descending
  int r = 0;
  while (r < sv.size() && sv(r) > cut) ++r;
  return r;
}

// Orthonormal basis of the (right) null space, as columns.
inline Eigen::MatrixXcd nullspace(const Eigen::MatrixXcd& m, double rtol = kRankRtol,
                                  double scale = 0.0) {
  if (m.rows() == 0) {  // no constraints: whole domain
    Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(m.cols(), m.cols());
    return id;
  }
  if (m.cols() == 0) return m;
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m, Eigen::ComputeFullV);
  const int rank = numeric_rank(svd.singularValues(), rtol, scale);
  return svd.matrixV().rightCols(m.cols() - rank);
}

inline int kernel_rank(const Eigen::MatrixXcd& m, double rtol = kRankRtol) {
  if (m.rows() == 0 || m.cols() == 0) return static_cast<int>(m.cols());
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
  return static_cast<int>(m.cols()) - numeric_rank(svd.singularValues(), rtol);
}

// Orthonormalize columns, dropping any that are linearly dependent.
inline Eigen::MatrixXcd orthonormalize(const Eigen::MatrixXcd& cols, double rtol = kRankRtol) {
  if (cols.rows() == 0 || cols.cols() == 0) return cols;
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(cols, Eigen::ComputeThinU);
  const int rank = numeric_rank(svd.singularValues(), rtol);
  return svd.matrixU().leftCols(rank);
}

// Largest-magnitude entry made real positive; pins the global phase so
// printed bases are reproducible run to run.
inline Eigen::VectorXcd canonical_phase(const Eigen::VectorXcd& v) {
  Eigen::Index imax = 0;
  v.cwiseAbs().maxCoeff(&imax);
  const std::complex<double> z = v(imax);
  if (std::abs(z) == 0.0) return v;
  return v * (std::conj(z) / std::abs(z));
}

// Operator 2-norm distance between the projectors onto range(a), range(b).
inline double subspace_distance(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  if (a.rows() != b.rows()) throw std::invalid_argument("ambient dimension mismatch");
  const Eigen::MatrixXcd qa = orthonormalize(a);
  const Eigen::MatrixXcd qb = orthonormalize(b);
  const Eigen::MatrixXcd diff = qa * qa.adjoint() - qb * qb.adjoint();
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(diff);
  return svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
}

inline double spectral_norm(const Eigen::MatrixXcd& m) {
  if (m.rows() == 0 || m.cols() == 0) return 0.0;
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
  return svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
}

// exp(-i H t) for Hermitian H.
inline Eigen::MatrixXcd hermitian_propagator(const Eigen::MatrixXcd& h, double t) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
  const Eigen::VectorXd w = es.eigenvalues();
  Eigen::VectorXcd phases(w.size());
  for (Eigen::Index i = 0; i < w.size(); ++i)
    phases(i) = std::exp(std::complex<double>(0.0, -w(i) * t));
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace cdfs::linalg
