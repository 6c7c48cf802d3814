// Acceptance suite: one line per criterion, nonzero exit on any failure.
// Tolerances are pinned here and nowhere else; do not loosen them to make
// a run pass.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <numbers>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "cdfs/cdfs.hpp"

using namespace cdfs;

namespace {

int failures = 0;

void report(int idx, const char* name, bool pass, const std::string& detail) {
  std::printf("[%s] %2d. %s (%s)\n", pass ? "PASS" : "FAIL", idx, name, detail.c_str());
  if (!pass) ++failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* pattern, auto... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, pattern, args...);
  return buf;
}

// --- 1: numeric kernel rank == combinatorial dimension, n <= 10 ----------

void criterion_sector_dimensions() {
  const auto t0 = std::chrono::steady_clock::now();
  bool pass = true;
  for (int n = 1; n <= 10 && pass; ++n)
    for (int k = 0; 2 * k <= n; ++k) {
      const long long expected = df_dimension(n, k);
      long long got = expected;
      if (k == 0) {
        got = 1;  // W(0) is one-dimensional and J annihilates it
      } else {
        got = linalg::kernel_rank(collective_lowering_block(n, k).cast<cplx>());
      }
      if (got != expected) {
        pass = false;
        break;
      }
    }
  const double dt = seconds_since(t0);
  report(1, "sector kernel rank equals the combinatorial dimension for n <= 10", pass && dt < 30.0,
         fmt("integer equality, %.2f s < 30 s", dt));
}

// --- 2: 9x9 coherence-block determinant closed form -----------------------

void criterion_determinant() {
  // draws are rejection-sampled away from the degenerate locus: the
  // relative comparison is ill-posed arbitrarily close to a zero of det
  std::mt19937_64 rng(20240601);
  std::uniform_real_distribution<double> ub(-1.0, 1.0);
  std::uniform_real_distribution<double> ul(0.5, 2.0);
  double worst = 0;
  int done = 0;
  while (done < 100) {
    const double b12 = ub(rng), b13 = ub(rng), b23 = ub(rng);
    if (std::abs(b12 - b23) < 0.2 || std::abs(b12 - b13) < 0.2 || std::abs(b23 - b13) < 0.2)
      continue;
    const double lambda = ul(rng);
    Eigen::MatrixXcd b(3, 3);
    b << 0, b12, b13, b12, 0, b23, b13, b23, 0;
    const Eigen::MatrixXcd m =
        liouvillian_matrix(CouplingModel::collective(3, lambda, b), 3, std::make_pair(1, 1));
    const double d12 = b12 - b23, d13 = b12 - b13, d23 = b23 - b13;
    const double expected =
        -(4.0 * lambda * lambda * lambda / 27.0) * d12 * d12 * d13 * d13 * d23 * d23;
    const cplx det = m.determinant();
    worst = std::max(worst, std::abs(det - cplx(expected)) / std::abs(expected));
    ++done;
  }

  double locus = 0;
  for (int which = 0; which < 3; ++which) {
    Eigen::MatrixXcd b = random_symmetric_b(3, 600 + which);
    if (which == 0) b(1, 2) = b(2, 1) = b(0, 1);
    if (which == 1) b(0, 2) = b(2, 0) = b(0, 1);
    if (which == 2) b(0, 2) = b(2, 0) = b(1, 2);
    const Eigen::MatrixXcd m =
        liouvillian_matrix(CouplingModel::collective(3, 1.0, b), 3, std::make_pair(1, 1));
    locus = std::max(locus, std::abs(m.determinant()));
  }
  report(2, "one-excitation Liouvillian determinant matches the closed form",
         worst <= 1e-9 && locus <= 1e-12,
         fmt("100 draws, worst rel dev %.2e <= 1e-9; coincident-coupling |det| %.2e <= 1e-12",
             worst, locus));
}

// --- 3: closed-form leakage coefficient vs energy variance ----------------

void criterion_leakage_coefficient() {
  std::mt19937_64 rng(777);
  std::uniform_real_distribution<double> ub(-1.0, 1.0);
  std::uniform_real_distribution<double> uth(0.15, std::numbers::pi / 2 - 0.15);
  double worst = 0;
  int done = 0;
  while (done < 100) {
    const double b12 = ub(rng), b13 = ub(rng);
    if (std::abs(b12 - b13) < 0.2) continue;
    const double th = uth(rng);
    const double cu = std::cos(th), cv = std::sin(th);

    Eigen::MatrixXcd b(3, 3);
    b << 0, b12, b13, b12, 0, b12, b13, b12, 0;
    const Operator h =
        system_hamiltonian(CouplingModel::general(Eigen::MatrixXcd::Zero(3, 3), b), 3);
    const auto [u, v] = uv_states();
    const Eigen::VectorXcd psi = cu * u.amplitudes + cv * v.amplitudes;
    const Eigen::VectorXcd hpsi = h * psi;
    const double var = hpsi.squaredNorm() - std::pow(psi.dot(hpsi).real(), 2);
    const double closed = tau2_case_ii(b12, b13, cu, cv);
    worst = std::max(worst, std::abs(closed + 2.0 * var) / std::max(2.0 * var, 1e-30));
    ++done;
  }
  const double eig = std::abs(tau2_case_ii(0.9, -0.4, 1.0, 0.0));
  report(3, "closed-form transfer coefficient equals twice the energy variance",
         worst <= 1e-10 && eig <= 1e-15,
         fmt("100 draws, worst rel dev %.2e <= 1e-10; eigenstate coefficient %.1e", worst, eig));
}

// --- 4: protected-dimension detection across the three coupling cases -----

void criterion_cdfs_cases() {
  bool pass = true;
  std::string detail;

  const auto run = [&](const Eigen::MatrixXcd& b) {
    const auto t0 = std::chrono::steady_clock::now();
    const Operator h =
        system_hamiltonian(CouplingModel::general(Eigen::MatrixXcd::Zero(3, 3), b), 3);
    const CdfsResult r = cdf_subspace(3, 1, h);
    return std::make_pair(r, seconds_since(t0));
  };

  const auto [all_equal, t1] = run(Eigen::MatrixXcd::Constant(3, 3, 0.9));
  pass = pass && all_equal.basis.dim() == 2 && t1 < 1.0;

  Eigen::MatrixXcd b2(3, 3);
  b2 << 0, 0.4, -0.8, 0.4, 0, 0.4, -0.8, 0.4, 0;  // b12 = b23 != b13
  const auto [tuned, t2] = run(b2);
  double overlap = 0;
  if (tuned.basis.dim() == 1)
    overlap = std::abs(uv_states().first.amplitudes.dot(tuned.basis.vectors[0].amplitudes));
  pass = pass && tuned.basis.dim() == 1 && overlap > 1.0 - 1e-10 && t2 < 1.0;

  Eigen::MatrixXcd b3(3, 3);
  b3 << 0, 0.3, 0.8, 0.3, 0, -0.5, 0.8, -0.5, 0;  // all distinct
  const auto [generic, t3] = run(b3);
  pass = pass && generic.basis.dim() == 0 && generic.basis.vectors.empty() && t3 < 1.0;

  report(4, "protected dimensions 2 / 1 / 0 across equal, pair-tuned, distinct couplings", pass,
         fmt("dims %d/%d/%d, |<u|basis>| = %.12f, slowest %.3f s < 1 s", all_equal.basis.dim(),
             tuned.basis.dim(), generic.basis.dim(), overlap, std::max({t1, t2, t3})));
}

// --- 5: four-qubit block split and tuned protections ----------------------

void criterion_four_qubit_blocks() {
  double cross = 0;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const Eigen::MatrixXcd b = random_symmetric_b(4, seed);
    const Eigen::MatrixXcd h2 = four_qubit_blocks(b).two_exc;  // {e,f,g,h,i,j}
    for (int r : {1, 2, 3})
      for (int c : {0, 4, 5}) cross = std::max(cross, std::abs(h2(r, c)));
  }

  Eigen::MatrixXcd b = Eigen::MatrixXcd::Zero(4, 4);
  b(0, 1) = b(1, 0) = 1.0;
  b(2, 3) = b(3, 2) = 2.0;
  for (auto [r, c] : {std::pair{0, 2}, {0, 3}, {1, 2}, {1, 3}})
    b(r, c) = b(c, r) = 0.5;  // b13 = b14 = b23 = b24
  const Operator h = system_hamiltonian(CouplingModel::general(Eigen::MatrixXcd::Zero(4, 4), b), 4);
  const NamedBasis nb = four_qubit_basis();

  const Eigen::MatrixXcd p1 = cdf_subspace(4, 1, h).basis.as_columns();
  const Eigen::MatrixXcd p2 = cdf_subspace(4, 2, h).basis.as_columns();
  double miss = 0;
  for (const char* lbl : {"b", "c"}) {
    const Eigen::VectorXcd x = nb.state(lbl).amplitudes;
    miss = std::max(miss, (x - p1 * (p1.adjoint() * x)).norm());
  }
  const Eigen::VectorXcd xi = nb.state("i").amplitudes;
  miss = std::max(miss, (xi - p2 * (p2.adjoint() * xi)).norm());

  report(5, "two-excitation blocks split {f,g,h} from {e,i,j}; tuned couplings protect {b,c},{i}",
         cross <= 1e-12 && miss <= 1e-8,
         fmt("100 draws, max cross element %.2e <= 1e-12; tuned containment residual %.2e <= 1e-8",
             cross, miss));
}

// --- 6: logical encoding eigenvectors and unitary confinement -------------

void criterion_encoding() {
  double res = 0;
  double leak = 0;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const Eigen::MatrixXcd b = random_symmetric_b(4, seed);
    const OmegaEncoding enc = omega_encoding(b);
    res = std::max({res, enc.residual_zero, enc.residual_plus, enc.residual_minus});

    const CouplingModel closed = CouplingModel::general(Eigen::MatrixXcd::Zero(4, 4), b);
    const Operator h = system_hamiltonian(closed, 4);
    const double hnorm = linalg::spectral_norm(h);
    const NamedBasis nb = four_qubit_basis();
    Eigen::MatrixXcd fgh(16, 3);
    fgh.col(0) = nb.state("f").amplitudes;
    fgh.col(1) = nb.state("g").amplitudes;
    fgh.col(2) = nb.state("h").amplitudes;

    std::vector<StateVector> probes = {enc.zero_l};
    if (seed % 10 == 0) {
      probes.push_back(enc.one_l_plus);
      probes.push_back(enc.one_l_minus);
    }
    for (const StateVector& psi : probes) {
      const Trajectory traj =
          evolve(pure_density(psi), closed, 10.0 / hnorm, 0.04 / hnorm, 25);
      for (std::size_t i = 0; i < traj.states.size(); ++i) {
        const double inside = (fgh.adjoint() * traj.states[i] * fgh).trace().real();
        leak = std::max(leak, traj.trace[i] - inside);
      }
    }
  }
  report(6, "logical triple: eigenvector residuals and Hamiltonian-only confinement",
         res <= 1e-10 && leak <= 1e-9,
         fmt("100 draws, max residual %.2e <= 1e-10; max leakage %.2e <= 1e-9 to t = 10/|H|", res,
             leak));
}

// --- 7: efficiency-fraction optimum and asymptotic endpoints --------------

void criterion_metric_optimum() {
  const double r = product_optimum();
  const double d_half = d_df_asymptotic(0.5);
  const double p_half = p_df_asymptotic(0.5);
  report(7, "product optimum sits in [0.21, 0.24]; endpoint rates are exact",
         r >= 0.21 && r <= 0.24 && std::abs(d_half - 1.0) <= 1e-12 && p_half == 0.0,
         fmt("r* = %.6f, d(1/2) - 1 = %.1e, p(1/2) = %g", r, d_half - 1.0, p_half));
}

// --- 8: log-space spin-cutoff fraction vs exact big-integer oracle --------

void criterion_spin_cutoff_fraction() {
  double worst = 0;
  for (int n = 2; n <= 60; n += 2)
    for (int j = 1; 2 * j <= n; ++j) {
      const double exact = p_df_jtot_exact(n, j);
      worst = std::max(worst, std::abs(p_df_jtot(n, j) - exact) / exact);
    }
  const double p1 = p_df_jtot(500, 1), p2 = p_df_jtot(500, 2), p250 = p_df_jtot(500, 250);
  report(8, "spin-cutoff DF fraction: log-space sum matches the exact oracle and stays ordered",
         worst <= 1e-10 && p1 > p2 && p2 > p250,
         fmt("n <= 60 worst rel dev %.2e <= 1e-10; n = 500: %.4f > %.6f > %.4f", worst, p1, p2,
             p250));
}

// --- 9: physical integrity over 10^4 steps; DF fidelity under full noise --

void criterion_integrator_physicality() {
  double drift = 0, herm = 0, mineig = 0;

  const auto scan = [&](const Trajectory& traj) {
    for (const DensityMatrix& rho : traj.states) {
      herm = std::max(herm, (rho - rho.adjoint()).cwiseAbs().maxCoeff());
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho);
      mineig = std::min(mineig, es.eigenvalues().minCoeff());
    }
    for (double tr : traj.trace) drift = std::max(drift, std::abs(tr - 1.0));
  };

  {
    // three qubits, general damping matrix (random PSD)
    std::mt19937_64 rng(4242);
    std::normal_distribution<double> gauss;
    Eigen::MatrixXcd g(3, 3);
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) g(r, c) = cplx(gauss(rng), gauss(rng));
    const Eigen::MatrixXcd a = 0.2 * (g * g.adjoint());
    const CouplingModel model = CouplingModel::general(a, random_symmetric_b(3, 41));
    const Lindbladian l = make_lindbladian(model, 3);
    const double dt = 0.08 / l.scale();
    scan(evolve(pure_density(computational_state("110")), model, 1e4 * dt, dt, 10));
  }
  {
    // four qubits, collective damping
    const CouplingModel model = CouplingModel::collective(4, 0.6, random_symmetric_b(4, 42));
    const Lindbladian l = make_lindbladian(model, 4);
    const double dt = 0.08 / l.scale();
    scan(evolve(pure_density(computational_state("1011")), model, 1e4 * dt, dt, 10));
  }

  // protected state under the full master equation, uniform (a, b)
  const CouplingModel uniform =
      CouplingModel::collective(3, 1.0, Eigen::MatrixXcd::Constant(3, 3, 0.8));
  const Lindbladian l = make_lindbladian(uniform, 3);
  const double dt = 0.08 / l.scale();
  const Trajectory df =
      evolve(pure_density(three_qubit_basis().state("c")), uniform, 10.0, dt, 50);
  double fdev = 0;
  for (double f : df.fidelity) fdev = std::max(fdev, std::abs(f - 1.0));

  report(9, "integration keeps states physical over 1e4 steps; DF state holds fidelity 1",
         drift <= 1e-9 && herm <= 1e-9 && mineig >= -1e-7 && fdev <= 1e-6,
         fmt("trace drift %.1e <= 1e-9, hermiticity %.1e <= 1e-9, min eig %.1e >= -1e-7, "
             "DF fidelity dev %.1e <= 1e-6 at t = 10/lambda",
             drift, herm, mineig, fdev));
}

// --- 10: uniform damping double sum collapses to one collective channel ---

void criterion_collapsed_dissipator() {
  std::mt19937_64 rng(535);
  std::normal_distribution<double> gauss;
  double dev = 0, ratedev = 0;
  for (int n = 2; n <= 5; ++n) {
    const int dim = hilbert_dim(n);
    const double entry = 0.37;               // uniform matrix (a_ab) = entry * X
    const double lambda = n * entry;         // its single nonzero eigenvalue
    std::vector<Operator> minus(n), plus(n);
    for (int i = 0; i < n; ++i) {
      minus[i] = single_qubit_op(n, i + 1, PauliKind::minus);
      plus[i] = minus[i].adjoint();
    }
    const Operator j = collective_op(n, CollectiveKind::J);
    const Operator jd = j.adjoint();

    const Eigen::MatrixXcd a = Eigen::MatrixXcd::Constant(n, n, entry);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(a);
    ratedev = std::max(ratedev, std::abs(es.eigenvalues()(n - 1) - lambda));
    ratedev = std::max(ratedev, std::abs(es.eigenvalues().head(n - 1).cwiseAbs().maxCoeff()));

    const CouplingModel model = CouplingModel::general(a, Eigen::MatrixXcd::Zero(n, n));
    for (int trial = 0; trial < 25; ++trial) {
      Eigen::MatrixXcd g(dim, dim);
      for (int r = 0; r < dim; ++r)
        for (int c = 0; c < dim; ++c) g(r, c) = cplx(gauss(rng), gauss(rng));
      DensityMatrix rho = g * g.adjoint();
      rho /= rho.trace().real();

      // the double sum, written out literally
      Eigen::MatrixXcd direct = Eigen::MatrixXcd::Zero(dim, dim);
      for (int al = 0; al < n; ++al)
        for (int be = 0; be < n; ++be) {
          const Operator gain = minus[be] * rho * plus[al];
          const Operator damp = plus[al] * minus[be];
          direct += entry * (gain - 0.5 * (damp * rho + rho * damp));
        }

      const Eigen::MatrixXcd collapsed =
          (lambda / (2.0 * n)) * (2.0 * j * rho * jd - jd * j * rho - rho * jd * j);
      dev = std::max(dev, (direct - collapsed).cwiseAbs().maxCoeff());
      dev = std::max(dev, (dissipator(model, rho) - collapsed).cwiseAbs().maxCoeff());
    }
  }
  report(10, "uniform damping double sum collapses to the single collective channel",
         dev <= 1e-12 && ratedev <= 1e-12,
         fmt("n <= 5, 25 states each: max entry dev %.2e <= 1e-12; rate spectrum dev %.2e", dev,
             ratedev));
}

}  // namespace

int main() {
  criterion_sector_dimensions();
  criterion_determinant();
  criterion_leakage_coefficient();
  criterion_cdfs_cases();
  criterion_four_qubit_blocks();
  criterion_encoding();
  criterion_metric_optimum();
  criterion_spin_cutoff_fraction();
  criterion_integrator_physicality();
  criterion_collapsed_dissipator();

  if (failures == 0)
    std::printf("all criteria passed\n");
  else
    std::printf("%d criteria FAILED\n", failures);
  return failures == 0 ? 0 : 1;
}
