#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>

#include "cdfs/cdfs.hpp"

namespace {

using namespace cdfs;

// exit codes: 0 success, 2 input error, 3 degenerate-result warning
constexpr int kOk = 0;
constexpr int kInputError = 2;
constexpr int kDegenerate = 3;

std::string bits_of(int idx, int n) {
  std::string s(n, '0');
  for (int i = 0; i < n; ++i)
    if (idx & (1 << (n - 1 - i))) s[i] = '1';
  return s;
}

std::string pretty_amplitude(cplx z) {
  std::ostringstream out;
  if (std::abs(z.imag()) < 1e-12) {
    out << format_sig(z.real(), 6);
  } else {
    out << '(' << format_sig(z.real(), 6) << (z.imag() < 0 ? "-" : "+")
        << format_sig(std::abs(z.imag()), 6) << "i)";
  }
  return out.str();
}

void print_state(std::ostream& out, const StateVector& s, const std::string& indent) {
  const int dim = static_cast<int>(s.amplitudes.size());
  int n = 0;
  while ((1 << n) < dim) ++n;
  out << indent;
  bool first = true;
  for (int i = 0; i < dim; ++i) {
    const cplx z = s.amplitudes(i);
    if (std::abs(z) < 1e-10) continue;
    if (!first) out << "  ";
    out << pretty_amplitude(z) << "|" << bits_of(i, n) << ">";
    first = false;
  }
  if (first) out << "0";
  out << "\n";
}

std::string spin_label(int two_j) {
  if (two_j % 2 == 0) return std::to_string(two_j / 2);
  return std::to_string(two_j) + "/2";
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write to " + path);
  return out;
}

StateVector resolve_state(const std::string& name, const ModelSpec& spec) {
  const int n = spec.n;
  if (std::filesystem::exists(name)) return parse_state_json(load_json_file(name), n);

  if (n == 2 && name == "singlet") {
    StateVector s;
    s.amplitudes = Eigen::VectorXcd::Zero(4);
    s.amplitudes(1) = 1.0 / std::sqrt(2.0);
    s.amplitudes(2) = -1.0 / std::sqrt(2.0);
    s.excitation = 1;
    return s;
  }
  if (n == 3) {
    if (name == "u") return uv_states().first;
    if (name == "v") return uv_states().second;
    if (const StateVector* s = three_qubit_basis().find(name)) return *s;
  }
  if (n == 4) {
    if (name == "omega-zero" || name == "omega-one-plus" || name == "omega-one-minus") {
      const OmegaEncoding enc = omega_encoding(spec.model.b);
      if (enc.degenerate)
        throw std::runtime_error("omega encoding is degenerate for this model (omega1 = omega2 = 0)");
      if (name == "omega-zero") return enc.zero_l;
      return name == "omega-one-plus" ? enc.one_l_plus : enc.one_l_minus;
    }
    if (const StateVector* s = four_qubit_basis().find(name)) return *s;
  }
  if (static_cast<int>(name.size()) == n &&
      name.find_first_not_of("01") == std::string::npos)
    return computational_state(name);
  throw std::runtime_error("unknown state '" + name + "' for n = " + std::to_string(n));
}

std::vector<StateVector> alignment_targets(int n) {
  if (n == 3) {
    std::vector<StateVector> t = three_qubit_basis().states;
    auto [u, v] = uv_states();
    t.push_back(u);
    t.push_back(v);
    return t;
  }
  if (n == 4) return four_qubit_basis().states;
  return {};
}

int cmd_decompose(int n) {
  if (n < 1) throw std::runtime_error("need n >= 1");
  if (n > 8) throw std::runtime_error("decompose is capped at n = 8 (dense decomposition scale)");
  std::cout << "n = " << n << "\n k   dim W(k)   dim V(k)\n";
  for (int k = 0; 2 * k <= n; ++k)
    std::cout << ' ' << k << "   " << binomial(n, k) << "   " << df_dimension(n, k) << "\n";
  std::cout << "irreps:";
  bool first = true;
  for (int k = 0; 2 * k <= n; ++k) {
    std::cout << (first ? " " : ", ") << "J=" << spin_label(n - 2 * k) << " x"
              << df_dimension(n, k);
    first = false;
  }
  std::cout << "\n";
  const auto towers = irrep_decompose(n);
  std::size_t total = 0;
  for (const auto& t : towers) total += t.ladder.size();
  std::cout << "towers: " << towers.size() << ", states covered: " << total << " of "
            << hilbert_dim(n) << "\n";
  return kOk;
}

int cmd_cdfs(const std::string& model_path, int k_arg) {
  const ModelSpec spec = parse_model_file(model_path);
  const Operator h = system_hamiltonian(spec.model, spec.n);
  const std::vector<StateVector> targets = alignment_targets(spec.n);

  std::vector<int> ks;
  if (k_arg >= 0)
    ks.push_back(k_arg);
  else
    for (int k = 0; 2 * k <= spec.n; ++k) ks.push_back(k);

  std::cout << "model: n = " << spec.n << ", b = " << spec.b_description << "\n";
  for (int k : ks) {
    if (k > spec.n) throw std::runtime_error("k exceeds the qubit count");
    CdfsResult res = cdf_subspace(spec.n, k, h);
    if (!targets.empty()) res.basis = align_to_named(std::move(res.basis), targets);
    std::cout << "k = " << k << ": CDFS dimension " << res.basis.dim() << " (of "
              << df_dimension(spec.n, k) << " DF, fixpoint iterations " << res.iterations
              << ")\n";
    for (int i = 0; i < res.basis.dim(); ++i)
      print_state(std::cout, res.basis.vectors[i], "  cdf state: ");

    // DF-but-not-CDF remainder and its second-order leakage timescales
    SubspaceBasis df = df_subspace(spec.n, k);
    if (!targets.empty()) df = align_to_named(std::move(df), targets);
    const Eigen::MatrixXcd c = res.basis.as_columns();
    std::vector<Eigen::VectorXcd> kept;  // complement basis found so far
    for (const StateVector& v : df.vectors) {
      Eigen::VectorXcd rem = v.amplitudes;
      if (c.cols() > 0) rem -= c * (c.adjoint() * rem);
      for (const Eigen::VectorXcd& q : kept) rem -= q * q.dot(rem);
      if (rem.norm() < 1e-8) continue;  // inside the CDFS or already listed
      rem /= rem.norm();
      kept.push_back(rem);
      const StateVector state{linalg::canonical_phase(rem), k};
      const double t2 = tau2(state, h);
      std::cout << "  df-only state (tau2 = " << format_sig(t2, 9) << "):\n";
      print_state(std::cout, state, "    ");
    }
  }
  return kOk;
}

int cmd_evolve(const std::string& model_path, const std::string& state_name, double t_final,
               double dt, const std::string& out_path, int stride, bool hamiltonian_only) {
  ModelSpec spec = parse_model_file(model_path);
  if (hamiltonian_only)
    spec.model = CouplingModel::general(
        Eigen::MatrixXcd::Zero(spec.n, spec.n), spec.model.b);
  const StateVector psi = resolve_state(state_name, spec);
  if (psi.amplitudes.size() != hilbert_dim(spec.n))
    throw std::runtime_error("state dimension does not match the model");

  const Trajectory traj = evolve(pure_density(psi), spec.model, t_final, dt, stride);
  {
    std::ofstream out = open_out(out_path);
    write_trajectory_csv(out, traj);
  }

  std::cout << "wrote " << traj.times.size() << " rows to " << out_path << "\n";
  if (spec.n == 4 && state_name.rfind("omega-", 0) == 0) {
    const NamedBasis nb = four_qubit_basis();
    Eigen::MatrixXcd p(hilbert_dim(4), 3);
    p.col(0) = nb.state("f").amplitudes;
    p.col(1) = nb.state("g").amplitudes;
    p.col(2) = nb.state("h").amplitudes;
    double max_leak = 0;
    for (std::size_t i = 0; i < traj.states.size(); ++i) {
      const double inside = (p.adjoint() * traj.states[i] * p).trace().real();
      max_leak = std::max(max_leak, traj.trace[i] - inside);
    }
    std::cout << "max leakage out of span{f,g,h}: " << format_sig(max_leak, 9) << "\n";
  }
  std::cout << "final fidelity = " << format_sig(traj.fidelity.back(), 15) << " at t = "
            << format_sig(traj.times.back(), 9) << "\n";
  return kOk;
}

void print_fig2_highlights(int n) {
  for (int j : {1, 2, n / 2})
    std::cout << "p_df_jtot(" << n << ", " << j << ") = " << format_sig(p_df_jtot(n, j), 12)
              << "\n";
}

int cmd_metrics(const std::string& fig, const std::string& out_path) {
  std::ofstream out = open_out(out_path);
  if (fig == "1a" || fig == "1b") {
    write_fig1_csv(out);
    const double r = product_optimum();
    std::cout << "product optimum: r* = " << format_sig(r, 9) << ", d*p = "
              << format_sig(encoding_product(r), 9) << "\n";
  } else if (fig == "2") {
    write_fig2_csv(out);
    print_fig2_highlights(500);
  } else {
    throw std::runtime_error("unknown figure '" + fig + "' (choose 1a, 1b, or 2)");
  }
  std::cout << "wrote " << out_path << "\n";
  return kOk;
}

int cmd_encode4(const std::string& b_path, const std::string& out_path) {
  const nlohmann::json j = load_json_file(b_path);
  Eigen::MatrixXcd b;
  if (j.is_array()) {
    b = parse_matrix(j, 4, "b");
  } else if (j.contains("b")) {
    if (j["b"].is_object() && j["b"].contains("preset"))
      b = expand_b_preset(j["b"], 4);
    else
      b = parse_matrix(j["b"], 4, "b");
  } else {
    throw std::runtime_error("encode4 input must be a 4x4 matrix or an object with field 'b'");
  }
  if ((b - b.adjoint()).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, b.cwiseAbs().maxCoeff()))
    throw std::runtime_error("b must be Hermitian");

  const OmegaEncoding enc = omega_encoding(b);
  std::cout << "omega1 = " << format_sig(enc.omega.omega1, 9) << ", omega2 = "
            << format_sig(enc.omega.omega2, 9) << "\n";
  std::cout << "zero_L:\n";
  print_state(std::cout, enc.zero_l, "  ");
  std::cout << "one_L (+):\n";
  print_state(std::cout, enc.one_l_plus, "  ");
  std::cout << "one_L (-):\n";
  print_state(std::cout, enc.one_l_minus, "  ");
  std::cout << "eigenvector residuals: zero_L " << format_sig(enc.residual_zero, 6)
            << ", one_L+ " << format_sig(enc.residual_plus, 6) << ", one_L- "
            << format_sig(enc.residual_minus, 6) << "\n";
  std::cout << "validity: " << enc.validity << "\n";

  if (!out_path.empty()) {
    std::ofstream out = open_out(out_path);
    out << encoding_to_json(enc).dump(2) << "\n";
    std::cout << "wrote " << out_path << "\n";
  }
  if (enc.degenerate) {
    std::cerr << "warning: degenerate encoding (omega1 = omega2 = 0)\n";
    return kDegenerate;
  }
  return kOk;
}

int cmd_reproduce_figures(const std::string& out_dir) {
  std::filesystem::create_directories(out_dir);
  const std::filesystem::path dir(out_dir);
  {
    std::ofstream out = open_out((dir / "fig1a.csv").string());
    write_fig1_csv(out);
  }
  {
    std::ofstream out = open_out((dir / "fig1b.csv").string());
    write_fig1_csv(out);
  }
  {
    std::ofstream out = open_out((dir / "fig2.csv").string());
    write_fig2_csv(out);
  }
  const double r = product_optimum();
  std::cout << "product optimum: r* = " << format_sig(r, 9) << ", d*p = "
            << format_sig(encoding_product(r), 9) << "\n";
  print_fig2_highlights(500);
  std::cout << "wrote fig1a.csv, fig1b.csv, fig2.csv to " << out_dir << "\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"collective-decoherence toolkit: DF/CDF subspace extraction, Lindblad evolution, "
               "scalability metrics, 3- and 4-qubit encodings"};
  app.require_subcommand(1);
  int rc = kOk;

  auto* dec = app.add_subcommand("decompose", "irrep tower and DF dimension table");
  int dec_n = 0;
  dec->add_option("--n", dec_n, "qubit count (<= 8)")->required();
  dec->callback([&] { rc = cmd_decompose(dec_n); });

  auto* cdfs_cmd = app.add_subcommand("cdfs", "completely-decoherence-free subspace report");
  std::string cdfs_model;
  int cdfs_k = -1;
  cdfs_cmd->add_option("--model", cdfs_model, "model JSON file")->required();
  cdfs_cmd->add_option("--k", cdfs_k, "excitation sector (default: all k <= n/2)");
  cdfs_cmd->callback([&] { rc = cmd_cdfs(cdfs_model, cdfs_k); });

  auto* ev = app.add_subcommand("evolve", "integrate the master equation for a named state");
  std::string ev_model, ev_state, ev_out = "trajectory.csv";
  double ev_t = 0, ev_dt = 0;
  int ev_stride = 1;
  bool ev_ham_only = false;
  ev->add_option("--model", ev_model, "model JSON file")->required();
  ev->add_option("--state", ev_state, "named state, bitstring, or state JSON file")->required();
  ev->add_option("--t", ev_t, "final time")->required();
  ev->add_option("--dt", ev_dt, "integrator step")->required();
  ev->add_option("--out", ev_out, "trajectory CSV path");
  ev->add_option("--stride", ev_stride, "record every k-th step");
  ev->add_flag("--hamiltonian-only", ev_ham_only, "switch the dissipator off");
  ev->callback([&] { rc = cmd_evolve(ev_model, ev_state, ev_t, ev_dt, ev_out, ev_stride, ev_ham_only); });

  auto* met = app.add_subcommand("metrics", "emit figure data series as CSV");
  std::string met_fig, met_out;
  met->add_option("--fig", met_fig, "which series: 1a, 1b, or 2")->required();
  met->add_option("--out", met_out, "output CSV path")->required();
  met->callback([&] { rc = cmd_metrics(met_fig, met_out); });

  auto* enc = app.add_subcommand("encode4", "four-qubit omega encoding for a coupling matrix");
  std::string enc_b, enc_out;
  enc->add_option("--b", enc_b, "JSON file with a 4x4 Hermitian matrix (or {\"b\": ...})")->required();
  enc->add_option("--out", enc_out, "encoding JSON path");
  enc->callback([&] { rc = cmd_encode4(enc_b, enc_out); });

  auto* rep = app.add_subcommand("reproduce-figures", "write all figure CSVs to a directory");
  std::string rep_dir = "figures";
  rep->add_option("--out-dir", rep_dir, "output directory");
  rep->callback([&] { rc = cmd_reproduce_figures(rep_dir); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  }
  return rc;
}
