#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "cdfs/dynamics.hpp"
#include "cdfs/encodings.hpp"
#include "cdfs/metrics.hpp"

namespace cdfs {

inline std::string format_sig(double v, int sig) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", sig, v);
  return buf;
}

// Worker cap: COLLECTIVE_DFS_THREADS if set, otherwise the hardware count.
inline unsigned worker_count() {
  if (const char* env = std::getenv("COLLECTIVE_DFS_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v >= 1) return static_cast<unsigned>(v);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw ? hw : 1;
}

// Chunked parallel map over [0, total); results land in caller storage so
// output stays deterministic regardless of the worker count.
inline void parallel_for(std::size_t total, const std::function<void(std::size_t)>& fn) {
  const unsigned workers = std::min<std::size_t>(worker_count(), total ? total : 1);
  if (workers <= 1) {
    for (std::size_t i = 0; i < total; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w)
    pool.emplace_back([=, &fn] {
      for (std::size_t i = w; i < total; i += workers) fn(i);
    });
  for (std::thread& t : pool) t.join();
}

// Fig. 1 data: asymptotic curves on r in [0, 1/2], step 1e-3.  The r = 0
// endpoint takes the entropy limit 0 (and DF fraction 1).
inline void write_fig1_csv(std::ostream& out) {
  constexpr int kPoints = 501;
  std::vector<std::array<double, 4>> rows(kPoints);
  parallel_for(kPoints, [&rows](std::size_t i) {
    const double r = static_cast<double>(i) * 1e-3;
    const double d = i == 0 ? 0.0 : d_df_asymptotic(r);
    const double p = p_df_asymptotic(r);
    rows[i] = {r, d, p, d * p};
  });
  out << "r,d_df,p_df,product\n";
  for (const auto& row : rows)
    out << format_sig(row[0], 12) << ',' << format_sig(row[1], 12) << ','
        << format_sig(row[2], 12) << ',' << format_sig(row[3], 12) << '\n';
}

inline void write_fig2_csv(std::ostream& out, int n = 500) {
  const int jmax = n / 2;
  std::vector<double> vals(jmax);
  parallel_for(jmax, [&vals, n](std::size_t i) {
    vals[i] = p_df_jtot(n, static_cast<int>(i) + 1);
  });
  out << "j_tot,p_df_jtot\n";
  for (int j = 1; j <= jmax; ++j) out << j << ',' << format_sig(vals[j - 1], 12) << '\n';
}

inline void write_trajectory_csv(std::ostream& out, const Trajectory& traj) {
  out << "t,fidelity,trace,purity\n";
  for (std::size_t i = 0; i < traj.times.size(); ++i)
    out << format_sig(traj.times[i], 15) << ',' << format_sig(traj.fidelity[i], 15) << ','
        << format_sig(traj.trace[i], 15) << ',' << format_sig(traj.purity[i], 15) << '\n';
}

// ---- model files ----------------------------------------------------------

inline cplx parse_entry(const nlohmann::json& e) {
  if (e.is_number()) return cplx(e.get<double>(), 0.0);
  if (e.is_array() && e.size() == 2) return cplx(e[0].get<double>(), e[1].get<double>());
  if (e.is_object() && e.contains("re"))
    return cplx(e["re"].get<double>(), e.value("im", 0.0));
  throw std::runtime_error("matrix entry must be a number, [re, im], or {re, im}");
}

inline Eigen::MatrixXcd parse_matrix(const nlohmann::json& j, int n, const char* what) {
  if (!j.is_array() || static_cast<int>(j.size()) != n)
    throw std::runtime_error(std::string(what) + " must be an " + std::to_string(n) + "x" +
                             std::to_string(n) + " matrix");
  Eigen::MatrixXcd m(n, n);
  for (int r = 0; r < n; ++r) {
    if (!j[r].is_array() || static_cast<int>(j[r].size()) != n)
      throw std::runtime_error(std::string(what) + " row " + std::to_string(r) +
                               " has the wrong length");
    for (int c = 0; c < n; ++c) m(r, c) = parse_entry(j[r][c]);
  }
  return m;
}

inline Eigen::MatrixXcd expand_b_preset(const nlohmann::json& spec, int n) {
  const std::string name = spec.at("preset").get<std::string>();
  auto need = [&spec, &name](const char* key) {
    if (!spec.contains(key))
      throw std::runtime_error("preset '" + name + "' needs field '" + key + "'");
    return spec[key].get<double>();
  };
  if (name == "uniform") {
    return Eigen::MatrixXcd::Constant(n, n, need("value"));
  }
  if (name == "case-ii") {
    if (n != 3) throw std::runtime_error("preset 'case-ii' is a 3-qubit model");
    const double b12 = need("b12"), b13 = need("b13");
    Eigen::MatrixXcd b = Eigen::MatrixXcd::Zero(3, 3);
    b(0, 1) = b(1, 0) = b12;
    b(0, 2) = b(2, 0) = b13;
    b(1, 2) = b(2, 1) = b12;  // b23 = b12
    return b;
  }
  if (name == "four-sym") {
    if (n != 4) throw std::runtime_error("preset 'four-sym' is a 4-qubit model");
    const double b12 = need("b12"), b34 = need("b34"), b23 = need("b23"), b24 = need("b24");
    Eigen::MatrixXcd b = Eigen::MatrixXcd::Zero(4, 4);
    b(0, 1) = b(1, 0) = b12;
    b(2, 3) = b(3, 2) = b34;
    b(1, 2) = b(2, 1) = b23;
    b(0, 3) = b(3, 0) = b23;  // b14 = b23
    b(1, 3) = b(3, 1) = b24;
    b(0, 2) = b(2, 0) = b24;  // b13 = b24
    return b;
  }
  if (name == "random") {
    if (!spec.contains("seed")) throw std::runtime_error("preset 'random' needs field 'seed'");
    return random_symmetric_b(n, spec["seed"].get<std::uint64_t>());
  }
  throw std::runtime_error("unknown b preset '" + name + "'");
}

struct ModelSpec {
  int n = 0;
  CouplingModel model;
  std::string b_description;
};

inline ModelSpec parse_model_json(const nlohmann::json& j) {
  if (!j.contains("n")) throw std::runtime_error("model file needs field 'n'");
  const int n = j["n"].get<int>();
  if (n < 1 || n > 12) throw std::runtime_error("model size n must be in 1..12");

  ModelSpec spec;
  spec.n = n;

  Eigen::MatrixXcd b;
  if (!j.contains("b")) throw std::runtime_error("model file needs field 'b'");
  if (j["b"].is_object() && j["b"].contains("preset")) {
    b = expand_b_preset(j["b"], n);
    spec.b_description = "preset " + j["b"]["preset"].get<std::string>();
  } else {
    b = parse_matrix(j["b"], n, "b");
    spec.b_description = "explicit matrix";
  }

  try {
    if (j.contains("a")) {
      if (j.contains("lambda"))
        throw std::runtime_error("give either 'a' (explicit matrix) or 'lambda' (uniform), not both");
      spec.model = CouplingModel::general(parse_matrix(j["a"], n, "a"), b);
    } else {
      const double lambda = j.value("lambda", 0.0);
      spec.model = CouplingModel::collective(n, lambda, b);
    }
  } catch (const std::invalid_argument& e) {
    throw std::runtime_error(e.what());
  }
  return spec;
}

inline nlohmann::json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error("malformed JSON in " + path + ": " + e.what());
  }
  return j;
}

inline ModelSpec parse_model_file(const std::string& path) {
  try {
    return parse_model_json(load_json_file(path));
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error("malformed model file " + path + ": " + e.what());
  }
}

inline StateVector parse_state_json(const nlohmann::json& j, int n) {
  if (!j.contains("amplitudes")) throw std::runtime_error("state file needs field 'amplitudes'");
  const auto& amps = j["amplitudes"];
  const int dim = hilbert_dim(n);
  if (!amps.is_array() || static_cast<int>(amps.size()) != dim)
    throw std::runtime_error("state needs " + std::to_string(dim) + " amplitudes for n = " +
                             std::to_string(n));
  StateVector s;
  s.amplitudes = Eigen::VectorXcd(dim);
  for (int i = 0; i < dim; ++i) s.amplitudes(i) = parse_entry(amps[i]);
  const double norm = s.amplitudes.norm();
  if (std::abs(norm - 1.0) > 1e-6)
    throw std::runtime_error("state amplitudes are not normalized (norm " + std::to_string(norm) + ")");
  s.amplitudes /= norm;
  const int first = [&] {
    for (int i = 0; i < dim; ++i)
      if (std::abs(s.amplitudes(i)) > 1e-12) return i;
    return 0;
  }();
  const int k = std::popcount(static_cast<unsigned>(first));
  bool sector_pure = true;
  for (int i = 0; i < dim; ++i)
    if (std::abs(s.amplitudes(i)) > 1e-12 && std::popcount(static_cast<unsigned>(i)) != k)
      sector_pure = false;
  if (sector_pure) s.excitation = k;
  return s;
}

inline nlohmann::json state_to_json(const StateVector& s, const std::string& label) {
  nlohmann::json out;
  out["label"] = label;
  nlohmann::json amps = nlohmann::json::array();
  for (Eigen::Index i = 0; i < s.amplitudes.size(); ++i)
    amps.push_back({s.amplitudes(i).real(), s.amplitudes(i).imag()});
  out["amplitudes"] = amps;
  if (s.excitation) out["excitation"] = *s.excitation;
  return out;
}

inline nlohmann::json encoding_to_json(const OmegaEncoding& enc) {
  nlohmann::json out;
  out["omega"] = {{"omega1", enc.omega.omega1}, {"omega2", enc.omega.omega2}};
  out["degenerate"] = enc.degenerate;
  out["validity"] = enc.validity;
  out["states"] = nlohmann::json::array({
      state_to_json(enc.zero_l, "zero_L"),
      state_to_json(enc.one_l_plus, "one_L_plus"),
      state_to_json(enc.one_l_minus, "one_L_minus"),
  });
  out["residuals"] = {{"zero_L", enc.residual_zero},
                      {"one_L_plus", enc.residual_plus},
                      {"one_L_minus", enc.residual_minus}};
  return out;
}

}  // namespace cdfs
