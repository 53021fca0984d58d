#pragma once

// Concrete equivariant psd lifts of the regular N-gon, assembled from
// symbolic moment matrices with u_0 pre-substituted to 1:
//   chained   -- n-1 blocks of size 3 over K_i = {0, 2^i}   (N = 2^n)
//   single    -- one block of size 2n-1 over {0,1,2,...,2^{n-2}}
//   hierarchy -- one block of size 1+2*ceil(N/4) over {0..ceil(N/4)}
// Verification never solves an SDP: vertex feasibility plus a Gram
// reproduction of every rotated facet functional pin the projection down
// to the polygon.

#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <json.hpp>

#include "ngonlift/momentmap.hpp"
#include "ngonlift/soscert.hpp"

namespace ngonlift {

enum class LiftScheme { chained, single_block, hierarchy };

inline std::string to_string(LiftScheme s) {
  switch (s) {
    case LiftScheme::chained: return "chained";
    case LiftScheme::single_block: return "single";
    case LiftScheme::hierarchy: return "hierarchy";
  }
  return "?";
}

inline LiftScheme lift_scheme_from_string(const std::string& s) {
  if (s == "chained") return LiftScheme::chained;
  if (s == "single") return LiftScheme::single_block;
  if (s == "hierarchy") return LiftScheme::hierarchy;
  throw std::invalid_argument("unknown lift scheme '" + s + "'");
}

/// Reference to one abstract variable, u_k or v_k.
struct VarRef {
  bool is_v = false;
  int k = 0;
  friend auto operator<=>(const VarRef& a, const VarRef& b) {
    return std::pair(a.k, a.is_v) <=> std::pair(b.k, b.is_v);
  }
  friend bool operator==(const VarRef&, const VarRef&) = default;
};

inline std::string to_string(const VarRef& r) {
  return (r.is_v ? "v" : "u") + std::to_string(r.k);
}

struct LiftDescription {
  int n = 0;  // the polygon N
  LiftScheme scheme = LiftScheme::chained;
  std::vector<MomentMatrixSymbolic> blocks;  // u_0 already set to 1
  // The projection onto the plane is (u_1, v_1).

  /// All variables appearing in any block, ordered u_1, v_1, u_2, v_2, ...
  std::vector<VarRef> variable_pool() const {
    std::set<VarRef> pool;
    for (const auto& block : blocks)
      for (const auto& row : block.entries)
        for (const auto& e : row) {
          for (const auto& [k, r] : e.u) pool.insert({false, k});
          for (const auto& [k, r] : e.v) pool.insert({true, k});
        }
    return std::vector<VarRef>(pool.begin(), pool.end());
  }
};

namespace detail {

/// Fold the u_0 coefficient of every entry into its constant part.
inline void substitute_u0(MomentMatrixSymbolic& m) {
  for (auto& row : m.entries)
    for (auto& e : row) {
      auto it = e.u.find(0);
      if (it != e.u.end()) {
        e.constant += it->second;
        e.u.erase(it);
      }
    }
}

inline int log2_exact(int N) {
  int n = 0;
  while ((1 << n) < N) ++n;
  if ((1 << n) != N)
    throw std::invalid_argument("expected a power-of-two polygon, got N=" +
                                std::to_string(N));
  return n;
}

}  // namespace detail

/// (S^3_+)^{n-1} lift of the 2^n-gon: block i is the moment matrix of
/// T_0 + T_{2^i}; all coefficients land in {0, +-1, +-1/2}.
inline LiftDescription build_chained_lift(int n) {
  if (n < 2) throw std::invalid_argument("build_chained_lift: n >= 2");
  const int N = 1 << n;
  LiftDescription lift;
  lift.n = N;
  lift.scheme = LiftScheme::chained;
  for (int i = 0; i <= n - 2; ++i) {
    MomentMatrixSymbolic block = moment_matrix(FrequencySet(N, {0, 1 << i}), N);
    detail::substitute_u0(block);
    lift.blocks.push_back(std::move(block));
  }
  return lift;
}

/// S^{2n-1}_+ lift of the 2^n-gon over the powers-of-two frequencies.
inline LiftDescription build_single_block_lift(int n) {
  if (n < 2) throw std::invalid_argument("build_single_block_lift: n >= 2");
  const int N = 1 << n;
  std::vector<int> ks{0};
  for (int i = 0; i <= n - 2; ++i) ks.push_back(1 << i);
  LiftDescription lift;
  lift.n = N;
  lift.scheme = LiftScheme::single_block;
  MomentMatrixSymbolic block = moment_matrix(FrequencySet(N, ks), N);
  detail::substitute_u0(block);
  lift.blocks.push_back(std::move(block));
  return lift;
}

/// Sum-of-squares hierarchy lift of size 1 + 2*ceil(N/4).
inline LiftDescription build_hierarchy_lift(int N) {
  if (N < 3) throw std::invalid_argument("build_hierarchy_lift: N >= 3");
  std::vector<int> ks;
  for (int k = 0; k <= (N + 3) / 4; ++k) ks.push_back(k);
  LiftDescription lift;
  lift.n = N;
  lift.scheme = LiftScheme::hierarchy;
  MomentMatrixSymbolic block = moment_matrix(FrequencySet(N, ks), N);
  detail::substitute_u0(block);
  lift.blocks.push_back(std::move(block));
  return lift;
}

/// Full numeric assignment of the abstract variables; u_0 is pinned to 1.
struct LiftPoint {
  int n = 0;
  VarAssignment vars;
};

/// Moment point of the evaluation functional at vertex i.
inline LiftPoint vertex_lift_point(const LiftDescription& lift, int i) {
  if (i < 1 || i > lift.n)
    throw std::out_of_range("vertex_lift_point: vertex index");
  return {lift.n, vertex_assignment(lift.n, i)};
}

/// Barycenter of the vertex points: u_0 = 1, everything else 0.
inline LiftPoint barycenter_lift_point(const LiftDescription& lift) {
  LiftPoint p;
  p.n = lift.n;
  for (int k = 0; 2 * k <= lift.n; ++k) {
    p.vars.u[k] = k == 0 ? 1.0 : 0.0;
    p.vars.v[k] = 0.0;
  }
  return p;
}

/// Frequency-wise rotation: the pair (u_k, v_k) turns by 2 pi k r / N.
/// Feasibility is preserved and the projection rotates by 2 pi r / N.
inline LiftPoint rotate_lift_point(const LiftPoint& p, int r) {
  LiftPoint out;
  out.n = p.n;
  for (const auto& [k, uk] : p.vars.u) {
    const long long m = (static_cast<long long>(k) * (((r % p.n) + p.n) % p.n)) % p.n;
    const double phi = 2.0 * std::numbers::pi * static_cast<double>(m) / p.n;
    const double vk = p.vars.v.at(k);
    out.vars.u[k] = uk * std::cos(phi) - vk * std::sin(phi);
    out.vars.v[k] = uk * std::sin(phi) + vk * std::cos(phi);
  }
  return out;
}

inline std::pair<double, double> project(const LiftPoint& p) {
  return {p.vars.u.at(1), p.vars.v.at(1)};
}

inline double min_eigenvalue(const Eigen::MatrixXd& m) {
  return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(m).eigenvalues().minCoeff();
}

/// Most negative block eigenvalue at the point (>= -1e-10 means feasible).
inline double feasibility_margin(const LiftDescription& lift, const LiftPoint& p) {
  double worst = std::numeric_limits<double>::infinity();
  for (const auto& block : lift.blocks)
    worst = std::min(worst, min_eigenvalue(instantiate(block, p.vars)));
  return worst;
}

struct LiftVerifyReport {
  bool vertices_ok = false;
  double min_vertex_eigenvalue = 0.0;
  bool gram_ok = false;
  double gram_residual = 0.0;
  bool rotations_ok = false;
  double rotation_residual = 0.0;
  bool pass = false;
};

namespace detail {

inline FrequencySet block_frequencies(const MomentMatrixSymbolic& block) {
  std::vector<int> ks;
  for (const auto& b : block.basis) ks.push_back(b.k);
  return FrequencySet(block.n, std::move(ks));
}

/// Assign every square to the first block whose subspace contains it and
/// accumulate per-block Gram matrices; returns sum_b T_{V_b}(Q_b).
inline TrigPoly gram_reproduction(const LiftDescription& lift,
                                  const std::vector<TrigPoly>& squares) {
  std::vector<GramMatrix> grams;
  for (const auto& block : lift.blocks) {
    GramMatrix g;
    g.n = lift.n;
    g.basis = block.basis;
    g.Q = Eigen::MatrixXd::Zero(block.size(), block.size());
    grams.push_back(std::move(g));
  }
  for (const auto& h : squares) {
    bool placed = false;
    for (std::size_t b = 0; b < lift.blocks.size() && !placed; ++b) {
      const FrequencySet kb = block_frequencies(lift.blocks[b]);
      bool fits = true;
      for (int k : h.real_support().members)
        if (!kb.contains(k)) fits = false;
      if (!fits) continue;
      const Eigen::VectorXd vec = coeff_vector_in(h, grams[b].basis);
      grams[b].Q += vec * vec.transpose();
      placed = true;
    }
    if (!placed)
      throw std::invalid_argument("gram_reproduction: square fits no block");
  }
  TrigPoly total(lift.n);
  for (const auto& g : grams) total = total + gram_apply(g);
  return total;
}

inline double max_coeff_abs(const TrigPoly& f) {
  double m = 0.0;
  for (const auto& [k, z] : f.coeffs()) m = std::max(m, std::abs(z));
  return m;
}

}  // namespace detail

/// Three-leg lift verification:
///  (a) the N vertex moment points are feasible;
///  (b) a Gram matrix over the lift's subspaces reproduces ell, so the
///      projection satisfies the first facet inequality;
///  (c) leg (b) repeated for all N facets via rotation of the squares.
/// Together with convexity this pins the projection to the polygon.
inline LiftVerifyReport verify_lift(const LiftDescription& lift,
                                    const SosCertificate& cert,
                                    double eig_slack = 1e-10,
                                    double coeff_tol = 1e-10) {
  LiftVerifyReport rep;
  rep.min_vertex_eigenvalue = std::numeric_limits<double>::infinity();
  for (int i = 1; i <= lift.n; ++i) {
    const LiftPoint p = vertex_lift_point(lift, i);
    rep.min_vertex_eigenvalue =
        std::min(rep.min_vertex_eigenvalue, feasibility_margin(lift, p));
  }
  rep.vertices_ok = rep.min_vertex_eigenvalue >= -eig_slack;

  const TrigPoly reproduced = detail::gram_reproduction(lift, cert.squares);
  rep.gram_residual = detail::max_coeff_abs(reproduced - facet_functional(lift.n));
  rep.gram_ok = rep.gram_residual <= coeff_tol;

  rep.rotation_residual = 0.0;
  for (int r = 0; r < lift.n; ++r) {
    std::vector<TrigPoly> rotated;
    rotated.reserve(cert.squares.size());
    for (const auto& h : cert.squares) rotated.push_back(rotate(h, r));
    const TrigPoly repro_r = detail::gram_reproduction(lift, rotated);
    rep.rotation_residual =
        std::max(rep.rotation_residual,
                 detail::max_coeff_abs(repro_r - facet_functional(lift.n, r)));
  }
  rep.rotations_ok = rep.rotation_residual <= coeff_tol;

  rep.pass = rep.vertices_ok && rep.gram_ok && rep.rotations_ok;
  return rep;
}

/// Default certificate for a lift's scheme.
inline SosCertificate matching_certificate(const LiftDescription& lift) {
  switch (lift.scheme) {
    case LiftScheme::chained:
    case LiftScheme::single_block:
      return powers_of_two_certificate(detail::log2_exact(lift.n));
    case LiftScheme::hierarchy:
      return hierarchy_certificate(lift.n);
  }
  throw std::logic_error("matching_certificate: bad scheme");
}

inline LiftVerifyReport verify_lift(const LiftDescription& lift) {
  return verify_lift(lift, matching_certificate(lift));
}

// ---------------------------------------------------------------------
// Factorization extraction (structure-theorem direction)

/// Diagonalized equivariant factorization data: frequencies k_j of the
/// characters t_j(r) = exp(2 i k_j r pi / N) plus Hermitian psd A', B'.
struct FactorizationInput {
  int n = 0;
  std::vector<int> freqs;
  Eigen::MatrixXcd A;
  Eigen::MatrixXcd B;
};

/// Hadamard product A' o B' is psd (Schur); its rank-one terms v_i v_i^*
/// become squares h_i = sum_j conj(v_i)_j e_{k_j} supported on the k_j.
inline SosCertificate extract_certificate_from_factorization(
    const FactorizationInput& fin) {
  const auto d = static_cast<Eigen::Index>(fin.freqs.size());
  if (fin.A.rows() != d || fin.A.cols() != d || fin.B.rows() != d ||
      fin.B.cols() != d)
    throw std::invalid_argument("extract_certificate: dimension mismatch");
  auto check_herm_psd = [&](const Eigen::MatrixXcd& m, const char* name) {
    const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    if ((m - m.adjoint()).cwiseAbs().maxCoeff() > 1e-9 * scale)
      throw std::invalid_argument(std::string("extract_certificate: ") + name +
                                  " not Hermitian");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m);
    if (es.eigenvalues().minCoeff() < -1e-9 * scale)
      throw std::invalid_argument(std::string("extract_certificate: ") + name +
                                  " not psd");
  };
  check_herm_psd(fin.A, "A'");
  check_herm_psd(fin.B, "B'");

  const Eigen::MatrixXcd had = fin.A.cwiseProduct(fin.B);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(had);
  const double scale = std::max(1.0, had.cwiseAbs().maxCoeff());
  if (es.eigenvalues().minCoeff() < -1e-9 * scale)
    throw std::invalid_argument(
        "extract_certificate: Hadamard product indefinite");

  TrigPoly target(fin.n);
  SosCertificate cert(fin.n, target);
  for (Eigen::Index i = 0; i < d; ++i) {
    const double lam = es.eigenvalues()(i);
    if (lam <= 0.0) continue;
    TrigPoly h(fin.n);
    for (Eigen::Index j = 0; j < d; ++j) {
      const Complex vij = std::sqrt(lam) * es.eigenvectors()(j, i);
      h.add_coeff(fin.freqs[j], std::conj(vij));
    }
    cert.squares.push_back(std::move(h));
  }
  for (const auto& h : cert.squares)
    cert.target = cert.target + trig_mul(conjugate(h), h);
  return cert;
}

// ---------------------------------------------------------------------
// Export / import

inline nlohmann::json lift_to_json(const LiftDescription& lift) {
  nlohmann::json j{{"n", lift.n},
                   {"scheme", to_string(lift.scheme)},
                   {"projection", {"u1", "v1"}},
                   {"blocks", nlohmann::json::array()}};
  for (const auto& block : lift.blocks) j["blocks"].push_back(block);
  return j;
}

inline LiftDescription lift_from_json(const nlohmann::json& j) {
  LiftDescription lift;
  lift.n = j.at("n").get<int>();
  lift.scheme = lift_scheme_from_string(j.at("scheme").get<std::string>());
  for (const auto& jb : j.at("blocks"))
    lift.blocks.push_back(moment_matrix_from_json(jb));
  return lift;
}

inline void export_json(const LiftDescription& lift, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("export_json: cannot open " + path);
  out << lift_to_json(lift).dump(2) << "\n";
}

/// SDPA sparse (.dat-s) emission with one SDP block per LMI block and a
/// zero objective (pure feasibility).  The LMI  C + sum_t y_t A_t >= 0
/// maps to the SDPA convention  sum_t y_t F_t - F_0 >= 0  via F_0 = -C,
/// F_t = A_t.  Upper triangle only, 1-indexed.
inline void export_sdpa(const LiftDescription& lift, const std::string& path) {
  const std::vector<VarRef> pool = lift.variable_pool();
  std::map<VarRef, int> index;
  for (std::size_t t = 0; t < pool.size(); ++t)
    index[pool[t]] = static_cast<int>(t) + 1;

  std::ofstream out(path);
  if (!out) throw std::runtime_error("export_sdpa: cannot open " + path);
  out << pool.size() << "\n" << lift.blocks.size() << "\n";
  for (std::size_t b = 0; b < lift.blocks.size(); ++b)
    out << lift.blocks[b].size() << (b + 1 < lift.blocks.size() ? " " : "\n");
  for (std::size_t t = 0; t < pool.size(); ++t)
    out << 0 << (t + 1 < pool.size() ? " " : "");
  out << "\n";
  for (std::size_t b = 0; b < lift.blocks.size(); ++b) {
    const auto& block = lift.blocks[b];
    for (std::size_t i = 0; i < block.size(); ++i)
      for (std::size_t j = i; j < block.size(); ++j) {
        const AffineExpr& e = block.entries[i][j];
        if (e.constant != Rat(0))
          out << 0 << " " << b + 1 << " " << i + 1 << " " << j + 1 << " "
              << double_to_string(-to_double(e.constant)) << "\n";
        for (const auto& [k, r] : e.u)
          out << index.at({false, k}) << " " << b + 1 << " " << i + 1 << " "
              << j + 1 << " " << double_to_string(to_double(r)) << "\n";
        for (const auto& [k, r] : e.v)
          out << index.at({true, k}) << " " << b + 1 << " " << i + 1 << " "
              << j + 1 << " " << double_to_string(to_double(r)) << "\n";
      }
  }
}

/// Parsed view of an SDPA sparse file.
struct SdpaData {
  int m = 0;
  std::vector<int> block_sizes;
  std::vector<double> objective;
  struct Entry {
    int mat, block, i, j;
    double value;
  };
  std::vector<Entry> entries;
};

inline SdpaData parse_sdpa(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("parse_sdpa: cannot open " + path);
  SdpaData data;
  int nblock = 0;
  in >> data.m >> nblock;
  data.block_sizes.resize(nblock);
  for (int& s : data.block_sizes) in >> s;
  data.objective.resize(data.m);
  for (double& c : data.objective) in >> c;
  SdpaData::Entry e{};
  while (in >> e.mat >> e.block >> e.i >> e.j >> e.value)
    data.entries.push_back(e);
  return data;
}

}  // namespace ngonlift
