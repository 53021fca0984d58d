#pragma once

// Symbolic moment matrices M_V(z) for the invariant subspaces
// V = (+)_{k in K} T_k(N), over the variables u_k = z(c_k), v_k = z(s_k).
// All coefficient data is exact rational: products of cosine/sine basis
// functions reduce with half-integer coefficients via
//   c_a c_b = (c_{a+b} + c_{a-b})/2,   s_a s_b = (c_{a-b} - c_{a+b})/2,
//   c_a s_b = (s_{a+b} - s_{a-b})/2,   s_a c_b = (s_{a+b} + s_{a-b})/2,
// followed by index canonicalization
//   c_{-k} = c_k,  s_{-k} = -s_k,  c_{k+N} = -c_k,  s_{k+N} = -s_k,
//   c_{N-k} = -c_k,  s_{N-k} = s_k,  s_0 = 0,  c_{N/2} = 0 (N even).

#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "ngonlift/rational.hpp"
#include "ngonlift/trigspace.hpp"

namespace ngonlift {

/// Trigonometric polynomial over the real basis with exact rational
/// coefficients, kept in the canonical index range {0..floor(N/2)}.
struct ExactTrigPoly {
  int n = 0;
  std::map<int, Rat> c;  // cosine coefficients, keys in [0, N/2]
  std::map<int, Rat> s;  // sine coefficients, keys in (0, N/2]

  explicit ExactTrigPoly(int n_) : n(n_) {}

  void add_c(int k, Rat coeff) {
    if (coeff == Rat(0)) return;
    k = ((k % (2 * n)) + 2 * n) % (2 * n);
    if (k >= n) {
      k -= n;
      coeff = -coeff;
    }
    if (2 * k > n) {
      k = n - k;
      coeff = -coeff;
    }
    if (2 * k == n) return;  // c_{N/2} = 0
    insert(c, k, coeff);
  }

  void add_s(int k, Rat coeff) {
    if (coeff == Rat(0)) return;
    const bool neg_in = k < 0;
    if (neg_in) {
      k = -k;
      coeff = -coeff;
    }
    k %= 2 * n;
    if (k >= n) {
      k -= n;
      coeff = -coeff;
    }
    if (2 * k > n) k = n - k;  // s_{N-k} = s_k
    if (k == 0) return;        // s_0 = 0
    insert(s, k, coeff);
  }

  friend bool operator==(const ExactTrigPoly&, const ExactTrigPoly&) = default;

 private:
  static void insert(std::map<int, Rat>& m, int k, const Rat& coeff) {
    auto [it, fresh] = m.try_emplace(k, coeff);
    if (!fresh) {
      it->second += coeff;
      if (it->second == Rat(0)) m.erase(it);
    }
  }
};

/// Float view, for vertex-wise comparison against double arithmetic.
inline TrigPoly to_trig_poly(const ExactTrigPoly& f) {
  RealBasisCoeffs rc;
  rc.modulus = f.n;
  for (const auto& [k, r] : f.c) rc.c[k] = to_double(r);
  for (const auto& [k, r] : f.s) rc.s[k] = to_double(r);
  return from_real_basis(rc);
}

/// Product of two real basis functions, reduced.
inline ExactTrigPoly basis_product(int n, const RealBasisLabel& a,
                                   const RealBasisLabel& b) {
  ExactTrigPoly out(n);
  const Rat half(1, 2);
  const bool ac = a.kind == RealBasisLabel::Cos;
  const bool bc = b.kind == RealBasisLabel::Cos;
  if (ac && bc) {
    out.add_c(a.k + b.k, half);
    out.add_c(a.k - b.k, half);
  } else if (!ac && !bc) {
    out.add_c(a.k - b.k, half);
    out.add_c(a.k + b.k, -half);
  } else if (ac && !bc) {
    out.add_s(a.k + b.k, half);
    out.add_s(a.k - b.k, -half);
  } else {
    out.add_s(a.k + b.k, half);
    out.add_s(a.k - b.k, half);
  }
  return out;
}

/// All pairwise products of the real basis of V = (+)_{k in K} T_k(N).
inline std::vector<std::vector<ExactTrigPoly>> product_table(const FrequencySet& K,
                                                             int n) {
  if (K.modulus != n)
    throw std::invalid_argument("product_table: modulus mismatch");
  const auto basis = real_basis_of(K);
  std::vector<std::vector<ExactTrigPoly>> table;
  table.reserve(basis.size());
  for (const auto& a : basis) {
    std::vector<ExactTrigPoly> row;
    row.reserve(basis.size());
    for (const auto& b : basis) row.push_back(basis_product(n, a, b));
    table.push_back(std::move(row));
  }
  return table;
}

/// Affine expression  const + sum_k alpha_k u_k + beta_k v_k  with exact
/// rational coefficients.  v_0 and u_{N/2} (N even) never appear.
struct AffineExpr {
  Rat constant = Rat(0);
  std::map<int, Rat> u;
  std::map<int, Rat> v;

  void add_u(int k, const Rat& r) { insert(u, k, r); }
  void add_v(int k, const Rat& r) { insert(v, k, r); }

  AffineExpr& operator+=(const AffineExpr& o) {
    constant += o.constant;
    for (const auto& [k, r] : o.u) add_u(k, r);
    for (const auto& [k, r] : o.v) add_v(k, r);
    return *this;
  }

  friend bool operator==(const AffineExpr&, const AffineExpr&) = default;

  friend AffineExpr operator+(AffineExpr a, const AffineExpr& b) { return a += b; }

  friend AffineExpr operator*(const Rat& r, const AffineExpr& e) {
    AffineExpr out;
    if (r == Rat(0)) return out;
    out.constant = r * e.constant;
    for (const auto& [k, c] : e.u) out.u[k] = r * c;
    for (const auto& [k, c] : e.v) out.v[k] = r * c;
    return out;
  }

 private:
  static void insert(std::map<int, Rat>& m, int k, const Rat& r) {
    if (r == Rat(0)) return;
    auto [it, fresh] = m.try_emplace(k, r);
    if (!fresh) {
      it->second += r;
      if (it->second == Rat(0)) m.erase(it);
    }
  }
};

/// Builders for writing expected expressions in tests and displays.
inline AffineExpr expr_const(const Rat& r) {
  AffineExpr e;
  e.constant = r;
  return e;
}

inline AffineExpr expr_u(int k, const Rat& r = Rat(1)) {
  AffineExpr e;
  e.add_u(k, r);
  return e;
}

inline AffineExpr expr_v(int k, const Rat& r = Rat(1)) {
  AffineExpr e;
  e.add_v(k, r);
  return e;
}

inline AffineExpr expr_of(const ExactTrigPoly& f) {
  AffineExpr e;
  for (const auto& [k, r] : f.c) e.add_u(k, r);
  for (const auto& [k, r] : f.s) e.add_v(k, r);
  return e;
}

/// Pretty form over a common denominator, e.g. "(u0+u2)/2", "1-u4", "0".
inline std::string to_string(const AffineExpr& e) {
  std::int64_t den = e.constant.denominator();
  auto lcm = [](std::int64_t a, std::int64_t b) { return a / std::gcd(a, b) * b; };
  for (const auto& [k, r] : e.u) den = lcm(den, r.denominator());
  for (const auto& [k, r] : e.v) den = lcm(den, r.denominator());
  std::string body;
  auto push = [&](const Rat& r, const std::string& var) {
    const std::int64_t num = r.numerator() * (den / r.denominator());
    if (num == 0) return;
    if (num > 0 && !body.empty()) body += '+';
    if (num == -1 && !var.empty())
      body += '-';
    else if (num != 1 || var.empty())
      body += std::to_string(num);
    body += var;
  };
  push(e.constant, "");
  for (const auto& [k, r] : e.u) push(r, "u" + std::to_string(k));
  for (const auto& [k, r] : e.v) push(r, "v" + std::to_string(k));
  if (body.empty()) return "0";
  if (den == 1) return body;
  const bool wrap = body.find('+') != std::string::npos ||
                    body.find('-', 1) != std::string::npos;
  return (wrap ? "(" + body + ")" : body) + "/" + std::to_string(den);
}

/// Symmetric matrix of affine expressions: entry (i,j) is the reduced
/// expansion of basis_i * basis_j with c_m, s_m replaced by u_m, v_m.
struct MomentMatrixSymbolic {
  int n = 0;
  std::vector<RealBasisLabel> basis;
  std::vector<std::vector<AffineExpr>> entries;

  std::size_t size() const { return basis.size(); }
  friend bool operator==(const MomentMatrixSymbolic&, const MomentMatrixSymbolic&) = default;
};

inline MomentMatrixSymbolic moment_matrix(const FrequencySet& K, int n) {
  MomentMatrixSymbolic m;
  m.n = n;
  m.basis = real_basis_of(K);
  const auto table = product_table(K, n);
  m.entries.resize(table.size());
  for (std::size_t i = 0; i < table.size(); ++i)
    for (std::size_t j = 0; j < table.size(); ++j)
      m.entries[i].push_back(expr_of(table[i][j]));
  return m;
}

/// Numeric assignment of the abstract variables u_k, v_k.
struct VarAssignment {
  std::map<int, double> u;
  std::map<int, double> v;

  double value_of(const AffineExpr& e) const {
    double acc = to_double(e.constant);
    for (const auto& [k, r] : e.u) acc += to_double(r) * at(u, k, 'u');
    for (const auto& [k, r] : e.v) acc += to_double(r) * at(v, k, 'v');
    return acc;
  }

 private:
  static double at(const std::map<int, double>& m, int k, char which) {
    auto it = m.find(k);
    if (it == m.end())
      throw std::invalid_argument(std::string("VarAssignment: missing ") + which +
                                  std::to_string(k));
    return it->second;
  }
};

inline Eigen::MatrixXd instantiate(const MomentMatrixSymbolic& m,
                                   const VarAssignment& z) {
  Eigen::MatrixXd out(m.size(), m.size());
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j <= i; ++j) {
      const double val = z.value_of(m.entries[i][j]);
      out(i, j) = val;
      out(j, i) = val;
    }
  return out;
}

/// Evaluation functional at vertex i: u_k = cos(k theta_i), v_k = sin(k theta_i),
/// covering all frequencies up to floor(N/2).
inline VarAssignment vertex_assignment(int n, int i) {
  VarAssignment z;
  for (int k = 0; 2 * k <= n; ++k) {
    // theta_i = (2i-1) pi / N; reduce k(2i-1) mod 2N to keep full precision.
    const long long m = (static_cast<long long>(k) * (2 * i - 1)) % (2 * n);
    const double angle = std::numbers::pi * static_cast<double>(m) / n;
    z.u[k] = std::cos(angle);
    z.v[k] = std::sin(angle);
  }
  return z;
}

/// Aligned text rendering of the symbolic matrix.
inline std::string to_string(const MomentMatrixSymbolic& m) {
  std::vector<std::vector<std::string>> cells(m.size());
  std::vector<std::size_t> width(m.size(), 0);
  for (std::size_t i = 0; i < m.size(); ++i) {
    for (std::size_t j = 0; j < m.size(); ++j) {
      cells[i].push_back(to_string(m.entries[i][j]));
      width[j] = std::max(width[j], cells[i][j].size());
    }
  }
  std::ostringstream os;
  for (std::size_t i = 0; i < m.size(); ++i) {
    os << "[ ";
    for (std::size_t j = 0; j < m.size(); ++j) {
      os << cells[i][j] << std::string(width[j] - cells[i][j].size(), ' ');
      os << (j + 1 < m.size() ? "  " : " ]\n");
    }
  }
  return os.str();
}

// -- JSON ---------------------------------------------------------------
// {"basis": ["c0", ...], "entries": [[{"const": "0", "u": {"2": "1/2"},
//  "v": {}}, ...], ...]}

inline void to_json(nlohmann::json& j, const AffineExpr& e) {
  nlohmann::json u = nlohmann::json::object(), v = nlohmann::json::object();
  for (const auto& [k, r] : e.u) u[std::to_string(k)] = rat_to_string(r);
  for (const auto& [k, r] : e.v) v[std::to_string(k)] = rat_to_string(r);
  j = nlohmann::json{{"const", rat_to_string(e.constant)}, {"u", u}, {"v", v}};
}

inline AffineExpr affine_expr_from_json(const nlohmann::json& j) {
  AffineExpr e;
  e.constant = rat_from_string(j.at("const").get<std::string>());
  for (const auto& [k, r] : j.at("u").items())
    e.add_u(std::stoi(k), rat_from_string(r.get<std::string>()));
  for (const auto& [k, r] : j.at("v").items())
    e.add_v(std::stoi(k), rat_from_string(r.get<std::string>()));
  return e;
}

inline void to_json(nlohmann::json& j, const MomentMatrixSymbolic& m) {
  j = nlohmann::json{{"n", m.n},
                     {"basis", nlohmann::json::array()},
                     {"entries", nlohmann::json::array()}};
  for (const auto& b : m.basis) j["basis"].push_back(to_string(b));
  for (const auto& row : m.entries) {
    nlohmann::json jrow = nlohmann::json::array();
    for (const auto& e : row) jrow.push_back(e);
    j["entries"].push_back(jrow);
  }
}

inline MomentMatrixSymbolic moment_matrix_from_json(const nlohmann::json& j) {
  MomentMatrixSymbolic m;
  m.n = j.at("n").get<int>();
  for (const auto& b : j.at("basis")) {
    const std::string s = b.get<std::string>();
    m.basis.push_back({s[0] == 'c' ? RealBasisLabel::Cos : RealBasisLabel::Sin,
                       std::stoi(s.substr(1))});
  }
  for (const auto& jrow : j.at("entries")) {
    std::vector<AffineExpr> row;
    for (const auto& je : jrow) row.push_back(affine_expr_from_json(je));
    m.entries.push_back(std::move(row));
  }
  return m;
}

}  // namespace ngonlift
