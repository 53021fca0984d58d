#pragma once

// Sum-of-squares certificates for the facet functional of the regular
// N-gon: the sparse powers-of-two recursion, the interpolation-based
// hierarchy certificate, and certificate verification.

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <json.hpp>

#include "ngonlift/interp.hpp"
#include "ngonlift/trigspace.hpp"

namespace ngonlift {

/// Facet functional of the r-th facet:
///   ell = cos(pi/N) e_0 - (e^{i pi/N} e_1 + e^{-i pi/N} e_{-1}) / 2,
/// rotated by r.  Vanishes at vertices r+1 and r+N, positive elsewhere.
inline TrigPoly facet_functional(int n, int r = 0) {
  TrigPoly ell(n);
  const double ph = std::numbers::pi / n;
  ell.set_coeff(0, Complex(std::cos(ph), 0.0));
  ell.add_coeff(1, -0.5 * std::polar(1.0, ph));
  ell.add_coeff(-1, -0.5 * std::polar(1.0, -ph));
  return r == 0 ? ell : rotate(ell, r);
}

/// A target function together with functions h_i whose Hermitian squares
/// are claimed to sum to it on the vertex set.
struct SosCertificate {
  int n = 0;
  TrigPoly target;
  std::vector<TrigPoly> squares;
  std::string scheme = "custom";  // powers-of-two | hierarchy | custom

  SosCertificate(int n_, TrigPoly target_) : n(n_), target(std::move(target_)) {}

  /// Union of the squares' supports folded into {0..floor(N/2)}.
  FrequencySet support() const {
    std::vector<int> ks;
    for (const auto& h : squares)
      for (int k : h.real_support().members) ks.push_back(k);
    return FrequencySet(n, std::move(ks));
  }

  /// Union of the squares' supports as residues in Z_N (the support
  /// notion of Hermitian certificates).
  FrequencySet hermitian_support() const {
    std::vector<int> ks;
    for (const auto& h : squares)
      for (int k : h.support().members) ks.push_back(k);
    return FrequencySet(n, std::move(ks));
  }
};

/// The n-1 square certificate of ell on the 2^n-gon,
///   ell = sum_k  sin(pi/2^n) / (2^k sin(2^{k+1} pi/2^n))
///                 * (cos(2^k pi/2^n) c_0 - c_{2^k})^2,
/// supported on the n frequencies {0} u {2^k : k = 0..n-2}.
inline SosCertificate powers_of_two_certificate(int n) {
  if (n < 2) throw std::invalid_argument("powers_of_two_certificate: n >= 2");
  const int N = 1 << n;
  SosCertificate cert(N, facet_functional(N));
  cert.scheme = "powers-of-two";
  const double pi_N = std::numbers::pi / N;
  for (int k = 0; k <= n - 2; ++k) {
    const double lambda =
        std::sin(pi_N) / ((1 << k) * std::sin((2 << k) * pi_N));
    const double root = std::sqrt(lambda);
    TrigPoly h = root * std::cos((1 << k) * pi_N) * TrigPoly::c(N, 0) -
                 root * TrigPoly::c(N, 1 << k);
    cert.squares.push_back(std::move(h));
  }
  return cert;
}

/// Fixed two-square certificate for the hexagon:
///   ell = (sqrt3/4)(-1 + (2/sqrt3) c_1)^2 + (sqrt3/36)(-2 s_1 + s_3)^2.
inline SosCertificate hexagon_certificate() {
  const double r3 = std::sqrt(3.0);
  SosCertificate cert(6, facet_functional(6));
  const double w1 = std::sqrt(r3 / 4.0);
  cert.squares.push_back(w1 * (2.0 / r3) * TrigPoly::c(6, 1) -
                         w1 * TrigPoly::c(6, 0));
  const double w2 = std::sqrt(r3 / 36.0);
  cert.squares.push_back(w2 * TrigPoly::s(6, 3) - 2.0 * w2 * TrigPoly::s(6, 1));
  return cert;
}

namespace detail {

/// Match roots into conjugate pairs (greedy nearest-conjugate) and keep
/// one averaged representative per pair; split double real roots merge
/// back to their midpoint.
inline std::vector<Complex> pair_conjugate_roots(std::vector<Complex> roots) {
  std::vector<Complex> picked;
  while (!roots.empty()) {
    const Complex z = roots.back();
    roots.pop_back();
    std::size_t best = 0;
    double best_dist = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < roots.size(); ++j) {
      const double dist = std::abs(std::conj(z) - roots[j]);
      if (dist < best_dist) {
        best_dist = dist;
        best = j;
      }
    }
    if (roots.empty() || best_dist > 1e-7 * std::max(1.0, std::abs(z)))
      throw std::invalid_argument("two_squares_factorization: unpaired root");
    picked.push_back(0.5 * (z + std::conj(roots[best])));
    roots.erase(roots.begin() + best);
  }
  return picked;
}

/// (Re, Im) of w(x) = sqrt(lead) * prod_j (x - z_j), sign-normalized.
inline std::pair<Poly1, Poly1> split_complex_product(double lead,
                                                     const std::vector<Complex>& zs) {
  std::vector<Complex> w{Complex(std::sqrt(lead), 0.0)};
  for (const Complex& z : zs) {
    std::vector<Complex> next(w.size() + 1, Complex(0, 0));
    for (std::size_t i = 0; i < w.size(); ++i) {
      next[i] += -z * w[i];
      next[i + 1] += w[i];
    }
    w = std::move(next);
  }
  Poly1 h1, h2;
  for (const Complex& z : w) {
    h1.c.push_back(z.real());
    h2.c.push_back(z.imag());
  }
  h1 = poly_trim(h1);
  h2 = poly_trim(h2);
  if (!h1.c.empty() && h1.c.back() < 0) h1 = poly_scale(-1.0, h1);
  if (!h2.c.empty() && h2.c.back() < 0) h2 = poly_scale(-1.0, h2);
  return {h1, h2};
}

}  // namespace detail

/// Writes a globally nonnegative p as h1^2 + h2^2 by pairing the complex
/// roots: h1 + i h2 = sqrt(lead) * prod over one root per conjugate pair.
inline std::pair<Poly1, Poly1> two_squares_factorization(const Poly1& poly) {
  const Poly1 p = poly_trim(poly);
  if (!is_globally_nonnegative(p).nonneg)
    throw std::invalid_argument("two_squares_factorization: input is not nonnegative");
  if (p.c.size() <= 1) {
    const double c0 = p.c.empty() ? 0.0 : p.c[0];
    return {Poly1({std::sqrt(c0)}), Poly1{}};
  }
  const std::vector<Complex> picked = detail::pair_conjugate_roots(poly_roots(p));
  return detail::split_complex_product(p.c.back(), picked);
}

/// Horner evaluation of a univariate polynomial at c_1 inside F(N,R).
inline TrigPoly poly_at_c1(const Poly1& p, int n) {
  TrigPoly acc(n);
  const TrigPoly c1 = TrigPoly::c(n, 1);
  for (auto it = p.c.rbegin(); it != p.c.rend(); ++it)
    acc = trig_mul(acc, c1) + TrigPoly::constant(n, Complex(*it, 0.0));
  return acc;
}

/// Certificate from the sum-of-squares hierarchy: squares are univariate
/// in x = c_1 of degree <= ceil(N/4), obtained by splitting the
/// theta-rank interpolant into two squares.  The factorization runs in
/// the Chebyshev basis: the forced double root at a_0 = cos(pi/N) is
/// divided out exactly, the remaining roots come from the colleague
/// matrix, and (x - a_0) is put back as an exact factor, so the squares
/// vanish exactly on the facet.
inline SosCertificate hierarchy_certificate(int n) {
  const std::vector<double> p_cheb = detail::theta_rank_cheb_series(n);
  const double a0 = std::cos(std::numbers::pi / n);
  const std::vector<double> quotient =
      detail::cheb_deflate(detail::cheb_deflate(p_cheb, a0), a0);
  std::vector<Complex> factors =
      detail::pair_conjugate_roots(detail::colleague_roots(quotient));
  factors.emplace_back(a0, 0.0);
  // Leading monomial coefficient of p: T_d carries 2^{d-1} x^d.
  const std::size_t deg = p_cheb.size() - 1;
  const double lead = p_cheb.back() * std::ldexp(1.0, static_cast<int>(deg) - 1);
  const auto [h1, h2] = detail::split_complex_product(lead, factors);
  SosCertificate cert(n, facet_functional(n));
  cert.scheme = "hierarchy";
  if (!h1.c.empty()) cert.squares.push_back(poly_at_c1(h1, n));
  if (!h2.c.empty()) cert.squares.push_back(poly_at_c1(h2, n));
  return cert;
}

/// Residual of the doubling identity behind the powers-of-two recursion:
///   (cos(pi/N)-cos t)/sin(pi/N) = (cos(pi/N)-cos t)^2/sin(2pi/N)
///                                  + (cos(2pi/N)-cos 2t)/(2 sin(2pi/N)).
inline double doubling_identity_residual(int n, double theta) {
  if (n < 3) throw std::invalid_argument("doubling_identity_residual: N >= 3");
  const double a = std::numbers::pi / n;
  const double lhs = (std::cos(a) - std::cos(theta)) / std::sin(a);
  const double d = std::cos(a) - std::cos(theta);
  const double rhs = d * d / std::sin(2 * a) +
                     0.5 * (std::cos(2 * a) - std::cos(2 * theta)) / std::sin(2 * a);
  return std::abs(lhs - rhs);
}

struct VerifyReport {
  double max_vertex_residual = 0.0;
  double max_coeff_residual = 0.0;
  FrequencySet support;
  bool pass = false;
};

/// Checks sum_i |h_i|^2 == target both pointwise on the N vertices and
/// coefficientwise after reduction in F(N,C).
inline VerifyReport verify_certificate(const SosCertificate& cert, double tol) {
  TrigPoly sum(cert.n);
  for (const auto& h : cert.squares) sum = sum + trig_mul(conjugate(h), h);
  const TrigPoly diff = sum - cert.target;
  VerifyReport rep;
  rep.support = cert.support();
  for (int i = 1; i <= cert.n; ++i)
    rep.max_vertex_residual =
        std::max(rep.max_vertex_residual, std::abs(eval_at_vertex(diff, i)));
  for (const auto& [k, z] : diff.coeffs())
    rep.max_coeff_residual = std::max(rep.max_coeff_residual, std::abs(z));
  rep.pass = rep.max_vertex_residual <= tol && rep.max_coeff_residual <= tol;
  return rep;
}

/// Positive semidefinite matrix representing a sum of squares over the
/// real basis of a fixed invariant subspace.
struct GramMatrix {
  int n = 0;
  std::vector<RealBasisLabel> basis;
  Eigen::MatrixXd Q;
};

/// Coefficient vector of a real-valued function over the basis of V;
/// throws when the function leaks outside the subspace.
inline Eigen::VectorXd coeff_vector_in(const TrigPoly& h,
                                       const std::vector<RealBasisLabel>& basis,
                                       double leak_tol = 1e-11) {
  RealBasisCoeffs rc = to_real_basis(h);
  Eigen::VectorXd v = Eigen::VectorXd::Zero(basis.size());
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const auto& b = basis[i];
    auto& m = b.kind == RealBasisLabel::Cos ? rc.c : rc.s;
    auto it = m.find(b.k);
    if (it != m.end()) {
      v(i) = it->second;
      m.erase(it);
    }
  }
  double scale = std::max(1.0, v.cwiseAbs().maxCoeff());
  for (const auto& [k, a] : rc.c)
    if (std::abs(a) > leak_tol * scale)
      throw std::invalid_argument("coeff_vector_in: c_" + std::to_string(k) +
                                  " outside subspace");
  for (const auto& [k, a] : rc.s)
    if (std::abs(a) > leak_tol * scale)
      throw std::invalid_argument("coeff_vector_in: s_" + std::to_string(k) +
                                  " outside subspace");
  return v;
}

/// Q = sum_i v_i v_i^T over the basis of V; psd by construction.
inline GramMatrix gram_from_certificate(const SosCertificate& cert,
                                        const FrequencySet& V) {
  GramMatrix g;
  g.n = cert.n;
  g.basis = real_basis_of(V);
  g.Q = Eigen::MatrixXd::Zero(g.basis.size(), g.basis.size());
  for (const auto& h : cert.squares) {
    const Eigen::VectorXd v = coeff_vector_in(h, g.basis);
    g.Q += v * v.transpose();
  }
  return g;
}

/// T_V(Q) = sum_ij Q_ij b_i b_j as a function on the vertex set.
inline TrigPoly gram_apply(const GramMatrix& g) {
  std::vector<TrigPoly> b;
  b.reserve(g.basis.size());
  for (const auto& label : g.basis) b.push_back(basis_function(g.n, label));
  TrigPoly out(g.n);
  for (Eigen::Index i = 0; i < g.Q.rows(); ++i)
    for (Eigen::Index j = 0; j < g.Q.cols(); ++j)
      if (g.Q(i, j) != 0.0) out = out + g.Q(i, j) * trig_mul(b[i], b[j]);
  return out;
}

/// Re-extract squares from a Gram matrix by eigendecomposition.
inline SosCertificate squares_from_gram(const GramMatrix& g, const TrigPoly& target) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g.Q);
  const double scale = std::max(1.0, g.Q.cwiseAbs().maxCoeff());
  SosCertificate cert(g.n, target);
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    const double lam = es.eigenvalues()(i);
    if (lam < -1e-12 * scale)
      throw std::invalid_argument("squares_from_gram: Gram matrix not psd");
    if (lam <= 0.0) continue;
    TrigPoly h(g.n);
    for (std::size_t j = 0; j < g.basis.size(); ++j)
      h = h + std::sqrt(lam) * es.eigenvectors()(j, i) * basis_function(g.n, g.basis[j]);
    cert.squares.push_back(std::move(h));
  }
  return cert;
}

// -- JSON ---------------------------------------------------------------
// {"n": N, "target": TrigPoly, "squares": [TrigPoly...], "scheme": str}

inline void to_json(nlohmann::json& j, const SosCertificate& cert) {
  j = nlohmann::json{{"n", cert.n},
                     {"target", cert.target},
                     {"squares", cert.squares},
                     {"scheme", cert.scheme}};
}

inline SosCertificate certificate_from_json(const nlohmann::json& j) {
  SosCertificate cert(j.at("n").get<int>(), trig_poly_from_json(j.at("target")));
  for (const auto& sq : j.at("squares"))
    cert.squares.push_back(trig_poly_from_json(sq));
  cert.scheme = j.value("scheme", "custom");
  return cert;
}

}  // namespace ngonlift
