#pragma once

// Nonnegative univariate interpolation over level sequences, Chebyshev
// machinery, and the degree-2*ceil(N/4) interpolant certifying the
// sum-of-squares level of the regular N-gon.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "ngonlift/trigspace.hpp"

namespace ngonlift {

/// Dense univariate polynomial, lowest degree first.
struct Poly1 {
  std::vector<double> c;

  Poly1() = default;
  explicit Poly1(std::vector<double> coeffs) : c(std::move(coeffs)) {}
};

inline double max_abs_coeff(const Poly1& p) {
  double m = 0.0;
  for (double x : p.c) m = std::max(m, std::abs(x));
  return m;
}

/// Drop leading coefficients below 1e-14 relative to the largest one.
inline Poly1 poly_trim(Poly1 p) {
  const double thresh = 1e-14 * max_abs_coeff(p);
  while (!p.c.empty() && std::abs(p.c.back()) <= thresh) p.c.pop_back();
  return p;
}

/// Degree after trimming; the zero polynomial reports -1.
inline int poly_degree(const Poly1& p) {
  return static_cast<int>(poly_trim(p).c.size()) - 1;
}

inline double poly_eval(const Poly1& p, double x) {
  double acc = 0.0;
  for (auto it = p.c.rbegin(); it != p.c.rend(); ++it) acc = acc * x + *it;
  return acc;
}

inline Complex poly_eval(const Poly1& p, Complex x) {
  Complex acc(0, 0);
  for (auto it = p.c.rbegin(); it != p.c.rend(); ++it) acc = acc * x + *it;
  return acc;
}

inline Poly1 poly_derivative(const Poly1& p) {
  Poly1 d;
  for (std::size_t i = 1; i < p.c.size(); ++i) d.c.push_back(i * p.c[i]);
  return d;
}

inline Poly1 poly_add(const Poly1& p, const Poly1& q) {
  Poly1 r;
  r.c.resize(std::max(p.c.size(), q.c.size()), 0.0);
  for (std::size_t i = 0; i < p.c.size(); ++i) r.c[i] += p.c[i];
  for (std::size_t i = 0; i < q.c.size(); ++i) r.c[i] += q.c[i];
  return r;
}

inline Poly1 poly_scale(double a, const Poly1& p) {
  Poly1 r = p;
  for (double& x : r.c) x *= a;
  return r;
}

inline Poly1 poly_sub(const Poly1& p, const Poly1& q) {
  return poly_add(p, poly_scale(-1.0, q));
}

inline Poly1 poly_mul(const Poly1& p, const Poly1& q) {
  if (p.c.empty() || q.c.empty()) return Poly1{};
  Poly1 r;
  r.c.assign(p.c.size() + q.c.size() - 1, 0.0);
  for (std::size_t i = 0; i < p.c.size(); ++i)
    for (std::size_t j = 0; j < q.c.size(); ++j) r.c[i + j] += p.c[i] * q.c[j];
  return r;
}

/// Monic polynomial with the given roots.
inline Poly1 poly_from_roots(const std::vector<double>& roots) {
  Poly1 p(std::vector<double>{1.0});
  for (double r : roots) p = poly_mul(p, Poly1({-r, 1.0}));
  return p;
}

/// Divide by (x - u); returns quotient, discards the remainder.
inline Poly1 poly_deflate(const Poly1& p, double u) {
  if (p.c.size() < 2) return Poly1{};
  Poly1 q;
  q.c.assign(p.c.size() - 1, 0.0);
  double carry = p.c.back();
  for (std::size_t i = p.c.size() - 1; i-- > 0;) {
    q.c[i] = carry;
    carry = p.c[i] + carry * u;
  }
  return q;
}

/// All complex roots via the companion matrix.  Coefficients are
/// normalized by the max-abs coefficient first; exact trailing zeros are
/// stripped beforehand so roots at the origin come out exact.
inline std::vector<Complex> poly_roots(const Poly1& poly) {
  Poly1 p = poly_trim(poly);
  std::vector<Complex> roots;
  if (p.c.size() <= 1) return roots;
  while (!p.c.empty() && p.c.front() == 0.0) {
    roots.emplace_back(0.0, 0.0);
    p.c.erase(p.c.begin());
  }
  const int d = static_cast<int>(p.c.size()) - 1;
  if (d <= 0) return roots;
  const double scale = max_abs_coeff(p);
  for (double& x : p.c) x /= scale;

  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(d, d);
  for (int i = 1; i < d; ++i) companion(i, i - 1) = 1.0;
  for (int i = 0; i < d; ++i) companion(i, d - 1) = -p.c[i] / p.c[d];
  Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, /*computeEigenvectors=*/false);
  for (int i = 0; i < d; ++i) roots.push_back(solver.eigenvalues()(i));
  return roots;
}

/// Real roots with multiplicities.  Eigenvalues within the cluster
/// tolerance of the real axis count as real; nearby reals merge into one
/// root whose multiplicity is the cluster size.
struct RealRoot {
  double x;
  int multiplicity;
};

inline std::vector<RealRoot> real_roots_clustered(const Poly1& p,
                                                  double cluster_tol = 1e-7) {
  std::vector<double> reals;
  for (const Complex& z : poly_roots(p)) {
    const double scale = std::max(1.0, std::abs(z));
    if (std::abs(z.imag()) <= cluster_tol * scale) reals.push_back(z.real());
  }
  std::sort(reals.begin(), reals.end());
  std::vector<RealRoot> out;
  for (double r : reals) {
    const double scale = std::max(1.0, std::abs(r));
    if (!out.empty() && r - out.back().x <= cluster_tol * scale) {
      // Keep the running mean as the cluster representative.
      auto& back = out.back();
      back.x = (back.x * back.multiplicity + r) / (back.multiplicity + 1);
      back.multiplicity += 1;
    } else {
      out.push_back({r, 1});
    }
  }
  return out;
}

/// Outcome of a nonnegativity decision; `witness` is a point with a
/// strictly negative value when the answer is no.
struct NonnegDecision {
  bool nonneg;
  double witness = 0.0;
};

namespace detail {

inline double cauchy_root_bound(const Poly1& p) {
  double b = 0.0;
  for (std::size_t i = 0; i + 1 < p.c.size(); ++i)
    b = std::max(b, std::abs(p.c[i] / p.c.back()));
  return 1.0 + b;
}

/// Values of |p| below this bound are indistinguishable from zero: the
/// stored coefficients only carry the polynomial to relative rounding
/// accuracy, which matters once coefficients grow far beyond the values
/// taken on the region of interest (the theta-rank interpolants reach
/// coefficients ~1e8 while staying O(1) on [-1, 1]).
inline double representation_noise(const Poly1& p, double x) {
  double acc = 0.0;
  const double ax = std::abs(x);
  for (auto it = p.c.rbegin(); it != p.c.rend(); ++it)
    acc = acc * ax + std::abs(*it);
  return 16.0 * std::numeric_limits<double>::epsilon() * p.c.size() * acc;
}

/// Search for a value below the representation noise floor near the
/// suspect points.
inline std::optional<double> find_negative_point(const Poly1& p,
                                                 std::vector<double> suspects,
                                                 double lo_bound,
                                                 double hi_bound) {
  std::vector<double> samples;
  std::sort(suspects.begin(), suspects.end());
  for (std::size_t i = 0; i + 1 < suspects.size(); ++i)
    samples.push_back(0.5 * (suspects[i] + suspects[i + 1]));
  for (double s : suspects) {
    for (double step : {1e-4, 1e-2, 1e-1, 1.0}) {
      samples.push_back(s - step);
      samples.push_back(s + step);
    }
  }
  samples.push_back(lo_bound);
  samples.push_back(hi_bound);
  double best_x = 0.0, best_v = 0.0;
  for (double x : samples) {
    const double v = poly_eval(p, x);
    if (v + representation_noise(p, x) < 0.0 && v < best_v) {
      best_v = v;
      best_x = x;
    }
  }
  if (best_v < 0.0) return best_x;
  return std::nullopt;
}

}  // namespace detail

/// Decides p(x) >= 0 for all real x.  Yes exactly when the degree is
/// even, the leading coefficient is positive and every real root has
/// even multiplicity; otherwise reports a point where p is negative.
inline NonnegDecision is_globally_nonnegative(const Poly1& poly) {
  const Poly1 p = poly_trim(poly);
  if (p.c.empty()) return {true};
  const int d = static_cast<int>(p.c.size()) - 1;
  if (d == 0) return p.c[0] >= 0.0 ? NonnegDecision{true}
                                   : NonnegDecision{false, 0.0};
  const double bound = detail::cauchy_root_bound(p);
  if (d % 2 == 1) {
    // Odd degree: negative on one unbounded side.
    double x = p.c.back() > 0 ? -bound : bound;
    while (poly_eval(p, x) >= 0.0) x *= 2.0;
    return {false, x};
  }
  if (p.c.back() < 0.0) {
    double x = bound;
    while (poly_eval(p, x) >= 0.0) x *= 2.0;
    return {false, x};
  }
  std::vector<double> odd_roots;
  for (const RealRoot& r : real_roots_clustered(p))
    if (r.multiplicity % 2 == 1) odd_roots.push_back(r.x);
  if (odd_roots.empty()) return {true};
  auto witness = detail::find_negative_point(p, odd_roots, -bound, bound);
  if (witness) return {false, *witness};
  // Odd-looking root pattern but every dip sits below the noise floor:
  // a tangent root whose multiplicity split numerically.
  return {true};
}

/// Decides p(x) >= 0 for all x in [lo, infinity).
inline NonnegDecision is_nonnegative_on_halfline(const Poly1& poly, double lo) {
  const Poly1 p = poly_trim(poly);
  if (p.c.empty()) return {true};
  const int d = static_cast<int>(p.c.size()) - 1;
  if (d == 0) return p.c[0] >= 0.0 ? NonnegDecision{true}
                                   : NonnegDecision{false, lo};
  const double bound = detail::cauchy_root_bound(p);
  if (p.c.back() < 0.0) {
    double x = std::max(lo, 0.0) + bound;
    while (poly_eval(p, x) >= 0.0) x *= 2.0;
    return {false, x};
  }
  const double scale = std::max(1.0, max_abs_coeff(p));
  const double boundary_tol = 1e-10 * scale;
  if (poly_eval(p, lo) < -boundary_tol) return {false, lo};
  std::vector<double> odd_roots;
  for (const RealRoot& r : real_roots_clustered(p))
    if (r.multiplicity % 2 == 1 && r.x > lo + 1e-9 * std::max(1.0, std::abs(lo)))
      odd_roots.push_back(r.x);
  if (odd_roots.empty()) return {true};
  auto witness = detail::find_negative_point(p, odd_roots, lo, bound);
  if (witness && *witness >= lo) return {false, *witness};
  return {true};
}

// ---------------------------------------------------------------------
// Level sequences

/// Strictly monotone values taken by a facet functional on the vertices.
/// Increasing orientation starts at a_0 = 0; decreasing is used for the
/// polygon levels a_0 = cos(pi/N) > a_1 > ...
struct LevelSequence {
  std::vector<double> values;
  bool increasing = true;

  LevelSequence(std::vector<double> v, bool inc) : values(std::move(v)), increasing(inc) {
    for (std::size_t i = 0; i + 1 < values.size(); ++i) {
      const bool ok = inc ? values[i] < values[i + 1] : values[i] > values[i + 1];
      if (!ok) throw std::invalid_argument("LevelSequence: not strictly monotone");
    }
    if (inc && !values.empty() && values.front() != 0.0)
      throw std::invalid_argument("LevelSequence: increasing orientation starts at 0");
  }
  std::size_t size() const { return values.size(); }
};

/// Monic q(x) = prod_i (x - a_i).
inline Poly1 vanishing_poly(const LevelSequence& a) {
  return poly_from_roots(a.values);
}

/// The unique degree-k candidate p(x) = -q(x)/q'(0) + x with p(a_i) = a_i
/// and p'(0) = 0.  Whether it is nonnegative is a separate decision.
inline Poly1 candidate_interpolant(const LevelSequence& a) {
  if (!a.increasing)
    throw std::invalid_argument("candidate_interpolant: increasing orientation required");
  const Poly1 q = vanishing_poly(a);
  const double qp0 = q.c.size() > 1 ? q.c[1] : 0.0;
  if (qp0 == 0.0)
    throw std::invalid_argument("candidate_interpolant: q'(0) = 0 (repeated root at 0)");
  Poly1 p = poly_scale(-1.0 / qp0, q);
  p.c[1] += 1.0;
  return p;
}

/// True iff the curve of q lies above its tangent at x = u, decided by
/// deflating the forced double root at u and testing the quotient.
inline bool tangent_condition(const Poly1& q, double u) {
  const double qu = poly_eval(q, u);
  const double qpu = poly_eval(poly_derivative(q), u);
  Poly1 r = q;
  if (r.c.size() < 2) r.c.resize(2, 0.0);
  r.c[0] -= qu - qpu * u;
  r.c[1] -= qpu;
  const Poly1 g = poly_deflate(poly_deflate(r, u), u);
  return is_globally_nonnegative(g).nonneg;
}

/// a_{i+j} <= a_i + a_j for all index pairs with i+j <= k-1.
inline bool is_subadditive(const LevelSequence& a) {
  if (!a.increasing || a.values.empty() || a.values.front() != 0.0)
    throw std::invalid_argument("is_subadditive: increasing sequence with a_0 = 0 required");
  const auto& v = a.values;
  const std::size_t k = v.size();
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; i + j < k; ++j)
      if (v[i + j] > v[i] + v[j]) return false;
  return true;
}

/// Length-4 exact characterization: (a1+a2+a3)^2 <= 4(a1a2+a1a3+a2a3).
/// Ordering is accepted non-strictly so the cone centre (1,1,1) is valid.
inline bool disccone_check(double a1, double a2, double a3) {
  if (!(0 < a1 && a1 <= a2 && a2 <= a3))
    throw std::invalid_argument("disccone_check: need 0 < a1 <= a2 <= a3");
  const double s = a1 + a2 + a3;
  return s * s <= 4.0 * (a1 * a2 + a1 * a3 + a2 * a3);
}

/// Chebyshev polynomial T_m via the three-term recurrence.
inline Poly1 chebyshev(int m) {
  if (m < 0) throw std::invalid_argument("chebyshev: m >= 0 required");
  Poly1 prev({1.0});
  if (m == 0) return prev;
  Poly1 cur({0.0, 1.0});
  for (int i = 1; i < m; ++i) {
    Poly1 next = poly_sub(poly_scale(2.0, poly_mul(Poly1({0.0, 1.0}), cur)), prev);
    prev = std::move(cur);
    cur = std::move(next);
  }
  return cur;
}

/// The ceil(N/2) distinct values cos((2i+1)pi/N) of x on the N-gon
/// vertices, strictly decreasing from cos(pi/N).
inline LevelSequence ngon_levels(int n) {
  if (n < 3) throw std::invalid_argument("ngon_levels: N >= 3 required");
  const int k = (n + 1) / 2;
  std::vector<double> v(k);
  for (int i = 0; i < k; ++i)
    v[i] = std::cos((2.0 * i + 1.0) * std::numbers::pi / n);
  return LevelSequence(std::move(v), /*increasing=*/false);
}

namespace detail {

// Chebyshev-basis workhorses for the theta-rank construction.  In the
// monomial basis the interpolant's coefficients reach ~1e8 while its
// values on [-1, 1] stay O(1), so every monomial-side computation loses
// eight digits; in the T_j basis all coefficients stay O(1).

/// Multiply a T-series by x:  x T_j = (T_{j-1} + T_{j+1})/2.
inline std::vector<double> cheb_mul_x(const std::vector<double>& a) {
  std::vector<double> out(a.size() + 1, 0.0);
  for (std::size_t j = 0; j < a.size(); ++j) {
    if (j == 0) {
      out[1] += a[0];
    } else {
      out[j - 1] += 0.5 * a[j];
      out[j + 1] += 0.5 * a[j];
    }
  }
  return out;
}

/// Divide a T-series by (x - u), discarding the remainder.
inline std::vector<double> cheb_deflate(const std::vector<double>& b, double u) {
  const int d = static_cast<int>(b.size()) - 1;
  if (d <= 0) return {};
  std::vector<double> c(d, 0.0);
  if (d == 1) {
    c[0] = b[1];
    return c;
  }
  c[d - 1] = 2.0 * b[d];
  for (int k = d - 1; k >= 2; --k)
    c[k - 1] = 2.0 * b[k] + 2.0 * u * c[k] - (k + 1 <= d - 1 ? c[k + 1] : 0.0);
  c[0] = b[1] + u * c[1] - (d >= 3 ? 0.5 * c[2] : 0.0);
  return c;
}

inline Poly1 cheb_to_monomial(const std::vector<double>& a) {
  Poly1 out;
  for (std::size_t j = 0; j < a.size(); ++j) {
    if (a[j] == 0.0) continue;
    const Poly1 tj = chebyshev(static_cast<int>(j));
    out = poly_add(out, poly_scale(a[j], tj));
  }
  return out;
}

/// d/dx sum a_j T_j at cos(theta), via T'_j(cos t) = j sin(jt)/sin t.
inline double cheb_series_derivative_at_cos(const std::vector<double>& a,
                                            double theta) {
  double acc = 0.0;
  for (std::size_t j = 1; j < a.size(); ++j)
    acc += a[j] * j * std::sin(j * theta);
  return acc / std::sin(theta);
}

/// Roots of a T-series from the colleague matrix.
inline std::vector<Complex> colleague_roots(std::vector<double> a) {
  while (!a.empty() && a.back() == 0.0) a.pop_back();
  const int d = static_cast<int>(a.size()) - 1;
  std::vector<Complex> roots;
  if (d <= 0) return roots;
  if (d == 1) {
    roots.emplace_back(-a[0] / a[1], 0.0);
    return roots;
  }
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(d, d);
  m(0, 1) = 1.0;
  for (int i = 1; i < d; ++i) {
    m(i, i - 1) = 0.5;
    if (i + 1 < d) m(i, i + 1) = 0.5;
  }
  for (int j = 0; j < d; ++j) m(d - 1, j) -= a[j] / (2.0 * a[d]);
  Eigen::EigenSolver<Eigen::MatrixXd> solver(m, /*computeEigenvectors=*/false);
  for (int i = 0; i < d; ++i) roots.push_back(solver.eigenvalues()(i));
  return roots;
}

/// The (possibly dummy-root-augmented) vanishing polynomial of the
/// polygon levels, written exactly in the Chebyshev basis: proportional
/// to T_{N/2} for even N and to T_{floor(N/2)} + T_{ceil(N/2)} for odd
/// N, with an extra factor x when ceil(N/2) is odd.
inline std::vector<double> ngon_q_cheb(int n) {
  std::vector<double> q;
  if (n % 2 == 0) {
    q.assign(n / 2 + 1, 0.0);
    q[n / 2] = 1.0;
  } else {
    q.assign((n + 1) / 2 + 1, 0.0);
    q[(n - 1) / 2] = 1.0;
    q[(n + 1) / 2] = 1.0;
  }
  if (((n + 1) / 2) % 2 == 1) q = cheb_mul_x(q);  // dummy root at 0
  return q;
}

/// T-series of the theta-rank interpolant p = (a_0 - x) + q(x)/q'(a_0).
inline std::vector<double> theta_rank_cheb_series(int n) {
  const double a0 = std::cos(std::numbers::pi / n);
  const std::vector<double> q = ngon_q_cheb(n);
  const double qpa0 = cheb_series_derivative_at_cos(q, std::numbers::pi / n);
  std::vector<double> p = q;
  for (double& x : p) x /= qpa0;
  p[0] += a0;
  p[1] -= 1.0;

  // Guard from the appendix case analysis: q sits above its tangent at
  // a_0, equivalently p stays nonnegative once the double root at a_0 is
  // divided out.  A violation would mean the construction is wrong.
  const std::vector<double> quotient = cheb_deflate(cheb_deflate(p, a0), a0);
  if (!is_globally_nonnegative(cheb_to_monomial(quotient)).nonneg)
    throw std::runtime_error("theta_rank_interpolant: tangent condition failed at N=" +
                             std::to_string(n));
  return p;
}

}  // namespace detail

/// Globally nonnegative p of degree 2*ceil(N/4) with p(a_i) = a_0 - a_i
/// on the polygon levels.  When ceil(N/2) is odd the vanishing
/// polynomial gets a dummy root at x = 0 before taking the tangent
/// construction; p then additionally interpolates a_0 - x at 0, which is
/// harmless.  Built as p = (a_0 - x) + q(x)/q'(a_0) in the Chebyshev
/// basis, where q is exactly representable and q'(a_0) has a stable
/// closed form; only the final monomial view carries the basis-change
/// coefficient growth.
inline Poly1 theta_rank_interpolant(int n) {
  return detail::cheb_to_monomial(detail::theta_rank_cheb_series(n));
}

/// Checks q_N against its closed Chebyshev form: proportional to
/// T_{N/2} for even N and to (T_{floor(N/2)} + T_{ceil(N/2)})/2 for odd N.
inline bool lemma_qN_cheb_check(int n) {
  const Poly1 q = poly_trim(vanishing_poly(ngon_levels(n)));
  Poly1 rhs;
  if (n % 2 == 0)
    rhs = chebyshev(n / 2);
  else
    rhs = poly_scale(0.5, poly_add(chebyshev(n / 2), chebyshev((n + 1) / 2)));
  rhs = poly_trim(rhs);
  if (q.c.size() != rhs.c.size()) return false;
  const double ratio = q.c.back() / rhs.c.back();
  double err = 0.0, scale = 0.0;
  for (std::size_t i = 0; i < q.c.size(); ++i) {
    err = std::max(err, std::abs(q.c[i] - ratio * rhs.c[i]));
    scale = std::max(scale, std::abs(ratio * rhs.c[i]));
  }
  return err <= 1e-8 * std::max(1.0, scale);
}

/// Tangent-line lemma for T_N at u >= cos(pi/N): globally for even N,
/// on [-1, infinity) for odd N.
inline bool cheb_tangent_lemma_check(int n, double u) {
  if (u < std::cos(std::numbers::pi / n) - 1e-12)
    throw std::invalid_argument("cheb_tangent_lemma_check: u >= cos(pi/N) required");
  const Poly1 t = chebyshev(n);
  const double tu = poly_eval(t, u);
  const double tpu = poly_eval(poly_derivative(t), u);
  Poly1 r = t;
  r.c[0] -= tu - tpu * u;
  r.c[1] -= tpu;
  const Poly1 g = poly_deflate(poly_deflate(r, u), u);
  if (n % 2 == 0) return is_globally_nonnegative(g).nonneg;
  return is_nonnegative_on_halfline(g, -1.0).nonneg;
}

}  // namespace ngonlift
