#pragma once

// Arithmetic in the space of functions on the vertices of the regular N-gon.
//
// Vertices sit at angles theta_i = (2i-1)*pi/N, i = 1..N.  Functions are
// stored over the complex basis e_k(theta) = exp(-ik*pi/N) * exp(ik*theta),
// k in Z_N.  The phase twist makes e_{k+N} = e_k hold exactly on the vertex
// set, so frequencies are plain residues mod N and pointwise multiplication
// is convolution of coefficient maps: e_k * e_k' = e_{k+k'}.
//
// On vertex i the basis function takes the value omega^{k(i-1)} with
// omega = exp(2*pi*i/N), i.e. evaluation is a plain DFT.
//
// The real cosine/sine view: c_k = cos(k*theta), s_k = sin(k*theta) on the
// vertex set, with s_0 = 0 and c_{N/2} = 0 when N is even.

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <numbers>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace ngonlift {

using Complex = std::complex<double>;

/// A residue-class frequency k in Z_N.
struct Frequency {
  int modulus = 0;
  int value = 0;

  Frequency(int n, int k) : modulus(n) {
    if (n < 3) throw std::invalid_argument("Frequency: modulus must be >= 3");
    value = ((k % n) + n) % n;
  }
  friend bool operator==(const Frequency&, const Frequency&) = default;
};

/// Shortest arc between two frequencies on the cycle graph of Z_N.
inline int cycle_distance(int n, int a, int b) {
  int d = ((a - b) % n + n) % n;
  return std::min(d, n - d);
}

inline int cycle_distance(const Frequency& a, const Frequency& b) {
  if (a.modulus != b.modulus)
    throw std::invalid_argument("cycle_distance: modulus mismatch");
  return cycle_distance(a.modulus, a.value, b.value);
}

/// A sorted set of residues in Z_N.
struct FrequencySet {
  int modulus = 0;
  std::vector<int> members;  // sorted, unique, all in [0, modulus)

  FrequencySet() = default;
  FrequencySet(int n, std::vector<int> ks) : modulus(n) {
    std::set<int> canon;
    for (int k : ks) canon.insert(((k % n) + n) % n);
    members.assign(canon.begin(), canon.end());
  }
  bool contains(int k) const {
    k = ((k % modulus) + modulus) % modulus;
    return std::binary_search(members.begin(), members.end(), k);
  }
  std::size_t size() const { return members.size(); }
  friend bool operator==(const FrequencySet&, const FrequencySet&) = default;
};

/// Smallest r such that the set fits in a cyclic interval [x, x+r].
/// Computed as N minus the largest gap between cyclically consecutive
/// members; the full set Z_N therefore reports N-1.
inline int in_diameter(const FrequencySet& K) {
  if (K.members.empty()) throw std::invalid_argument("in_diameter: empty set");
  const int n = K.modulus;
  const auto& m = K.members;
  int max_gap = m.front() + n - m.back();
  for (std::size_t i = 1; i < m.size(); ++i)
    max_gap = std::max(max_gap, m[i] - m[i - 1]);
  return n - max_gap;
}

inline double vertex_angle(int n, int i) {
  return (2.0 * i - 1.0) * std::numbers::pi / n;
}

/// Function on the N-gon vertex set, stored as a sparse coefficient map
/// over the e_k basis.  Immutable-by-convention value type; exact-zero
/// coefficients are pruned, near-zeros are kept.
class TrigPoly {
 public:
  explicit TrigPoly(int n) : n_(n) {
    if (n < 3) throw std::invalid_argument("TrigPoly: N must be >= 3");
  }

  int modulus() const { return n_; }
  const std::map<int, Complex>& coeffs() const { return coeffs_; }

  Complex coeff(int k) const {
    auto it = coeffs_.find(canon(k));
    return it == coeffs_.end() ? Complex(0, 0) : it->second;
  }

  void set_coeff(int k, Complex z) {
    const int kk = canon(k);
    if (z == Complex(0, 0))
      coeffs_.erase(kk);
    else
      coeffs_[kk] = z;
  }

  void add_coeff(int k, Complex z) { set_coeff(k, coeff(k) + z); }

  /// Residues with nonzero stored coefficient.
  FrequencySet support() const {
    std::vector<int> ks;
    ks.reserve(coeffs_.size());
    for (const auto& [k, z] : coeffs_) ks.push_back(k);
    return FrequencySet(n_, std::move(ks));
  }

  /// Support folded into the real frequency range {0, ..., floor(N/2)}:
  /// both e_k and e_{N-k} contribute to the degree-k component T_k.
  FrequencySet real_support() const {
    std::vector<int> ks;
    for (const auto& [k, z] : coeffs_) ks.push_back(std::min(k, n_ - k));
    return FrequencySet(n_, std::move(ks));
  }

  // -- basis functions -------------------------------------------------

  static TrigPoly e(int n, int k) {
    TrigPoly f(n);
    f.set_coeff(k, Complex(1, 0));
    return f;
  }

  static TrigPoly constant(int n, Complex value) {
    TrigPoly f(n);
    f.set_coeff(0, value);
    return f;
  }

  /// c_k = cos(k*theta) = (e^{i pi k/N} e_k + e^{-i pi k/N} e_{-k}) / 2.
  /// For even N, c_{N/2} is exactly the zero function (the phases are
  /// +-pi/2), and the zero is produced structurally rather than as a
  /// rounding residue.
  static TrigPoly c(int n, int k) {
    TrigPoly f(n);
    if (((2 * (((k % n) + n) % n)) % (2 * n)) == n) return f;
    const double ph = std::numbers::pi * k / n;
    f.add_coeff(k, std::polar(0.5, ph));
    f.add_coeff(-k, std::polar(0.5, -ph));
    return f;
  }

  /// s_k = sin(k*theta) = (e^{i pi k/N} e_k - e^{-i pi k/N} e_{-k}) / (2i).
  static TrigPoly s(int n, int k) {
    TrigPoly f(n);
    const double ph = std::numbers::pi * k / n;
    const Complex inv_2i(0, -0.5);
    f.add_coeff(k, inv_2i * std::polar(1.0, ph));
    f.add_coeff(-k, -inv_2i * std::polar(1.0, -ph));
    return f;
  }

  // -- arithmetic -------------------------------------------------------

  friend TrigPoly operator+(const TrigPoly& f, const TrigPoly& g) {
    check_same(f, g);
    TrigPoly h = f;
    for (const auto& [k, z] : g.coeffs_) h.add_coeff(k, z);
    return h;
  }

  friend TrigPoly operator-(const TrigPoly& f, const TrigPoly& g) {
    check_same(f, g);
    TrigPoly h = f;
    for (const auto& [k, z] : g.coeffs_) h.add_coeff(k, -z);
    return h;
  }

  friend TrigPoly operator*(Complex a, const TrigPoly& f) {
    TrigPoly h(f.n_);
    for (const auto& [k, z] : f.coeffs_) h.set_coeff(k, a * z);
    return h;
  }

  friend TrigPoly operator*(double a, const TrigPoly& f) {
    return Complex(a, 0) * f;
  }

 private:
  int canon(int k) const { return ((k % n_) + n_) % n_; }
  static void check_same(const TrigPoly& f, const TrigPoly& g) {
    if (f.n_ != g.n_) throw std::invalid_argument("TrigPoly: modulus mismatch");
  }

  int n_;
  std::map<int, Complex> coeffs_;
};

/// Pointwise product; frequencies add mod N with no phase correction
/// needed thanks to the e_k convention.
inline TrigPoly trig_mul(const TrigPoly& f, const TrigPoly& g) {
  if (f.modulus() != g.modulus())
    throw std::invalid_argument("trig_mul: modulus mismatch");
  TrigPoly h(f.modulus());
  for (const auto& [a, za] : f.coeffs())
    for (const auto& [b, zb] : g.coeffs()) h.add_coeff(a + b, za * zb);
  return h;
}

/// Complex conjugate as a function: e_k^* = e_{-k}.
inline TrigPoly conjugate(const TrigPoly& f) {
  TrigPoly h(f.modulus());
  for (const auto& [k, z] : f.coeffs()) h.set_coeff(-k, std::conj(z));
  return h;
}

/// Value at vertex i (1-based):  sum_k coeff(k) omega^{k(i-1)}.
inline Complex eval_at_vertex(const TrigPoly& f, int i) {
  const int n = f.modulus();
  if (i < 1 || i > n) throw std::out_of_range("eval_at_vertex: vertex index");
  Complex acc(0, 0);
  for (const auto& [k, z] : f.coeffs()) {
    // Reduce k(i-1) mod N in integers so the phase stays in [0, 2*pi).
    const long long m = (static_cast<long long>(k) * (i - 1)) % n;
    acc += z * std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(m) / n);
  }
  return acc;
}

/// result(theta) = f(theta - 2*pi*r/N): coefficient k picks up the phase
/// exp(-2*pi*i*k*r/N).  Support-preserving.
inline TrigPoly rotate(const TrigPoly& f, int r) {
  const int n = f.modulus();
  TrigPoly h(n);
  for (const auto& [k, z] : f.coeffs()) {
    const int kr = static_cast<int>((static_cast<long long>(k) * (((r % n) + n) % n)) % n);
    h.set_coeff(k, z * std::polar(1.0, -2.0 * std::numbers::pi * kr / n));
  }
  return h;
}

inline bool is_real_valued(const TrigPoly& f, double tol = 1e-9) {
  for (const auto& [k, z] : f.coeffs())
    if (std::abs(z - std::conj(f.coeff(-k))) > tol) return false;
  return true;
}

/// Coefficients over the real basis {c_k, s_k : k = 0..floor(N/2)}.
/// s_0 and (for even N) c_{N/2} never carry a coefficient.
struct RealBasisCoeffs {
  int modulus = 0;
  std::map<int, double> c;
  std::map<int, double> s;
};

inline RealBasisCoeffs to_real_basis(const TrigPoly& f, double tol = 1e-9) {
  if (!is_real_valued(f, tol))
    throw std::invalid_argument("to_real_basis: input is not real-valued");
  const int n = f.modulus();
  RealBasisCoeffs out;
  out.modulus = n;
  for (const auto& [k, z] : f.coeffs()) {
    if (k == 0) {
      if (z.real() != 0.0) out.c[0] = z.real();
    } else if (2 * k == n) {
      // e_{N/2} equals s_{N/2} on the vertex set (c_{N/2} = 0).
      if (z.real() != 0.0) out.s[n / 2] = z.real();
    } else if (2 * k < n) {
      const Complex w = 2.0 * z * std::polar(1.0, -std::numbers::pi * k / n);
      if (w.real() != 0.0) out.c[k] = w.real();
      if (w.imag() != 0.0) out.s[k] = -w.imag();
    }
    // k > N/2 entries are the conjugate partners; nothing new.
  }
  return out;
}

inline TrigPoly from_real_basis(const RealBasisCoeffs& rc) {
  TrigPoly f(rc.modulus);
  for (const auto& [k, a] : rc.c) f = f + a * TrigPoly::c(rc.modulus, k);
  for (const auto& [k, b] : rc.s) f = f + b * TrigPoly::s(rc.modulus, k);
  return f;
}

inline int in_diameter(const TrigPoly& f) { return in_diameter(f.support()); }

/// Tag for one element of the real basis {c_k, s_k}.
struct RealBasisLabel {
  enum Kind { Cos, Sin };
  Kind kind;
  int k;

  friend bool operator==(const RealBasisLabel&, const RealBasisLabel&) = default;
};

inline std::string to_string(const RealBasisLabel& b) {
  return (b.kind == RealBasisLabel::Cos ? "c" : "s") + std::to_string(b.k);
}

inline TrigPoly basis_function(int n, const RealBasisLabel& b) {
  return b.kind == RealBasisLabel::Cos ? TrigPoly::c(n, b.k) : TrigPoly::s(n, b.k);
}

/// Ordered real basis of the invariant subspace with frequencies K:
/// c_0 first when 0 is present, then c_k, s_k for each k ascending.
/// s_0 never appears and c_{N/2} is dropped for even N.
inline std::vector<RealBasisLabel> real_basis_of(const FrequencySet& K) {
  const int n = K.modulus;
  std::vector<RealBasisLabel> basis;
  for (int k : K.members) {
    if (2 * k > n)
      throw std::invalid_argument("real_basis_of: frequency above floor(N/2)");
    if (k == 0) {
      basis.push_back({RealBasisLabel::Cos, 0});
    } else if (2 * k == n) {
      basis.push_back({RealBasisLabel::Sin, k});
    } else {
      basis.push_back({RealBasisLabel::Cos, k});
      basis.push_back({RealBasisLabel::Sin, k});
    }
  }
  return basis;
}

// -- JSON encoding ------------------------------------------------------
// {"n": N, "coeffs": [{"k": int, "re": float, "im": float}, ...]}

inline void to_json(nlohmann::json& j, const TrigPoly& f) {
  j = nlohmann::json{{"n", f.modulus()}, {"coeffs", nlohmann::json::array()}};
  for (const auto& [k, z] : f.coeffs())
    j["coeffs"].push_back({{"k", k}, {"re", z.real()}, {"im", z.imag()}});
}

inline TrigPoly trig_poly_from_json(const nlohmann::json& j) {
  TrigPoly f(j.at("n").get<int>());
  for (const auto& e : j.at("coeffs"))
    f.add_coeff(e.at("k").get<int>(),
                Complex(e.at("re").get<double>(), e.at("im").get<double>()));
  return f;
}

inline void from_json(const nlohmann::json& j, TrigPoly& f) {
  f = trig_poly_from_json(j);
}

}  // namespace ngonlift
