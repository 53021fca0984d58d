#pragma once

// Clustering machinery refuting sum-of-squares validity of a frequency
// set K in Z_N: a greedy merge of closest clusters (processing the
// |K|-1 smallest pairwise distances), validity checking, and the
// separating functional
//   L(e_k) = exp(-i pi (k mod* N) / N)  if d(0,k) <= gamma,  0 otherwise,
// where mod* is the signed representative.  A valid clustering with
// parameter gamma makes L nonnegative on Hermitian squares supported on
// K while L(ell) = cos(pi/N) - 1 < 0.

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <stdexcept>
#include <vector>

#include <json.hpp>

#include "ngonlift/soscert.hpp"
#include "ngonlift/trigspace.hpp"

namespace ngonlift {

/// Signed representative of k mod N in {-ceil(N/2)+1, ..., floor(N/2)}.
inline int mod_star(int k, int n) {
  if (n < 3) throw std::invalid_argument("mod_star: N >= 3 required");
  int r = ((k % n) + n) % n;
  if (r > n / 2) r -= n;
  return r;
}

inline int set_distance(int n, const std::vector<int>& a, const std::vector<int>& b) {
  int best = n;
  for (int x : a)
    for (int y : b) best = std::min(best, cycle_distance(n, x, y));
  return best;
}

/// Partition of a frequency set with the parameter gamma, together with
/// the sorted pairwise distances d_i and their prefix sums S_i from the
/// greedy run that produced it.
struct Clustering {
  int n = 0;
  std::vector<std::vector<int>> clusters;
  int gamma = 1;
  std::vector<int> sorted_distances;
  std::vector<long long> prefix_sums;

  FrequencySet all_members() const {
    std::vector<int> ks;
    for (const auto& c : clusters) ks.insert(ks.end(), c.begin(), c.end());
    return FrequencySet(n, std::move(ks));
  }
};

/// Disjointness, 1 <= gamma < N/2, every in-diameter <= gamma, and every
/// pair of clusters strictly more than gamma apart.
inline bool is_valid_clustering(const Clustering& c) {
  if (c.gamma < 1 || 2 * c.gamma >= c.n) return false;
  std::set<int> seen;
  std::size_t total = 0;
  for (const auto& cl : c.clusters) {
    if (cl.empty()) return false;
    total += cl.size();
    seen.insert(cl.begin(), cl.end());
    if (in_diameter(FrequencySet(c.n, cl)) > c.gamma) return false;
  }
  if (seen.size() != total) return false;  // overlap
  for (std::size_t i = 0; i < c.clusters.size(); ++i)
    for (std::size_t j = i + 1; j < c.clusters.size(); ++j)
      if (set_distance(c.n, c.clusters[i], c.clusters[j]) <= c.gamma) return false;
  return true;
}

/// Loop diagnostics; the two invariant counters stay at zero.
struct GreedyStats {
  int iterations = 0;
  int merges = 0;
  long long distance_invariant_breaches = 0;
  long long indiam_invariant_breaches = 0;
};

/// Greedy merge of the two closest clusters, exactly |K|-1 iterations
/// over the pairs sorted by (distance, min element, max element).
/// Validity is re-tested after every iteration with gamma equal to the
/// largest cluster in-diameter (clamped to >= 1).
inline std::optional<Clustering> greedy_clustering(const FrequencySet& K,
                                                   GreedyStats* stats = nullptr) {
  if (K.members.empty())
    throw std::invalid_argument("greedy_clustering: empty set");
  const int n = K.modulus;
  const auto& ks = K.members;
  const int m = static_cast<int>(ks.size());

  struct Pair {
    int d, a, b;  // a < b, elements of K
  };
  std::vector<Pair> pairs;
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j)
      pairs.push_back({cycle_distance(n, ks[i], ks[j]), ks[i], ks[j]});
  std::sort(pairs.begin(), pairs.end(), [](const Pair& x, const Pair& y) {
    return std::tie(x.d, x.a, x.b) < std::tie(y.d, y.a, y.b);
  });

  Clustering cur;
  cur.n = n;
  cur.gamma = 1;
  for (int k : ks) cur.clusters.push_back({k});
  long long running = 0;
  for (const auto& p : pairs) {
    cur.sorted_distances.push_back(p.d);
    cur.prefix_sums.push_back(running += p.d);
  }
  if (is_valid_clustering(cur)) return cur;  // all pairwise distances >= 2

  std::map<int, int> cluster_of;
  for (int i = 0; i < m; ++i) cluster_of[ks[i]] = i;
  std::map<int, std::vector<int>> members;
  for (int i = 0; i < m; ++i) members[i] = {ks[i]};

  for (int it = 1; it <= m - 1; ++it) {
    if (stats) stats->iterations = it;
    const Pair& p = pairs[it - 1];
    const int ca = cluster_of[p.a], cb = cluster_of[p.b];
    if (ca != cb) {
      for (int k : members[cb]) cluster_of[k] = ca;
      auto& dst = members[ca];
      dst.insert(dst.end(), members[cb].begin(), members[cb].end());
      std::sort(dst.begin(), dst.end());
      members.erase(cb);
      if (stats) stats->merges += 1;
    }

    cur.clusters.clear();
    int max_indiam = 0;
    for (const auto& [id, cl] : members) {
      cur.clusters.push_back(cl);
      max_indiam = std::max(max_indiam, in_diameter(FrequencySet(n, cl)));
    }
    cur.gamma = std::max(max_indiam, 1);

    if (stats) {
      // End-of-iteration invariants from the termination proof:
      // inter-cluster distances >= d_{i+1}, in-diameters <= S_i.
      if (it < static_cast<int>(pairs.size())) {
        const int next_d = cur.sorted_distances[it];
        for (std::size_t i = 0; i < cur.clusters.size(); ++i)
          for (std::size_t j = i + 1; j < cur.clusters.size(); ++j)
            if (set_distance(n, cur.clusters[i], cur.clusters[j]) < next_d)
              stats->distance_invariant_breaches += 1;
      }
      if (max_indiam > cur.prefix_sums[it - 1])
        stats->indiam_invariant_breaches += 1;
    }

    if (is_valid_clustering(cur)) return cur;
  }
  return std::nullopt;
}

/// The separating functional L of a valid clustering parameter gamma:
/// L(e_k) = exp(-i pi (k mod* N)/N) on the radius-gamma ball around 0,
/// zero outside.  Values are produced from the formula on demand so a
/// large gamma costs nothing.
struct SeparatingFunctional {
  int n = 0;
  int gamma = 0;

  Complex at(int k) const {
    if (cycle_distance(n, 0, ((k % n) + n) % n) > gamma) return Complex(0, 0);
    return std::polar(1.0, -std::numbers::pi * mod_star(k, n) / n);
  }
};

inline SeparatingFunctional separating_functional(int gamma, int n) {
  if (gamma < 1 || 2 * gamma >= n)
    throw std::invalid_argument("separating_functional: need 1 <= gamma < N/2");
  return {n, gamma};
}

inline Complex apply(const SeparatingFunctional& L, const TrigPoly& f) {
  if (f.modulus() != L.n)
    throw std::invalid_argument("SeparatingFunctional: modulus mismatch");
  Complex acc(0, 0);
  for (const auto& [k, z] : f.coeffs()) acc += z * L.at(k);
  return acc;
}

/// L(|h|^2) without forming the square:  sum_{k,k'} conj(h_k) h_{k'} L(e_{k'-k}).
inline Complex apply_to_square(const SeparatingFunctional& L, const TrigPoly& h) {
  Complex acc(0, 0);
  for (const auto& [k, zk] : h.coeffs())
    for (const auto& [kp, zkp] : h.coeffs())
      acc += std::conj(zk) * zkp * L.at(kp - k);
  return acc;
}

/// Proof that a set K is not sos-valid: a valid clustering, the
/// functional L with L(ell) < 0, and a sampling check that L is
/// nonnegative on squares supported on K.
struct RefutationReport {
  Clustering clustering;
  SeparatingFunctional L;
  double L_ell = 0.0;
  double min_re_L_h2 = 0.0;
  double max_abs_im_L_h2 = 0.0;
  int samples = 0;
};

inline std::optional<RefutationReport> refute_sos_valid(const FrequencySet& K,
                                                        std::mt19937_64& rng,
                                                        int samples = 200,
                                                        GreedyStats* stats = nullptr) {
  auto clustering = greedy_clustering(K, stats);
  if (!clustering) return std::nullopt;
  RefutationReport rep;
  rep.clustering = *clustering;
  rep.L = separating_functional(clustering->gamma, K.modulus);
  rep.L_ell = apply(rep.L, facet_functional(K.modulus)).real();
  rep.samples = samples;
  rep.min_re_L_h2 = std::numeric_limits<double>::infinity();
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int t = 0; t < samples; ++t) {
    TrigPoly h(K.modulus);
    for (int k : K.members) {
      const double r = std::sqrt(unit(rng));
      const double phi = 2.0 * std::numbers::pi * unit(rng);
      h.set_coeff(k, std::polar(r, phi));
    }
    const Complex val = apply_to_square(rep.L, h);
    rep.min_re_L_h2 = std::min(rep.min_re_L_h2, val.real());
    rep.max_abs_im_L_h2 = std::max(rep.max_abs_im_L_h2, std::abs(val.imag()));
  }
  return rep;
}

inline std::optional<RefutationReport> refute_sos_valid(const FrequencySet& K,
                                                        std::uint64_t seed = 0,
                                                        int samples = 200) {
  std::mt19937_64 rng(seed);
  return refute_sos_valid(K, rng, samples);
}

inline nlohmann::json refutation_to_json(const RefutationReport& rep) {
  nlohmann::json j{{"n", rep.clustering.n},
                   {"K", rep.clustering.all_members().members},
                   {"clusters", rep.clustering.clusters},
                   {"gamma", rep.clustering.gamma},
                   {"L_ell", rep.L_ell},
                   {"min_L_h2", rep.min_re_L_h2}};
  return j;
}

/// Statistics of greedy clustering over random sets with |K| < ln(N/2).
struct LogBoundStats {
  int trials = 0;
  int successes = 0;
  int failures = 0;
  int trivially_small_indiam = 0;  // indiam(K) < N/2: single-cluster remark applies
  int immediate_singleton = 0;     // valid before any merge (gamma = 1)
  int max_size = 0;
  long long distance_invariant_breaches = 0;
  long long indiam_invariant_breaches = 0;
};

inline LogBoundStats log_bound_check(int n, int trials, std::uint64_t seed = 0) {
  if (n < 8) throw std::invalid_argument("log_bound_check: N >= 8 required");
  LogBoundStats out;
  out.trials = trials;
  out.max_size = static_cast<int>(std::floor(std::log(n / 2.0)));
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> size_dist(1, out.max_size);
  std::uniform_int_distribution<int> freq_dist(0, n - 1);
  for (int t = 0; t < trials; ++t) {
    const int size = size_dist(rng);
    std::set<int> ks;
    while (static_cast<int>(ks.size()) < size) ks.insert(freq_dist(rng));
    FrequencySet K(n, std::vector<int>(ks.begin(), ks.end()));
    if (2 * in_diameter(K) < n) out.trivially_small_indiam += 1;
    GreedyStats gs;
    auto clustering = greedy_clustering(K, &gs);
    out.distance_invariant_breaches += gs.distance_invariant_breaches;
    out.indiam_invariant_breaches += gs.indiam_invariant_breaches;
    if (clustering) {
      out.successes += 1;
      if (gs.iterations == 0) out.immediate_singleton += 1;
    } else {
      out.failures += 1;
    }
  }
  return out;
}

}  // namespace ngonlift
