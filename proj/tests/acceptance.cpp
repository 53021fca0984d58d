// Acceptance suite: runs every criterion at its stated tolerance and
// prints one PASS/FAIL line each.  Exit status is the number of failures.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <limits>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <vector>

#include "ngonlift/interp.hpp"
#include "ngonlift/lift.hpp"
#include "ngonlift/lowerbound.hpp"
#include "ngonlift/momentmap.hpp"
#include "ngonlift/soscert.hpp"
#include "ngonlift/trigspace.hpp"
#include "oracles.hpp"

using namespace ngonlift;
using std::numbers::pi;
using Clock = std::chrono::steady_clock;

namespace {

int failures = 0;

void report(int criterion, bool pass, const std::string& detail) {
  std::cout << (pass ? "PASS" : "FAIL") << " criterion " << criterion << ": "
            << detail << "\n";
  if (!pass) ++failures;
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// 1. Hexagon certificate: vertex residual <= 1e-12, under a millisecond.
void criterion_1() {
  const SosCertificate cert = hexagon_certificate();
  verify_certificate(cert, 1e-12);  // warm up
  const auto t0 = Clock::now();
  const VerifyReport rep = verify_certificate(cert, 1e-12);
  const double elapsed = seconds_since(t0);
  std::ostringstream d;
  d << "hexagon certificate, max vertex residual " << rep.max_vertex_residual
    << ", " << elapsed * 1e3 << " ms";
  report(1, rep.pass && rep.max_vertex_residual <= 1e-12 && elapsed < 1e-3, d.str());
}

// 2. Powers-of-two certificates for n = 2..12 plus the all-theta identity.
void criterion_2() {
  const auto t0 = Clock::now();
  bool ok = true;
  double worst_vertex = 0.0, worst_identity = 0.0;
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> angle(0.0, 2 * pi);
  for (int n = 2; n <= 12; ++n) {
    const SosCertificate cert = powers_of_two_certificate(n);
    const VerifyReport rep = verify_certificate(cert, 1e-10);
    worst_vertex = std::max(worst_vertex, rep.max_vertex_residual);
    ok = ok && rep.pass;
    const int N = 1 << n;
    const double pi_N = pi / N;
    for (int t = 0; t < 1000; ++t) {
      const double theta = angle(rng);
      const double lhs = (std::cos(pi_N) - std::cos(theta)) / std::sin(pi_N);
      double rhs = -std::cos((1 << (n - 1)) * theta) / (1 << (n - 1));
      for (int k = 0; k <= n - 2; ++k) {
        const double num = std::cos((1 << k) * pi_N) - std::cos((1 << k) * theta);
        rhs += num * num / ((1 << k) * std::sin((2 << k) * pi_N));
      }
      worst_identity = std::max(worst_identity, std::abs(lhs - rhs));
    }
  }
  const double elapsed = seconds_since(t0);
  ok = ok && worst_vertex <= 1e-10 && worst_identity <= 1e-10 && elapsed < 5.0;
  std::ostringstream d;
  d << "powers-of-two n=2..12, worst vertex residual " << worst_vertex
    << ", worst identity residual " << worst_identity << ", " << elapsed << " s";
  report(2, ok, d.str());
}

// 3. The displayed moment matrices, as exact rational expressions.
void criterion_3() {
  auto equal = [](const MomentMatrixSymbolic& got, const oracles::ExprMatrix& want) {
    if (got.size() != want.size()) return false;
    for (std::size_t i = 0; i < want.size(); ++i)
      for (std::size_t j = 0; j < want.size(); ++j)
        if (!(got.entries[i][j] == want[i][j])) return false;
    return true;
  };
  bool ok = equal(moment_matrix(FrequencySet(6, {0, 1}), 6), oracles::hexagon_MV1());
  ok = ok && equal(moment_matrix(FrequencySet(6, {1, 3}), 6), oracles::hexagon_MV2());
  ok = ok && equal(moment_matrix(FrequencySet(6, {0, 1, 3}), 6), oracles::hexagon_MV());
  MomentMatrixSymbolic sixteen = moment_matrix(FrequencySet(16, {0, 1, 2, 4}), 16);
  for (auto& row : sixteen.entries)
    for (auto& e : row) {
      auto it = e.u.find(0);
      if (it != e.u.end()) {
        e.constant += it->second;
        e.u.erase(it);
      }
      e = Rat(2) * e;
    }
  ok = ok && equal(sixteen, oracles::sixteen_gon_7x7());
  report(3, ok, "hexagon M_V1, M_V2, 4x4 M_V and the rescaled 16-gon 7x7 match exactly");
}

// 4. Theta-rank upper bound for every N in 3..64.
void criterion_4() {
  const auto t0 = Clock::now();
  bool ok = true;
  double worst = 0.0;
  int bad_n = 0;
  for (int n = 3; n <= 64; ++n) {
    const Poly1 p = theta_rank_interpolant(n);
    const bool deg_ok = poly_degree(p) == 2 * ((n + 3) / 4);
    const bool nonneg = is_globally_nonnegative(p).nonneg;
    const VerifyReport rep = verify_certificate(hierarchy_certificate(n), 1e-8);
    worst = std::max(worst, rep.max_vertex_residual);
    if (!(deg_ok && nonneg && rep.pass)) {
      ok = false;
      bad_n = n;
    }
  }
  const double elapsed = seconds_since(t0);
  ok = ok && elapsed < 10.0;
  std::ostringstream d;
  d << "theta-rank interpolants and hierarchy certificates for N=3..64, worst "
       "residual "
    << worst << ", " << elapsed << " s";
  if (bad_n) d << " (first failure at N=" << bad_n << ")";
  report(4, ok, d.str());
}

// 5. Interval supports strictly inside radius N/4 refute as one cluster.
std::vector<std::pair<int, RefutationReport>> criterion_5_reports;
void criterion_5() {
  bool ok = true;
  for (int n = 8; n <= 64; ++n) {
    std::vector<int> ks;
    for (int k = 0; k < (n + 3) / 4; ++k) ks.push_back(k);
    auto rep = refute_sos_valid(FrequencySet(n, ks), 5);
    if (!rep || rep->clustering.clusters.size() != 1) {
      ok = false;
      continue;
    }
    criterion_5_reports.emplace_back(n, *rep);
  }
  report(5, ok, "K = {0..ceil(N/4)-1} refuted as a single cluster for N=8..64");
}

// 6. Chained and single-block lifts pass all three verification legs.
void criterion_6() {
  const auto t0 = Clock::now();
  bool ok = true;
  double worst_eig = 0.0, worst_resid = 0.0;
  for (int n = 2; n <= 10; ++n) {
    const SosCertificate cert = powers_of_two_certificate(n);
    for (const LiftDescription& lift :
         {build_chained_lift(n), build_single_block_lift(n)}) {
      const LiftVerifyReport rep = verify_lift(lift, cert);
      worst_eig = std::min(worst_eig, rep.min_vertex_eigenvalue);
      worst_resid = std::max({worst_resid, rep.gram_residual, rep.rotation_residual});
      ok = ok && rep.pass;
    }
  }
  const double elapsed = seconds_since(t0);
  ok = ok && elapsed < 30.0;
  std::ostringstream d;
  d << "chained + single-block lifts n=2..10, min eigenvalue " << worst_eig
    << ", worst Gram residual " << worst_resid << ", " << elapsed << " s";
  report(6, ok, d.str());
}

// 7. Equivariance: rotating vertex i gives vertex i+1.
void criterion_7() {
  bool ok = true;
  double worst = 0.0;
  for (int n = 2; n <= 8; ++n) {
    const LiftDescription lift = build_chained_lift(n);
    for (int i = 1; i <= lift.n; ++i) {
      const LiftPoint a = rotate_lift_point(vertex_lift_point(lift, i), 1);
      const LiftPoint b = vertex_lift_point(lift, i % lift.n + 1);
      for (const auto& [k, val] : b.vars.u)
        worst = std::max(worst, std::abs(a.vars.u.at(k) - val));
      for (const auto& [k, val] : b.vars.v)
        worst = std::max(worst, std::abs(a.vars.v.at(k) - val));
    }
  }
  ok = worst <= 1e-12;
  std::ostringstream d;
  d << "rotate(vertex i, 1) = vertex i+1 for n=2..8, worst deviation " << worst;
  report(7, ok, d.str());
}

// 8. Greedy clustering succeeds on 1000 random small sets in Z_{2^20}.
std::vector<FrequencySet> criterion_8_sets;
void criterion_8() {
  const int n = 1 << 20;
  const int max_size = static_cast<int>(std::floor(std::log(n / 2.0)));  // 13
  std::mt19937_64 rng(88);
  std::uniform_int_distribution<int> size_dist(1, max_size);
  std::uniform_int_distribution<int> freq_dist(0, n - 1);
  criterion_8_sets.reserve(1000);
  for (int t = 0; t < 1000; ++t) {
    const int size = size_dist(rng);
    std::set<int> ks;
    while (static_cast<int>(ks.size()) < size) ks.insert(freq_dist(rng));
    criterion_8_sets.emplace_back(n, std::vector<int>(ks.begin(), ks.end()));
  }
  const auto t0 = Clock::now();
  int successes = 0;
  long long breaches = 0;
  for (const FrequencySet& K : criterion_8_sets) {
    GreedyStats stats;
    if (greedy_clustering(K, &stats)) ++successes;
    breaches += stats.distance_invariant_breaches + stats.indiam_invariant_breaches;
  }
  const double elapsed = seconds_since(t0);
  const bool ok = successes == 1000 && breaches == 0 && elapsed < 5.0;
  std::ostringstream d;
  d << "N=2^20, |K| < ln(N/2): " << successes
    << "/1000 valid clusterings, invariant breaches " << breaches << ", "
    << elapsed << " s";
  report(8, ok, d.str());
}

// 9. Separating functional witnesses for every refutation from 5 and 8.
void criterion_9() {
  bool ok = true;
  double worst_ell = 0.0;
  double worst_min = std::numeric_limits<double>::infinity();
  int count = 0;
  for (const auto& [n, rep] : criterion_5_reports) {
    worst_ell = std::max(worst_ell, std::abs(rep.L_ell - (std::cos(pi / n) - 1.0)));
    worst_min = std::min(worst_min, rep.min_re_L_h2);
    ++count;
  }
  std::mt19937_64 rng(99);
  for (const FrequencySet& K : criterion_8_sets) {
    auto rep = refute_sos_valid(K, rng, 200);
    if (!rep) {
      ok = false;
      continue;
    }
    worst_ell = std::max(worst_ell,
                         std::abs(rep->L_ell - (std::cos(pi / K.modulus) - 1.0)));
    worst_min = std::min(worst_min, rep->min_re_L_h2);
    ++count;
  }
  ok = ok && worst_ell <= 1e-14 && worst_min >= -1e-10;
  std::ostringstream d;
  d << count << " refutations: |L(ell) - (cos(pi/N)-1)| <= " << worst_ell
    << ", min Re L(|h|^2) = " << worst_min;
  report(9, ok, d.str());
}

// 10. Certificate supports vs the lower bound, n = 2..20.
void criterion_10() {
  bool ok = true;
  for (int n = 2; n <= 20; ++n) {
    const SosCertificate cert = powers_of_two_certificate(n);
    const std::size_t support_size = cert.support().size();
    // |K| = n against ln(2^{n-1})/2 = (n-1) ln(2)/2.
    if (support_size != static_cast<std::size_t>(n)) ok = false;
    if (static_cast<double>(support_size) < (n - 1) * std::log(2.0) / 2.0) ok = false;
    if (refute_sos_valid(cert.hermitian_support(), 10)) ok = false;
  }
  report(10, ok,
         "powers-of-two supports: |K| = n >= ln(2^{n-1})/2 and never refuted, "
         "n=2..20");
}

// 11. Chained-lift SDPA files carry only {0, +-1, +-0.5}.
void criterion_11() {
  bool ok = true;
  for (int n = 2; n <= 12; ++n) {
    const std::string path = "acceptance_chained.dat-s";
    export_sdpa(build_chained_lift(n), path);
    for (const auto& entry : parse_sdpa(path).entries) {
      const double a = std::abs(entry.value);
      if (!(a == 1.0 || a == 0.5)) ok = false;
    }
    std::remove(path.c_str());
  }
  report(11, ok, "chained-lift SDPA coefficients within {0, +-1, +-0.5} for n=2..12");
}

}  // namespace

int main() {
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  criterion_9();
  criterion_10();
  criterion_11();
  std::cout << (failures == 0 ? "all criteria passed"
                              : std::to_string(failures) + " criteria failed")
            << "\n";
  return failures;
}
