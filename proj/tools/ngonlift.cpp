// Command-line front end: certificate construction and verification,
// lift assembly and export, clustering refutations, theta-rank reports
// and figure-data emission.
//
// Exit codes: 0 success, 1 verification or invariant failure, 2 usage error.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ngonlift/interp.hpp"
#include "ngonlift/lift.hpp"
#include "ngonlift/lowerbound.hpp"
#include "ngonlift/momentmap.hpp"
#include "ngonlift/soscert.hpp"
#include "ngonlift/trigspace.hpp"

namespace {

using namespace ngonlift;

constexpr int kExitOk = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

std::optional<double> env_tolerance() {
  const char* s = std::getenv("NGONLIFT_TOL");
  if (!s || !*s) return std::nullopt;
  try {
    const double tol = std::stod(s);
    if (tol <= 0) throw std::invalid_argument("nonpositive");
    return tol;
  } catch (const std::exception&) {
    throw CLI::ValidationError("NGONLIFT_TOL", "must be a positive number");
  }
}

std::string set_to_string(const FrequencySet& K) {
  std::string s = "{";
  for (std::size_t i = 0; i < K.members.size(); ++i)
    s += (i ? ", " : "") + std::to_string(K.members[i]);
  return s + "}";
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << text;
}

int report_certificate(const SosCertificate& cert, double tol,
                       const std::string& out_path) {
  const VerifyReport rep = verify_certificate(cert, tol);
  std::cout << "scheme: " << cert.scheme << "\n"
            << "N: " << cert.n << "\n"
            << "squares: " << cert.squares.size() << "\n"
            << "support K: " << set_to_string(rep.support) << "  (|K| = "
            << rep.support.size() << ")\n"
            << "max vertex residual: " << rep.max_vertex_residual << "\n"
            << "max coefficient residual: " << rep.max_coeff_residual << "\n"
            << "verification: " << (rep.pass ? "PASS" : "FAIL") << " (tol " << tol
            << ")\n";
  if (!out_path.empty()) {
    nlohmann::json j = cert;
    write_text(out_path, j.dump(2) + "\n");
    std::cout << "wrote " << out_path << "\n";
  }
  return rep.pass ? kExitOk : kExitFail;
}

int run_certify(int n_exp, int N, std::string scheme, double tol_override,
                const std::string& out_path) {
  double tol = 1e-10;
  std::optional<SosCertificate> cert;
  if (scheme == "powers-of-two") {
    if (n_exp < 2) throw CLI::ValidationError("--n", "need n >= 2");
    cert = powers_of_two_certificate(n_exp);
  } else if (scheme == "hierarchy") {
    if (N < 3) throw CLI::ValidationError("--N", "need N >= 3");
    cert = hierarchy_certificate(N);
    tol = 1e-8;
  } else if (scheme == "hexagon") {
    if (N != 0 && N != 6) throw CLI::ValidationError("--N", "hexagon means N = 6");
    cert = hexagon_certificate();
    tol = 1e-12;
  } else {
    throw CLI::ValidationError("--scheme", "unknown certificate scheme " + scheme);
  }
  if (auto env = env_tolerance()) tol = *env;
  if (tol_override > 0) tol = tol_override;
  return report_certificate(*cert, tol, out_path);
}

int run_lift(int n_exp, int N, const std::string& scheme_name,
             const std::string& format, const std::string& out_path) {
  LiftDescription lift;
  const LiftScheme scheme = lift_scheme_from_string(scheme_name);
  if (scheme == LiftScheme::hierarchy) {
    if (N < 3) throw CLI::ValidationError("--N", "need N >= 3");
    lift = build_hierarchy_lift(N);
  } else {
    if (n_exp < 2) throw CLI::ValidationError("--n", "need n >= 2");
    lift = scheme == LiftScheme::chained ? build_chained_lift(n_exp)
                                         : build_single_block_lift(n_exp);
  }
  std::cout << "scheme: " << to_string(lift.scheme) << "\nN: " << lift.n
            << "\nblocks:";
  for (const auto& b : lift.blocks) std::cout << " " << b.size() << "x" << b.size();
  std::cout << "\nvariables: " << lift.variable_pool().size() << "\n";

  const LiftVerifyReport rep = verify_lift(lift);
  std::cout << "leg (a) vertex feasibility: " << (rep.vertices_ok ? "PASS" : "FAIL")
            << " (min eigenvalue " << rep.min_vertex_eigenvalue << ")\n"
            << "leg (b) facet Gram reproduction: " << (rep.gram_ok ? "PASS" : "FAIL")
            << " (residual " << rep.gram_residual << ")\n"
            << "leg (c) all " << lift.n << " rotated facets: "
            << (rep.rotations_ok ? "PASS" : "FAIL") << " (residual "
            << rep.rotation_residual << ")\n"
            << "verification: " << (rep.pass ? "PASS" : "FAIL") << "\n";

  if (!out_path.empty()) {
    if (format == "sdpa")
      export_sdpa(lift, out_path);
    else if (format == "json")
      export_json(lift, out_path);
    else
      throw CLI::ValidationError("--format", "expected sdpa or json");
    std::cout << "wrote " << out_path << "\n";
  }
  return rep.pass ? kExitOk : kExitFail;
}

int run_cluster(int N, const std::string& freqs_csv, std::uint64_t seed,
                const std::string& out_path) {
  if (N < 3) throw CLI::ValidationError("--N", "need N >= 3");
  std::vector<int> ks;
  std::stringstream ss(freqs_csv);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    const int k = std::stoi(tok);
    if (k < 0 || k >= N)
      throw CLI::ValidationError("--freqs", "frequency out of range: " + tok);
    ks.push_back(k);
  }
  if (ks.empty()) throw CLI::ValidationError("--freqs", "no frequencies given");
  const FrequencySet K(N, ks);
  std::cout << "N: " << N << "  K: " << set_to_string(K) << "\n";

  GreedyStats stats;
  std::mt19937_64 rng(seed);
  auto report = refute_sos_valid(K, rng, 200, &stats);
  if (stats.distance_invariant_breaches || stats.indiam_invariant_breaches) {
    std::cout << "internal invariant breach in greedy clustering\n";
    return kExitFail;
  }
  if (!report) {
    std::cout << "no valid clustering found\n";
    return kExitOk;
  }
  std::cout << "valid clustering found: gamma = " << report->clustering.gamma
            << "  clusters:";
  for (const auto& c : report->clustering.clusters)
    std::cout << " " << set_to_string(FrequencySet(N, c));
  std::cout << "\nL(ell) = cos(pi/N) - 1 = " << report->L_ell << "\n"
            << "min Re L(|h|^2) over " << report->samples
            << " samples: " << report->min_re_L_h2
            << "   max |Im|: " << report->max_abs_im_L_h2 << "\n"
            << "K is not sos-valid\n";
  const double guard = 1e-10;
  if (report->L_ell >= 0 || report->min_re_L_h2 < -guard ||
      report->max_abs_im_L_h2 > guard) {
    std::cout << "internal invariant breach in separating functional\n";
    return kExitFail;
  }
  if (!out_path.empty()) {
    write_text(out_path, refutation_to_json(*report).dump(2) + "\n");
    std::cout << "wrote " << out_path << "\n";
  }
  return kExitOk;
}

int run_theta_rank(int N) {
  if (N < 3) throw CLI::ValidationError("--N", "need N >= 3");
  const int rank = (N + 3) / 4;
  const Poly1 p = theta_rank_interpolant(N);
  const auto decision = is_globally_nonnegative(p);
  const SosCertificate cert = hierarchy_certificate(N);
  double tol = 1e-8;
  if (auto env = env_tolerance()) tol = *env;
  const VerifyReport rep = verify_certificate(cert, tol);
  std::cout << "N: " << N << "\n"
            << "theta-rank: " << rank << "\n"
            << "interpolant degree: " << poly_degree(p) << " (= 2*ceil(N/4))\n"
            << "globally nonnegative: " << (decision.nonneg ? "yes" : "NO") << "\n"
            << "hierarchy certificate: " << (rep.pass ? "PASS" : "FAIL")
            << " (max vertex residual " << rep.max_vertex_residual << ")\n";
  const bool ok = decision.nonneg && rep.pass && poly_degree(p) == 2 * rank;
  return ok ? kExitOk : kExitFail;
}

int run_figures(const std::string& which, int k, int N, double u_opt,
                const std::string& out_path) {
  Poly1 q;
  double u = 0.0;
  if (which == "arithmetic") {
    if (k < 2) throw CLI::ValidationError("--k", "need k >= 2");
    std::vector<double> pts(k);
    for (int i = 0; i < k; ++i) pts[i] = i;
    q = poly_from_roots(pts);
    u = 0.0;
  } else if (which == "chebyshev") {
    if (N < 3) throw CLI::ValidationError("--N", "need N >= 3");
    q = vanishing_poly(ngon_levels(N));
    u = std::cos(std::numbers::pi / N);
  } else if (which == "tangent-lemma") {
    if (N < 1) throw CLI::ValidationError("--N", "need N >= 1");
    q = chebyshev(N);
    u = u_opt != 0.0 ? u_opt : std::cos(std::numbers::pi / N);
  } else {
    throw CLI::ValidationError("--which",
                               "expected arithmetic, chebyshev or tangent-lemma");
  }
  const double qu = poly_eval(q, u);
  const double qpu = poly_eval(poly_derivative(q), u);
  std::ostringstream csv;
  csv << "x,q,tangent\n";
  for (int i = 0; i <= 2400; ++i) {
    const double x = -1.2 + i * 1e-3;
    csv << double_to_string(x) << "," << double_to_string(poly_eval(q, x)) << ","
        << double_to_string(qu + qpu * (x - u)) << "\n";
  }
  if (out_path.empty())
    std::cout << csv.str();
  else {
    write_text(out_path, csv.str());
    std::cout << "wrote " << out_path << "\n";
  }
  return kExitOk;
}

int run_verify(const std::string& in_path) {
  std::ifstream in(in_path);
  if (!in) throw CLI::ValidationError("--in", "cannot open " + in_path);
  nlohmann::json j;
  in >> j;
  double tol = 1e-10;
  if (auto env = env_tolerance()) tol = *env;
  if (j.contains("squares")) {
    return report_certificate(certificate_from_json(j), tol, "");
  }
  if (j.contains("blocks")) {
    const LiftDescription lift = lift_from_json(j);
    const LiftVerifyReport rep = verify_lift(lift);
    std::cout << "scheme: " << to_string(lift.scheme) << "  N: " << lift.n << "\n"
              << "leg (a): " << (rep.vertices_ok ? "PASS" : "FAIL")
              << "  leg (b): " << (rep.gram_ok ? "PASS" : "FAIL")
              << "  leg (c): " << (rep.rotations_ok ? "PASS" : "FAIL") << "\n"
              << "verification: " << (rep.pass ? "PASS" : "FAIL") << "\n";
    return rep.pass ? kExitOk : kExitFail;
  }
  throw CLI::ValidationError("--in", "file is neither a certificate nor a lift");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"equivariant psd lifts of regular N-gons"};
  app.require_subcommand(1);

  int n_exp = 0, N = 0, fig_k = 6;
  double tol = 0.0, fig_u = 0.0;
  std::uint64_t seed = 0;
  std::string scheme = "powers-of-two", lift_scheme = "chained";
  std::string format = "sdpa", out_path, freqs, which = "arithmetic", in_path;

  auto* certify = app.add_subcommand("certify", "build and verify a certificate");
  certify->add_option("--n", n_exp, "exponent: the 2^n-gon");
  certify->add_option("--N", N, "polygon size");
  certify->add_option("--scheme", scheme, "powers-of-two | hierarchy | hexagon");
  certify->add_option("--tol", tol, "verification tolerance");
  certify->add_option("--out", out_path, "certificate JSON path");

  auto* lift = app.add_subcommand("lift", "build, verify and export a psd lift");
  lift->add_option("--n", n_exp, "exponent: the 2^n-gon");
  lift->add_option("--N", N, "polygon size (hierarchy scheme)");
  lift->add_option("--scheme", lift_scheme, "chained | single | hierarchy");
  lift->add_option("--format", format, "sdpa | json");
  lift->add_option("--out", out_path, "output path");

  auto* cluster = app.add_subcommand("cluster", "refute sos-validity of a set");
  cluster->add_option("--N", N, "cycle size")->required();
  cluster->add_option("--freqs", freqs, "comma-separated frequencies")->required();
  cluster->add_option("--seed", seed, "RNG seed for the sampling leg");
  cluster->add_option("--out", out_path, "refutation report JSON path");

  auto* theta = app.add_subcommand("theta-rank", "theta-rank certificate for the N-gon");
  theta->add_option("--N", N, "polygon size")->required();

  auto* figures = app.add_subcommand("figures", "emit (x, q(x), tangent(x)) CSV data");
  figures->add_option("--which", which, "arithmetic | chebyshev | tangent-lemma");
  figures->add_option("--k", fig_k, "number of equispaced levels");
  figures->add_option("--N", N, "polygon size / Chebyshev degree");
  figures->add_option("--u", fig_u, "tangent point (tangent-lemma)");
  figures->add_option("--out", out_path, "CSV path (stdout if omitted)");

  auto* verify = app.add_subcommand("verify", "re-verify a certificate or lift file");
  verify->add_option("--in", in_path, "JSON file")->required();

  try {
    app.parse(argc, argv);
    if (certify->parsed()) return run_certify(n_exp, N, scheme, tol, out_path);
    if (lift->parsed()) return run_lift(n_exp, N, lift_scheme, format, out_path);
    if (cluster->parsed()) return run_cluster(N, freqs, seed, out_path);
    if (theta->parsed()) return run_theta_rank(N);
    if (figures->parsed()) return run_figures(which, fig_k, N, fig_u, out_path);
    if (verify->parsed()) return run_verify(in_path);
    return kExitUsage;
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFail;
  }
}
