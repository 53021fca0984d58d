#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>

#include "ngonlift/soscert.hpp"
#include "ngonlift/trigspace.hpp"
#include "oracles.hpp"

using namespace ngonlift;
using std::numbers::pi;

namespace {

double coeff_distance(const TrigPoly& f, const TrigPoly& g) {
  double m = 0.0;
  const TrigPoly d = f - g;
  for (const auto& [k, z] : d.coeffs()) m = std::max(m, std::abs(z));
  return m;
}

TrigPoly random_poly(int n, std::mt19937_64& rng, int terms = 4) {
  std::uniform_int_distribution<int> freq(0, n - 1);
  std::uniform_real_distribution<double> coeff(-1.0, 1.0);
  TrigPoly f(n);
  for (int t = 0; t < terms; ++t)
    f.add_coeff(freq(rng), Complex(coeff(rng), coeff(rng)));
  return f;
}

TrigPoly random_real_poly(int n, std::mt19937_64& rng, int terms = 3) {
  std::uniform_int_distribution<int> freq(0, n / 2);
  std::uniform_real_distribution<double> coeff(-1.0, 1.0);
  RealBasisCoeffs rc;
  rc.modulus = n;
  for (int t = 0; t < terms; ++t) {
    const int k = freq(rng);
    rc.c[k] += coeff(rng);
    if (k > 0) rc.s[k] += coeff(rng);
  }
  if (n % 2 == 0) rc.c.erase(n / 2);  // c_{N/2} carries no coefficient
  return from_real_basis(rc);
}

}  // namespace

TEST_CASE("trig_mul multiplies pointwise with frequencies adding mod N") {
  SECTION("c_1 * c_1 = (c_0 + c_2)/2 on the hexagon") {
    const TrigPoly prod = trig_mul(TrigPoly::c(6, 1), TrigPoly::c(6, 1));
    const TrigPoly expected = 0.5 * (TrigPoly::c(6, 0) + TrigPoly::c(6, 2));
    REQUIRE(coeff_distance(prod, expected) < 1e-15);
  }
  SECTION("e_0 is the multiplicative identity") {
    std::mt19937_64 rng(7);
    const TrigPoly f = random_poly(12, rng);
    REQUIRE(coeff_distance(trig_mul(TrigPoly::e(12, 0), f), f) == 0.0);
  }
  SECTION("e_5 * e_9 = e_2 for N = 12, checked at every vertex") {
    const TrigPoly lhs = trig_mul(TrigPoly::e(12, 5), TrigPoly::e(12, 9));
    const TrigPoly rhs = TrigPoly::e(12, 2);
    for (int i = 1; i <= 12; ++i)
      REQUIRE(std::abs(eval_at_vertex(lhs, i) - eval_at_vertex(rhs, i)) < 1e-12);
    REQUIRE(lhs.support() == rhs.support());
  }
  SECTION("modulus mismatch is rejected") {
    REQUIRE_THROWS_AS(trig_mul(TrigPoly::e(6, 1), TrigPoly::e(8, 1)),
                      std::invalid_argument);
  }
  SECTION("pointwise product correctness, fuzzed") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 200; ++trial) {
      const int n = 3 + static_cast<int>(rng() % 62);
      const TrigPoly f = random_poly(n, rng), g = random_poly(n, rng);
      const TrigPoly prod = trig_mul(f, g);
      for (int i = 1; i <= n; ++i) {
        const Complex want = eval_at_vertex(f, i) * eval_at_vertex(g, i);
        REQUIRE(std::abs(eval_at_vertex(prod, i) - want) < 1e-12);
      }
    }
  }
}

TEST_CASE("conjugate maps e_k to e_{-k}") {
  REQUIRE(conjugate(TrigPoly::e(8, 1)).coeff(7) == Complex(1, 0));
  REQUIRE(conjugate(TrigPoly::e(8, 1)).coeff(1) == Complex(0, 0));

  std::mt19937_64 rng(3);
  const TrigPoly f = random_real_poly(10, rng);
  REQUIRE(coeff_distance(conjugate(f), f) < 1e-15);

  const TrigPoly g = Complex(0, 1) * TrigPoly::e(5, 0);
  REQUIRE(conjugate(g).coeff(0) == Complex(0, -1));
}

TEST_CASE("eval_at_vertex") {
  SECTION("c_1 at vertex 1 of the hexagon is cos(pi/6)") {
    const Complex v = eval_at_vertex(TrigPoly::c(6, 1), 1);
    REQUIRE(std::abs(v - Complex(std::sqrt(3.0) / 2.0, 0)) < 1e-15);
  }
  SECTION("e_{N/2} alternates +-1 (N = 4)") {
    for (int i = 1; i <= 4; ++i) {
      const double want = i % 2 == 1 ? 1.0 : -1.0;
      REQUIRE(std::abs(eval_at_vertex(TrigPoly::e(4, 2), i) - want) < 1e-15);
    }
  }
  SECTION("the facet functional vanishes at vertex 1") {
    for (int n : {5, 6, 12, 17})
      REQUIRE(std::abs(eval_at_vertex(facet_functional(n), 1)) < 1e-15);
  }
  SECTION("index out of range") {
    REQUIRE_THROWS_AS(eval_at_vertex(TrigPoly::e(6, 1), 0), std::out_of_range);
    REQUIRE_THROWS_AS(eval_at_vertex(TrigPoly::e(6, 1), 7), std::out_of_range);
  }
}

TEST_CASE("real basis round trip") {
  SECTION("the c_k combination of e_{+-k} matches cos(k theta) vertex-wise") {
    const int n = 10;
    for (int k = 1; 2 * k < n; ++k) {
      TrigPoly f(n);
      f.add_coeff(k, 0.5 * std::polar(1.0, pi * k / n));
      f.add_coeff(-k, 0.5 * std::polar(1.0, -pi * k / n));
      for (int i = 1; i <= n; ++i) {
        const double want = std::cos(k * vertex_angle(n, i));
        REQUIRE(std::abs(eval_at_vertex(f, i) - want) < 1e-12);
      }
      const RealBasisCoeffs rc = to_real_basis(f);
      REQUIRE(rc.c.size() == 1);
      REQUIRE(rc.s.empty());
      REQUIRE(std::abs(rc.c.at(k) - 1.0) < 1e-12);
    }
  }
  SECTION("constant function is pure c_0") {
    const RealBasisCoeffs rc = to_real_basis(TrigPoly::constant(8, Complex(1, 0)));
    REQUIRE(rc.c.size() == 1);
    REQUIRE(rc.c.at(0) == 1.0);
  }
  SECTION("c_{N/2} is the zero function (N = 6)") {
    const TrigPoly c3 = TrigPoly::c(6, 3);
    REQUIRE(c3.coeffs().empty());
    for (int i = 1; i <= 6; ++i)
      REQUIRE(std::abs(eval_at_vertex(c3, i)) == 0.0);
    REQUIRE(to_real_basis(c3).c.empty());
  }
  SECTION("non-real input is rejected") {
    REQUIRE_THROWS_AS(to_real_basis(TrigPoly::e(6, 1)), std::invalid_argument);
  }
  SECTION("to_real_basis after from_real_basis is the identity, fuzzed") {
    std::mt19937_64 rng(19);
    for (int trial = 0; trial < 100; ++trial) {
      const int n = 3 + static_cast<int>(rng() % 30);
      const TrigPoly f = random_real_poly(n, rng);
      const RealBasisCoeffs rc = to_real_basis(f);
      REQUIRE(coeff_distance(from_real_basis(rc), f) < 1e-12);
      const RealBasisCoeffs rc2 = to_real_basis(from_real_basis(rc));
      for (const auto& [k, a] : rc.c) REQUIRE(std::abs(rc2.c.at(k) - a) < 1e-12);
      for (const auto& [k, b] : rc.s) REQUIRE(std::abs(rc2.s.at(k) - b) < 1e-12);
      for (int i = 1; i <= n; ++i)
        REQUIRE(std::abs(eval_at_vertex(f, i).imag()) < 1e-12);
    }
  }
}

TEST_CASE("rotate is the Rot_N action") {
  std::mt19937_64 rng(23);
  const TrigPoly f = random_poly(12, rng);
  SECTION("rotation by zero and by N are the identity") {
    REQUIRE(coeff_distance(rotate(f, 0), f) == 0.0);
    REQUIRE(coeff_distance(rotate(f, 12), f) < 1e-15);
  }
  SECTION("rotations compose additively") {
    for (int a : {1, 5})
      for (int b : {2, 11})
        REQUIRE(coeff_distance(rotate(rotate(f, a), b), rotate(f, a + b)) < 1e-15);
  }
  SECTION("rotated facet vanishes on the rotated vertex") {
    for (int n : {6, 9, 16})
      REQUIRE(std::abs(eval_at_vertex(rotate(facet_functional(n), 1), 2)) < 1e-14);
  }
  SECTION("support and coefficient magnitudes are invariant") {
    const TrigPoly g = rotate(f, 5);
    REQUIRE(g.support() == f.support());
    for (const auto& [k, z] : f.coeffs())
      REQUIRE(std::abs(std::abs(g.coeff(k)) - std::abs(z)) < 1e-15);
  }
  SECTION("rotation semantics: g(theta_i) = f(theta_{i-r})") {
    const TrigPoly g = rotate(f, 3);
    for (int i = 1; i <= 12; ++i) {
      const int src = ((i - 3 - 1) % 12 + 12) % 12 + 1;
      REQUIRE(std::abs(eval_at_vertex(g, i) - eval_at_vertex(f, src)) < 1e-12);
    }
  }
}

TEST_CASE("cycle_distance") {
  REQUIRE(cycle_distance(Frequency(12, 1), Frequency(12, 11)) == 2);
  REQUIRE(cycle_distance(Frequency(9, 4), Frequency(9, 4)) == 0);
  REQUIRE(cycle_distance(Frequency(20, 0), Frequency(20, 7)) == 7);
  REQUIRE_THROWS_AS(cycle_distance(Frequency(12, 1), Frequency(10, 1)),
                    std::invalid_argument);

  SECTION("translation invariance d(0, k'-k) = d(k, k')") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 500; ++trial) {
      const int n = 3 + static_cast<int>(rng() % 62);
      const int a = static_cast<int>(rng() % n), b = static_cast<int>(rng() % n);
      REQUIRE(cycle_distance(n, 0, b - a) == cycle_distance(n, a, b));
      REQUIRE(cycle_distance(n, a, b) == cycle_distance(n, b, a));
    }
  }
  SECTION("triangle inequality") {
    for (int n : {7, 12}) {
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
          for (int c = 0; c < n; ++c)
            REQUIRE(cycle_distance(n, a, c) <=
                    cycle_distance(n, a, b) + cycle_distance(n, b, c));
    }
  }
}

TEST_CASE("in_diameter") {
  REQUIRE(in_diameter(FrequencySet(12, {0, 1, 3})) == 3);
  REQUIRE(in_diameter(FrequencySet(40, {17})) == 0);
  REQUIRE(in_diameter(FrequencySet(12, {0, 1, 3, 4, 6, 7, 8})) == 8);
  REQUIRE_THROWS_AS(in_diameter(FrequencySet(12, {})), std::invalid_argument);

  SECTION("matches interval enumeration on random sets") {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 200; ++trial) {
      const int n = 3 + static_cast<int>(rng() % 30);
      std::vector<int> ks;
      const int count = 1 + static_cast<int>(rng() % 6);
      for (int t = 0; t < count; ++t) ks.push_back(static_cast<int>(rng() % n));
      const FrequencySet K(n, ks);
      REQUIRE(in_diameter(K) == oracles::in_diameter_bruteforce(K));
    }
  }
  SECTION("the full set reports N-1 by the gap formula") {
    std::vector<int> all;
    for (int k = 0; k < 9; ++k) all.push_back(k);
    REQUIRE(in_diameter(FrequencySet(9, all)) == 8);
  }
}

TEST_CASE("e_{k+N} is e_k both as object and on vertices") {
  const TrigPoly a = TrigPoly::e(10, 3), b = TrigPoly::e(10, 13);
  REQUIRE(coeff_distance(a, b) == 0.0);
  for (int i = 1; i <= 10; ++i)
    REQUIRE(eval_at_vertex(a, i) == eval_at_vertex(b, i));
}

TEST_CASE("TrigPoly JSON round trip") {
  std::mt19937_64 rng(41);
  const TrigPoly f = random_poly(14, rng);
  nlohmann::json j = f;
  REQUIRE(coeff_distance(trig_poly_from_json(j), f) == 0.0);
  REQUIRE(j.at("n") == 14);
}
