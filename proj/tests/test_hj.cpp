#include <blinks/hj.hpp>

#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <numeric>
#include <random>

using namespace blinks;

TEST_CASE("continued-fraction expansion on pinned inputs") {
  CHECK(hj_expand({4, 1}) == ChainWeights{4});
  CHECK(hj_expand({3, 2}) == ChainWeights{2, 2});
  CHECK(hj_expand({5, 3}) == ChainWeights{2, 3});
  CHECK(hj_expand({2, 1}) == ChainWeights{2});
  CHECK(hj_expand({7, 5}) == ChainWeights{2, 2, 3});
}

TEST_CASE("expansion rejects malformed types") {
  CHECK_THROWS_AS(hj_expand({4, 2}), std::invalid_argument);  // gcd 2
  CHECK_THROWS_AS(hj_expand({1, 1}), std::invalid_argument);  // n too small
  CHECK_THROWS_AS(hj_expand({5, 0}), std::invalid_argument);
  CHECK_THROWS_AS(hj_expand({5, 5}), std::invalid_argument);  // q out of range
}

TEST_CASE("contraction on pinned chains") {
  CHECK(hj_contract({2}) == HjType{2, 1});
  CHECK(hj_contract({2, 2}) == HjType{3, 2});
  CHECK(hj_contract({3}) == HjType{3, 1});
}

TEST_CASE("contraction rejects non-minimal chains") {
  CHECK_THROWS_AS(hj_contract({}), std::invalid_argument);
  CHECK_THROWS_AS(hj_contract({2, 1, 2}), std::invalid_argument);
  CHECK_THROWS_AS(hj_contract({0}), std::invalid_argument);
}

TEST_CASE("expand/contract roundtrip for every coprime pair up to n = 200") {
  for (long long n = 2; n <= 200; ++n)
    for (long long q = 1; q < n; ++q) {
      if (std::gcd(n, q) != 1) continue;
      const auto w = hj_expand({n, q});
      for (long long a : w) CHECK(a >= 2);
      CHECK(hj_contract(w) == HjType{n, q});
    }
}

TEST_CASE("reversed chains keep the order and invert the weight") {
  for (long long n = 2; n <= 60; ++n)
    for (long long q = 1; q < n; ++q) {
      if (std::gcd(n, q) != 1) continue;
      auto w = hj_expand({n, q});
      std::reverse(w.begin(), w.end());
      const auto dual = hj_contract(w);
      CHECK(dual.n == n);
      CHECK(dual.q * q % n == 1 % n);
    }
}

TEST_CASE("chain discrepancies on pinned chains") {
  CHECK(chain_discrepancies({2}) == Vec{0});
  CHECK(chain_discrepancies({2, 2}) == Vec{0, 0});
  CHECK(chain_discrepancies({3}) == Vec{Rational(-1) / 3});

  // Chain of an order-5 point: solved by hand from the 2x2 system.
  const auto c = chain_discrepancies({2, 3});
  REQUIRE(c.size() == 2);
  CHECK(c[0] == Rational(-1) / 5);
  CHECK(c[1] == Rational(-2) / 5);
}

TEST_CASE("discrepancies lie in (-1, 0] and vanish exactly on all-2 chains") {
  std::mt19937 rng(20240817);
  std::uniform_int_distribution<int> len_d(1, 8), w_d(2, 9);
  for (int iter = 0; iter < 1000; ++iter) {
    ChainWeights w(static_cast<std::size_t>(len_d(rng)));
    for (auto& a : w) a = w_d(rng);
    const auto c = chain_discrepancies(w);
    const bool all_two = std::all_of(w.begin(), w.end(), [](long long a) { return a == 2; });
    bool all_zero = true;
    for (const auto& ci : c) {
      CHECK(ci > -1);
      CHECK(ci <= 0);
      if (ci != 0) all_zero = false;
    }
    CHECK(all_zero == all_two);
  }
}

TEST_CASE("boundary index reads the designated end") {
  CHECK(boundary_index({2, 2}, ChainEnd::First) == 2);
  CHECK(boundary_index({3, 2, 2}, ChainEnd::First) == 3);
  CHECK(boundary_index({2, 2, 5}, ChainEnd::Last) == 5);
  CHECK(boundary_index({4}, ChainEnd::First) == boundary_index({4}, ChainEnd::Last));
}
