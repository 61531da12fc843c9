#include <doctest.h>

#include <cmath>

#include "bicm/mathutil.hpp"
#include "bicm/rng.hpp"

using namespace bicm;

TEST_SUITE("mathutil") {

TEST_CASE("fast_exp matches std::exp") {
  Rng rng(1);
  for (int i = 0; i < 20000; ++i) {
    const double x = (rng.uniform() - 0.5) * 1400.0;
    const double ref = std::exp(x);
    const double got = fast_exp(x);
    if (ref == 0.0) {
      CHECK(got == 0.0);
    } else {
      CHECK(std::abs(got - ref) <= 1e-11 * ref);
    }
  }
  CHECK(fast_exp(0.0) == 1.0);
  CHECK(fast_exp(-800.0) == 0.0);
}

TEST_CASE("fast_log matches std::log") {
  Rng rng(2);
  for (int i = 0; i < 20000; ++i) {
    const double x = std::exp((rng.uniform() - 0.5) * 600.0);
    CHECK(std::abs(fast_log(x) - std::log(x)) <= 1e-11 * std::max(1.0, std::abs(std::log(x))));
  }
  CHECK(fast_log(1.0) == 0.0);
  CHECK(fast_log(0.0) == -HUGE_VAL);
}

TEST_CASE("log1p_exp stable everywhere") {
  Rng rng(3);
  for (int i = 0; i < 20000; ++i) {
    const double z = (rng.uniform() - 0.5) * 200.0;
    const double ref = z > 30 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
    CHECK(std::abs(log1p_exp(z) - ref) <= 1e-10 * std::max(1.0, std::abs(ref)) + 1e-13);
  }
  CHECK(log1p_exp(1000.0) == 1000.0);
  CHECK(log1p_exp(-1000.0) == 0.0);
}

TEST_CASE("bit-probability helpers handle infinities") {
  CHECK(log_prob0_from_llr(HUGE_VAL) == 0.0);
  CHECK(log_prob0_from_llr(-HUGE_VAL) == -HUGE_VAL);
  CHECK(log_prob1_from_llr(HUGE_VAL) == -HUGE_VAL);
  CHECK(log_prob0_from_llr(0.0) == doctest::Approx(-kLn2).epsilon(1e-12));
}

}  // TEST_SUITE
