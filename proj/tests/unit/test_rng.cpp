#include <doctest.h>

#include <cmath>

#include "bicm/rng.hpp"

using namespace bicm;

TEST_SUITE("rng") {

TEST_CASE("same seed reproduces the stream") {
  Rng a(42), b(42);
  for (int i = 0; i < 1000; ++i) CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("child streams differ from parent and each other") {
  Rng base(7);
  Rng c0 = base.child(0), c1 = base.child(1);
  int equal01 = 0;
  for (int i = 0; i < 64; ++i) equal01 += c0.next_u64() == c1.next_u64();
  CHECK(equal01 == 0);
}

TEST_CASE("normal pairs have the right moments") {
  Rng rng(3);
  double s = 0, s2 = 0;
  const int n = 200000;
  for (int i = 0; i < n / 2; ++i) {
    double z0, z1;
    rng.normal_pair(z0, z1);
    s += z0 + z1;
    s2 += z0 * z0 + z1 * z1;
  }
  CHECK(std::abs(s / n) < 0.01);
  CHECK(std::abs(s2 / n - 1.0) < 0.02);
}

TEST_CASE("complex normal is unit variance") {
  Rng rng(5);
  double e2 = 0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) e2 += std::norm(rng.complex_normal());
  CHECK(std::abs(e2 / n - 1.0) < 0.01);
}

TEST_CASE("uniform_int covers the range uniformly") {
  Rng rng(9);
  int counts[16] = {0};
  const int n = 160000;
  for (int i = 0; i < n; ++i) ++counts[rng.uniform_int(16)];
  for (int c : counts) CHECK(std::abs(c - n / 16) < 500);
}

}  // TEST_SUITE
