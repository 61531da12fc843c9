// Acceptance suite: one numbered criterion per invocation, each printing a
// single PASS/FAIL line (plus the measured numbers it was judged on).
//
// Usage: acceptance --criterion N [--seed S]
//        acceptance --rederive-oracle   (recompute the frozen scalar values)

#include <cstdio>
#include <cstring>

#include "criteria.hpp"

int main(int argc, char** argv) {
  int criterion = 0;
  std::uint64_t seed = 12345;
  bool rederive = false;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) {
      criterion = std::atoi(argv[++i]);
    } else if (std::strcmp(argv[i], "--seed") == 0 && i + 1 < argc) {
      seed = std::strtoull(argv[++i], nullptr, 10);
    } else if (std::strcmp(argv[i], "--rederive-oracle") == 0) {
      rederive = true;
    } else {
      std::fprintf(stderr, "usage: acceptance --criterion N [--seed S] | --rederive-oracle\n");
      return 2;
    }
  }
  if (rederive) return acceptance::rederive_oracle();
  if (criterion < 1 || criterion > 10) {
    std::fprintf(stderr, "usage: acceptance --criterion N (1..10)\n");
    return 2;
  }
  return acceptance::run_criterion(criterion, seed);
}
