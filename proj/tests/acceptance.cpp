#include <cstdio>

#include "bcov/acceptance.hpp"

int main() {
  int failed = 0;
  for (const auto& r : bcov::run_acceptance()) {
    std::printf("%s %2d %s (%.2f s)", r.pass ? "PASS" : "FAIL", r.id, r.name.c_str(), r.seconds);
    for (const auto& [k, v] : r.metrics) std::printf(" %s=%.3g", k.c_str(), v);
    if (!r.pass) std::printf(" : %s", r.detail.c_str());
    std::printf("\n");
    std::fflush(stdout);
    failed += !r.pass;
  }
  return failed == 0 ? 0 : 1;
}
