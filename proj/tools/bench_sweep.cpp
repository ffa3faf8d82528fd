// Compares the serial and OpenMP grid-sweep kernels behind the
// compatibility checker on the fusion-sort rules at growing bounds.

#include <chrono>
#include <iostream>

#include "omp.h"
#include "poly/frontend.hpp"
#include "poly/interp.hpp"

using namespace poly;
using Clock = std::chrono::steady_clock;

static double run_all(const Polygraph& P, const Interp& it, long long B, bool parallel) {
  auto t0 = Clock::now();
  for (const auto& rule : P.three_cells) {
    check_compatible(it, CheckKind::Current, rule, false, B, parallel);
    check_compatible(it, CheckKind::Heat, rule, rule.kind == RuleKind::Computation, B, parallel);
    check_compatible(it, CheckKind::DerivedMax, rule, false, B, parallel);
  }
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

int main(int argc, char** argv) {
  std::string prog = argc > 1 ? argv[1] : "fixtures/sort.poly";
  std::string ip = argc > 2 ? argv[2] : "fixtures/sort.interp";
  Polygraph P = elaborate(parse_program_file(prog));
  Interp it = parse_interp_file(P, ip);

  std::cout << "threads: " << omp_get_max_threads() << "\n";
  std::cout << "B        serial[s]   openmp[s]   speedup\n";
  for (long long B : {64, 256, 1024, 4096}) {
    double ts = run_all(P, it, B, false);
    double tp = run_all(P, it, B, true);
    std::printf("%-8lld %-11.4f %-11.4f %.2fx\n", B, ts, tp, ts / tp);
  }
  return 0;
}
