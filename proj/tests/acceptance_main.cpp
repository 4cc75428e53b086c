// Acceptance suite: one pass/fail line per criterion, nonzero exit when any
// criterion fails. Runs through the same reproduce entry point as the CLI,
// so summary.json and the figure data are emitted and checked here too.
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>

#include "soler/acceptance.hpp"
#include "soler/blas_threads.hpp"

int main() {
  int jobs = 2;
  if (const char* s = std::getenv("SOLERLAB_JOBS")) {
    const int n = std::atoi(s);
    if (n >= 1) jobs = n;
  }
  if (jobs > 1) soler::set_blas_threads(1);

  const std::string out_dir = "acceptance_out";
  std::vector<soler::CriterionResult> results;
  const bool ok =
      soler::reproduce_paper(out_dir, jobs, &results, &std::cout);

  bool files_ok = std::filesystem::exists(out_dir + "/summary.json") &&
                  std::filesystem::exists(out_dir + "/figure1_data.csv");
  std::printf("artifacts: %s\n", files_ok ? "written" : "MISSING");
  std::printf("%s\n", ok ? "acceptance: all criteria passed"
                         : "acceptance: criteria failed");
  return (ok && files_ok) ? 0 : 1;
}
