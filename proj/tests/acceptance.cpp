// Acceptance suite driver: one pass/fail line per criterion. Exit code is
// nonzero when any selected criterion fails, so ctest can track each one.
//
//   acceptance                  run everything
//   acceptance --criterion 4    run a single criterion
//   acceptance --level quick    skip the longer-running checks

#include <cstdio>
#include <cstring>
#include <string>

#include "dens/validate.hpp"

int main(int argc, char** argv) {
  int which = 0;
  dens::ValidationLevel level = dens::ValidationLevel::full;
  int threads = 1;
  for (int i = 1; i < argc; ++i) {
    if (!std::strcmp(argv[i], "--criterion") && i + 1 < argc) {
      which = std::atoi(argv[++i]);
    } else if (!std::strcmp(argv[i], "--level") && i + 1 < argc) {
      level = std::strcmp(argv[++i], "quick") ? dens::ValidationLevel::full
                                              : dens::ValidationLevel::quick;
    } else if (!std::strcmp(argv[i], "--threads") && i + 1 < argc) {
      threads = std::atoi(argv[++i]);
    } else {
      std::fprintf(stderr, "usage: acceptance [--criterion N] [--level quick|full]\n");
      return 2;
    }
  }

  const auto report = dens::run_acceptance(level, threads, which);
  if (report.criteria.empty()) {
    std::fprintf(stderr, "no criteria selected\n");
    return 2;
  }
  for (const auto& c : report.criteria) {
    std::printf("%s  criterion %2d  %-55s (%.2fs)  %s\n",
                c.passed ? "PASS" : "FAIL", c.id, c.name.c_str(), c.seconds,
                c.detail.c_str());
    if (!c.note.empty()) std::printf("      note: %s\n", c.note.c_str());
  }
  return report.all_passed() ? 0 : 1;
}
