// Runs every acceptance check at full size and prints one line per criterion.
// Exit status is nonzero when any criterion fails or overruns its time budget.

#include <cstdio>
#include <cstdlib>
#include <string>

#include "fracwalk/parallel.hpp"
#include "fracwalk/validation.hpp"

int main(int argc, char** argv) {
  namespace v = fracwalk::validation;
  v::Options opt;
  opt.threads = fracwalk::default_threads();
  for (int i = 1; i + 1 < argc; i += 2) {
    const std::string key = argv[i];
    if (key == "--seed") opt.seed = std::strtoull(argv[i + 1], nullptr, 10);
    if (key == "--threads") opt.threads = static_cast<unsigned>(std::strtoul(argv[i + 1], nullptr, 10));
  }
  int failed = 0;
  for (const auto& check : v::registry()) {
    const auto r = v::run_check(check, opt);
    const bool in_time = r.seconds <= check.budget_seconds;
    const bool ok = r.passed() && in_time;
    if (!ok) ++failed;
    std::printf("[%s] criterion %2d %-24s %8.2f s (budget %g s)%s\n", ok ? "PASS" : "FAIL", r.criterion,
                r.name.c_str(), r.seconds, check.budget_seconds, in_time ? "" : " over budget");
    for (const auto& m : r.items)
      if (!m.passed) std::printf("         %s: %.6g (limit %.6g)\n", m.label.c_str(), m.value, m.limit);
    if (!r.error.empty()) std::printf("         error: %s\n", r.error.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(v::registry().size()) - failed, v::registry().size());
  return failed == 0 ? 0 : 1;
}
