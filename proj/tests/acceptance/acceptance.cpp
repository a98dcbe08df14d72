// Acceptance run: every criterion of the built-in suite under the default
// settings, including the determinism rerun. One line per criterion, then the
// individual checks with measured value and tolerance.

#include <cstdio>
#include <iostream>

#include "monotone/selftest.hpp"

int main() {
  const monotone::SelftestReport rep = monotone::selftest();
  for (const monotone::CriterionResult& c : rep.criteria) {
    std::size_t ok = 0;
    for (const monotone::CheckResult& k : c.checks) ok += k.pass ? 1 : 0;
    std::printf("%-4s criterion %2d  %-60s %zu/%zu checks%s%s\n",
                c.status == monotone::CriterionStatus::Pass      ? "PASS"
                : c.status == monotone::CriterionStatus::Skipped ? "SKIP"
                                                                 : "FAIL",
                c.id, c.title.c_str(), ok, c.checks.size(), c.note.empty() ? "" : "  ", c.note.c_str());
  }
  std::cout << "\n" << monotone::format_table(rep);
  std::cout << (rep.passed() ? "acceptance: all criteria passed\n" : "acceptance: FAILED at " + rep.first_failure() + "\n");
  return rep.passed() ? 0 : 1;
}
