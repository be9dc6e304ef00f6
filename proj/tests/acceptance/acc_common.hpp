#pragma once

#include <cstdio>
#include <string>

// Shared reporting for the acceptance binaries: one line per criterion,
// nonzero exit when any fails. Diagnostics go to stderr.
class Criteria {
 public:
  void report(int id, bool pass) {
    std::printf("criterion %d: %s\n", id, pass ? "PASS" : "FAIL");
    std::fflush(stdout);
    if (!pass) failed_ = true;
  }
  void note(const std::string& msg) { std::fprintf(stderr, "  %s\n", msg.c_str()); }
  int exit_code() const { return failed_ ? 1 : 0; }

 private:
  bool failed_ = false;
};
