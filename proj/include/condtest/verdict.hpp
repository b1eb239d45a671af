#pragma once

#include <cstdint>
#include <string>

namespace condtest {

enum class Outcome { Same, Diff };

inline const char* to_string(Outcome o) { return o == Outcome::Same ? "same" : "diff"; }

// Tester outcome with the number of conditional samples it consumed.
struct Verdict {
  Outcome outcome = Outcome::Same;
  long long samples = 0;

  bool diff() const { return outcome == Outcome::Diff; }
};

}  // namespace condtest
