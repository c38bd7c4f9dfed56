#pragma once

#include <string>
#include <vector>

namespace jetforge {

// Outcome of one verification check.
struct CheckResult {
	int number;          // 1-based position in the suite
	std::string name;    // short label
	bool passed;
	std::string detail;  // first failure (or refusal) explanation; empty when passed
	double seconds;
};

// The built-in verification suite: deterministic randomized exact checks of
// the library's central identities.  All comparisons are exact equality at
// finite truncation; a run is reproducible because every sample stream is
// seeded.  Every check is designed to finish in seconds.
int selftest_count();
std::vector<std::string> selftest_names();

// Runs one check (1-based index; UsageError when out of range).  A thrown
// error inside a check is reported as a failure with the message in detail.
CheckResult run_selftest(int number);

// Runs the whole suite in order.
std::vector<CheckResult> run_selftests();

} // namespace jetforge
