#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "condtest/closeness.hpp"
#include "condtest/generators.hpp"
#include "condtest/identity.hpp"
#include "condtest/verdict.hpp"

namespace condtest {

enum class TesterKind { Identity, Closeness };

// One trial's configuration and result. Rerunning with the same seed
// reproduces the verdict and query counts exactly.
struct ExperimentRecord {
  std::string config_hash;
  std::string generator;
  std::int64_t k = 0;
  double eps = 0.0;
  double delta = 0.0;
  std::uint64_t seed = 0;  // per-trial derived seed
  Outcome verdict = Outcome::Same;
  long long queries_p = 0;
  long long queries_q = 0;
  double wall_ms = 0.0;
};

struct HarnessConfig {
  IdentityConfig identity;
  ClosenessConfig closeness;
  double equality_c_te = EqualityParams::kDefaultCte;  // standalone primitive default
  double amp_c = 60.0;                                 // amplification rounds = ceil(amp_c ln(1/delta))
  int threads = 0;                                     // 0: hardware concurrency
  bool amplified = false;

  // key=value lines, '#' comments; unknown keys rejected.
  void apply_multipliers_file(const std::string& path);
  void apply_multiplier(const std::string& key, double value);
  std::string canonical_string() const;
};

struct RunRequest {
  GeneratorSpec generator;
  TesterKind tester = TesterKind::Identity;
  std::int64_t k = 0;
  double eps = 0.0;
  double delta = 0.0;
  int trials = 0;
  std::uint64_t seed = 0;
};

// Independent trials with fresh oracles per trial, parallel across a worker
// pool; records come back in trial order. Aborts (std::invalid_argument)
// before any trial when the generated pair violates the generator's declared
// relation (exact l1 check, plus the tail-deviation lower bound for far
// pairs).
std::vector<ExperimentRecord> run_trials(const RunRequest& req, const HarnessConfig& cfg);

// Repeats a (1-delta, 1/30) tester and declares diff when more than 1/60 of
// the rounds do. rounds = 1 degenerates to the base tester.
Verdict amplify(const std::function<Verdict()>& tester, int rounds);
int amplify_rounds(double amp_c, double delta);

// Lemma sweep report; `violations` must be zero for a healthy build.
struct LemmaReport {
  std::int64_t chilow_cases = 0;
  std::int64_t chilow_violations = 0;
  std::int64_t exp_approx_cases = 0;
  std::int64_t exp_approx_violations = 0;
  std::int64_t moment_cases = 0;
  std::int64_t moment_violations = 0;
  double fitted_c = 0.0;  // universal variance constant, fitted over the grid
  bool ok() const { return chilow_violations + exp_approx_violations + moment_violations == 0; }
};

// Runs all sweeps (chilow quadruples, Dirichlet far pairs through the
// tail-deviation bound, Poisson statistic moments over a mean grid) and
// writes a JSON snapshot of the fitted constants when `snapshot_path` is
// nonempty. The chi-squared implementation is injectable so a corrupted
// implementation is detectable by tests.
LemmaReport verify_lemmas(std::uint64_t seed, const std::string& snapshot_path = "",
                          double (*chi2)(double, double) = nullptr);

void write_csv(const std::vector<ExperimentRecord>& records, const std::string& path);
void write_json(const std::vector<ExperimentRecord>& records, const std::string& path);
std::string records_to_csv(const std::vector<ExperimentRecord>& records);

double median(std::vector<double> values);

}  // namespace condtest
