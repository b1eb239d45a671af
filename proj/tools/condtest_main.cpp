#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "condtest/harness.hpp"

namespace {

using namespace condtest;

struct CliOptions {
  std::int64_t k = 1024;
  double eps = 0.5;
  double delta = 0.1;
  int trials = 100;
  std::uint64_t seed = 1;
  std::string gen = "uniform";
  std::string multipliers;
  std::string out;
  std::string format = "csv";
  std::string k_list;  // sweep only
  std::string tester = "identity";
  bool amplified = false;
};

void add_common(CLI::App* cmd, CliOptions& opt) {
  cmd->add_option("--k", opt.k, "domain size");
  cmd->add_option("--eps", opt.eps, "distance parameter");
  cmd->add_option("--delta", opt.delta, "error parameter");
  cmd->add_option("--trials", opt.trials, "number of independent trials");
  cmd->add_option("--seed", opt.seed, "master seed (CONDTEST_SEED overrides)");
  cmd->add_option("--gen", opt.gen, "generator spec, e.g. zipf(1.0) or two-bump(0.5)");
  cmd->add_option("--multipliers", opt.multipliers, "key=value config file");
  cmd->add_option("--out", opt.out, "output path");
  cmd->add_option("--format", opt.format, "csv|json")->check(CLI::IsMember({"csv", "json"}));
  cmd->add_flag("--amplified", opt.amplified, "wrap each trial in the majority amplifier");
}

int emit(const std::vector<ExperimentRecord>& records, const CliOptions& opt) {
  int diffs = 0;
  std::vector<double> queries;
  for (const auto& r : records) {
    if (r.verdict == Outcome::Diff) ++diffs;
    queries.push_back(static_cast<double>(r.queries_p + r.queries_q));
  }
  std::printf("trials=%zu diff_fraction=%.4f median_queries=%.0f\n", records.size(),
              static_cast<double>(diffs) / static_cast<double>(records.size()),
              median(queries));
  if (!opt.out.empty()) {
    if (opt.format == "json")
      write_json(records, opt.out);
    else
      write_csv(records, opt.out);
    std::printf("wrote %s\n", opt.out.c_str());
  }
  return 0;
}

int run_tester(TesterKind kind, CliOptions& opt) {
  HarnessConfig cfg;
  if (!opt.multipliers.empty()) cfg.apply_multipliers_file(opt.multipliers);
  cfg.amplified = opt.amplified;
  if (const char* env = std::getenv("CONDTEST_SEED")) opt.seed = std::strtoull(env, nullptr, 10);

  RunRequest req;
  req.generator = GeneratorSpec::parse(opt.gen);
  req.tester = kind;
  req.k = opt.k;
  req.eps = opt.eps;
  req.delta = opt.delta;
  req.trials = opt.trials;
  req.seed = opt.seed;
  return emit(run_trials(req, cfg), opt);
}

int run_sweep(CliOptions& opt) {
  HarnessConfig cfg;
  if (!opt.multipliers.empty()) cfg.apply_multipliers_file(opt.multipliers);
  cfg.amplified = opt.amplified;
  if (const char* env = std::getenv("CONDTEST_SEED")) opt.seed = std::strtoull(env, nullptr, 10);

  std::vector<std::int64_t> ks;
  std::size_t start = 0;
  while (start < opt.k_list.size()) {
    auto comma = opt.k_list.find(',', start);
    auto end = comma == std::string::npos ? opt.k_list.size() : comma;
    ks.push_back(std::stoll(opt.k_list.substr(start, end - start)));
    start = end + 1;
  }
  if (ks.empty()) {
    std::fprintf(stderr, "sweep needs --k-list\n");
    return 1;
  }

  std::vector<ExperimentRecord> all;
  std::printf("k,median_queries,diff_fraction\n");
  for (std::int64_t k : ks) {
    RunRequest req;
    req.generator = GeneratorSpec::parse(opt.gen);
    req.tester = opt.tester == "closeness" ? TesterKind::Closeness : TesterKind::Identity;
    req.k = k;
    req.eps = opt.eps;
    req.delta = opt.delta;
    req.trials = opt.trials;
    req.seed = Rng::derive(opt.seed, static_cast<std::uint64_t>(k));
    auto recs = run_trials(req, cfg);
    std::vector<double> queries;
    int diffs = 0;
    for (const auto& r : recs) {
      queries.push_back(static_cast<double>(r.queries_p + r.queries_q));
      if (r.verdict == Outcome::Diff) ++diffs;
    }
    std::printf("%lld,%.0f,%.4f\n", static_cast<long long>(k), median(queries),
                static_cast<double>(diffs) / static_cast<double>(recs.size()));
    all.insert(all.end(), recs.begin(), recs.end());
  }
  if (!opt.out.empty()) {
    if (opt.format == "json")
      write_json(all, opt.out);
    else
      write_csv(all, opt.out);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"identity and closeness testing under conditional sampling"};
  app.require_subcommand(1);
  CliOptions opt;

  CLI::App* identity = app.add_subcommand("identity", "test a sampled q against a known p");
  add_common(identity, opt);
  CLI::App* closeness = app.add_subcommand("closeness", "test two sampled distributions");
  add_common(closeness, opt);
  CLI::App* sweep = app.add_subcommand("sweep", "query medians across domain sizes");
  add_common(sweep, opt);
  sweep->add_option("--k-list", opt.k_list, "comma-separated domain sizes");
  sweep->add_option("--tester", opt.tester, "identity|closeness")
      ->check(CLI::IsMember({"identity", "closeness"}));
  CLI::App* verify = app.add_subcommand("verify-lemmas", "run the numerical lemma sweeps");
  verify->add_option("--seed", opt.seed, "sweep seed");
  verify->add_option("--out", opt.out, "snapshot path (JSON)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (identity->parsed()) return run_tester(condtest::TesterKind::Identity, opt);
    if (closeness->parsed()) return run_tester(condtest::TesterKind::Closeness, opt);
    if (sweep->parsed()) return run_sweep(opt);
    if (verify->parsed()) {
      if (const char* env = std::getenv("CONDTEST_SEED"))
        opt.seed = std::strtoull(env, nullptr, 10);
      auto rep = condtest::verify_lemmas(opt.seed, opt.out.empty() ? "lemma_snapshot.json" : opt.out);
      std::printf("chilow: %lld cases, %lld violations\n",
                  static_cast<long long>(rep.chilow_cases),
                  static_cast<long long>(rep.chilow_violations));
      std::printf("tail-deviation: %lld cases, %lld violations\n",
                  static_cast<long long>(rep.exp_approx_cases),
                  static_cast<long long>(rep.exp_approx_violations));
      std::printf("poisson moments: %lld cases, %lld violations, fitted c=%.3f\n",
                  static_cast<long long>(rep.moment_cases),
                  static_cast<long long>(rep.moment_violations), rep.fitted_c);
      return rep.ok() ? 0 : 1;
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
