#include "condtest/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "condtest/reference.hpp"

namespace condtest {

namespace {

std::string fnv1a_hex(const std::string& text) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

int resolve_threads(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("CONDTEST_THREADS")) {
    int n = std::atoi(env);
    if (n > 0) return n;
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

void parallel_for(int jobs, int threads, const std::function<void(int)>& fn) {
  threads = std::min(threads, jobs);
  if (threads <= 1) {
    for (int i = 0; i < jobs; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(threads));
  for (int t = 0; t < threads; ++t)
    pool.emplace_back([&] {
      for (int i = next.fetch_add(1); i < jobs; i = next.fetch_add(1)) fn(i);
    });
  for (auto& th : pool) th.join();
}

}  // namespace

void HarnessConfig::apply_multiplier(const std::string& key, double value) {
  auto& m = closeness.mult;
  if (key == "c_te") equality_c_te = value;
  else if (key == "identity_c_te") identity.c_te = value;
  else if (key == "identity_charge_known") identity.charge_known = value != 0.0;
  else if (key == "log2_schedule") {
    identity.log2_legs = value != 0.0;
    closeness.log2_legs = value != 0.0;
  } else if (key == "closeness_c_te") m.c_te = value;
  else if (key == "gamma_mult") m.gamma = value;
  else if (key == "m_mult") m.m = value;
  else if (key == "n1_mult") m.n1 = value;
  else if (key == "n2_mult") m.n2 = value;
  else if (key == "n3_mult") m.n3 = value;
  else if (key == "n4_mult") m.n4 = value;
  else if (key == "beta_dd_mult") m.beta_dd = value;
  else if (key == "chi_induced_mult") m.chi_induced = value;
  else if (key == "amp_c") amp_c = value;
  else if (key == "threads") threads = static_cast<int>(value);
  else throw std::invalid_argument("unknown multiplier key: " + key);
}

void HarnessConfig::apply_multipliers_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open multipliers file: " + path);
  std::string line;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    auto trim = [](std::string s) {
      auto b = s.find_first_not_of(" \t\r");
      auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    std::string key = trim(line.substr(0, eq));
    std::string val = trim(line.substr(eq + 1));
    if (key.empty()) continue;
    apply_multiplier(key, std::stod(val));
  }
}

std::string HarnessConfig::canonical_string() const {
  const auto& m = closeness.mult;
  std::ostringstream os;
  os << "c_te=" << equality_c_te << ";identity_c_te=" << identity.c_te
     << ";identity_charge_known=" << identity.charge_known
     << ";log2_schedule=" << identity.log2_legs << ";closeness_c_te=" << m.c_te
     << ";gamma_mult=" << m.gamma << ";m_mult=" << m.m << ";n1_mult=" << m.n1
     << ";n2_mult=" << m.n2 << ";n3_mult=" << m.n3 << ";n4_mult=" << m.n4
     << ";beta_dd_mult=" << m.beta_dd << ";chi_induced_mult=" << m.chi_induced
     << ";amp_c=" << amp_c << ";amplified=" << amplified;
  return os.str();
}

int amplify_rounds(double amp_c, double delta) {
  return std::max(1, static_cast<int>(std::ceil(amp_c * std::log(1.0 / delta))));
}

Verdict amplify(const std::function<Verdict()>& tester, int rounds) {
  Verdict out;
  int diffs = 0;
  for (int r = 0; r < rounds; ++r) {
    Verdict v = tester();
    out.samples += v.samples;
    if (v.diff()) ++diffs;
  }
  out.outcome = (static_cast<double>(diffs) > static_cast<double>(rounds) / 60.0)
                    ? Outcome::Diff
                    : Outcome::Same;
  return out;
}

std::vector<ExperimentRecord> run_trials(const RunRequest& req, const HarnessConfig& cfg) {
  if (req.trials < 1) throw std::invalid_argument("trials must be >= 1");
  GeneratedPair pair = req.generator.make(req.k, req.seed);

  // Generator contract check before any trial.
  double l1 = reference::l1_distance(pair.p, pair.q);
  if (pair.relation == PairRelation::Equal) {
    if (l1 != 0.0) throw std::invalid_argument("generator promised p=q but l1 > 0");
  } else {
    if (l1 + 1e-12 < pair.far_eps)
      throw std::invalid_argument("generator/eps mismatch: pair is not eps-far");
    if (pair.far_eps + 1e-12 < req.eps)
      throw std::invalid_argument("generator/eps mismatch: far level below requested eps");
    auto ea = reference::exp_approx_check(pair.p, pair.q);
    if (ea.sum + 1e-12 < ea.l1 / 4.0)
      throw std::invalid_argument("tail-deviation bound violated for generated pair");
  }

  const std::string hash = fnv1a_hex(cfg.canonical_string() + "|" + req.generator.to_string());
  const int rounds = cfg.amplified ? amplify_rounds(cfg.amp_c, req.delta) : 1;

  std::vector<ExperimentRecord> records(static_cast<std::size_t>(req.trials));
  auto run_one = [&](int idx) {
    ExperimentRecord rec;
    rec.config_hash = hash;
    rec.generator = req.generator.to_string();
    rec.k = req.k;
    rec.eps = req.eps;
    rec.delta = req.delta;
    rec.seed = Rng::derive(req.seed, static_cast<std::uint64_t>(idx));
    Rng rng(rec.seed);

    auto t0 = std::chrono::steady_clock::now();
    long long qp = 0, qq = 0;
    auto base = [&]() -> Verdict {
      CondOracle q_oracle(pair.q, rng);
      if (req.tester == TesterKind::Identity) {
        Verdict v = identity_test(pair.p, q_oracle, req.eps, req.delta, cfg.identity, rng);
        // v.samples already folds in simulated known-side draws when charged
        qp += v.samples - q_oracle.queries();
        qq += q_oracle.queries();
        return v;
      }
      CondOracle p_oracle(pair.p, rng);
      Verdict v =
          closeness_test(p_oracle, q_oracle, req.eps, req.delta, req.k, cfg.closeness, rng);
      qp += p_oracle.queries();
      qq += q_oracle.queries();
      return v;
    };
    Verdict v = rounds == 1 ? base() : amplify(base, rounds);
    rec.verdict = v.outcome;
    rec.queries_p = qp;
    rec.queries_q = qq;
    rec.wall_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    records[static_cast<std::size_t>(idx)] = std::move(rec);
  };
  parallel_for(req.trials, resolve_threads(cfg.threads), run_one);
  return records;
}

LemmaReport verify_lemmas(std::uint64_t seed, const std::string& snapshot_path,
                          double (*chi2)(double, double)) {
  if (chi2 == nullptr) chi2 = reference::chi2_binary;
  LemmaReport rep;
  Rng rng(Rng::derive(seed, 0x1e44a));

  // Pair chi-squared lower bound over random positive quadruples.
  rep.chilow_cases = 10000;
  for (std::int64_t c = 0; c < rep.chilow_cases; ++c) {
    double pi = rng.uniform(), qi = rng.uniform(), pj = rng.uniform(), qj = rng.uniform();
    pi += 1e-6; qi += 1e-6; pj += 1e-6; qj += 1e-6;
    auto r = reference::chilow_bound(pi, qi, pj, qj);
    double lhs = chi2(pi / (pi + pj), qi / (qi + qj));
    if (r.premise > 0.0 && lhs + 1e-12 < r.bound) ++rep.chilow_violations;
  }

  // Tail-deviation lower bound over random Dirichlet pairs.
  rep.exp_approx_cases = 1000;
  for (std::int64_t c = 0; c < rep.exp_approx_cases; ++c) {
    GeneratorSpec spec;
    spec.name = "dirichlet";
    spec.params = {0.5 + rng.uniform()};
    std::int64_t k = 8 + rng.index(64);
    Distribution p = spec.make(k, rng.next()).p;
    Distribution q = spec.make(k, rng.next()).p;
    auto ea = reference::exp_approx_check(p, q);
    if (ea.sum + 1e-12 < ea.l1 / 4.0) ++rep.exp_approx_violations;
  }

  // Poisson statistic moments over the mean grid {0, 1, 5, 10}^2.
  const double grid[] = {0.0, 1.0, 5.0, 10.0};
  double worst_var_gap = 0.0;
  nlohmann::json moment_table = nlohmann::json::array();
  for (double l1 : grid)
    for (double l2 : grid) {
      ++rep.moment_cases;
      auto m = reference::poisson_stat_moments(l1, l2, 200000, rng);
      double tol = 5.0 * std::max(m.mean_stderr, 1e-9);
      if (std::fabs(m.mc_mean - m.mean_formula) > tol) ++rep.moment_violations;
      worst_var_gap = std::max(worst_var_gap, m.mc_var - m.var_bound_base);
      moment_table.push_back({{"lam1", l1},
                              {"lam2", l2},
                              {"mc_mean", m.mc_mean},
                              {"mean_formula", m.mean_formula},
                              {"mc_var", m.mc_var},
                              {"var_bound_base", m.var_bound_base}});
    }
  rep.fitted_c = std::sqrt(std::max(worst_var_gap, 0.0));

  if (!snapshot_path.empty()) {
    nlohmann::json snap;
    snap["seed"] = seed;
    snap["fitted_c"] = rep.fitted_c;
    snap["chilow_cases"] = rep.chilow_cases;
    snap["exp_approx_cases"] = rep.exp_approx_cases;
    snap["moments"] = moment_table;
    std::ofstream out(snapshot_path);
    out << snap.dump(2) << "\n";
  }
  return rep;
}

std::string records_to_csv(const std::vector<ExperimentRecord>& records) {
  std::ostringstream os;
  os << "generator,k,eps,delta,seed,verdict,queries_p,queries_q,wall_ms\n";
  for (const auto& r : records) {
    char buf[64];
    os << r.generator << "," << r.k << "," << r.eps << "," << r.delta << "," << r.seed << ","
       << to_string(r.verdict) << "," << r.queries_p << "," << r.queries_q << ",";
    std::snprintf(buf, sizeof buf, "%.3f", r.wall_ms);
    os << buf << "\n";
  }
  return os.str();
}

void write_csv(const std::vector<ExperimentRecord>& records, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot open output file: " + path);
  out << records_to_csv(records);
}

void write_json(const std::vector<ExperimentRecord>& records, const std::string& path) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : records)
    arr.push_back({{"config_hash", r.config_hash},
                   {"generator", r.generator},
                   {"k", r.k},
                   {"eps", r.eps},
                   {"delta", r.delta},
                   {"seed", r.seed},
                   {"verdict", to_string(r.verdict)},
                   {"queries_p", r.queries_p},
                   {"queries_q", r.queries_q},
                   {"wall_ms", r.wall_ms}});
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot open output file: " + path);
  out << arr.dump(2) << "\n";
}

double median(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("median of empty set");
  std::sort(values.begin(), values.end());
  std::size_t n = values.size();
  return n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

}  // namespace condtest
