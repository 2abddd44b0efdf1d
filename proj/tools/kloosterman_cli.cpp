// kloosterman: compute local Kloosterman sums, run verification suites, draw diagrams.
// Exit codes: 0 ok, 1 bad configuration, 2 enumeration budget exceeded, 3 verification failure.
#include <chrono>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "kloost/bounds.hpp"
#include "kloost/diagram.hpp"
#include "kloost/kloosterman.hpp"
#include "kloost/verify.hpp"

using namespace kloost;
using nlohmann::ordered_json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitBudget = 2;
constexpr int kExitVerify = 3;

struct RunConfig {
  std::vector<long> p{2};
  std::vector<int> blocks;
  std::vector<int> r;
  std::vector<i64> psi;
  std::vector<i64> psi_prime;
  std::optional<int> level;
  std::string format = "text";
  double budget = 1e8;
  int threads = 0;
  unsigned long long seed = 1;
  std::string route = "edge";
  std::string inverse = "cell";
  bool breakdown = false;
  bool timing = false;
  int max_dim = 4;
  int max_r = 3;
  int cases = 50;
  int m_max = 3;
};

struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

template <class T>
std::string join(const std::vector<T>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
  return out + "\"";
}

// KLOOSTERMAN_THREADS wins over --threads.
int thread_count(const RunConfig& cfg) {
  if (const char* env = std::getenv("KLOOSTERMAN_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  return cfg.threads;
}

EvalOptions eval_options(const RunConfig& cfg) {
  EvalOptions opt;
  if (!(cfg.budget >= 1) || cfg.budget > 1.8e19) throw ConfigError("budget must be a positive count");
  opt.budget = static_cast<u64>(cfg.budget);
  opt.threads = thread_count(cfg);
  if (cfg.route == "edge")
    opt.route = SumRoute::edge_formula;
  else if (cfg.route == "closed")
    opt.route = SumRoute::closed_form;
  else if (cfg.route == "factorization")
    opt.route = SumRoute::factorization;
  else
    throw ConfigError("unknown route " + cfg.route);
  if (cfg.inverse == "cell")
    opt.inverse = InverseConvention::cell_modulus;
  else if (cfg.inverse == "exact")
    opt.inverse = InverseConvention::exact;
  else
    throw ConfigError("unknown inverse convention " + cfg.inverse);
  return opt;
}

void check_primes(const RunConfig& cfg) {
  if (cfg.p.empty()) throw ConfigError("at least one prime is required");
  for (long p : cfg.p)
    if (!is_prime(p)) throw ConfigError(std::to_string(p) + " is not prime");
}

ordered_json value_json(const CyclotomicValue& v) {
  const CyclotomicValue red = v.reduced();
  ordered_json coeffs = ordered_json::array();
  for (const auto& [t, n] : red.coefficients())
    if (n != 0) coeffs.push_back({t, n});
  return coeffs;
}

// Integer when the canonical form has only a constant term.
std::string value_text(const CyclotomicValue& v) {
  const CyclotomicValue red = v.reduced();
  bool integral = true;
  i64 constant = 0;
  for (const auto& [t, n] : red.coefficients()) {
    if (n == 0) continue;
    if (t == 0)
      constant = n;
    else
      integral = false;
  }
  if (integral) return std::to_string(constant);
  std::ostringstream os;
  os.precision(12);
  const auto z = v.complex_value();
  os << z.real() << (z.imag() < 0 ? " - " : " + ") << std::abs(z.imag()) << "i";
  return os.str();
}

int cmd_sum(const RunConfig& cfg) {
  if (cfg.p.size() != 1) throw ConfigError("sum takes a single prime");
  check_primes(cfg);
  const long p = cfg.p.front();
  if (cfg.blocks.empty()) throw ConfigError("--blocks is required");
  const WeylElement w = make_admissible(cfg.blocks);
  if (w.block_count() < 2) throw ConfigError("a Kloosterman sum needs at least two blocks");
  const std::size_t N = static_cast<std::size_t>(w.rank());
  if (cfg.r.size() != N) throw ConfigError("--r needs " + std::to_string(N) + " entries");
  CharacterPair chars{cfg.psi.empty() ? std::vector<i64>(N, 1) : cfg.psi,
                      cfg.psi_prime.empty() ? std::vector<i64>(N, 1) : cfg.psi_prime};
  if (chars.psi.size() != N || chars.psi_prime.size() != N)
    throw ConfigError("--psi and --psi-prime need " + std::to_string(N) + " entries");
  if (cfg.level && *cfg.level < 0) throw ConfigError("--level must be nonnegative");
  const EvalOptions opt = eval_options(cfg);
  const Modulus mod{p, cfg.r};

  const auto t0 = std::chrono::steady_clock::now();
  const SumResult s = cfg.level ? evaluate_sum_gamma0(w, mod, chars, *cfg.level, opt) : evaluate_sum(w, mod, chars, opt);
  const double elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  const mpz_class triv = trivial_bound(w, cfg.r, p);
  const auto z = s.value.complex_value();

  if (cfg.format == "json") {
    ordered_json j;
    j["schema"] = 1;
    j["command"] = "sum";
    j["p"] = p;
    j["blocks"] = cfg.blocks;
    j["r"] = cfg.r;
    j["psi"] = chars.psi;
    j["psi_prime"] = chars.psi_prime;
    if (cfg.level) j["level"] = *cfg.level;
    j["modulus"] = s.value.modulus();
    j["value_coefficients"] = value_json(s.value);
    j["value_real"] = z.real();
    j["value_imag"] = z.imag();
    j["magnitude"] = s.magnitude.value;
    j["magnitude_error"] = s.magnitude.error;
    j["cell_count"] = s.cell_count;
    j["trivial_bound"] = triv.get_str();
    if (cfg.breakdown) {
      ordered_json parts = ordered_json::array();
      for (const auto& a : s.breakdown) {
        ordered_json m = ordered_json::object();
        for (const auto& [v, x] : a.assignment.m) m[v.str()] = x;
        parts.push_back({{"m", m},
                         {"modulus", a.value.modulus()},
                         {"value_coefficients", value_json(a.value)},
                         {"magnitude", a.value.magnitude().value},
                         {"cell_count", a.cell_count}});
      }
      j["assignments"] = parts;
    }
    if (cfg.timing) j["elapsed_ms"] = elapsed_ms;
    std::cout << j.dump(2) << "\n";
  } else if (cfg.format == "csv") {
    std::cout << "p,blocks,r,assignment,value_real,value_imag,magnitude,magnitude_error,cell_count";
    if (cfg.timing) std::cout << ",elapsed_ms";
    std::cout << "\n";
    auto row = [&](const std::string& label, const CyclotomicValue& v, u64 count) {
      const auto zz = v.complex_value();
      const Magnitude mg = v.magnitude();
      std::ostringstream os;
      os.precision(17);
      os << p << "," << csv_field(join(cfg.blocks)) << "," << csv_field(join(cfg.r)) << "," << csv_field(label) << ","
         << zz.real() << "," << zz.imag() << "," << mg.value << "," << mg.error << "," << count;
      if (cfg.timing) os << "," << elapsed_ms;
      std::cout << os.str() << "\n";
    };
    for (const auto& a : s.breakdown) row(a.assignment.str(), a.value, a.cell_count);
    row("total", s.value, s.cell_count);
  } else {
    std::cout << "Kl_" << p << " blocks=" << join(cfg.blocks) << " r=" << join(cfg.r) << " psi=" << join(chars.psi)
              << " psi'=" << join(chars.psi_prime);
    if (cfg.level) std::cout << " level=" << *cfg.level;
    std::cout << "\n";
    std::cout << "  value      " << value_text(s.value) << "\n";
    std::cout << "  magnitude  " << s.magnitude.value << " (error " << s.magnitude.error << ")\n";
    std::cout << "  cells      " << s.cell_count << " (trivial bound " << triv.get_str() << ")\n";
    if (cfg.breakdown)
      for (const auto& a : s.breakdown)
        std::cout << "  m " << a.assignment.str() << ": " << value_text(a.value) << " over " << a.cell_count << " cells\n";
    if (cfg.timing) std::cout << "  elapsed    " << elapsed_ms << " ms\n";
  }
  return kExitOk;
}

SuiteConfig suite_config(const RunConfig& cfg) {
  check_primes(cfg);
  if (cfg.max_dim < 2 || cfg.max_r < 0 || cfg.cases < 1 || cfg.m_max < 0) throw ConfigError("scale flags out of range");
  SuiteConfig s;
  s.primes = cfg.p;
  s.max_dim = cfg.max_dim;
  s.max_r = cfg.max_r;
  s.cases = cfg.cases;
  s.m_max = cfg.m_max;
  s.seed = cfg.seed;
  s.blocks = cfg.blocks;
  s.r = cfg.r;
  s.level = cfg.level.value_or(1);
  s.eval = eval_options(cfg);
  if (!s.blocks.empty()) make_admissible(s.blocks);
  return s;
}

void emit_bounds_csv(const std::vector<BoundReport>& rows) {
  std::cout << "p,blocks,r,psi,psi_prime,abs_kl,abs_kl_error,trivial,weil,C,length_bound,rank_length_bound,ratio_trivial,ratio_length,ratio_rank_length\n";
  for (const auto& b : rows) {
    std::ostringstream os;
    os.precision(17);
    os << b.p << "," << csv_field(join(b.blocks)) << "," << csv_field(join(b.r)) << "," << csv_field(join(b.chars.psi)) << ","
       << csv_field(join(b.chars.psi_prime)) << "," << b.observed << "," << b.observed_error << "," << b.trivial.get_str() << ",";
    if (b.weil) os << *b.weil;
    os << "," << b.C << "," << b.length_bound << "," << b.rank_length_bound << "," << b.ratio_trivial << "," << b.ratio_length << "," << b.ratio_rank_length;
    std::cout << os.str() << "\n";
  }
}

ordered_json bounds_json(const std::vector<BoundReport>& rows) {
  ordered_json out = ordered_json::array();
  for (const auto& b : rows) {
    ordered_json j;
    j["p"] = b.p;
    j["blocks"] = b.blocks;
    j["r"] = b.r;
    j["psi"] = b.chars.psi;
    j["psi_prime"] = b.chars.psi_prime;
    j["abs_kl"] = b.observed;
    j["abs_kl_error"] = b.observed_error;
    j["trivial"] = b.trivial.get_str();
    j["weil"] = b.weil ? ordered_json(*b.weil) : ordered_json(nullptr);
    j["C"] = b.C;
    j["length_bound"] = b.length_bound;
    j["rank_length_bound"] = b.rank_length_bound;
    j["ratio_trivial"] = b.ratio_trivial;
    j["ratio_length"] = b.ratio_length;
    j["ratio_rank_length"] = b.ratio_rank_length;
    out.push_back(j);
  }
  return out;
}

int cmd_verify(const std::string& suite, const RunConfig& cfg) {
  const SuiteConfig sc = suite_config(cfg);
  SuiteReport rep{suite, {}, 0, 0, 0.0};
  std::vector<BoundReport> table;
  if (suite == "bruhat") {
    SuiteConfig two = sc, three = sc;
    if (!sc.blocks.empty()) (sc.blocks.size() == 2 ? three : two).blocks.clear();
    if (sc.blocks.empty() || sc.blocks.size() == 2) rep.merge(verify_path_formulas(two));
    if (sc.blocks.empty() || sc.blocks.size() >= 3) rep.merge(verify_recursion(three));
  } else if (suite == "counts") {
    rep.merge(verify_counts(sc, 3));
  } else if (suite == "oracle") {
    rep.merge(verify_oracle(sc));
  } else if (suite == "identities") {
    SuiteConfig all = sc;
    all.blocks.clear();
    all.r.clear();
    rep.merge(verify_gl2_recovery(all));
    rep.merge(verify_hyper_kloosterman(all));
    rep.merge(verify_scaling(all));
    rep.merge(verify_gamma0(all));
    rep.merge(verify_inversion(all));
  } else if (suite == "bounds") {
    BoundsTable t = bounds_table(sc);
    rep.merge(t.report);
    table = std::move(t.rows);
  } else {
    throw ConfigError("unknown suite " + suite);
  }

  if (cfg.format == "json") {
    ordered_json j;
    j["schema"] = 1;
    j["command"] = "verify";
    j["suite"] = suite;
    j["passed"] = rep.passed();
    j["failures"] = rep.failures();
    j["trivial_checked"] = rep.trivial_checked;
    j["trivial_violations"] = rep.trivial_violations;
    ordered_json cases = ordered_json::array();
    for (const auto& c : rep.cases) cases.push_back({{"label", c.label}, {"ok", c.ok}, {"detail", c.detail}});
    j["cases"] = cases;
    if (suite == "bounds") j["table"] = bounds_json(table);
    if (cfg.timing) j["elapsed_ms"] = rep.seconds * 1000;
    std::cout << j.dump(2) << "\n";
  } else if (cfg.format == "csv") {
    if (suite == "bounds") {
      emit_bounds_csv(table);
    } else {
      std::cout << "suite,label,ok,detail\n";
      for (const auto& c : rep.cases)
        std::cout << suite << "," << csv_field(c.label) << "," << (c.ok ? 1 : 0) << "," << csv_field(c.detail) << "\n";
    }
  } else {
    for (const auto& c : rep.cases) std::cout << (c.ok ? "ok   " : "FAIL ") << c.label << (c.detail.empty() ? "" : "  " + c.detail) << "\n";
    if (rep.trivial_checked)
      std::cout << "trivial bound: " << rep.trivial_checked - rep.trivial_violations << "/" << rep.trivial_checked << "\n";
    std::cout << suite << ": " << rep.cases.size() - rep.failures() << "/" << rep.cases.size() << " cases passed\n";
    if (cfg.timing) std::cout << "elapsed " << rep.seconds * 1000 << " ms\n";
  }
  return rep.passed() ? kExitOk : kExitVerify;
}

int cmd_diagram(const RunConfig& cfg) {
  if (cfg.blocks.empty()) throw ConfigError("--blocks is required");
  std::cout << to_dot(build_diagram(make_admissible(cfg.blocks)));
  return kExitOk;
}

void add_character_options(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("--psi", cfg.psi, "psi_1..psi_N as integers")->delimiter(',');
  sub->add_option("--psi-prime", cfg.psi_prime, "psi'_1..psi'_N as integers")->delimiter(',');
}

void add_eval_options(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("--format", cfg.format, "json, csv or text")->check(CLI::IsMember({"json", "csv", "text"}));
  sub->add_option("--budget", cfg.budget, "cap on enumerated representatives");
  sub->add_option("--threads", cfg.threads, "worker threads, 0 for automatic");
  sub->add_option("--route", cfg.route, "edge, closed or factorization")->check(CLI::IsMember({"edge", "closed", "factorization"}));
  sub->add_option("--inverse", cfg.inverse, "cell or exact")->check(CLI::IsMember({"cell", "exact"}));
  sub->add_flag("--timing", cfg.timing, "include elapsed time in the output");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Local generalized Kloosterman sums on GL(N+1)"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto* sum = app.add_subcommand("sum", "evaluate Kl_p(m, psi, psi', w)");
  sum->add_option("--p", cfg.p, "prime")->required()->expected(1);
  sum->add_option("--blocks", cfg.blocks, "block sizes k_1,...,k_n")->required()->delimiter(',');
  sum->add_option("--r", cfg.r, "exponent vector r_1,...,r_N")->required()->delimiter(',');
  add_character_options(sum, cfg);
  sum->add_option("--level", cfg.level, "restrict to Gamma_0(p^l)");
  sum->add_flag("--breakdown", cfg.breakdown, "include one record per moduli assignment");
  add_eval_options(sum, cfg);

  std::string suite;
  auto* verify = app.add_subcommand("verify", "run a property suite");
  verify->add_option("suite", suite, "bruhat, counts, oracle, identities or bounds")
      ->required()
      ->check(CLI::IsMember({"bruhat", "counts", "oracle", "identities", "bounds"}));
  verify->add_option("--p", cfg.p, "primes")->delimiter(',');
  verify->add_option("--blocks", cfg.blocks, "single composition to check")->delimiter(',');
  verify->add_option("--r", cfg.r, "single exponent vector to check")->delimiter(',');
  verify->add_option("--max-dim", cfg.max_dim, "largest N+1");
  verify->add_option("--max-r", cfg.max_r, "bound on the sum of r");
  verify->add_option("--cases", cfg.cases, "random cells per composition and prime");
  verify->add_option("--m-max", cfg.m_max, "bound on sampled m_{i,j}");
  verify->add_option("--seed", cfg.seed, "seed for sampled cells");
  verify->add_option("--level", cfg.level, "Gamma_0 level exponent");
  add_eval_options(verify, cfg);

  auto* diagram = app.add_subcommand("diagram", "emit the modified diagram as DOT");
  diagram->add_option("--blocks", cfg.blocks, "block sizes")->required()->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*sum) return cmd_sum(cfg);
    if (*verify) return cmd_verify(suite, cfg);
    return cmd_diagram(cfg);
  } catch (const BudgetExceeded& e) {
    std::cerr << "budget exceeded: " << e.what() << "\n";
    return kExitBudget;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid configuration: " << e.what() << "\n";
    return kExitConfig;
  } catch (const ArithmeticError& e) {
    std::cerr << "arithmetic range exceeded: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
}
