#include "hardyp/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <unistd.h>

#include "hardyp/bounds.hpp"
#include "hardyp/config.hpp"
#include "hardyp/errors.hpp"
#include "hardyp/parallel.hpp"
#include "hardyp/rng.hpp"

namespace hardyp::cli {

namespace {

struct OptionDef {
  std::string name;
  std::string default_value;  // empty: no default
  std::string help;
  bool required = false;
  bool flag = false;
};

struct SubcommandDef {
  std::string name;
  std::string help;
  std::vector<OptionDef> options;
};

const std::vector<OptionDef>& common_options() {
  static const std::vector<OptionDef> defs = {
      {"output", "-", "output path, - for stdout"},
      {"format", "jsonl", "json, jsonl or csv"},
      {"seed", "", "64-bit seed (drawn from entropy and echoed if omitted)"},
      {"threads", "1", "worker threads"},
      {"timing", "", "record wall time in the output", false, true},
  };
  return defs;
}

const std::vector<SubcommandDef>& subcommands() {
  static const std::vector<SubcommandDef> defs = {
      {"norm",
       "H^p norm of a generated or loaded Dirichlet polynomial",
       {{"gen", "", "generator, e.g. zeta:N=100 or extremal:p=0.5,k=2,N=30"},
        {"input", "", "polynomial JSON file"},
        {"p", "", "exponent p > 0", true},
        {"method", "auto", "auto, exact or mc"},
        {"samples", "100000", "Monte Carlo samples"},
        {"save", "", "write the polynomial as JSON to this path"}}},
      {"pseudomoment",
       "Psi_{k,alpha}(N) = ||Z_{N,alpha}||_{2k}^{2k}",
       {{"N", "", "length", true},
        {"k", "", "moment parameter k > 0", true},
        {"alpha", "1", "power of zeta, >= 1"},
        {"method", "exact", "exact or mc"},
        {"samples", "100000", "Monte Carlo samples"}}},
      {"scan",
       "grid studies: pseudomoment growth, average order of Phi_alpha, homogeneous energy",
       {{"experiment", "pseudomoment", "pseudomoment, average-order or energy"},
        {"k", "1", "moment parameter"},
        {"alpha", "1", "power of zeta, >= 1"},
        {"grid", "", "comma-separated N values"},
        {"from", "", "geometric grid start"},
        {"to", "", "geometric grid end"},
        {"count", "5", "geometric grid size"},
        {"method", "exact", "exact or mc"},
        {"samples", "100000", "Monte Carlo samples"},
        {"N", "100", "length for the energy experiment"},
        {"p", "1", "exponent for the energy experiment"}}},
      {"hl-check",
       "Hardy-Littlewood sums against Monte Carlo norms on a random corpus",
       {{"p", "", "exponent p > 0", true},
        {"corpus", "500", "number of random polynomials"},
        {"support", "64", "maximal support size"},
        {"max-index", "1000", "largest index"},
        {"samples", "20000", "Monte Carlo samples per polynomial"}}},
      {"partial-sum",
       "extremal witness for S_M (default) or ||S_N f|| / ||f|| with --gen",
       {{"p", "", "exponent p > 0", true},
        {"k", "1", "number of primes in the primorial"},
        {"gen", "", "generator for the ratio probe"},
        {"N", "", "partial-sum length for the ratio probe"},
        {"samples", "100000", "Monte Carlo samples"}}},
      {"cnp-scan",
       "maximal order of log C(n,p) / (log n / log log n)",
       {{"X", "", "scan bound, >= 16", true}, {"p", "", "exponent in (0,1)", true}}},
      {"omega-hist",
       "counts of n <= x by Omega(n) and the concentration window",
       {{"x", "", "bound, >= 16", true}, {"C", "2", "window constant"}}},
      {"euler-const",
       "Euler-product constants with tail bounds",
       {{"kind", "moment", "moment, g-alpha or arithmetic"},
        {"param", "", "k or alpha", true},
        {"prime-limit", "1000000", "largest prime in the product"}}},
      {"fuzz",
       "randomized checks of the Hardy-Littlewood, Helson, Burbea and disc inequalities",
       {{"corpus", "500", "number of random cases"},
        {"p", "0.5,1,1.3333333333333333,3,5", "comma-separated exponents"},
        {"checks", "", "comma-separated subset of the registered checks"},
        {"support", "64", "maximal support size"},
        {"max-index", "1000", "largest index"},
        {"degree", "8", "maximal disc polynomial degree"},
        {"samples", "20000", "Monte Carlo samples per case"},
        {"nodes", "4096", "quadrature nodes"},
        {"inverted", "", "self-test: invert every inequality", false, true}}},
  };
  return defs;
}

const SubcommandDef& find_def(const std::string& name) {
  for (const auto& d : subcommands()) {
    if (d.name == name) return d;
  }
  throw UsageError("unknown subcommand '" + name + "'");
}

std::vector<OptionDef> all_options(const SubcommandDef& d) {
  std::vector<OptionDef> out = d.options;
  out.insert(out.end(), common_options().begin(), common_options().end());
  return out;
}

// --- typed access -----------------------------------------------------------

const std::string& text(const Command& c, const std::string& name) {
  static const std::string empty;
  const auto it = c.values.find(name);
  return it == c.values.end() ? empty : it->second;
}

bool has(const Command& c, const std::string& name) { return !text(c, name).empty(); }

double num(const Command& c, const std::string& name) {
  const std::string& s = text(c, name);
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (s.empty() || used != s.size() || !std::isfinite(v)) throw UsageError("--" + name + ": expected a number, got '" + s + "'");
  return v;
}

std::uint64_t count(const Command& c, const std::string& name) {
  const double v = num(c, name);
  if (v < 0.0 || std::floor(v) != v || v > 1.8e19) throw UsageError("--" + name + ": expected a nonnegative integer");
  if (v < 9.0e15) return static_cast<std::uint64_t>(v);
  return std::stoull(text(c, name));
}

std::vector<double> num_list(const Command& c, const std::string& name) {
  std::vector<double> out;
  std::stringstream ss(text(c, name));
  std::string item;
  while (std::getline(ss, item, ',')) {
    Command tmp;
    tmp.values[name] = item;
    out.push_back(num(tmp, name));
  }
  return out;
}

std::vector<std::string> word_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

void require(bool ok, const std::string& msg) {
  if (!ok) throw UsageError(msg);
}

double positive(const Command& c, const std::string& name) {
  const double v = num(c, name);
  require(v > 0.0, "--" + name + " must be > 0");
  return v;
}

void validate(const Command& c) {
  const std::string& s = c.subcommand;
  require(c.threads >= 1, "--threads must be >= 1");
  if (c.values.count("p") && has(c, "p") && s != "fuzz") positive(c, "p");
  if (c.values.count("samples")) require(count(c, "samples") >= 2, "--samples must be >= 2");
  if (c.values.count("alpha")) require(num(c, "alpha") >= 1.0, "--alpha must be >= 1");
  if (s == "norm") {
    require(has(c, "gen") != has(c, "input"), "norm needs exactly one of --gen and --input");
    const auto& m = text(c, "method");
    require(m == "auto" || m == "exact" || m == "mc", "--method must be auto, exact or mc");
  } else if (s == "pseudomoment") {
    require(count(c, "N") >= 1, "--N must be >= 1");
    positive(c, "k");
    parse_pseudomoment_method(text(c, "method"));
  } else if (s == "scan") {
    const auto& e = text(c, "experiment");
    require(e == "pseudomoment" || e == "average-order" || e == "energy",
            "--experiment must be pseudomoment, average-order or energy");
    require(has(c, "grid") || (has(c, "from") && has(c, "to")) || e == "energy", "scan needs --grid or --from/--to");
    positive(c, "k");
    parse_pseudomoment_method(text(c, "method"));
  } else if (s == "hl-check") {
    require(count(c, "support") >= 1, "--support must be >= 1");
    require(count(c, "max-index") >= count(c, "support"), "--max-index must be >= --support");
  } else if (s == "partial-sum") {
    if (has(c, "gen")) {
      require(has(c, "N"), "partial-sum with --gen needs --N");
      require(count(c, "N") >= 1, "--N must be >= 1");
    } else {
      const double p = num(c, "p");
      require(p < 1.0, "the partial-sum witness needs 0 < p < 1");
      require(count(c, "k") >= 1, "--k must be >= 1");
    }
  } else if (s == "cnp-scan") {
    require(count(c, "X") >= 16, "--X must be >= 16");
    require(num(c, "p") < 1.0, "--p must lie in (0,1)");
  } else if (s == "omega-hist") {
    require(count(c, "x") >= 16, "--x must be >= 16");
    positive(c, "C");
  } else if (s == "euler-const") {
    require(count(c, "prime-limit") >= 2, "--prime-limit must be >= 2");
  } else if (s == "fuzz") {
    for (const double p : num_list(c, "p")) require(p > 0.0, "--p values must be > 0");
    const auto names = registered_checks();
    for (const auto& w : word_list(text(c, "checks"))) {
      require(std::find(names.begin(), names.end(), w) != names.end(), "--checks: unknown check '" + w + "'");
    }
  }
}

std::uint64_t entropy_seed() {
  std::random_device rd;
  return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

// --- execution helpers ---------------------------------------------------------

MonteCarloOptions mc_options(const Command& c) { return MonteCarloOptions{count(c, "samples"), c.seed, c.threads}; }

std::uint64_t spec_length(const GeneratorSpec& spec) {
  return std::visit([](const auto& s) { return static_cast<std::uint64_t>(s.N); }, spec);
}

std::uint64_t table_limit_for(const GeneratorSpec& spec) {
  std::uint64_t limit = std::max<std::uint64_t>(spec_length(spec), 1000);
  if (const auto* e = std::get_if<ExtremalProduct>(&spec)) limit = std::max<std::uint64_t>(limit, 20ULL * e->prime_count + 100);
  return limit;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidArgument("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

DirichletPolynomial load_polynomial(const std::string& path) {
  try {
    return polynomial_from_json(Json::parse(read_file(path)));
  } catch (const Json::exception& ex) {
    throw InvalidArgument("'" + path + "' is not valid polynomial JSON: " + ex.what());
  }
}

ExperimentRecord norm_record(const Command& c, const DirichletPolynomial& f, const NormEstimate& e, const Json& source) {
  ExperimentRecord r;
  r.experiment = "norm";
  r.params = Json{{"N", f.length()}, {"p", e.p}, {"method", to_string(e.method)}};
  if (e.method == NormMethod::MonteCarlo) {
    r.params["samples"] = e.samples;
    r.params["seed"] = e.seed;
  }
  r.params["source"] = source;
  r.value = e.value;
  r.std_error = e.value_std_error();
  r.normalizer = l2_norm(f).value;
  r.ratio = r.normalizer > 0.0 ? r.value / r.normalizer : std::numeric_limits<double>::quiet_NaN();
  r.extra["estimate"] = to_json(e);
  r.extra["terms"] = f.size();
  (void)c;
  return r;
}

void exec_norm(const Command& c, Execution& ex) {
  DirichletPolynomial f;
  Json source;
  std::unique_ptr<PrimeTable> table;
  if (has(c, "gen")) {
    const auto spec = parse_generator(text(c, "gen"));
    table = std::make_unique<PrimeTable>(table_limit_for(spec));
    const auto g = generate_with_metadata(spec, *table);
    f = g.poly;
    source = format_generator(spec);
    if (g.truncated_l2_mass) {
      ex.warnings.push_back("truncation dropped l2 mass " + std::to_string(*g.truncated_l2_mass));
    }
  } else {
    f = load_polynomial(text(c, "input"));
    table = std::make_unique<PrimeTable>(std::max<std::uint64_t>(f.length(), 2));
    source = text(c, "input");
  }
  if (has(c, "save")) write_atomically(text(c, "save"), polynomial_to_json(f).dump() + "\n");

  const double p = num(c, "p");
  std::string method = text(c, "method");
  const double half = p / 2.0;
  const bool even = half >= 1.0 && std::floor(half) == half;
  if (method == "auto") method = even ? "exact" : "mc";
  NormEstimate e;
  if (method == "exact") {
    if (!even) throw UsageError("--method exact needs p = 2k for a positive integer k");
    e = p == 2.0 ? l2_norm(f) : even_norm_exact(f, static_cast<unsigned>(half));
  } else {
    e = mc_norm(f, p, mc_options(c), *table);
    ex.warnings.push_back("Monte Carlo estimate; comparisons use a 3 standard error slack");
  }
  ex.records.push_back(norm_record(c, f, e, source));
}

void exec_pseudomoment(const Command& c, Execution& ex) {
  const auto N = count(c, "N");
  const auto method = parse_pseudomoment_method(text(c, "method"));
  const PrimeTable table(std::max<std::uint64_t>(N, 2));
  std::optional<MonteCarloOptions> mc;
  if (method == PseudomomentMethod::MonteCarlo) mc = mc_options(c);
  ex.records.push_back(pseudomoment(N, num(c, "k"), num(c, "alpha"), method, mc, table));
}

std::vector<std::uint64_t> grid_of(const Command& c) {
  if (has(c, "grid")) {
    std::vector<std::uint64_t> out;
    for (const double v : num_list(c, "grid")) {
      require(v >= 1.0 && std::floor(v) == v, "--grid entries must be positive integers");
      out.push_back(static_cast<std::uint64_t>(v));
    }
    return out;
  }
  return geometric_grid(num(c, "from"), num(c, "to"), count(c, "count"));
}

void exec_scan(const Command& c, Execution& ex) {
  const std::string& experiment = text(c, "experiment");
  if (experiment == "energy") {
    const auto N = count(c, "N");
    const PrimeTable table(std::max<std::uint64_t>(N, 2));
    ex.records = homogeneous_energy(N, num(c, "alpha"), positive(c, "p"), mc_options(c), table);
    ex.warnings.push_back("exploratory: no asymptotic claim is tested at this scale");
    return;
  }
  const auto grid = grid_of(c);
  require(!grid.empty(), "scan grid is empty");
  const PrimeTable table(std::max<std::uint64_t>(*std::max_element(grid.begin(), grid.end()), 2));
  if (experiment == "average-order") {
    ex.records = average_order_ratio(grid, num(c, "alpha"), table);
    return;
  }
  const auto method = parse_pseudomoment_method(text(c, "method"));
  std::optional<MonteCarloOptions> mc;
  if (method == PseudomomentMethod::MonteCarlo) mc = mc_options(c);
  const auto scan = pseudomoment_scan(num(c, "k"), num(c, "alpha"), grid, method, mc, table, c.threads);
  ex.records = scan.records;
  ex.summary = Json{{"slope", scan.slope}, {"intercept", scan.intercept}, {"regressor", "log log N"}};
}

void exec_hl_check(const Command& c, Execution& ex) {
  const double p = num(c, "p");
  const auto corpus = count(c, "corpus");
  const auto support = count(c, "support");
  const auto max_index = count(c, "max-index");
  const auto samples = count(c, "samples");
  const PrimeTable table(std::max<std::uint64_t>(max_index, 2));
  ex.records.resize(corpus);
  parallel_for(corpus, c.threads, [&](std::size_t i) {
    const std::uint64_t seed = derive_seed(c.seed, i);
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::uint64_t> sd(1, support);
    const auto f = random_polynomial(rng, sd(rng), max_index);
    const auto norm = mc_norm(f, p, MonteCarloOptions{samples, seed, 1}, table);
    const auto rep = hl_report(f, p, norm, table);
    ExperimentRecord r;
    r.experiment = "hl-check";
    r.params = Json{{"N", f.length()}, {"p", p}, {"method", "MonteCarlo"}, {"samples", samples}, {"seed", seed}, {"case", i}};
    r.value = norm.value;
    r.std_error = norm.value_std_error();
    r.normalizer = l2_norm(f).value;
    r.set_ratio();
    r.extra["report"] = to_json(rep);
    if (rep.verdict == Verdict::ViolationSuspected) r.extra["reproducer"] = polynomial_to_json(f);
    ex.records[i] = std::move(r);
  });
  std::size_t violations = 0;
  for (const auto& r : ex.records) {
    if (r.extra["report"]["verdict"] == "ViolationSuspected") ++violations;
  }
  ex.summary = Json{{"cases", corpus}, {"violations", violations}};
  ex.warnings.push_back("verdicts allow 3 standard errors of Monte Carlo slack");
  if (violations > 0) ex.exit_code = kViolation;
}

void exec_partial_sum(const Command& c, Execution& ex) {
  const double p = num(c, "p");
  if (has(c, "gen")) {
    const auto spec = parse_generator(text(c, "gen"));
    const PrimeTable table(table_limit_for(spec));
    const auto f = generate(spec, table);
    auto r = snorm_ratio_probe(f, count(c, "N"), p, mc_options(c), table);
    r.params["source"] = format_generator(spec);
    ex.records.push_back(std::move(r));
    return;
  }
  const auto k = count(c, "k");
  require(k <= 15, "--k above 15 makes the primorial overflow 64 bits");
  std::uint64_t M = 1;
  {
    const PrimeTable small(100);
    for (std::uint32_t j = 1; j <= k; ++j) M *= small.nth_prime(j);
  }
  const PrimeTable table(std::max<std::uint64_t>(M, 100));
  ex.records.push_back(partial_sum_witness(p, static_cast<unsigned>(k), mc_options(c), table));
  ex.warnings.push_back("Monte Carlo estimate; comparisons use a 3 standard error slack");
}

void exec_cnp_scan(const Command& c, Execution& ex) {
  const auto X = count(c, "X");
  const PrimeTable table(X);
  ex.records.push_back(maximal_order_scan(X, num(c, "p"), table));
}

void exec_omega(const Command& c, Execution& ex) {
  const auto x = count(c, "x");
  const PrimeTable table(x);
  ex.records.push_back(omega_concentration(x, num(c, "C"), table));
  ex.warnings.push_back("exploratory: the concentration bound is asymptotic; nothing is passed or failed");
}

void exec_euler(const Command& c, Execution& ex) {
  const auto L = count(c, "prime-limit");
  const PrimeTable table(L);
  auto r = euler_constant(text(c, "kind"), num(c, "param"), L, table);
  for (const char* key : {"upper", "lower", "product"}) {
    if (r.extra.contains(key)) {
      ex.warnings.push_back(std::string(key) + ": |log(true/computed)| <= " +
                            r.extra[key]["tail_bound"].dump() + " from primes above " + std::to_string(L));
    }
  }
  ex.records.push_back(std::move(r));
}

void exec_fuzz(const Command& c, Execution& ex) {
  FuzzConfig cfg;
  cfg.seed = c.seed;
  cfg.corpus = count(c, "corpus");
  cfg.ps = num_list(c, "p");
  for (const auto& w : word_list(text(c, "checks"))) cfg.checks.insert(w);
  cfg.max_support = count(c, "support");
  cfg.max_index = count(c, "max-index");
  cfg.max_disc_degree = count(c, "degree");
  cfg.samples = count(c, "samples");
  cfg.disc_nodes = count(c, "nodes");
  cfg.threads = c.threads;
  cfg.inverted = c.flags.count("inverted") > 0;
  const PrimeTable table(std::max<std::uint64_t>(cfg.max_index, 2));
  const auto s = hl_fuzz_suite(cfg, table);
  for (const auto& fc : s.cases) {
    ExperimentRecord r;
    r.experiment = "fuzz:" + fc.check;
    r.params = Json{{"p", fc.p > 0.0 ? Json(fc.p) : Json(nullptr)}, {"seed", fc.seed}, {"case", fc.index}};
    r.value = fc.result.lhs;
    r.normalizer = fc.result.rhs;
    r.set_ratio();
    r.std_error = fc.result.sigma;
    r.extra["status"] = to_string(fc.result.status);
    r.extra["margin_sigmas"] = number_or_null(fc.result.margin_sigmas);
    if (!fc.reproducer.is_null()) r.extra["reproducer"] = fc.reproducer;
    ex.records.push_back(std::move(r));
  }
  ex.summary = summary_json(s);
  ex.summary["inverted"] = cfg.inverted;
  if (s.violation > 0) ex.exit_code = kViolation;
}

Json header_json(const Execution& ex) {
  Json w = Json::array();
  for (const auto& s : ex.warnings) w.push_back(s);
  return Json{{"version", std::string(kVersion)}, {"command", ex.command_echo}, {"warnings", w}};
}

}  // namespace

// ---------------------------------------------------------------------------

std::vector<std::string> Command::resolved_argv() const {
  std::vector<std::string> out{subcommand};
  for (const auto& def : all_options(find_def(subcommand))) {
    if (def.flag) {
      if (flags.count(def.name)) out.push_back("--" + def.name);
      continue;
    }
    if (def.name == "seed") {
      out.insert(out.end(), {"--seed", std::to_string(seed)});
      continue;
    }
    const auto it = values.find(def.name);
    if (it == values.end() || it->second.empty()) continue;
    out.insert(out.end(), {"--" + def.name, it->second});
  }
  return out;
}

std::string usage() {
  std::ostringstream os;
  os << "hardyp " << kVersion << "\nusage: hardyp <subcommand> [options]\n\nsubcommands:\n";
  for (const auto& d : subcommands()) os << "  " << d.name << std::string(14 - std::min<std::size_t>(13, d.name.size()), ' ') << d.help << "\n";
  os << "\nrun 'hardyp <subcommand> --help' for options\n";
  return os.str();
}

Command parse(const std::vector<std::string>& args) {
  if (args.empty()) throw UsageError("missing subcommand\n" + usage());
  const SubcommandDef& def = find_def(args[0]);

  CLI::App app{def.help, "hardyp " + def.name};
  app.set_help_flag();
  std::map<std::string, std::string> values;
  std::map<std::string, bool> flag_values;
  for (const auto& o : all_options(def)) {
    if (o.flag) {
      flag_values[o.name] = false;
      app.add_flag("--" + o.name, flag_values[o.name], o.help);
    } else {
      values[o.name] = o.default_value;
      auto* opt = app.add_option("--" + o.name, values[o.name], o.help);
      if (o.required) opt->required();
    }
  }
  std::vector<std::string> rest(args.begin() + 1, args.end());
  std::reverse(rest.begin(), rest.end());
  try {
    app.parse(rest);
  } catch (const CLI::ParseError& e) {
    throw UsageError(std::string(e.what()) + "\n" + app.help());
  }

  Command c;
  c.subcommand = def.name;
  for (const auto& [k, v] : flag_values) {
    if (v) c.flags.insert(k);
  }
  c.output = values["output"];
  const std::string fmt = values["format"];
  if (fmt == "json") c.format = OutputFormat::Json;
  else if (fmt == "jsonl") c.format = OutputFormat::Jsonl;
  else if (fmt == "csv") c.format = OutputFormat::Csv;
  else throw UsageError("--format must be json, jsonl or csv");
  c.timing = c.flags.count("timing") > 0;
  c.values = values;
  c.values.erase("output");
  c.values.erase("format");
  c.values.erase("threads");
  c.values.erase("seed");
  {
    Command tmp;
    tmp.values = values;
    const auto th = count(tmp, "threads");
    require(th >= 1 && th <= 1024, "--threads must lie in [1, 1024]");
    c.threads = static_cast<unsigned>(th);
    c.seed = values["seed"].empty() ? entropy_seed() : count(tmp, "seed");
  }
  try {
    validate(c);
  } catch (const InvalidArgument& e) {
    throw UsageError(e.what());
  }
  return c;
}

Execution execute(const Command& c) {
  Execution ex;
  const auto argv = c.resolved_argv();
  ex.command_echo = Json{{"subcommand", c.subcommand}, {"argv", argv}, {"seed", c.seed}, {"threads", c.threads}};
  const auto start = std::chrono::steady_clock::now();
  const std::string& s = c.subcommand;
  if (s == "norm") exec_norm(c, ex);
  else if (s == "pseudomoment") exec_pseudomoment(c, ex);
  else if (s == "scan") exec_scan(c, ex);
  else if (s == "hl-check") exec_hl_check(c, ex);
  else if (s == "partial-sum") exec_partial_sum(c, ex);
  else if (s == "cnp-scan") exec_cnp_scan(c, ex);
  else if (s == "omega-hist") exec_omega(c, ex);
  else if (s == "euler-const") exec_euler(c, ex);
  else if (s == "fuzz") exec_fuzz(c, ex);
  else throw UsageError("unknown subcommand '" + s + "'");
  if (c.timing) {
    ex.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
  return ex;
}

std::string render(const Execution& ex, OutputFormat format) {
  std::string out;
  if (format == OutputFormat::Csv) {
    out = csv_header() + "\n";
    for (const auto& r : ex.records) out += csv_row(r) + "\n";
    return out;
  }
  if (format == OutputFormat::Jsonl) {
    Json head = header_json(ex);
    head = Json{{"type", "header"}, {"version", head["version"]}, {"command", head["command"]}, {"warnings", head["warnings"]}};
    out += head.dump() + "\n";
    for (const auto& r : ex.records) out += Json{{"type", "record"}, {"record", to_json(r)}}.dump() + "\n";
    if (!ex.summary.is_null()) out += Json{{"type", "summary"}, {"summary", ex.summary}}.dump() + "\n";
    if (ex.wall_time) out += Json{{"type", "footer"}, {"wall_time", *ex.wall_time}}.dump() + "\n";
    return out;
  }
  Json doc = header_json(ex);
  Json recs = Json::array();
  for (const auto& r : ex.records) recs.push_back(to_json(r));
  doc["records"] = recs;
  doc["summary"] = ex.summary;
  doc["wall_time"] = ex.wall_time ? Json(*ex.wall_time) : Json(nullptr);
  return doc.dump(2) + "\n";
}

void write_atomically(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw InvalidArgument("cannot write '" + tmp.string() + "'");
    out << content;
    out.flush();
    if (!out) throw InvalidArgument("write to '" + tmp.string() + "' failed");
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp);
    throw InvalidArgument("cannot rename onto '" + path + "': " + ec.message());
  }
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  if (!args.empty() && (args[0] == "--help" || args[0] == "-h" || args[0] == "help")) {
    out << usage();
    return kOk;
  }
  if (!args.empty() && args[0] == "--version") {
    out << "hardyp " << kVersion << "\n";
    return kOk;
  }
  if (args.size() >= 2 && (args[1] == "--help" || args[1] == "-h")) {
    try {
      find_def(args[0]);
    } catch (const UsageError& e) {
      err << e.what() << "\n";
      return kUsage;
    }
    try {
      parse({args[0], "--help"});
    } catch (const UsageError& e) {
      // The help text follows the first line of the parse message.
      const std::string msg = e.what();
      const auto nl = msg.find('\n');
      out << (nl == std::string::npos ? msg : msg.substr(nl + 1));
    }
    return kOk;
  }
  try {
    const Command cmd = parse(args);
    const Execution ex = execute(cmd);
    const std::string doc = render(ex, cmd.format);
    if (cmd.output == "-") {
      out << doc;
      out.flush();
    } else {
      write_atomically(cmd.output, doc);
    }
    return ex.exit_code;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const ResourceError& e) {
    err << "resource error: " << e.what() << " (memory cap " << memory_cap() << " bytes, set " << kMemoryCapEnv
        << " to change it)\n";
    return kResource;
  } catch (const TableTooSmall& e) {
    err << "resource error: " << e.what() << "\n";
    return kResource;
  } catch (const OverflowError& e) {
    err << "resource error: " << e.what() << "\n";
    return kResource;
  } catch (const Error& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsage;
  }
}

}  // namespace hardyp::cli
