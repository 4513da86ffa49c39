#pragma once

// Desk-scale studies: pseudomoment scans, Euler-product constants, partial-sum
// probes, maximal orders of C(n,p), Omega-class concentration, homogeneous
// energy, average orders of Phi_alpha and the inequality fuzz harness.

#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "hardyp/arith.hpp"
#include "hardyp/dseries.hpp"
#include "hardyp/io.hpp"
#include "hardyp/norms.hpp"

namespace hardyp {

struct ExperimentRecord {
  std::string experiment;
  /// Named inputs in a fixed order (N, k, alpha, p, method, samples, seed, ...).
  Json params = Json::object();
  double value = 0.0;
  double normalizer = 1.0;
  double ratio = 0.0;
  double std_error = 0.0;
  /// Everything else worth keeping: constants, histograms, checks, notes.
  Json extra = Json::object();

  void set_ratio() { ratio = value / normalizer; }
};

Json to_json(const ExperimentRecord& r);
ExperimentRecord record_from_json(const Json& j);

inline const std::vector<std::string> kCsvColumns = {"experiment", "N",     "k",          "alpha",
                                                     "p",          "method", "samples",    "seed",
                                                     "value",      "normalizer", "ratio", "std_error"};
std::string csv_header();
std::string csv_row(const ExperimentRecord& r);

enum class PseudomomentMethod { ExactEven, MonteCarlo };
PseudomomentMethod parse_pseudomoment_method(const std::string& s);
std::string to_string(PseudomomentMethod m);

/// Psi_{k,alpha}(N) = ||Z_{N,alpha}||_{2k}^{2k} against (log N)^{k^2 alpha^2}.
ExperimentRecord pseudomoment(std::uint64_t N, double k, double alpha, PseudomomentMethod method,
                              const std::optional<MonteCarloOptions>& mc, const PrimeTable& table);

struct ScanResult {
  std::vector<ExperimentRecord> records;
  /// Least-squares slope and intercept of log value against log log N.
  double slope = 0.0;
  double intercept = 0.0;
};

/// Grid points run on up to `threads` workers; records keep grid order.
ScanResult pseudomoment_scan(double k, double alpha, const std::vector<std::uint64_t>& grid,
                             PseudomomentMethod method, const std::optional<MonteCarloOptions>& mc,
                             const PrimeTable& table, unsigned threads = 1);

/// Geometric grid from..to with `count` points, rounded to integers.
std::vector<std::uint64_t> geometric_grid(double from, double to, std::size_t count);

/// Psi_k(N) / (log N)^{k^2} next to the asymptotic constants; the window flag is
/// only an order-of-magnitude check.
ExperimentRecord moment_window_check(double k, std::uint64_t N, const std::optional<MonteCarloOptions>& mc,
                                        const PrimeTable& table, std::uint64_t prime_limit = 1000000);

/// Extremal product f_M with M = p_1...p_k, its coefficient a_M and the
/// p-th power norms of S_{M-1} f_M and S_M f_M.
ExperimentRecord partial_sum_witness(double p, unsigned k, const MonteCarloOptions& mc, const PrimeTable& table);

/// ||S_N f||_p / ||f||_p (exact at p = 2).
ExperimentRecord snorm_ratio_probe(const DirichletPolynomial& f, std::uint64_t N, double p,
                                   const MonteCarloOptions& mc, const PrimeTable& table);

/// max over 3 <= n <= X of log C(n,p) / (log n / log log n).
ExperimentRecord maximal_order_scan(std::uint64_t X, double p, const PrimeTable& table);

/// N(x,m) histogram and the mass outside the window
/// log log x +- C sqrt(log log x log log log x).
ExperimentRecord omega_concentration(std::uint64_t x, double C, const PrimeTable& table);

/// ||P_m D_{N,alpha}||_p for every m, next to the projection bound.
std::vector<ExperimentRecord> homogeneous_energy(std::uint64_t N, double alpha, double p,
                                                 const MonteCarloOptions& mc, const PrimeTable& table);

/// (x^{-1} sum_{n<=x} Phi_alpha(n)) / ((G_alpha(1) / Gamma(alpha)) (log x)^{alpha-1}) for each x.
std::vector<ExperimentRecord> average_order_ratio(const std::vector<std::uint64_t>& xs, double alpha,
                                                  const PrimeTable& table);

/// Constants of the Euler-product family `kind` ("moment", "g-alpha" or
/// "arithmetic") at parameter `param`.
ExperimentRecord euler_constant(const std::string& kind, double param, std::uint64_t prime_limit,
                                const PrimeTable& table);

// ---------------------------------------------------------------------------
// Inequality fuzzing

struct FuzzConfig {
  std::uint64_t seed = 20260101;
  std::size_t corpus = 500;
  std::vector<double> ps = {0.5, 1.0, 4.0 / 3.0, 3.0, 5.0};
  std::set<std::string> checks;  // empty means every registered check
  std::size_t max_support = 64;
  std::uint64_t max_index = 1000;
  std::size_t max_disc_degree = 8;
  std::uint64_t samples = 20000;
  std::uint64_t disc_nodes = 4096;
  unsigned threads = 1;
  /// Harness self-test: every claim lhs <= rhs is replaced by rhs <= lhs.
  bool inverted = false;
};

std::vector<std::string> registered_checks();

struct FuzzCase {
  std::size_t index = 0;
  std::uint64_t seed = 0;
  std::string check;
  double p = 0.0;
  InequalityCheck result;
  /// Polynomial reproducer, filled for violations only.
  Json reproducer;
};

struct FuzzSummary {
  std::size_t pass = 0;
  std::size_t pass_within_slack = 0;
  std::size_t violation = 0;
  std::vector<FuzzCase> cases;
};

/// Throws InvalidArgument on an unknown check name.
FuzzSummary hl_fuzz_suite(const FuzzConfig& config, const PrimeTable& table);

Json to_json(const FuzzCase& c);
Json summary_json(const FuzzSummary& s);

}  // namespace hardyp
