#pragma once

// Weighted l2 (Hardy-Littlewood) sums, coefficient functionals C(k,p) and
// C(n,p), point-evaluation and pairing functionals, and the slack policy that
// turns Monte Carlo comparisons into verdicts.

#include <cstdint>
#include <optional>
#include <span>
#include <string>

#include "hardyp/arith.hpp"
#include "hardyp/dseries.hpp"
#include "hardyp/norms.hpp"

namespace hardyp {

inline constexpr double kSlackSigmas = 3.0;
/// Relative floating-point allowance added to every comparison.
inline constexpr double kFloatTolerance = 1e-12;

enum class Verdict { Consistent, ViolationSuspected };
enum class CheckStatus { Pass, PassWithinSlack, Violation };

std::string to_string(Verdict v);
std::string to_string(CheckStatus s);

/// The claim lhs <= rhs, where sigma is the combined standard error of the two.
struct InequalityCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  double sigma = 0.0;
  CheckStatus status = CheckStatus::Pass;
  /// (rhs - lhs) / sigma, or +-inf when sigma is 0.
  double margin_sigmas = 0.0;
};

InequalityCheck check_inequality(double lhs, double rhs, double sigma, double abs_tolerance = 0.0);

// ---------------------------------------------------------------------------
// Hardy-Littlewood sums on Dirichlet polynomials

/// sum |a_n|^2 Phi_{p/2}(n), p >= 2.
double hl_upper_sum(const DirichletPolynomial& f, double p, const PrimeTable& table);
/// sum |a_n|^2 / Phi_{2/p}(n), 0 < p <= 2.
double hl_lower_sum(const DirichletPolynomial& f, double p, const PrimeTable& table);
/// sum |a_n|^2 |mu(n)| / d_{2/p}(n), 0 < p <= 2.
double squarefree_lower_sum(const DirichletPolynomial& f, double p, const PrimeTable& table);

struct HLReport {
  double p = 2.0;
  std::optional<double> upper_sum;
  std::optional<double> lower_sum;
  std::optional<double> squarefree_sum;
  NormEstimate norm;
  Verdict verdict = Verdict::Consistent;
  double slack_sigmas = kSlackSigmas;
  /// Smallest margin, in standard errors, over the checked inequalities.
  double worst_margin_sigmas = 0.0;
};

/// Evaluates the applicable sums for p and compares them with `norm`.
HLReport hl_report(const DirichletPolynomial& f, double p, const NormEstimate& norm, const PrimeTable& table);

/// max_{n <= N} sqrt(d(n)), the constant in ||f||_2 <= C ||f||_1 for length-N f.
double helson_divisor_constant(std::uint64_t N, const PrimeTable& table);

/// Constant in ||P_m f||_p <= K ||f||_p: 1 for p >= 1, sqrt(e) (m+1)^{1/p-1} below.
double homogeneous_projection_constant(unsigned m, double p);

// ---------------------------------------------------------------------------
// One-variable sums

/// sum |a_j|^2 phi_{p/2}(j), p >= 2.
double disc_upper_sum(const DiscPolynomial& f, double p);
/// sum |a_j|^2 / phi_{2/p}(j), 0 < p <= 2.
double disc_lower_sum(const DiscPolynomial& f, double p);
/// sum_j |(f^k)_j|^2 / c_k(j), the 2k-th power of the weighted Bergman norm.
double burbea_sum(const DiscPolynomial& f, unsigned k);

// ---------------------------------------------------------------------------
// Coefficient functionals

/// C(1,p): 1 for p >= 1, sqrt(2/p) (1-p/2)^{1/p-1/2} below.
double c1p_exact(double p);

enum class BoundMethod { ClosedForm, GridMinimum, BinomialBound, BestOf };
std::string to_string(BoundMethod m);

struct CoefficientBound {
  unsigned k = 1;
  double p = 0.5;
  double value = 1.0;
  BoundMethod method = BoundMethod::BestOf;
  double min_bound = 0.0;      // min over [p,1) of x^{-k/2} (1-x)^{1/x-1/p}
  double argmin = 0.0;
  double binomial_bound = 0.0;  // sqrt(c_{ceil(2/p)}(k))
  std::optional<double> closed_form;
};

double coefficient_min_objective(double x, unsigned k, double p);

/// Upper bound for C(k,p), 0 < p < 1; `value` is the best of the two bounds.
CoefficientBound ckp_upper_bound(unsigned k, double p);

struct CnpBound {
  double value = 1.0;
  /// True when n is square-free, where the product of C(1,p) factors is exact.
  bool exact = true;
};

CnpBound cnp_bound(std::uint64_t n, double p, const PrimeTable& table);
double cnp_upper_bound(std::uint64_t n, double p, const PrimeTable& table);

/// prod_j (1 - |z_j|^2)^{-1/p} ||f||_p - |Bf(z)|; z_j is the coordinate of p_j
/// and unlisted coordinates are 0.
double cole_gamelin_margin(const DirichletPolynomial& f, std::span<const Complex> z, double p,
                           const NormEstimate& norm, const PrimeTable& table);

/// a_1 + sum_{n >= 2} a_n n^{-1/2} (log n)^{-beta}.
Complex duality_pairing(const DirichletPolynomial& f, double beta);

}  // namespace hardyp
