#pragma once

// H^p quasi-norms of Dirichlet polynomials (exact l2, exact even H^{2k},
// Steinhaus Monte Carlo) and of one-variable polynomials on the circle.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "hardyp/arith.hpp"
#include "hardyp/dseries.hpp"

namespace hardyp {

enum class NormMethod { ExactL2, ExactEven, MonteCarlo, DiscQuadrature };

std::string to_string(NormMethod m);
NormMethod parse_norm_method(const std::string& s);

struct NormEstimate {
  double p = 2.0;
  double value = 0.0;
  /// Estimate of E|F|^p; equals value^p up to rounding.
  double power_mean = 0.0;
  NormMethod method = NormMethod::ExactL2;
  std::uint64_t samples = 0;
  /// Standard error of power_mean (Monte Carlo only).
  double std_error = 0.0;
  std::uint64_t seed = 0;

  /// Standard error of value by the delta method.
  double value_std_error() const;
};

NormEstimate l2_norm(const DirichletPolynomial& f);

/// ||f||_{2k} from ||f^k||_2^2. Throws ResourceError if f^{k-1} does not fit.
NormEstimate even_norm_exact(const DirichletPolynomial& f, unsigned k);

/// z(p_j) for j = 1..size(); z[j-1] holds z(p_j).
struct SteinhausSample {
  std::vector<Complex> z;
};

/// The sample-th draw of the stream: z(p_j) = exp(2 pi i u) with u a function
/// of (seed, sample, j) only.
SteinhausSample steinhaus_sample(std::uint64_t seed, std::uint64_t sample, std::uint32_t prime_count);

Complex evaluate_at_sample(const DirichletPolynomial& f, const SteinhausSample& sample, const PrimeTable& table);

struct MonteCarloOptions {
  std::uint64_t samples = 100000;
  std::uint64_t seed = 0;
  unsigned threads = 1;
};

NormEstimate mc_norm(const DirichletPolynomial& f, double p, const MonteCarloOptions& opts, const PrimeTable& table);

/// One estimate per exponent in ps, all from the same sample stream.
std::vector<NormEstimate> mc_norms(const DirichletPolynomial& f, std::span<const double> ps,
                                   const MonteCarloOptions& opts, const PrimeTable& table);

/// result[i][j] estimates ||fs[i]||_{ps[j]}. Every polynomial is evaluated at
/// the same Steinhaus draws, which is what comparisons between related
/// polynomials such as S_N f and f want.
std::vector<std::vector<NormEstimate>> mc_norms_joint(std::span<const DirichletPolynomial> fs,
                                                      std::span<const double> ps,
                                                      const MonteCarloOptions& opts, const PrimeTable& table);

// ---------------------------------------------------------------------------
// One variable

struct DiscPolynomial {
  std::vector<Complex> coeffs;

  DiscPolynomial() = default;
  explicit DiscPolynomial(std::vector<Complex> c);

  /// Index of the last nonzero coefficient; 0 for constants and for zero.
  std::size_t degree() const;
  Complex operator()(Complex z) const;
};

DiscPolynomial disc_multiply(const DiscPolynomial& f, const DiscPolynomial& g);

inline constexpr std::uint64_t kDefaultDiscNodes = 4096;

/// Trapezoidal mean of |f|^p over `nodes` equispaced points of the circle.
NormEstimate disc_norm(const DiscPolynomial& f, double p, std::uint64_t nodes = kDefaultDiscNodes);

/// f(rz).
DiscPolynomial weissler_dilate(const DiscPolynomial& f, double r);

}  // namespace hardyp
