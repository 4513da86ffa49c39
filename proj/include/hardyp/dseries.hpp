#pragma once

// Sparse Dirichlet polynomials f(s) = sum a_n n^{-s}, the named generators and
// the index-filter operators S_N, P_m and A_m.

#include <complex>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "hardyp/arith.hpp"

namespace hardyp {

using Complex = std::complex<double>;

struct Term {
  std::uint64_t n;
  Complex a;
  friend bool operator==(const Term&, const Term&) = default;
};

/// Coefficients stored sorted by index with no explicit zeros.
class DirichletPolynomial {
 public:
  DirichletPolynomial() = default;

  /// Sorts, merges repeated indices by addition and drops zero coefficients.
  /// Throws InvalidArgument on index 0 or a non-finite coefficient.
  static DirichletPolynomial from_terms(std::vector<Term> terms);

  /// a_n = 1 for n in `indices`; shorthand for tests and examples.
  static DirichletPolynomial ones(std::initializer_list<std::uint64_t> indices);

  std::span<const Term> terms() const noexcept { return terms_; }
  std::size_t size() const noexcept { return terms_.size(); }
  bool empty() const noexcept { return terms_.empty(); }
  /// Largest index with a nonzero coefficient, 0 for the zero polynomial.
  std::uint64_t length() const noexcept { return terms_.empty() ? 0 : terms_.back().n; }
  Complex coefficient(std::uint64_t n) const;

  friend bool operator==(const DirichletPolynomial&, const DirichletPolynomial&) = default;

 private:
  std::vector<Term> terms_;
};

DirichletPolynomial operator+(const DirichletPolynomial& f, const DirichletPolynomial& g);
DirichletPolynomial operator*(Complex c, const DirichletPolynomial& f);

// ---------------------------------------------------------------------------
// Generators

struct ZetaPartial {
  std::uint64_t N;
};
struct ZetaAlphaPartial {
  std::uint64_t N;
  double alpha;
};
/// (prod_{p <= prime_bound} (1 - p^{-1/2-s})^{-1})^alpha truncated to n <= N.
struct EulerFactorPower {
  std::uint64_t prime_bound;
  double alpha;
  std::uint64_t N;
};
/// prod_{j <= prime_count} (sqrt(1-p/2) + p_j^{-s} sqrt(p/2))^{2/p} truncated to n <= N.
struct ExtremalProduct {
  double p;
  std::uint32_t prime_count;
  std::uint64_t N;
};
struct PhiBeta {
  double beta;
  std::uint64_t N;
};
/// EulerFactorPower with alpha = 2/p.
struct DualityWitness {
  double p;
  std::uint64_t prime_bound;
  std::uint64_t N;
};

using GeneratorSpec =
    std::variant<ZetaPartial, ZetaAlphaPartial, EulerFactorPower, ExtremalProduct, PhiBeta, DualityWitness>;

/// Parses "name:key=value,key=value". Names: zeta (N), zeta-alpha (N, alpha),
/// euler-power (x, alpha, N), extremal (p, k, N), phi-beta (beta, N),
/// duality (p, x, N). Throws InvalidArgument on anything else.
GeneratorSpec parse_generator(const std::string& text);
std::string format_generator(const GeneratorSpec& spec);

struct GeneratedPolynomial {
  DirichletPolynomial poly;
  /// l2 mass of the coefficients dropped by truncation, for generators that
  /// are truncations of an infinite product. Infinite when the product's
  /// expansion does not converge in l2.
  std::optional<double> truncated_l2_mass;
};

GeneratedPolynomial generate_with_metadata(const GeneratorSpec& spec, const PrimeTable& table);
DirichletPolynomial generate(const GeneratorSpec& spec, const PrimeTable& table);

/// Coefficient of w^e in (sqrt(1-p/2) + w sqrt(p/2))^{2/p}.
double extremal_factor_coefficient(double p, std::uint32_t e);

// ---------------------------------------------------------------------------
// Algebra

/// Dirichlet convolution, keeping indices <= truncation when given.
/// Throws ResourceError when the work buffers exceed the memory cap.
DirichletPolynomial dirichlet_multiply(const DirichletPolynomial& f, const DirichletPolynomial& g,
                                       std::optional<std::uint64_t> truncation = std::nullopt);

DirichletPolynomial dirichlet_power(const DirichletPolynomial& f, unsigned k,
                                    std::optional<std::uint64_t> truncation = std::nullopt);

/// sum_m |(f g)_m|^2 without storing f g: the output index range is swept in
/// blocks small enough for the memory cap. With index_power = t the sum is
/// weighted by m^{-t}.
double convolution_l2_squared(const DirichletPolynomial& f, const DirichletPolynomial& g, double index_power = 0.0);

DirichletPolynomial partial_sum(const DirichletPolynomial& f, std::uint64_t N);

/// P_m f: the terms with Omega(n) = m.
DirichletPolynomial homogeneous_projection(const DirichletPolynomial& f, unsigned m,
                                           const PrimeTable& table);

/// A_m f: the terms whose index has all prime factors among p_1..p_m.
DirichletPolynomial abschnitt(const DirichletPolynomial& f, std::uint32_t m, const PrimeTable& table);

struct BohrMonomial {
  MultiIndex kappa;
  Complex coefficient;
  friend bool operator==(const BohrMonomial&, const BohrMonomial&) = default;
};

std::vector<BohrMonomial> bohr_lift(const DirichletPolynomial& f, const PrimeTable& table);

/// Random polynomial with `support` distinct indices drawn uniformly from
/// [1, max_index] and standard complex Gaussian coefficients.
DirichletPolynomial random_polynomial(std::mt19937_64& rng, std::size_t support, std::uint64_t max_index);

}  // namespace hardyp
