#pragma once

// Multiplicative number-theory kernel: prime sieve, factorizations, the
// binomial-series coefficients c_a(j), generalized divisor functions, the
// hybrid weight Phi_a(n), its generating function G_a, Euler products and
// counts of integers by number of prime factors.

#include <cstdint>
#include <functional>
#include <span>
#include <utility>
#include <vector>

namespace hardyp {

/// Primes up to `limit` together with a least-prime-factor table.
/// Immutable after construction and safe to share across threads.
class PrimeTable {
 public:
  /// Throws InvalidArgument if limit < 2 and ResourceError if the table would
  /// exceed the memory cap.
  explicit PrimeTable(std::uint64_t limit);

  std::uint64_t limit() const noexcept { return limit_; }
  std::span<const std::uint32_t> primes() const noexcept { return primes_; }

  /// Least prime factor of 2 <= n <= limit; returns 1 for n = 1.
  std::uint32_t smallest_factor(std::uint64_t n) const;

  bool is_prime(std::uint64_t n) const;

  /// 1-based position j of the prime p = p_j. Throws InvalidArgument if p is
  /// not a prime in the table.
  std::uint32_t prime_index(std::uint64_t p) const;

  /// The j-th prime, 1-based.
  std::uint32_t nth_prime(std::uint32_t j) const;

  /// Throws TableTooSmall if n > limit.
  void require(std::uint64_t n) const;

 private:
  std::uint64_t limit_;
  std::vector<std::uint32_t> primes_;
  std::vector<std::uint32_t> spf_;
};

PrimeTable sieve_primes(std::uint64_t limit);

struct PrimePower {
  std::uint32_t prime;
  std::uint32_t exponent;
  friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

/// Sparse exponent vector over 1-based prime positions, sorted by position.
/// Positions absent from the list have exponent zero.
struct MultiIndex {
  std::vector<std::pair<std::uint32_t, std::uint32_t>> entries;

  std::uint32_t exponent(std::uint32_t position) const;
  std::uint32_t max_position() const { return entries.empty() ? 0 : entries.back().first; }
  friend bool operator==(const MultiIndex&, const MultiIndex&) = default;
};

/// Exponent-wise sum; realizes multiplication of the corresponding integers.
MultiIndex operator+(const MultiIndex& a, const MultiIndex& b);

struct Factorization {
  std::uint64_t n = 1;
  std::vector<PrimePower> factors;
  int big_omega = 0;
  int small_omega = 0;
  int mobius = 1;
  MultiIndex kappa;

  bool square_free() const { return mobius != 0; }
};

Factorization factorize(std::uint64_t n, const PrimeTable& table);

/// n = prod p_j^{kappa_j}. Throws InvalidArgument if a position is outside the
/// table or the product overflows 64 bits.
std::uint64_t index_from_kappa(const MultiIndex& kappa, const PrimeTable& table);

/// c_alpha(j) = prod_{l=1}^{j} (alpha + l - 1) / l, the coefficient of z^j in
/// (1 - z)^{-alpha}. Exact for integer alpha while the value fits in 64 bits.
double gen_binomial_coefficient(std::uint64_t j, double alpha);

/// Generalized binomial coefficient binom(a, e) = a (a-1) ... (a-e+1) / e!.
/// Any real a; may be negative.
double binomial_real(double a, std::uint32_t e);

/// d_alpha(n), the coefficients of zeta^alpha.
double divisor_alpha(std::uint64_t n, double alpha, const PrimeTable& table);

/// phi_alpha(j) = c_{floor(alpha)}(j) (alpha / floor(alpha))^j for alpha >= 1.
double phi_disc_weight(std::uint64_t j, double alpha);

/// Phi_alpha(n) = d_{floor(alpha)}(n) (alpha / floor(alpha))^{Omega(n)}, alpha >= 1.
double phi_weight(std::uint64_t n, double alpha, const PrimeTable& table);

/// G_alpha(x) = (1 - x)^alpha (1 - (alpha / floor(alpha)) x)^{-floor(alpha)}
/// for 0 <= x < floor(alpha) / alpha.
double g_alpha(double x, double alpha);

struct EulerProductValue {
  double value = 1.0;
  double log_value = 0.0;
  std::uint64_t prime_limit = 0;
  /// Bound on |log(true / value)| from the primes above prime_limit.
  double tail_bound = 0.0;
};

/// Local factor of an Euler product, evaluated on its natural logarithm so that
/// factors which cancel analytically cancel exactly.
using LogLocalFactor = std::function<double(std::uint32_t prime)>;

/// prod_{p <= prime_limit} exp(log_local(p)). The caller guarantees
/// |log_local(p)| <= decay_constant * p^{-tail_exponent} for p > prime_limit;
/// the tail is bounded through the integral test,
/// sum_{n > L} n^{-t} <= L^{1-t} / (t - 1).
EulerProductValue euler_product_log(const LogLocalFactor& log_local, std::uint64_t prime_limit,
                                    double tail_exponent, double decay_constant,
                                    const PrimeTable& table);

/// Same as euler_product_log for a local factor given directly. Throws
/// DomainError if a factor is <= 0 and OverflowError if the product is not finite.
EulerProductValue euler_product(const std::function<double(std::uint32_t)>& local_factor,
                                std::uint64_t prime_limit, double tail_exponent,
                                double decay_constant, const PrimeTable& table);

/// Integral-test bound for sum_{n > limit} n^{-exponent}.
double power_tail_bound(std::uint64_t limit, double exponent);

/// The Euler product prod_p G_alpha(1/p) (the value at s = 1 of the Dirichlet
/// series with coefficients Phi_alpha / d_alpha after removing zeta^alpha).
EulerProductValue g_alpha_product(double alpha, std::uint64_t prime_limit, const PrimeTable& table);

struct MomentConstants {
  double k = 1.0;
  EulerProductValue upper;
  EulerProductValue lower;
};

/// Upper and lower constants bracketing Psi_k(N) / (log N)^{k^2} for k >= 1.
/// The value fields include the Gamma-function prefactors.
MomentConstants moment_constants(double k, std::uint64_t prime_limit,
                                       const PrimeTable& table);

/// The Conrey-Gamburd arithmetic factor a_k = prod_p (1-1/p)^{k^2} sum_j c_k(j)^2 p^{-j}
/// for integer k >= 1.
EulerProductValue arithmetic_factor(int k, std::uint64_t prime_limit, const PrimeTable& table);

/// N(x, m) = #{n <= x : Omega(n) = m}, indexed by m.
std::vector<std::uint64_t> omega_class_counts(std::uint64_t x, const PrimeTable& table);

/// Omega(n) for 0 <= n <= x (entry 0 unused).
std::vector<std::uint8_t> big_omega_table(std::uint64_t x, const PrimeTable& table);

/// Values f(1..x) of the multiplicative function with f(p^e) = local(p, e);
/// entry 0 is unused and set to 0.
std::vector<double> tabulate_multiplicative(
    std::uint64_t x, const PrimeTable& table,
    const std::function<double(std::uint32_t prime, std::uint32_t exponent)>& local);

}  // namespace hardyp
