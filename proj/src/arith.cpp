#include "hardyp/arith.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "hardyp/config.hpp"
#include "hardyp/errors.hpp"
#include "hardyp/summation.hpp"

namespace hardyp {

namespace {

bool is_integer(double x) { return std::floor(x) == x; }

void require_finite_positive(double x, const char* name) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw InvalidArgument(std::string(name) + " must be a finite positive number");
  }
}

void require_alpha_ge_one(double alpha) {
  if (!(alpha >= 1.0) || !std::isfinite(alpha)) throw InvalidArgument("alpha must be >= 1");
}

// sum_{j>=2} y^j / j <= y^2 / (2 (1 - y)) for 0 <= y < 1.
double log1m_remainder_constant(double y_max) { return 1.0 / (2.0 * (1.0 - y_max)); }

double g_alpha_log(double x, double alpha) {
  const double fl = std::floor(alpha);
  const double ratio = alpha / fl;
  return alpha * std::log1p(-x) - fl * std::log1p(-ratio * x);
}

// Bound K with |log G_alpha(x)| <= K x^2 for 0 <= x <= 1 / limit.
double g_alpha_decay_constant(double alpha, std::uint64_t limit) {
  const double fl = std::floor(alpha);
  const double ratio = alpha / fl;
  const double inv = 1.0 / static_cast<double>(limit);
  return alpha * log1m_remainder_constant(inv) + fl * ratio * ratio * log1m_remainder_constant(ratio * inv);
}

}  // namespace

// ---------------------------------------------------------------------------
// PrimeTable

PrimeTable::PrimeTable(std::uint64_t limit) : limit_(limit) {
  if (limit < 2) throw InvalidArgument("sieve limit must be >= 2");
  if (limit >= std::numeric_limits<std::uint32_t>::max()) {
    throw InvalidArgument("sieve limit beyond the 32-bit least-prime-factor table");
  }
  const std::uint64_t bytes = (limit + 1) * sizeof(std::uint32_t);
  check_allocation(bytes, "prime table");

  spf_.assign(limit + 1, 0);
  for (std::uint64_t n = 2; n <= limit; ++n) {
    if (spf_[n] == 0) {
      spf_[n] = static_cast<std::uint32_t>(n);
      primes_.push_back(static_cast<std::uint32_t>(n));
    }
    // Linear sieve: each composite is marked once by its least prime factor.
    for (const std::uint32_t p : primes_) {
      const std::uint64_t m = static_cast<std::uint64_t>(p) * n;
      if (p > spf_[n] || m > limit) break;
      spf_[m] = p;
    }
  }
  spf_[1] = 1;
}

std::uint32_t PrimeTable::smallest_factor(std::uint64_t n) const {
  if (n == 0) throw InvalidArgument("smallest_factor of 0");
  require(n);
  return spf_[n];
}

bool PrimeTable::is_prime(std::uint64_t n) const {
  if (n < 2) return false;
  require(n);
  return spf_[n] == n;
}

std::uint32_t PrimeTable::prime_index(std::uint64_t p) const {
  const auto it = std::lower_bound(primes_.begin(), primes_.end(), p);
  if (it == primes_.end() || *it != p) {
    throw InvalidArgument(std::to_string(p) + " is not a prime in the table");
  }
  return static_cast<std::uint32_t>(it - primes_.begin()) + 1;
}

std::uint32_t PrimeTable::nth_prime(std::uint32_t j) const {
  if (j == 0 || j > primes_.size()) {
    throw InvalidArgument("prime position " + std::to_string(j) + " outside the table");
  }
  return primes_[j - 1];
}

void PrimeTable::require(std::uint64_t n) const {
  if (n > limit_) throw TableTooSmall(n, limit_);
}

PrimeTable sieve_primes(std::uint64_t limit) { return PrimeTable(limit); }

// ---------------------------------------------------------------------------
// Factorizations

std::uint32_t MultiIndex::exponent(std::uint32_t position) const {
  const auto it = std::lower_bound(entries.begin(), entries.end(), position,
                                   [](const auto& e, std::uint32_t pos) { return e.first < pos; });
  return (it != entries.end() && it->first == position) ? it->second : 0;
}

MultiIndex operator+(const MultiIndex& a, const MultiIndex& b) {
  MultiIndex out;
  out.entries.reserve(a.entries.size() + b.entries.size());
  auto i = a.entries.begin();
  auto j = b.entries.begin();
  while (i != a.entries.end() || j != b.entries.end()) {
    if (j == b.entries.end() || (i != a.entries.end() && i->first < j->first)) {
      out.entries.push_back(*i++);
    } else if (i == a.entries.end() || j->first < i->first) {
      out.entries.push_back(*j++);
    } else {
      out.entries.emplace_back(i->first, i->second + j->second);
      ++i;
      ++j;
    }
  }
  return out;
}

Factorization factorize(std::uint64_t n, const PrimeTable& table) {
  if (n == 0) throw InvalidArgument("factorize requires n >= 1");
  table.require(n);
  Factorization f;
  f.n = n;
  std::uint64_t m = n;
  while (m > 1) {
    const std::uint32_t p = table.smallest_factor(m);
    std::uint32_t e = 0;
    while (m % p == 0) {
      m /= p;
      ++e;
    }
    f.factors.push_back({p, e});
    f.kappa.entries.emplace_back(table.prime_index(p), e);
    f.big_omega += static_cast<int>(e);
  }
  f.small_omega = static_cast<int>(f.factors.size());
  const bool has_square = std::any_of(f.factors.begin(), f.factors.end(),
                                      [](const PrimePower& pp) { return pp.exponent >= 2; });
  f.mobius = has_square ? 0 : (f.small_omega % 2 == 0 ? 1 : -1);
  return f;
}

std::uint64_t index_from_kappa(const MultiIndex& kappa, const PrimeTable& table) {
  std::uint64_t n = 1;
  for (const auto& [pos, e] : kappa.entries) {
    const std::uint64_t p = table.nth_prime(pos);
    for (std::uint32_t i = 0; i < e; ++i) {
      if (n > std::numeric_limits<std::uint64_t>::max() / p) {
        throw InvalidArgument("multi-index product overflows 64 bits");
      }
      n *= p;
    }
  }
  return n;
}

// ---------------------------------------------------------------------------
// Coefficient families

double gen_binomial_coefficient(std::uint64_t j, double alpha) {
  require_finite_positive(alpha, "alpha");
  if (j == 0) return 1.0;
  if (is_integer(alpha) && alpha < 1e9) {
    // binom(j + a - 1, r) with r = min(j, a - 1), exact while it fits.
    const auto a = static_cast<std::uint64_t>(alpha);
    const std::uint64_t top = j + a - 1;
    const std::uint64_t r = std::min<std::uint64_t>(j, a - 1);
    unsigned __int128 acc = 1;
    bool fits = true;
    for (std::uint64_t i = 1; i <= r; ++i) {
      acc = acc * (top - r + i) / i;
      if (acc > std::numeric_limits<std::uint64_t>::max()) {
        fits = false;
        break;
      }
    }
    if (fits) return static_cast<double>(static_cast<std::uint64_t>(acc));
  }
  if (j > 4096) {
    return std::exp(std::lgamma(alpha + static_cast<double>(j)) - std::lgamma(alpha) -
                    std::lgamma(static_cast<double>(j) + 1.0));
  }
  double acc = 1.0;
  for (std::uint64_t l = 1; l <= j; ++l) {
    acc *= (alpha + static_cast<double>(l) - 1.0) / static_cast<double>(l);
  }
  return acc;
}

double binomial_real(double a, std::uint32_t e) {
  double acc = 1.0;
  for (std::uint32_t i = 0; i < e; ++i) acc *= (a - static_cast<double>(i)) / static_cast<double>(i + 1);
  return acc;
}

double divisor_alpha(std::uint64_t n, double alpha, const PrimeTable& table) {
  require_finite_positive(alpha, "alpha");
  const auto f = factorize(n, table);
  double acc = 1.0;
  for (const auto& pp : f.factors) acc *= gen_binomial_coefficient(pp.exponent, alpha);
  return acc;
}

double phi_disc_weight(std::uint64_t j, double alpha) {
  require_alpha_ge_one(alpha);
  const double fl = std::floor(alpha);
  const double ratio = alpha / fl;
  return gen_binomial_coefficient(j, fl) * std::pow(ratio, static_cast<double>(j));
}

double phi_weight(std::uint64_t n, double alpha, const PrimeTable& table) {
  require_alpha_ge_one(alpha);
  const auto f = factorize(n, table);
  double acc = 1.0;
  for (const auto& pp : f.factors) acc *= phi_disc_weight(pp.exponent, alpha);
  return acc;
}

double g_alpha(double x, double alpha) {
  require_alpha_ge_one(alpha);
  const double fl = std::floor(alpha);
  if (!(x >= 0.0) || !(x < fl / alpha)) {
    throw InvalidArgument("g_alpha requires 0 <= x < floor(alpha)/alpha");
  }
  return std::exp(g_alpha_log(x, alpha));
}

// ---------------------------------------------------------------------------
// Euler products

double power_tail_bound(std::uint64_t limit, double exponent) {
  if (!(exponent > 1.0)) throw InvalidArgument("tail exponent must exceed 1");
  if (limit == 0) throw InvalidArgument("tail bound requires limit >= 1");
  return std::pow(static_cast<double>(limit), 1.0 - exponent) / (exponent - 1.0);
}

EulerProductValue euler_product_log(const LogLocalFactor& log_local, std::uint64_t prime_limit,
                                    double tail_exponent, double decay_constant,
                                    const PrimeTable& table) {
  if (prime_limit < 2) throw InvalidArgument("prime_limit must be >= 2");
  if (!(tail_exponent > 1.0)) throw InvalidArgument("tail exponent must exceed 1");
  if (!(decay_constant >= 0.0) || !std::isfinite(decay_constant)) {
    throw InvalidArgument("decay constant must be finite and nonnegative");
  }
  table.require(prime_limit);

  CompensatedSum<double> log_sum;
  for (const std::uint32_t p : table.primes()) {
    if (p > prime_limit) break;
    const double term = log_local(p);
    if (std::isnan(term)) throw DomainError("local factor is not a positive number at p=" + std::to_string(p));
    log_sum.add(term);
  }
  EulerProductValue out;
  out.prime_limit = prime_limit;
  out.log_value = log_sum.value();
  out.value = std::exp(out.log_value);
  if (!std::isfinite(out.value) || !std::isfinite(out.log_value)) {
    throw OverflowError("Euler product is not finite");
  }
  out.tail_bound = decay_constant == 0.0 ? 0.0 : decay_constant * power_tail_bound(prime_limit, tail_exponent);
  return out;
}

EulerProductValue euler_product(const std::function<double(std::uint32_t)>& local_factor,
                                std::uint64_t prime_limit, double tail_exponent,
                                double decay_constant, const PrimeTable& table) {
  return euler_product_log(
      [&](std::uint32_t p) {
        const double v = local_factor(p);
        if (!(v > 0.0)) throw DomainError("local factor must be positive at p=" + std::to_string(p));
        if (!std::isfinite(v)) throw OverflowError("local factor is not finite at p=" + std::to_string(p));
        return std::log(v);
      },
      prime_limit, tail_exponent, decay_constant, table);
}

EulerProductValue g_alpha_product(double alpha, std::uint64_t prime_limit, const PrimeTable& table) {
  require_alpha_ge_one(alpha);
  return euler_product_log([alpha](std::uint32_t p) { return g_alpha_log(1.0 / p, alpha); }, prime_limit,
                           2.0, g_alpha_decay_constant(alpha, prime_limit), table);
}

MomentConstants moment_constants(double k, std::uint64_t prime_limit, const PrimeTable& table) {
  if (!(k >= 1.0) || !std::isfinite(k)) throw InvalidArgument("moment_constants requires k >= 1");
  MomentConstants out;
  out.k = k;

  // Upper: the local factor is G_k(1/p)^k.
  out.upper = euler_product_log([k](std::uint32_t p) { return k * g_alpha_log(1.0 / p, k); }, prime_limit,
                                2.0, k * g_alpha_decay_constant(k, prime_limit), table);
  const double upper_prefactor_log = -k * std::lgamma(k + 1.0);
  out.upper.log_value += upper_prefactor_log;
  out.upper.value = std::exp(out.upper.log_value);

  // Lower: (1 - 1/p)^{k^2} (1 + l k / p)^{k / l} with l = floor(2k).
  const double ell = std::floor(2.0 * k);
  const double inv = 1.0 / static_cast<double>(prime_limit);
  const double lower_decay = k * k * log1m_remainder_constant(inv) + ell * k * k * k / 2.0;
  out.lower = euler_product_log(
      [k, ell](std::uint32_t p) {
        const double x = 1.0 / p;
        return k * k * std::log1p(-x) + (k / ell) * std::log1p(ell * k * x);
      },
      prime_limit, 2.0, lower_decay, table);
  out.lower.log_value += -(k / ell) * std::lgamma(ell * k + 1.0);
  out.lower.value = std::exp(out.lower.log_value);
  return out;
}

EulerProductValue arithmetic_factor(int k, std::uint64_t prime_limit, const PrimeTable& table) {
  if (k < 1) throw InvalidArgument("arithmetic_factor requires k >= 1");
  // sum_j c_k(j)^2 x^j = P(x) / (1 - x)^{2k-1} with P(x) = sum_i binom(k-1, i)^2 x^i,
  // so the local factor is (1 - x)^{(k-1)^2} P(x).
  std::vector<double> poly(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) {
    const double b = binomial_real(static_cast<double>(k - 1), static_cast<std::uint32_t>(i));
    poly[static_cast<std::size_t>(i)] = b * b;
  }
  const double km1sq = static_cast<double>(k - 1) * static_cast<double>(k - 1);
  double q_max = 0.0;
  for (std::size_t i = 2; i < poly.size(); ++i) q_max += poly[i];
  const double inv = 1.0 / static_cast<double>(prime_limit);
  const double decay = km1sq * log1m_remainder_constant(inv) +
                       std::max(q_max, 0.5 * (km1sq + q_max) * (km1sq + q_max));
  return euler_product_log(
      [poly, km1sq](std::uint32_t p) {
        const double x = 1.0 / p;
        double v = 0.0;
        for (auto it = poly.rbegin(); it != poly.rend(); ++it) v = v * x + *it;
        return km1sq * std::log1p(-x) + std::log(v);
      },
      prime_limit, 2.0, decay, table);
}

// ---------------------------------------------------------------------------
// Tabulations

std::vector<std::uint8_t> big_omega_table(std::uint64_t x, const PrimeTable& table) {
  table.require(x);
  check_allocation(x + 1, "Omega table");
  std::vector<std::uint8_t> omega(x + 1, 0);
  for (std::uint64_t n = 2; n <= x; ++n) {
    omega[n] = static_cast<std::uint8_t>(omega[n / table.smallest_factor(n)] + 1);
  }
  return omega;
}

std::vector<std::uint64_t> omega_class_counts(std::uint64_t x, const PrimeTable& table) {
  if (x == 0) throw InvalidArgument("omega_class_counts requires x >= 1");
  const auto omega = big_omega_table(x, table);
  std::vector<std::uint64_t> counts;
  for (std::uint64_t n = 1; n <= x; ++n) {
    const auto m = omega[n];
    if (m >= counts.size()) counts.resize(m + 1, 0);
    ++counts[m];
  }
  return counts;
}

std::vector<double> tabulate_multiplicative(
    std::uint64_t x, const PrimeTable& table,
    const std::function<double(std::uint32_t, std::uint32_t)>& local) {
  table.require(x);
  check_allocation((x + 1) * (sizeof(double) + sizeof(std::uint32_t) + 1), "multiplicative tabulation");
  std::vector<double> values(x + 1, 0.0);
  std::vector<std::uint32_t> cofactor(x + 1, 1);  // n with its least prime power removed
  std::vector<std::uint8_t> exponent(x + 1, 0);
  if (x >= 1) values[1] = 1.0;
  for (std::uint64_t n = 2; n <= x; ++n) {
    const std::uint32_t p = table.smallest_factor(n);
    const std::uint64_t m = n / p;
    if (m % p == 0) {
      exponent[n] = static_cast<std::uint8_t>(exponent[m] + 1);
      cofactor[n] = cofactor[m];
    } else {
      exponent[n] = 1;
      cofactor[n] = static_cast<std::uint32_t>(m);
    }
    values[n] = values[cofactor[n]] * local(p, exponent[n]);
  }
  return values;
}

}  // namespace hardyp
