#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <functional>
#include <numeric>
#include <random>

#include "hardyp/arith.hpp"
#include "hardyp/errors.hpp"

using namespace hardyp;

namespace {

bool trial_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

// Ordered alpha-tuples with product n, by repeated convolution of the all-ones sequence.
std::vector<double> tuple_counts(std::size_t x, int alpha) {
  std::vector<double> cur(x + 1, 0.0);
  cur[1] = 1.0;
  for (int a = 0; a < alpha; ++a) {
    std::vector<double> next(x + 1, 0.0);
    for (std::size_t m = 1; m <= x; ++m) {
      if (cur[m] == 0.0) continue;
      for (std::size_t n = m; n <= x; n += m) next[n] += cur[m];
    }
    cur = std::move(next);
  }
  return cur;
}

double product_formula(std::uint64_t j, double alpha) {
  double v = 1.0;
  for (std::uint64_t l = 1; l <= j; ++l) v *= (alpha + static_cast<double>(l) - 1.0) / static_cast<double>(l);
  return v;
}

}  // namespace

TEST_CASE("sieve agrees with trial division") {
  const PrimeTable t(10000);
  std::size_t count = 0;
  for (std::uint64_t n = 1; n <= 10000; ++n) {
    CHECK(t.is_prime(n) == trial_prime(n));
    count += trial_prime(n);
  }
  CHECK(t.primes().size() == count);
  CHECK(PrimeTable(100).primes().size() == 25);
  CHECK(t.nth_prime(1) == 2);
  CHECK(t.prime_index(7919) == 1000);
  CHECK_THROWS_AS(t.prime_index(12), InvalidArgument);
  CHECK_THROWS_AS(t.require(10001), TableTooSmall);
  CHECK_THROWS_AS(PrimeTable(1), InvalidArgument);
}

TEST_CASE("factorization reconstructs n") {
  const PrimeTable t(100000);
  for (std::uint64_t n = 1; n <= 100000; n += 37) {
    const auto f = factorize(n, t);
    std::uint64_t prod = 1;
    int omega = 0;
    for (const auto& pp : f.factors) {
      CHECK(trial_prime(pp.prime));
      for (std::uint32_t e = 0; e < pp.exponent; ++e) prod *= pp.prime;
      omega += static_cast<int>(pp.exponent);
    }
    CHECK(prod == n);
    CHECK(f.big_omega == omega);
    CHECK(index_from_kappa(f.kappa, t) == n);
  }
  const auto f12 = factorize(12, t);
  CHECK(f12.mobius == 0);
  CHECK(factorize(30, t).mobius == -1);
  CHECK(f12.kappa.exponent(1) == 2);
  CHECK(f12.kappa.exponent(2) == 1);
  CHECK(f12.kappa.exponent(3) == 0);
  CHECK(index_from_kappa(factorize(12, t).kappa + factorize(35, t).kappa, t) == 420);
}

TEST_CASE("binomial series coefficients") {
  CHECK(gen_binomial_coefficient(5, 1.0) == 1.0);
  CHECK(gen_binomial_coefficient(2, 3.0) == 6.0);
  CHECK(gen_binomial_coefficient(1, 0.5) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(gen_binomial_coefficient(0, 7.3) == 1.0);
  for (double alpha : {0.5, 1.25, 2.0, 3.5, 7.0}) {
    for (std::uint64_t j = 0; j <= 40; ++j) {
      CHECK(gen_binomial_coefficient(j, alpha) == doctest::Approx(product_formula(j, alpha)).epsilon(1e-13));
    }
  }
  // Large j goes through lgamma.
  CHECK(gen_binomial_coefficient(5000, 1.5) == doctest::Approx(product_formula(5000, 1.5)).epsilon(1e-9));
}

TEST_CASE("submultiplicativity of c_alpha") {
  for (double alpha : {1.25, 2.0, 3.5}) {
    for (std::uint64_t j = 0; j <= 50; ++j) {
      for (std::uint64_t k = 0; k <= 50; ++k) {
        const double lhs = gen_binomial_coefficient(j + k, alpha);
        const double rhs = gen_binomial_coefficient(j, alpha) * gen_binomial_coefficient(k, alpha);
        CHECK(lhs <= rhs * (1.0 + 1e-12));
      }
    }
  }
}

TEST_CASE("Vandermonde identity over compositions") {
  for (double alpha : {1.0, 2.0}) {
    for (int k = 1; k <= 3; ++k) {
      for (std::uint64_t j = 0; j <= 10; ++j) {
        double sum = 0.0;
        // Enumerate compositions j = j_1 + ... + j_k.
        std::function<void(int, std::uint64_t, double)> rec = [&](int pos, std::uint64_t left, double prod) {
          if (pos == k - 1) {
            sum += prod * gen_binomial_coefficient(left, alpha);
            return;
          }
          for (std::uint64_t i = 0; i <= left; ++i) rec(pos + 1, left - i, prod * gen_binomial_coefficient(i, alpha));
        };
        rec(0, j, 1.0);
        CHECK(gen_binomial_coefficient(j, alpha * k) == doctest::Approx(sum).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("d_alpha for integer alpha counts ordered factorizations") {
  const std::size_t x = 100000;
  const PrimeTable t(x);
  for (int alpha = 1; alpha <= 3; ++alpha) {
    const auto counts = tuple_counts(x, alpha);
    const auto table = tabulate_multiplicative(x, t, [&](std::uint32_t, std::uint32_t e) {
      return gen_binomial_coefficient(e, static_cast<double>(alpha));
    });
    std::size_t bad = 0;
    for (std::size_t n = 1; n <= x; ++n) bad += table[n] != counts[n];
    CHECK(bad == 0);
    for (std::size_t n = 1; n <= x; n += 997) CHECK(divisor_alpha(n, alpha, t) == counts[n]);
  }
  CHECK(divisor_alpha(12, 2.0, t) == 6.0);
  CHECK(divisor_alpha(4, 0.5, t) == doctest::Approx(0.375));
}

TEST_CASE("d_alpha * d_beta = d_{alpha+beta}") {
  const std::size_t x = 2000;
  const PrimeTable t(x);
  const double a = 0.7, b = 1.6;
  for (std::size_t n = 1; n <= x; n += 7) {
    double conv = 0.0;
    for (std::size_t d = 1; d <= n; ++d) {
      if (n % d == 0) conv += divisor_alpha(d, a, t) * divisor_alpha(n / d, b, t);
    }
    CHECK(divisor_alpha(n, a + b, t) == doctest::Approx(conv).epsilon(1e-12));
  }
}

TEST_CASE("Phi_alpha values and multiplicativity") {
  const PrimeTable t(10000);
  CHECK(phi_weight(12, 2.0, t) == 6.0);
  CHECK(phi_weight(2, 1.5, t) == doctest::Approx(1.5));
  CHECK(phi_weight(4, 1.5, t) == doctest::Approx(2.25));
  CHECK(phi_disc_weight(3, 2.5) == doctest::Approx(4.0 * std::pow(1.25, 3)));
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<std::uint64_t> dist(1, 100);
  int tested = 0;
  while (tested < 300) {
    const std::uint64_t m = dist(rng), n = dist(rng);
    if (std::gcd(m, n) != 1) continue;
    ++tested;
    for (double alpha : {1.0, 1.5, 2.5, 3.25}) {
      CHECK(phi_weight(m * n, alpha, t) ==
            doctest::Approx(phi_weight(m, alpha, t) * phi_weight(n, alpha, t)).epsilon(1e-13));
    }
  }
  // Phi_alpha dominates d_alpha at prime powers.
  for (double alpha : {1.5, 2.5}) {
    for (std::uint64_t j = 0; j <= 20; ++j) CHECK(phi_disc_weight(j, alpha) >= gen_binomial_coefficient(j, alpha) * (1 - 1e-13));
  }
}

TEST_CASE("G_alpha bounds") {
  CHECK(g_alpha(0.5, 1.5) == doctest::Approx(std::pow(0.5, 1.5) / 0.25).epsilon(1e-14));
  for (double x : {0.0, 0.1, 0.37, 0.9}) CHECK(g_alpha(x, 3.0) == 1.0);
  CHECK_THROWS_AS(g_alpha(0.7, 1.5), InvalidArgument);
  for (double alpha : {1.1, 1.5, 1.9, 2.5, 3.7, 6.2}) {
    const double top = std::floor(alpha) / alpha;
    const double top_next = std::floor(alpha + 1.0) / (alpha + 1.0);
    for (int i = 0; i < 200; ++i) {
      const double x = top * i / 200.0;
      if (x < top_next) CHECK(g_alpha(x, alpha + 1.0) <= g_alpha(x, alpha) * (1.0 + 1e-12));
      if (x <= 0.5) {
        const double c = alpha < 2.0 ? 16.0 * (alpha - 1.0) / std::pow(2.0 - alpha, 3) : 384.0;
        const double g = g_alpha(x, alpha);
        CHECK(g >= 1.0 - 1e-14);
        CHECK(g <= 1.0 + x * x * c);
      }
    }
  }
}

TEST_CASE("Euler products with tail bounds") {
  const PrimeTable t(1000000);
  const auto z2 = euler_product([](std::uint32_t p) { return 1.0 / (1.0 - 1.0 / (double(p) * p)); }, 1000000, 2.0,
                                2.0, t);
  // zeta(2) from partial sums with the integral-test remainder.
  double partial = 0.0;
  for (int n = 2000000; n >= 1; --n) partial += 1.0 / (double(n) * n);
  const double zeta2 = partial + 1.0 / 2000000.5;
  CHECK(std::abs(std::log(zeta2 / z2.value)) <= z2.tail_bound);
  CHECK(z2.value == doctest::Approx(M_PI * M_PI / 6.0).epsilon(1e-6));

  for (std::uint64_t L : {10ULL, 1000ULL, 1000000ULL}) {
    const auto c = moment_constants(1.0, L, t);
    CHECK(c.upper.value == 1.0);
    CHECK(c.lower.value > 0.0);
    CHECK(c.lower.value < 1.0);
    const double direct = [&] {
      double lv = -0.5 * std::log(2.0);
      for (const auto p : t.primes()) {
        if (p > L) break;
        lv += std::log1p(-1.0 / p) + 0.5 * std::log1p(2.0 / p);
      }
      return std::exp(lv);
    }();
    CHECK(c.lower.value == doctest::Approx(direct).epsilon(1e-12));
  }
  const auto a1 = arithmetic_factor(1, 100000, t);
  CHECK(a1.value == 1.0);
  const auto a2 = arithmetic_factor(2, 1000000, t);
  CHECK(std::abs(std::log(a2.value / (6.0 / (M_PI * M_PI)))) <= a2.tail_bound + 1e-12);
  CHECK_THROWS_AS(euler_product([](std::uint32_t) { return -1.0; }, 100, 2.0, 1.0, t), DomainError);
}

TEST_CASE("Stirling window for the moment constants") {
  const PrimeTable t(1000000);
  double prev_up = 0.0, prev_lo = 0.0;
  bool first = true;
  for (double k : {4.0, 8.0, 16.0}) {
    const auto c = moment_constants(k, 1000000, t);
    const double s = k * k * std::log(k);
    const double up = c.upper.log_value / s, lo = c.lower.log_value / s;
    CHECK(c.upper.log_value >= c.lower.log_value);
    if (k == 4.0) CHECK(c.upper.log_value <= -16.0 * std::log(4.0) * 0.5);
    if (!first) {
      CHECK(std::abs(up + 1.0) < std::abs(prev_up + 1.0));
      CHECK(std::abs(lo + 2.0) < std::abs(prev_lo + 2.0));
    }
    prev_up = up;
    prev_lo = lo;
    first = false;
  }
}

TEST_CASE("Omega classes") {
  const PrimeTable t(1000000);
  const auto c100 = omega_class_counts(100, t);
  CHECK(c100[1] == 25);
  CHECK(c100[2] == 34);
  std::uint64_t brute2 = 0;
  for (std::uint64_t n = 2; n <= 100; ++n) brute2 += factorize(n, t).big_omega == 2;
  CHECK(brute2 == 34);
  const auto c = omega_class_counts(1000000, t);
  CHECK(std::accumulate(c.begin(), c.end(), std::uint64_t{0}) == 1000000);
}
