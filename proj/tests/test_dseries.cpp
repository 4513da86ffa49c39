#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>
#include <random>

#include "hardyp/dseries.hpp"
#include "hardyp/errors.hpp"
#include "hardyp/norms.hpp"

using namespace hardyp;

namespace {

// Plain double loop over divisor pairs.
std::map<std::uint64_t, Complex> brute_multiply(const DirichletPolynomial& f, const DirichletPolynomial& g) {
  std::map<std::uint64_t, Complex> out;
  for (const auto& a : f.terms()) {
    for (const auto& b : g.terms()) out[a.n * b.n] += a.a * b.a;
  }
  return out;
}

// Product of lifted monomials by adding exponent vectors.
std::map<std::vector<std::pair<std::uint32_t, std::uint32_t>>, Complex> lifted_product(
    const std::vector<BohrMonomial>& f, const std::vector<BohrMonomial>& g) {
  std::map<std::vector<std::pair<std::uint32_t, std::uint32_t>>, Complex> out;
  for (const auto& a : f) {
    for (const auto& b : g) out[(a.kappa + b.kappa).entries] += a.coefficient * b.coefficient;
  }
  return out;
}

bool close(Complex a, Complex b, double tol = 1e-12) { return std::abs(a - b) <= tol * std::max(1.0, std::abs(b)); }

}  // namespace

TEST_CASE("construction normalizes terms") {
  const auto f = DirichletPolynomial::from_terms({{5, 1.0}, {2, 2.0}, {5, -1.0}, {3, 0.0}, {2, Complex(0, 1)}});
  REQUIRE(f.size() == 1);
  CHECK(f.terms()[0].n == 2);
  CHECK(f.coefficient(2) == Complex(2, 1));
  CHECK(f.coefficient(5) == Complex(0));
  CHECK(f.length() == 2);
  CHECK(DirichletPolynomial().length() == 0);
  CHECK_THROWS_AS(DirichletPolynomial::from_terms({{0, 1.0}}), InvalidArgument);
  CHECK_THROWS_AS(DirichletPolynomial::from_terms({{1, std::nan("")}}), InvalidArgument);
}

TEST_CASE("generators") {
  const PrimeTable t(1000);
  const auto z3 = generate(ZetaPartial{3}, t);
  CHECK(z3.coefficient(1) == Complex(1));
  CHECK(z3.coefficient(2).real() == doctest::Approx(std::pow(2.0, -0.5)));
  CHECK(z3.coefficient(3).real() == doctest::Approx(std::pow(3.0, -0.5)));

  const auto z42 = generate(ZetaAlphaPartial{4, 2.0}, t);
  CHECK(z42.coefficient(2).real() == doctest::Approx(2 * std::pow(2.0, -0.5)));
  CHECK(z42.coefficient(3).real() == doctest::Approx(2 * std::pow(3.0, -0.5)));
  CHECK(z42.coefficient(4).real() == doctest::Approx(1.5));

  const auto ex = generate(ExtremalProduct{0.5, 1, 2}, t);
  CHECK(ex.coefficient(1).real() == doctest::Approx(0.5625));
  CHECK(ex.coefficient(2).real() == doctest::Approx(2 * std::pow(0.75, 1.5)));

  // Euler factor power at alpha = 1 over primes <= 5 is the 5-smooth part of Z_N.
  const auto ep = generate(EulerFactorPower{5, 1.0, 100}, t);
  const auto z100 = generate(ZetaPartial{100}, t);
  const auto a3 = abschnitt(z100, 3, t);
  REQUIRE(ep.size() == a3.size());
  for (std::size_t i = 0; i < ep.size(); ++i) {
    CHECK(ep.terms()[i].n == a3.terms()[i].n);
    CHECK(close(ep.terms()[i].a, a3.terms()[i].a));
  }

  for (const char* text : {"zeta:N=10", "zeta-alpha:N=20,alpha=1.5", "euler-power:x=7,alpha=2,N=50",
                           "extremal:p=0.5,k=3,N=30", "phi-beta:beta=1,N=40", "duality:p=1,x=11,N=60"}) {
    const auto spec = parse_generator(text);
    CHECK(parse_generator(format_generator(spec)).index() == spec.index());
    CHECK(generate(parse_generator(format_generator(spec)), t) == generate(spec, t));
  }
  CHECK_THROWS_AS(parse_generator("zeta:M=3"), InvalidArgument);
  CHECK_THROWS_AS(parse_generator("nope:N=3"), InvalidArgument);
  CHECK_THROWS_AS(generate(ZetaPartial{5000}, t), TableTooSmall);
}

TEST_CASE("extremal factor has unit norm on the circle") {
  for (double p : {0.25, 0.5, 0.75, 1.0, 2.0 / 3.0}) {
    const double alpha = 2.0 / p;
    if (std::floor(alpha) != alpha) continue;
    std::vector<Complex> c;
    for (std::uint32_t e = 0; e <= static_cast<std::uint32_t>(alpha); ++e) c.emplace_back(extremal_factor_coefficient(p, e));
    const auto n = disc_norm(DiscPolynomial(c), p, 8192);
    CHECK(std::abs(n.value - 1.0) < 1e-8);
  }
  // Non-integer 2/p: quadrature of |sqrt(1-p/2) + w sqrt(p/2)|^2 directly.
  for (double p : {0.3, 0.7, 1.5}) {
    const double a = std::sqrt(1 - p / 2), b = std::sqrt(p / 2);
    double sum = 0.0;
    for (int i = 0; i < 4096; ++i) sum += std::norm(a + b * std::polar(1.0, 2 * M_PI * i / 4096));
    CHECK(std::abs(sum / 4096 - 1.0) < 1e-12);
  }
}

TEST_CASE("multiplication matches brute force and the lift") {
  const PrimeTable t(1000000);
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 40; ++trial) {
    const auto f = random_polynomial(rng, 1 + rng() % 100, 1000);
    const auto g = random_polynomial(rng, 1 + rng() % 100, 1000);
    const auto fg = dirichlet_multiply(f, g);
    const auto brute = brute_multiply(f, g);
    std::size_t nonzero = 0;
    for (const auto& [n, c] : brute) {
      nonzero += c != Complex(0);
      CHECK(close(fg.coefficient(n), c));
    }
    CHECK(fg.size() == nonzero);

    const auto lifted = lifted_product(bohr_lift(f, t), bohr_lift(g, t));
    const auto lift_fg = bohr_lift(fg, t);
    CHECK(lift_fg.size() <= lifted.size());
    for (const auto& m : lift_fg) CHECK(close(m.coefficient, lifted.at(m.kappa.entries)));

    double l2 = 0.0;
    for (const auto& [n, c] : brute) l2 += std::norm(c);
    CHECK(convolution_l2_squared(f, g) == doctest::Approx(l2).epsilon(1e-12));
    double weighted = 0.0;
    for (const auto& [n, c] : brute) weighted += std::norm(c) / static_cast<double>(n);
    CHECK(convolution_l2_squared(f, g, 1.0) == doctest::Approx(weighted).epsilon(1e-12));

    const auto trunc = dirichlet_multiply(f, g, 5000);
    CHECK(trunc == partial_sum(fg, 5000));
  }
  const auto z2 = generate(ZetaPartial{2}, t);
  const auto sq = dirichlet_power(z2, 2);
  CHECK(sq.size() == 3);
  CHECK(sq.coefficient(2).real() == doctest::Approx(std::sqrt(2.0)));
  CHECK(sq.coefficient(4).real() == doctest::Approx(0.5));
  CHECK(dirichlet_power(z2, 3) == dirichlet_multiply(sq, z2));
}

TEST_CASE("operators are linear projections") {
  const PrimeTable t(2000);
  std::mt19937_64 rng(3);
  const Complex c(0.3, -1.7);
  for (int trial = 0; trial < 30; ++trial) {
    const auto f = random_polynomial(rng, 40, 2000);
    const auto g = random_polynomial(rng, 40, 2000);
    const auto eq = [](const DirichletPolynomial& a, const DirichletPolynomial& b) {
      const auto d = a + (-1.0) * b;
      double m = 0.0;
      for (const auto& x : d.terms()) m = std::max(m, std::abs(x.a));
      return m < 1e-12;
    };
    for (std::uint64_t N : {1ULL, 57ULL, 999ULL}) {
      CHECK(eq(partial_sum(f + c * g, N), partial_sum(f, N) + c * partial_sum(g, N)));
      CHECK(partial_sum(partial_sum(f, N), N) == partial_sum(f, N));
    }
    DirichletPolynomial sum_proj;
    for (unsigned m = 0; m <= 11; ++m) {
      const auto pm = homogeneous_projection(f, m, t);
      CHECK(homogeneous_projection(pm, m, t) == pm);
      CHECK(eq(homogeneous_projection(f + c * g, m, t), pm + c * homogeneous_projection(g, m, t)));
      sum_proj = sum_proj + pm;
    }
    CHECK(eq(sum_proj, f));
    std::size_t prev = 0;
    for (std::uint32_t m = 1; m <= 303; m += 10) {
      const auto am = abschnitt(f, m, t);
      CHECK(abschnitt(am, m, t) == am);
      CHECK(eq(abschnitt(f + c * g, m, t), am + c * abschnitt(g, m, t)));
      CHECK(am.size() >= prev);
      prev = am.size();
    }
    CHECK(abschnitt(f, 303, t) == f);
  }
  CHECK_THROWS_AS(abschnitt(DirichletPolynomial::ones({1}), 0, t), InvalidArgument);
}

TEST_CASE("Abschnitt monotonicity") {
  const PrimeTable t(1000);
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 10; ++trial) {
    const auto f = random_polynomial(rng, 30, 1000);
    double prev_l2 = 0.0;
    std::vector<DirichletPolynomial> sections;
    for (std::uint32_t m = 1; m <= 168; m = m < 8 ? m + 1 : m * 2) {
      sections.push_back(abschnitt(f, std::min<std::uint32_t>(m, 168), t));
      const double v = l2_norm(sections.back()).value;
      CHECK(v >= prev_l2);
      prev_l2 = v;
    }
    const std::vector<double> ps = {0.5, 1.0, 2.0, 4.0};
    const auto est = mc_norms_joint(sections, ps, MonteCarloOptions{20000, 100u + trial, 1}, t);
    for (std::size_t j = 0; j < ps.size(); ++j) {
      for (std::size_t i = 1; i < sections.size(); ++i) {
        const auto& a = est[i - 1][j];
        const auto& b = est[i][j];
        CHECK(a.value <= b.value + 3.0 * std::hypot(a.value_std_error(), b.value_std_error()) + 1e-12);
      }
    }
  }
}
