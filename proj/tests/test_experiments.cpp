#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "hardyp/bounds.hpp"
#include "hardyp/errors.hpp"
#include "hardyp/experiments.hpp"

using namespace hardyp;

namespace {

double harmonic(std::uint64_t N) {
  long double s = 0.0L;
  for (std::uint64_t n = N; n >= 1; --n) s += 1.0L / static_cast<long double>(n);
  return static_cast<double>(s);
}

}  // namespace

TEST_CASE("pseudomoment examples") {
  const PrimeTable t(1000);
  const auto r10 = pseudomoment(10, 1.0, 1.0, PseudomomentMethod::ExactEven, std::nullopt, t);
  CHECK(r10.value == doctest::Approx(7381.0 / 2520.0).epsilon(1e-14));
  CHECK(r10.std_error == 0.0);
  CHECK(pseudomoment(2, 2.0, 1.0, PseudomomentMethod::ExactEven, std::nullopt, t).value == doctest::Approx(3.25).epsilon(1e-15));
  CHECK_THROWS_AS(pseudomoment(10, 1.5, 1.0, PseudomomentMethod::ExactEven, std::nullopt, t), InvalidArgument);
  for (std::uint64_t N : {1ULL, 7ULL, 100ULL, 1000ULL}) {
    const auto r = pseudomoment(N, 1.0, 1.0, PseudomomentMethod::ExactEven, std::nullopt, t);
    CHECK(std::abs(r.value - harmonic(N)) <= 1e-12 * harmonic(N));
  }
}

TEST_CASE("pseudomoments are monotone in N") {
  const PrimeTable t(2000);
  for (double k : {1.0, 2.0, 3.0}) {
    double prev = 0.0;
    for (std::uint64_t N = 1; N <= 300; N += 13) {
      const double v = pseudomoment(N, k, 1.0, PseudomomentMethod::ExactEven, std::nullopt, t).value;
      CHECK(v > prev);
      prev = v;
    }
  }
}

TEST_CASE("exact and Monte Carlo pseudomoments agree") {
  const PrimeTable t(1000);
  int good = 0, total = 0;
  for (std::uint64_t N : {5ULL, 20ULL, 50ULL, 100ULL, 200ULL}) {
    const auto ex = pseudomoment(N, 2.0, 1.0, PseudomomentMethod::ExactEven, std::nullopt, t);
    const auto mc = pseudomoment(N, 2.0, 1.0, PseudomomentMethod::MonteCarlo, MonteCarloOptions{100000, N, 1}, t);
    good += std::abs(ex.value - mc.value) <= 3 * mc.std_error;
    ++total;
    CHECK(mc.std_error > 0.0);
  }
  CHECK(good >= total - 1);
  // Alpha > 1 takes the Z_{N,alpha} route.
  const auto a = pseudomoment(30, 1.0, 2.0, PseudomomentMethod::ExactEven, std::nullopt, t);
  double brute = 0.0;
  for (std::uint64_t n = 1; n <= 30; ++n) brute += std::pow(divisor_alpha(n, 2.0, t), 2) / n;
  CHECK(a.value == doctest::Approx(brute).epsilon(1e-13));
}

TEST_CASE("pseudomoment scans") {
  const PrimeTable t(1000000);
  const auto s1 = pseudomoment_scan(1.0, 1.0, {100, 1000, 10000, 100000, 1000000}, PseudomomentMethod::ExactEven,
                                    std::nullopt, t);
  CHECK(s1.slope >= 0.9);
  CHECK(s1.slope <= 1.1);
  REQUIRE(s1.records.size() == 5);
  CHECK(s1.records[2].params["N"] == 10000);
  CHECK_THROWS_AS(pseudomoment_scan(1.0, 1.0, {10, 100}, PseudomomentMethod::ExactEven, std::nullopt, t),
                  InvalidArgument);
  CHECK_THROWS_AS(pseudomoment_scan(1.0, 1.0, {10, 100, 50, 1000}, PseudomomentMethod::ExactEven, std::nullopt, t),
                  InvalidArgument);
  const auto g = geometric_grid(100, 10000, 5);
  CHECK(g == std::vector<std::uint64_t>{100, 316, 1000, 3162, 10000});
  // Worker count does not change the records.
  const auto mc = MonteCarloOptions{4000, 5, 1};
  const auto a = pseudomoment_scan(0.5, 1.0, {10, 20, 40, 80}, PseudomomentMethod::MonteCarlo, mc, t, 1);
  const auto b = pseudomoment_scan(0.5, 1.0, {10, 20, 40, 80}, PseudomomentMethod::MonteCarlo, mc, t, 4);
  for (std::size_t i = 0; i < a.records.size(); ++i) CHECK(a.records[i].value == b.records[i].value);
  CHECK(a.slope == b.slope);
}

TEST_CASE("moment constant window") {
  const PrimeTable t(1000000);
  const auto r = moment_window_check(1.0, 1000000, std::nullopt, t);
  CHECK(r.ratio == doctest::Approx(harmonic(1000000) / std::log(1e6)).epsilon(1e-12));
  CHECK(r.ratio == doctest::Approx(1.0418).epsilon(1e-4));
  CHECK(r.extra["upper"]["value"] == 1.0);
  CHECK(r.extra["in_window"] == true);
  const auto r10 = moment_window_check(1.0, 10, std::nullopt, t);
  CHECK(r10.ratio == doctest::Approx(1.272).epsilon(1e-3));
  CHECK(r10.extra["in_window"] == true);
}

TEST_CASE("partial-sum witness") {
  const PrimeTable t(1000);
  for (double p : {0.5, 0.75}) {
    for (unsigned k = 1; k <= 4; ++k) {
      const auto r = partial_sum_witness(p, k, MonteCarloOptions{20000, 10u + k, 1}, t);
      CHECK(r.extra["coefficient_ok"] == true);
      CHECK(r.extra["witness"]["status"] != "violation");
      CHECK(r.extra["a_M"].get<double>() == doctest::Approx(std::pow(c1p_exact(p), k)).epsilon(1e-12));
    }
  }
  const auto r3 = partial_sum_witness(0.5, 3, MonteCarloOptions{2000, 1, 1}, t);
  CHECK(r3.extra["a_M"].get<double>() == doctest::Approx(std::pow(2 * std::pow(0.75, 1.5), 3)).epsilon(1e-12));
  CHECK_THROWS_AS(partial_sum_witness(0.5, 6, MonteCarloOptions{2000, 1, 1}, t), ResourceError);
}

TEST_CASE("partial-sum ratio probe") {
  const PrimeTable t(1000);
  const auto z4 = generate(ZetaPartial{4}, t);
  const auto r = snorm_ratio_probe(z4, 2, 2.0, MonteCarloOptions{1000, 1, 1}, t);
  CHECK(r.ratio == doctest::Approx(std::sqrt(1.5 / (1 + 0.5 + 1.0 / 3 + 0.25))).epsilon(1e-14));
  CHECK(r.std_error == 0.0);
  const auto f = generate(EulerFactorPower{7, 1.0, 50}, t);
  const auto q = snorm_ratio_probe(f, 10, 1.0, MonteCarloOptions{20000, 2, 1}, t);
  CHECK(q.std_error > 0.0);
  CHECK(q.ratio > 0.0);
}

TEST_CASE("maximal order of C(n,p)") {
  const PrimeTable t(10000);
  const auto a = maximal_order_scan(10000, 0.5, t);
  CHECK(a.value >= std::log(c1p_exact(0.5)) - 1e-12);
  const auto b = maximal_order_scan(10000, 0.9, t);
  CHECK(b.value < a.value);
  CHECK(a.extra["primorials"].size() >= 4);
}

TEST_CASE("Omega concentration") {
  const PrimeTable t(1000000);
  const auto r = omega_concentration(1000000, 2.0, t);
  const auto mode = r.extra["mode"].get<int>();
  CHECK((mode == 2 || mode == 3));
  CHECK(r.extra["total_matches"] == true);
  CHECK(omega_concentration(10000, 10.0, t).value == 0.0);
  CHECK_THROWS_AS(omega_concentration(10, 2.0, t), InvalidArgument);
}

TEST_CASE("homogeneous energy") {
  const PrimeTable t(1000);
  const auto rs = homogeneous_energy(100, 2.0, 0.5, MonteCarloOptions{5000, 3, 1}, t);
  REQUIRE(rs.size() >= 3);
  for (const auto& r : rs) {
    CHECK(r.extra["reconstruction_exact"] == true);
    CHECK(r.extra["bound_check"]["status"] != "violation");
  }
}

TEST_CASE("average order of Phi_alpha") {
  const PrimeTable t(10000000);
  for (double alpha : {1.5, 2.5}) {
    const auto rs = average_order_ratio({100000, 10000000}, alpha, t);
    REQUIRE(rs.size() == 2);
    const double d5 = std::abs(rs[0].ratio - 1.0), d7 = std::abs(rs[1].ratio - 1.0);
    CHECK(d7 < 0.35);
    CHECK(d7 < d5);
  }
  // At alpha = 1 every Phi is 1 and the ratio is floor(x)/x.
  const auto one = average_order_ratio({1000}, 1.0, t);
  CHECK(one[0].ratio == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("Euler constants by kind") {
  const PrimeTable t(100000);
  const auto a = euler_constant("arithmetic", 2.0, 100000, t);
  CHECK(a.value == doctest::Approx(6 / (M_PI * M_PI)).epsilon(1e-4));
  CHECK(euler_constant("g-alpha", 3.0, 100000, t).value == 1.0);
  CHECK(euler_constant("moment", 1.0, 100000, t).value == 1.0);
  CHECK_THROWS_AS(euler_constant("other", 1.0, 1000, t), InvalidArgument);
}

TEST_CASE("fuzz harness") {
  const PrimeTable t(1000);
  FuzzConfig cfg;
  cfg.corpus = 40;
  cfg.samples = 4000;
  const auto s = hl_fuzz_suite(cfg, t);
  CHECK(s.violation == 0);
  CHECK(s.pass + s.pass_within_slack == s.cases.size());
  cfg.inverted = true;
  const auto inv = hl_fuzz_suite(cfg, t);
  CHECK(inv.violation > inv.cases.size() / 2);
  bool has_reproducer = false;
  for (const auto& c : inv.cases) {
    if (c.result.status == CheckStatus::Violation) has_reproducer |= !c.reproducer.is_null();
  }
  CHECK(has_reproducer);
  cfg.inverted = false;
  cfg.checks = {"burbea"};
  const auto only = hl_fuzz_suite(cfg, t);
  for (const auto& c : only.cases) CHECK(c.check == "burbea");
  cfg.checks = {"nonsense"};
  CHECK_THROWS_AS(hl_fuzz_suite(cfg, t), InvalidArgument);
  // Thread count does not change outcomes.
  cfg.checks.clear();
  cfg.corpus = 10;
  cfg.threads = 3;
  const auto th = hl_fuzz_suite(cfg, t);
  cfg.threads = 1;
  const auto one = hl_fuzz_suite(cfg, t);
  REQUIRE(th.cases.size() == one.cases.size());
  for (std::size_t i = 0; i < th.cases.size(); ++i) CHECK(th.cases[i].result.lhs == one.cases[i].result.lhs);
}

TEST_CASE("record serialization") {
  ExperimentRecord r;
  r.experiment = "x";
  r.params = Json{{"N", 10}, {"k", 2.0}, {"method", "ExactEven"}};
  r.value = 0.1;
  r.normalizer = 3.0;
  r.set_ratio();
  const auto back = record_from_json(to_json(r));
  CHECK(back.value == r.value);
  CHECK(back.ratio == r.ratio);
  CHECK(back.params == r.params);
  CHECK(csv_header() == "experiment,N,k,alpha,p,method,samples,seed,value,normalizer,ratio,std_error");
  CHECK(csv_row(r) == "x,10,2,,,ExactEven,,,0.10000000000000001,3,0.033333333333333333,0");
}
