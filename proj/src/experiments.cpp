#include "hardyp/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>

#include "hardyp/bounds.hpp"
#include "hardyp/errors.hpp"
#include "hardyp/parallel.hpp"
#include "hardyp/rng.hpp"
#include "hardyp/summation.hpp"

namespace hardyp {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string fmt17(double v) {
  if (!std::isfinite(v)) return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csv_cell(const Json& v) {
  if (v.is_null()) return "";
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_unsigned()) return std::to_string(v.get<std::uint64_t>());
  if (v.is_number_integer()) return std::to_string(v.get<std::int64_t>());
  if (v.is_number_float()) return fmt17(v.get<double>());
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  return v.dump();
}

bool is_positive_integer(double k) { return k >= 1.0 && std::floor(k) == k; }

void put_mc(Json& params, const std::optional<MonteCarloOptions>& mc) {
  if (mc) {
    params["samples"] = mc->samples;
    params["seed"] = mc->seed;
  } else {
    params["samples"] = nullptr;
    params["seed"] = nullptr;
  }
}

void finish_ratio(ExperimentRecord& r) {
  r.ratio = (r.normalizer != 0.0 && std::isfinite(r.normalizer)) ? r.value / r.normalizer : kNaN;
}

DirichletPolynomial zeta_alpha(std::uint64_t N, double alpha, const PrimeTable& table) {
  if (alpha == 1.0) return generate(ZetaPartial{N}, table);
  return generate(ZetaAlphaPartial{N, alpha}, table);
}

std::vector<std::uint64_t> primorials_up_to(std::uint64_t X, const PrimeTable& table) {
  std::vector<std::uint64_t> out;
  std::uint64_t P = 1;
  for (const auto p : table.primes()) {
    if (P > X / p) break;
    P *= p;
    out.push_back(P);
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------

Json to_json(const ExperimentRecord& r) {
  return Json{{"experiment", r.experiment},
              {"params", r.params},
              {"value", number_or_null(r.value)},
              {"normalizer", number_or_null(r.normalizer)},
              {"ratio", number_or_null(r.ratio)},
              {"std_error", number_or_null(r.std_error)},
              {"extra", r.extra}};
}

ExperimentRecord record_from_json(const Json& j) {
  auto num = [&](const char* key) {
    const auto& v = j.at(key);
    return v.is_null() ? kNaN : v.get<double>();
  };
  try {
    ExperimentRecord r;
    r.experiment = j.at("experiment").get<std::string>();
    r.params = j.at("params");
    r.value = num("value");
    r.normalizer = num("normalizer");
    r.ratio = num("ratio");
    r.std_error = num("std_error");
    r.extra = j.value("extra", Json::object());
    return r;
  } catch (const Json::exception& ex) {
    throw InvalidArgument(std::string("malformed experiment record: ") + ex.what());
  }
}

std::string csv_header() {
  std::string out;
  for (std::size_t i = 0; i < kCsvColumns.size(); ++i) out += (i ? "," : "") + kCsvColumns[i];
  return out;
}

std::string csv_row(const ExperimentRecord& r) {
  std::string out = r.experiment;
  for (const char* key : {"N", "k", "alpha", "p", "method", "samples", "seed"}) {
    out += ",";
    if (r.params.contains(key)) out += csv_cell(r.params[key]);
  }
  for (const double v : {r.value, r.normalizer, r.ratio, r.std_error}) out += "," + fmt17(v);
  return out;
}

PseudomomentMethod parse_pseudomoment_method(const std::string& s) {
  if (s == "exact" || s == "ExactEven") return PseudomomentMethod::ExactEven;
  if (s == "mc" || s == "MonteCarlo") return PseudomomentMethod::MonteCarlo;
  throw InvalidArgument("unknown pseudomoment method '" + s + "' (use exact or mc)");
}

std::string to_string(PseudomomentMethod m) {
  return m == PseudomomentMethod::ExactEven ? "ExactEven" : "MonteCarlo";
}

// ---------------------------------------------------------------------------
// Pseudomoments

ExperimentRecord pseudomoment(std::uint64_t N, double k, double alpha, PseudomomentMethod method,
                              const std::optional<MonteCarloOptions>& mc, const PrimeTable& table) {
  if (N < 1) throw InvalidArgument("pseudomoment requires N >= 1");
  if (!(k > 0.0) || !std::isfinite(k)) throw InvalidArgument("pseudomoment requires k > 0");
  if (!(alpha >= 1.0) || !std::isfinite(alpha)) throw InvalidArgument("pseudomoment requires alpha >= 1");
  if (method == PseudomomentMethod::ExactEven && !is_positive_integer(k)) {
    throw InvalidArgument("exact pseudomoments need a positive integer k");
  }
  if (method == PseudomomentMethod::MonteCarlo && !mc) {
    throw InvalidArgument("Monte Carlo pseudomoments need samples and a seed");
  }

  ExperimentRecord r;
  r.experiment = "pseudomoment";
  r.params = Json{{"N", N}, {"k", k}, {"alpha", alpha}, {"method", to_string(method)}};
  put_mc(r.params, method == PseudomomentMethod::MonteCarlo ? mc : std::nullopt);

  if (method == PseudomomentMethod::ExactEven) {
    // Coefficients of Z^k are (W^k)_m / sqrt(m) with W = sum d_alpha(n) n^{-s}; for
    // integer alpha the convolution runs on integers and only the final 1/m rounds.
    std::vector<Term> w;
    w.reserve(N);
    for (std::uint64_t n = 1; n <= N; ++n) w.push_back({n, Complex(alpha == 1.0 ? 1.0 : divisor_alpha(n, alpha, table), 0.0)});
    const auto W = DirichletPolynomial::from_terms(std::move(w));
    const auto ku = static_cast<unsigned>(k);
    r.value = ku == 1 ? convolution_l2_squared(W, DirichletPolynomial::ones({1}), 1.0)
                      : convolution_l2_squared(dirichlet_power(W, ku - 1), W, 1.0);
  } else {
    const DirichletPolynomial Z = zeta_alpha(N, alpha, table);
    const NormEstimate e = mc_norm(Z, 2.0 * k, *mc, table);
    r.value = e.power_mean;
    r.std_error = e.std_error;
  }
  r.normalizer = std::pow(std::log(static_cast<double>(N)), k * k * alpha * alpha);
  finish_ratio(r);
  return r;
}

std::vector<std::uint64_t> geometric_grid(double from, double to, std::size_t count) {
  if (count < 2 || !(from >= 1.0) || !(to > from)) throw InvalidArgument("geometric grid needs 1 <= from < to and count >= 2");
  std::vector<std::uint64_t> out;
  for (std::size_t i = 0; i < count; ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(count - 1);
    out.push_back(static_cast<std::uint64_t>(std::llround(from * std::pow(to / from, t))));
  }
  return out;
}

ScanResult pseudomoment_scan(double k, double alpha, const std::vector<std::uint64_t>& grid,
                             PseudomomentMethod method, const std::optional<MonteCarloOptions>& mc,
                             const PrimeTable& table, unsigned threads) {
  if (grid.size() < 4) throw InvalidArgument("pseudomoment scan needs at least 4 grid points");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (grid[i] < 2) throw InvalidArgument("pseudomoment scan grid points must be >= 2");
    if (i > 0 && grid[i] <= grid[i - 1]) throw InvalidArgument("pseudomoment scan grid must be strictly increasing");
  }
  ScanResult out;
  out.records.resize(grid.size());
  parallel_for(grid.size(), threads, [&](std::size_t i) {
    std::optional<MonteCarloOptions> local = mc;
    if (local) {
      local->seed = derive_seed(mc->seed, i);
      local->threads = 1;
    }
    out.records[i] = pseudomoment(grid[i], k, alpha, method, local, table);
  });

  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    xs.push_back(std::log(std::log(static_cast<double>(grid[i]))));
    ys.push_back(std::log(out.records[i].value));
  }
  const double n = static_cast<double>(xs.size());
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  out.slope = sxy / sxx;
  out.intercept = my - out.slope * mx;
  return out;
}

ExperimentRecord moment_window_check(double k, std::uint64_t N, const std::optional<MonteCarloOptions>& mc,
                                        const PrimeTable& table, std::uint64_t prime_limit) {
  if (!(k >= 1.0)) throw InvalidArgument("moment_window_check requires k >= 1");
  if (N < 2) throw InvalidArgument("moment_window_check requires N >= 2");
  const bool exact = is_positive_integer(k) && !mc;
  ExperimentRecord r = pseudomoment(N, k, 1.0, exact ? PseudomomentMethod::ExactEven : PseudomomentMethod::MonteCarlo,
                                    mc, table);
  r.experiment = "moment-window";
  const auto c = moment_constants(k, std::min(prime_limit, table.limit()), table);
  const double lo = c.lower.value / 10.0;
  const double hi = c.upper.value * 10.0;
  r.extra["upper"] = to_json(c.upper);
  r.extra["lower"] = to_json(c.lower);
  r.extra["window"] = Json::array({lo, hi});
  r.extra["in_window"] = r.ratio >= lo && r.ratio <= hi;
  r.extra["note"] = "the constants are limits as N grows; finite-N ratios are not claimed to lie between them";
  return r;
}

// ---------------------------------------------------------------------------
// Partial sums

ExperimentRecord partial_sum_witness(double p, unsigned k, const MonteCarloOptions& mc, const PrimeTable& table) {
  if (!(p > 0.0 && p < 1.0)) throw InvalidArgument("partial_sum_witness requires 0 < p < 1");
  if (k == 0) throw InvalidArgument("partial_sum_witness requires k >= 1");
  std::uint64_t M = 1;
  for (unsigned j = 1; j <= k; ++j) {
    if (j > table.primes().size()) throw ResourceError("primorial needs more primes than the table holds");
    const std::uint64_t q = table.nth_prime(j);
    if (M > table.limit() / q) {
      throw ResourceError("primorial of " + std::to_string(k) + " primes exceeds the prime table limit " +
                          std::to_string(table.limit()));
    }
    M *= q;
  }
  const auto gen = generate_with_metadata(ExtremalProduct{p, k, M}, table);
  const DirichletPolynomial& f = gen.poly;
  const std::vector<DirichletPolynomial> polys{partial_sum(f, M - 1 == 0 ? 1 : M - 1), f};
  const auto est = mc_norms_joint(polys, std::span<const double>(&p, 1), mc, table);
  const NormEstimate& below = est[0][0];
  const NormEstimate& at = est[1][0];

  const double aM = f.coefficient(M).real();
  const double expected = std::pow(c1p_exact(p), static_cast<double>(k));
  const double target = std::pow(expected, p) / 2.0;
  const bool at_is_max = at.power_mean >= below.power_mean;
  const NormEstimate& best = at_is_max ? at : below;
  const auto witness = check_inequality(target, best.power_mean, best.std_error);
  const auto triangle =
      check_inequality(std::pow(std::abs(aM), p), below.power_mean + at.power_mean,
                       std::hypot(below.std_error, at.std_error));

  ExperimentRecord r;
  r.experiment = "partial-sum-witness";
  r.params = Json{{"N", M}, {"k", k}, {"p", p}, {"method", "MonteCarlo"}};
  put_mc(r.params, mc);
  r.value = best.power_mean;
  r.std_error = best.std_error;
  r.normalizer = target;
  finish_ratio(r);
  r.extra["a_M"] = aM;
  r.extra["expected_a_M"] = expected;
  r.extra["coefficient_error"] = std::abs(aM - expected);
  r.extra["coefficient_ok"] = std::abs(aM - expected) <= 1e-10;
  r.extra["S_prev_power_mean"] = to_json(below);
  r.extra["S_M_power_mean"] = to_json(at);
  r.extra["witness"] = to_json(witness);
  r.extra["triangle"] = to_json(triangle);
  r.extra["truncated_l2_mass"] = gen.truncated_l2_mass ? number_or_null(*gen.truncated_l2_mass) : Json(nullptr);
  return r;
}

ExperimentRecord snorm_ratio_probe(const DirichletPolynomial& f, std::uint64_t N, double p,
                                   const MonteCarloOptions& mc, const PrimeTable& table) {
  if (N < 1) throw InvalidArgument("snorm_ratio_probe requires N >= 1");
  if (!(p > 0.0)) throw InvalidArgument("snorm_ratio_probe requires p > 0");
  const DirichletPolynomial s = partial_sum(f, N);
  ExperimentRecord r;
  r.experiment = "snorm-ratio";
  r.params = Json{{"N", N}, {"p", p}};
  NormEstimate top, bottom;
  if (p == 2.0) {
    r.params["method"] = "ExactL2";
    put_mc(r.params, std::nullopt);
    top = l2_norm(s);
    bottom = l2_norm(f);
  } else {
    r.params["method"] = "MonteCarlo";
    put_mc(r.params, mc);
    const std::vector<DirichletPolynomial> polys{s, f};
    const auto est = mc_norms_joint(polys, std::span<const double>(&p, 1), mc, table);
    top = est[0][0];
    bottom = est[1][0];
  }
  r.value = top.value;
  r.normalizer = bottom.value;
  finish_ratio(r);
  if (top.value > 0.0 && bottom.value > 0.0) {
    r.std_error = std::abs(r.ratio) * std::hypot(top.value_std_error() / top.value, bottom.value_std_error() / bottom.value);
  }
  r.extra["partial_sum_norm"] = to_json(top);
  r.extra["full_norm"] = to_json(bottom);
  r.extra["length"] = f.length();
  return r;
}

// ---------------------------------------------------------------------------

ExperimentRecord maximal_order_scan(std::uint64_t X, double p, const PrimeTable& table) {
  if (X < 16) throw InvalidArgument("maximal_order_scan requires X >= 16");
  if (!(p > 0.0 && p < 1.0)) throw InvalidArgument("maximal_order_scan requires 0 < p < 1");
  table.require(X);
  std::vector<double> log_bound(2, 0.0);
  log_bound[1] = std::log(c1p_exact(p));
  auto bound_for = [&](std::uint32_t e) {
    while (log_bound.size() <= e) log_bound.push_back(std::log(ckp_upper_bound(static_cast<unsigned>(log_bound.size()), p).value));
    return log_bound[e];
  };
  auto scaled = [](double logc, std::uint64_t n) {
    const double ln = std::log(static_cast<double>(n));
    return logc / (ln / std::log(ln));
  };

  double best = -std::numeric_limits<double>::infinity();
  std::uint64_t argmax = 0;
  for (std::uint64_t n = 3; n <= X; ++n) {
    double logc = 0.0;
    std::uint64_t m = n;
    while (m > 1) {
      const std::uint32_t q = table.smallest_factor(m);
      std::uint32_t e = 0;
      while (m % q == 0) {
        m /= q;
        ++e;
      }
      logc += bound_for(e);
    }
    const double v = scaled(logc, n);
    if (v > best) {
      best = v;
      argmax = n;
    }
  }

  Json prim = Json::array();
  bool dominates = true;
  for (const auto P : primorials_up_to(X, table)) {
    if (P < 3) continue;
    const double v = scaled(std::log(cnp_upper_bound(P, p, table)), P);
    prim.push_back(Json{{"n", P}, {"value", v}});
    dominates = dominates && best >= v;
  }
  const auto fact = factorize(argmax, table);
  Json factors = Json::array();
  for (const auto& pp : fact.factors) factors.push_back(Json::array({pp.prime, pp.exponent}));

  ExperimentRecord r;
  r.experiment = "maximal-order";
  r.params = Json{{"N", X}, {"p", p}, {"method", "scan"}};
  r.value = best;
  r.normalizer = log_bound[1];
  finish_ratio(r);
  r.extra["argmax"] = argmax;
  r.extra["argmax_factors"] = factors;
  r.extra["argmax_exact"] = fact.square_free();
  r.extra["square_free_floor"] = log_bound[1];
  r.extra["primorials"] = prim;
  r.extra["dominates_primorials"] = dominates;
  return r;
}

ExperimentRecord omega_concentration(std::uint64_t x, double C, const PrimeTable& table) {
  if (x < 16) throw InvalidArgument("omega_concentration requires x >= 16 so that log log log x > 0");
  if (!(C > 0.0)) throw InvalidArgument("omega_concentration requires C > 0");
  const auto counts = omega_class_counts(x, table);
  const double L = std::log(std::log(static_cast<double>(x)));
  const double width = C * std::sqrt(L * std::log(L));
  const double lo = L - width;
  const double hi = L + width;
  std::uint64_t total = 0, outside = 0;
  std::size_t mode = 0;
  Json hist = Json::array();
  for (std::size_t m = 0; m < counts.size(); ++m) {
    total += counts[m];
    if (counts[m] > counts[mode]) mode = m;
    const double md = static_cast<double>(m);
    if (md < lo || md > hi) outside += counts[m];
    hist.push_back(counts[m]);
  }
  ExperimentRecord r;
  r.experiment = "omega-concentration";
  r.params = Json{{"N", x}, {"C", C}, {"method", "sieve"}};
  r.value = static_cast<double>(outside);
  r.normalizer = static_cast<double>(x) / std::pow(L, 8.0);
  finish_ratio(r);
  r.extra["histogram"] = hist;
  r.extra["mode"] = mode;
  r.extra["total"] = total;
  r.extra["total_matches"] = total == x;
  r.extra["window"] = Json::array({lo, hi});
  r.extra["log_log_x"] = L;
  r.extra["note"] = "exploratory: the concentration bound is asymptotic";
  return r;
}

std::vector<ExperimentRecord> homogeneous_energy(std::uint64_t N, double alpha, double p,
                                                 const MonteCarloOptions& mc, const PrimeTable& table) {
  if (N < 2) throw InvalidArgument("homogeneous_energy requires N >= 2");
  if (!(alpha >= 1.0)) throw InvalidArgument("homogeneous_energy requires alpha >= 1");
  if (!(p > 0.0)) throw InvalidArgument("homogeneous_energy requires p > 0");
  table.require(N);
  std::vector<Term> terms;
  unsigned max_omega = 0;
  for (std::uint64_t n = N / 2 + 1; n <= N; ++n) {
    const auto fact = factorize(n, table);
    double d = 1.0;
    for (const auto& pp : fact.factors) d *= gen_binomial_coefficient(pp.exponent, alpha);
    const double w = d * std::pow(alpha, -fact.big_omega) / std::sqrt(static_cast<double>(n));
    terms.push_back({n, Complex(w, 0.0)});
    max_omega = std::max(max_omega, static_cast<unsigned>(fact.big_omega));
  }
  const DirichletPolynomial D = DirichletPolynomial::from_terms(std::move(terms));
  std::vector<DirichletPolynomial> polys{D};
  DirichletPolynomial rebuilt;
  for (unsigned m = 0; m <= max_omega; ++m) {
    polys.push_back(homogeneous_projection(D, m, table));
    rebuilt = rebuilt + polys.back();
  }
  const bool reconstruction = rebuilt == D;
  const auto est = mc_norms_joint(polys, std::span<const double>(&p, 1), mc, table);
  const NormEstimate& full = est[0][0];

  std::vector<ExperimentRecord> out;
  for (unsigned m = 0; m <= max_omega; ++m) {
    const NormEstimate& e = est[m + 1][0];
    const double K = homogeneous_projection_constant(m, p);
    ExperimentRecord r;
    r.experiment = "homogeneous-energy";
    r.params = Json{{"N", N}, {"alpha", alpha}, {"p", p}, {"m", m}, {"method", "MonteCarlo"}};
    put_mc(r.params, mc);
    r.value = e.value;
    r.std_error = e.value_std_error();
    r.normalizer = K * full.value;
    finish_ratio(r);
    r.extra["terms"] = polys[m + 1].size();
    r.extra["projection_constant"] = K;
    r.extra["full_norm"] = to_json(full);
    r.extra["bound_check"] = to_json(check_inequality(e.value, r.normalizer, std::hypot(r.std_error, K * full.value_std_error())));
    r.extra["reconstruction_exact"] = reconstruction;
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<ExperimentRecord> average_order_ratio(const std::vector<std::uint64_t>& xs, double alpha,
                                                  const PrimeTable& table) {
  if (xs.empty()) return {};
  if (!(alpha >= 1.0)) throw InvalidArgument("average_order_ratio requires alpha >= 1");
  std::vector<std::uint64_t> sorted = xs;
  std::sort(sorted.begin(), sorted.end());
  if (sorted.front() < 3) throw InvalidArgument("average_order_ratio requires x >= 3");
  const std::uint64_t X = sorted.back();
  table.require(X);

  std::vector<double> weight(65);
  for (std::size_t e = 0; e < weight.size(); ++e) weight[e] = phi_disc_weight(e, alpha);
  const auto phi = tabulate_multiplicative(X, table, [&](std::uint32_t, std::uint32_t e) { return weight[e]; });
  const auto G = g_alpha_product(alpha, table.limit(), table);

  std::vector<ExperimentRecord> out;
  CompensatedSum<double> acc;
  std::uint64_t n = 0;
  for (const auto x : sorted) {
    while (n < x) acc.add(phi[++n]);
    const double lx = std::log(static_cast<double>(x));
    ExperimentRecord r;
    r.experiment = "average-order";
    r.params = Json{{"N", x}, {"alpha", alpha}, {"method", "sieve"}};
    r.value = acc.value() / static_cast<double>(x);
    r.normalizer = G.value / std::tgamma(alpha) * std::pow(lx, alpha - 1.0);
    finish_ratio(r);
    r.extra["distance_to_one"] = std::abs(r.ratio - 1.0);
    r.extra["G_alpha_1"] = to_json(G);
    out.push_back(std::move(r));
  }
  return out;
}

ExperimentRecord euler_constant(const std::string& kind, double param, std::uint64_t prime_limit,
                                const PrimeTable& table) {
  ExperimentRecord r;
  r.experiment = "euler-constant";
  const std::uint64_t L = std::min(prime_limit, table.limit());
  if (kind == "moment") {
    const auto c = moment_constants(param, L, table);
    r.params = Json{{"k", param}, {"kind", kind}, {"prime_limit", L}, {"method", "euler-product"}};
    r.value = c.upper.value;
    r.normalizer = c.lower.value;
    r.extra["upper"] = to_json(c.upper);
    r.extra["lower"] = to_json(c.lower);
    r.extra["log_upper_over_k2logk"] = param > 1.0 ? c.upper.log_value / (param * param * std::log(param)) : kNaN;
    r.extra["log_lower_over_k2logk"] = param > 1.0 ? c.lower.log_value / (param * param * std::log(param)) : kNaN;
  } else if (kind == "g-alpha") {
    const auto g = g_alpha_product(param, L, table);
    r.params = Json{{"alpha", param}, {"kind", kind}, {"prime_limit", L}, {"method", "euler-product"}};
    r.value = g.value;
    r.normalizer = 1.0;
    r.extra["product"] = to_json(g);
  } else if (kind == "arithmetic") {
    if (!is_positive_integer(param)) throw InvalidArgument("the arithmetic factor needs a positive integer k");
    const auto a = arithmetic_factor(static_cast<int>(param), L, table);
    r.params = Json{{"k", param}, {"kind", kind}, {"prime_limit", L}, {"method", "euler-product"}};
    r.value = a.value;
    r.normalizer = 1.0;
    r.extra["product"] = to_json(a);
  } else {
    throw InvalidArgument("unknown constant family '" + kind + "' (moment, g-alpha, arithmetic)");
  }
  finish_ratio(r);
  return r;
}

// ---------------------------------------------------------------------------
// Fuzzing

std::vector<std::string> registered_checks() {
  return {"hl-upper", "hl-lower", "squarefree", "helson", "disc-upper", "disc-lower", "burbea"};
}

Json to_json(const FuzzCase& c) {
  Json j{{"case", c.index}, {"seed", c.seed}, {"check", c.check}};
  j["p"] = c.p > 0.0 ? Json(c.p) : Json(nullptr);
  j["result"] = to_json(c.result);
  if (!c.reproducer.is_null()) j["reproducer"] = c.reproducer;
  return j;
}

Json summary_json(const FuzzSummary& s) {
  return Json{{"pass", s.pass},
              {"pass_within_slack", s.pass_within_slack},
              {"violation", s.violation},
              {"cases", s.cases.size()}};
}

FuzzSummary hl_fuzz_suite(const FuzzConfig& config, const PrimeTable& table) {
  const auto names = registered_checks();
  for (const auto& c : config.checks) {
    if (std::find(names.begin(), names.end(), c) == names.end()) {
      throw InvalidArgument("unknown inequality check '" + c + "'");
    }
  }
  for (const double p : config.ps) {
    if (!(p > 0.0) || !std::isfinite(p)) throw InvalidArgument("fuzz p values must be positive");
  }
  if (config.max_support < 1 || config.max_index < config.max_support) {
    throw InvalidArgument("fuzz corpus needs 1 <= max_support <= max_index");
  }
  auto enabled = [&](const std::string& name) { return config.checks.empty() || config.checks.count(name) > 0; };
  FuzzSummary summary;
  if (config.corpus == 0) return summary;
  table.require(config.max_index);

  // Running maximum of d(n) for the Helson chain constant.
  std::vector<double> max_divisors;
  if (enabled("helson")) {
    const auto d = tabulate_multiplicative(config.max_index, table,
                                           [](std::uint32_t, std::uint32_t e) { return static_cast<double>(e + 1); });
    max_divisors.assign(d.size(), 1.0);
    for (std::size_t n = 2; n < d.size(); ++n) max_divisors[n] = std::max(max_divisors[n - 1], d[n]);
  }

  std::vector<double> mc_ps = config.ps;
  if (enabled("helson") && std::find(mc_ps.begin(), mc_ps.end(), 1.0) == mc_ps.end()) mc_ps.push_back(1.0);

  std::vector<std::vector<FuzzCase>> per_case(config.corpus);
  parallel_for(config.corpus, config.threads, [&](std::size_t i) {
    const std::uint64_t seed = derive_seed(config.seed, i);
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> support_dist(1, config.max_support);
    const DirichletPolynomial f = random_polynomial(rng, support_dist(rng), config.max_index);
    std::uniform_int_distribution<std::size_t> degree_dist(0, config.max_disc_degree);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<Complex> dc(degree_dist(rng) + 1);
    for (auto& c : dc) {
      const double re = gauss(rng);
      c = Complex(re, gauss(rng));
    }
    const DiscPolynomial g(std::move(dc));

    std::vector<FuzzCase>& out = per_case[i];
    auto emit = [&](const std::string& name, double p, double lhs, double rhs, double sigma, double abs_tol,
                    bool disc) {
      FuzzCase c;
      c.index = i;
      c.seed = seed;
      c.check = name;
      c.p = p;
      c.result = config.inverted ? check_inequality(rhs, lhs, sigma, abs_tol) : check_inequality(lhs, rhs, sigma, abs_tol);
      if (c.result.status == CheckStatus::Violation) {
        c.reproducer = disc ? disc_to_json(g) : polynomial_to_json(f);
        c.reproducer["samples"] = config.samples;
        c.reproducer["mc_seed"] = seed;
      }
      out.push_back(std::move(c));
    };

    const bool need_mc = enabled("hl-upper") || enabled("hl-lower") || enabled("squarefree") || enabled("helson");
    std::vector<NormEstimate> mc;
    if (need_mc) mc = mc_norms(f, mc_ps, MonteCarloOptions{config.samples, seed, 1}, table);

    for (std::size_t j = 0; j < config.ps.size(); ++j) {
      const double p = config.ps[j];
      if (need_mc) {
        const NormEstimate& e = mc[j];
        const double se = e.value_std_error();
        if (p >= 2.0 && enabled("hl-upper")) emit("hl-upper", p, e.value, std::sqrt(hl_upper_sum(f, p, table)), se, 0.0, false);
        if (p <= 2.0 && enabled("hl-lower")) emit("hl-lower", p, std::sqrt(hl_lower_sum(f, p, table)), e.value, se, 0.0, false);
        if (p <= 2.0 && enabled("squarefree")) emit("squarefree", p, std::sqrt(squarefree_lower_sum(f, p, table)), e.value, se, 0.0, false);
      }
      if (p >= 2.0 && enabled("disc-upper")) {
        emit("disc-upper", p, disc_norm(g, p, config.disc_nodes).value, std::sqrt(disc_upper_sum(g, p)), 0.0, 1e-8, true);
      }
      if (p <= 2.0 && enabled("disc-lower")) {
        emit("disc-lower", p, std::sqrt(disc_lower_sum(g, p)), disc_norm(g, p, config.disc_nodes).value, 0.0, 1e-8, true);
      }
    }
    if (enabled("helson")) {
      const auto it = std::find(mc_ps.begin(), mc_ps.end(), 1.0);
      const NormEstimate& one = mc[static_cast<std::size_t>(it - mc_ps.begin())];
      const double K = std::sqrt(max_divisors[f.length()]);
      emit("helson", 1.0, l2_norm(f).value, K * one.value, K * one.value_std_error(), 0.0, false);
    }
    if (enabled("burbea")) {
      CompensatedSum<double> l2;
      for (const auto& a : g.coeffs) l2.add(std::norm(a));
      emit("burbea", 0.0, std::pow(burbea_sum(g, 2), 0.25), std::sqrt(l2.value()), 0.0, 1e-8, true);
    }
  });

  for (auto& cases : per_case) {
    for (auto& c : cases) {
      switch (c.result.status) {
        case CheckStatus::Pass: ++summary.pass; break;
        case CheckStatus::PassWithinSlack: ++summary.pass_within_slack; break;
        case CheckStatus::Violation: ++summary.violation; break;
      }
      summary.cases.push_back(std::move(c));
    }
  }
  return summary;
}

}  // namespace hardyp
