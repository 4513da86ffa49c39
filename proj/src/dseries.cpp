#include "hardyp/dseries.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <set>
#include <sstream>

#include "hardyp/config.hpp"
#include "hardyp/errors.hpp"
#include "hardyp/summation.hpp"

namespace hardyp {

namespace {

// Plain complex product; std::complex operator* carries NaN recovery that
// dominates the convolution loops.
inline Complex mul(Complex a, Complex b) {
  return {a.real() * b.real() - a.imag() * b.imag(), a.real() * b.imag() + a.imag() * b.real()};
}

inline double norm2(Complex a) { return a.real() * a.real() + a.imag() * a.imag(); }

std::uint64_t saturating_mul(std::uint64_t a, std::uint64_t b) {
  std::uint64_t out = 0;
  if (__builtin_mul_overflow(a, b, &out)) return std::numeric_limits<std::uint64_t>::max();
  return out;
}

unsigned big_omega_of(std::uint64_t n, const PrimeTable& table) {
  table.require(n);
  unsigned count = 0;
  while (n > 1) {
    n /= table.smallest_factor(n);
    ++count;
  }
  return count;
}

std::uint64_t largest_prime_factor(std::uint64_t n, const PrimeTable& table) {
  table.require(n);
  std::uint64_t largest = 1;
  while (n > 1) {
    const std::uint64_t p = table.smallest_factor(n);
    largest = std::max(largest, p);
    n /= p;
  }
  return largest;
}

// Expands prod_j (sum_e b(j, e) p_j^{-e s}) over the given primes, keeping n <= N.
template <typename Local>
std::vector<Term> expand_product(std::span<const std::uint32_t> primes, std::uint64_t N, Local&& local) {
  std::vector<Term> entries{{1, Complex(1.0, 0.0)}};
  for (std::size_t j = 0; j < primes.size(); ++j) {
    const std::uint64_t p = primes[j];
    const double b0 = local(j, 0u);
    const std::size_t existing = entries.size();
    for (std::size_t i = 0; i < existing; ++i) {
      const Term base = entries[i];
      std::uint64_t n = base.n;
      for (std::uint32_t e = 1; n <= N / p; ++e) {
        n *= p;
        entries.push_back({n, base.a * local(j, e)});
      }
      entries[i].a = base.a * b0;
    }
    check_allocation(entries.size() * sizeof(Term), "smooth-number expansion");
  }
  std::sort(entries.begin(), entries.end(), [](const Term& x, const Term& y) { return x.n < y.n; });
  return entries;
}

// Sum of |b_e|^2 over e >= 0 for a one-variable factor; infinite if it diverges.
template <typename Coef>
double factor_l2_mass(Coef&& coef, double ratio_limit) {
  if (ratio_limit > 1.0) return std::numeric_limits<double>::infinity();
  CompensatedSum<double> acc;
  int small_run = 0;
  for (std::uint32_t e = 0; e < 200000; ++e) {
    const double b = coef(e);
    const double t = b * b;
    acc.add(t);
    if (t <= 1e-20 * acc.value()) {
      if (++small_run >= 8) return acc.value();
    } else {
      small_run = 0;
    }
  }
  return acc.value();
}

double kept_l2_mass(const DirichletPolynomial& f) {
  CompensatedSum<double> acc;
  for (const auto& t : f.terms()) acc.add(norm2(t.a));
  return acc.value();
}

std::vector<double> binomial_cache(double alpha, std::uint32_t max_e) {
  std::vector<double> out(max_e + 1);
  for (std::uint32_t e = 0; e <= max_e; ++e) out[e] = gen_binomial_coefficient(e, alpha);
  return out;
}

std::uint32_t max_exponent(std::uint64_t N) {
  std::uint32_t e = 0;
  while (N > 1) {
    N >>= 1;
    ++e;
  }
  return e + 1;
}

GeneratedPolynomial euler_factor_power(std::uint64_t x, double alpha, std::uint64_t N,
                                       const PrimeTable& table) {
  if (!(alpha > 0.0)) throw InvalidArgument("euler-power requires alpha > 0");
  const auto all = table.primes();
  const std::uint64_t cutoff = std::min(x, N);
  const auto end = std::upper_bound(all.begin(), all.end(), cutoff);
  const std::span<const std::uint32_t> primes(all.begin(), end);
  const auto c = binomial_cache(alpha, max_exponent(N));
  auto terms = expand_product(primes, N, [&](std::size_t j, std::uint32_t e) {
    return c[e] * std::pow(static_cast<double>(primes[j]), -0.5 * e);
  });
  GeneratedPolynomial out{DirichletPolynomial::from_terms(std::move(terms)), std::nullopt};
  if (x <= table.limit()) {
    double log_full = 0.0;
    for (const auto p : all) {
      if (p > x) break;
      const double inv = 1.0 / p;
      log_full += std::log(factor_l2_mass(
          [&](std::uint32_t e) { return gen_binomial_coefficient(e, alpha) * std::pow(inv, 0.5 * e); }, inv));
    }
    out.truncated_l2_mass = std::max(0.0, std::exp(log_full) - kept_l2_mass(out.poly));
  }
  return out;
}

GeneratedPolynomial extremal_product(double p, std::uint32_t k, std::uint64_t N, const PrimeTable& table) {
  if (!(p > 0.0 && p < 2.0)) throw InvalidArgument("extremal product requires 0 < p < 2");
  if (k == 0) throw InvalidArgument("extremal product requires at least one prime");
  if (k > table.primes().size()) throw TableTooSmall(k, table.primes().size());
  const auto primes = table.primes().first(k);
  std::vector<double> b(max_exponent(N) + 1);
  for (std::uint32_t e = 0; e < b.size(); ++e) b[e] = extremal_factor_coefficient(p, e);
  auto terms = expand_product(primes, N, [&](std::size_t, std::uint32_t e) { return b[e]; });
  GeneratedPolynomial out{DirichletPolynomial::from_terms(std::move(terms)), std::nullopt};
  const double two_over_p = 2.0 / p;
  const bool finite_series = std::floor(two_over_p) == two_over_p;
  const double ratio = finite_series ? 0.0 : p / (2.0 - p);
  const double per_factor = factor_l2_mass([&](std::uint32_t e) { return extremal_factor_coefficient(p, e); }, ratio);
  out.truncated_l2_mass = std::isinf(per_factor)
                              ? per_factor
                              : std::max(0.0, std::pow(per_factor, static_cast<double>(k)) - kept_l2_mass(out.poly));
  return out;
}

void require_truncation(std::uint64_t N, const PrimeTable& table) {
  if (N < 1) throw InvalidArgument("truncation must be >= 1");
  table.require(N);
}

// --- generator text form -------------------------------------------------

double parse_number(const std::string& key, const std::string& value) {
  std::size_t used = 0;
  double out = 0.0;
  try {
    out = std::stod(value, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != value.size() || !std::isfinite(out)) {
    throw InvalidArgument("generator parameter " + key + " is not a number: '" + value + "'");
  }
  return out;
}

std::uint64_t to_count(const std::string& key, double v) {
  if (!(v >= 0.0) || std::floor(v) != v || v > 9.0e15) {
    throw InvalidArgument("generator parameter " + key + " must be a nonnegative integer");
  }
  return static_cast<std::uint64_t>(v);
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

// ---------------------------------------------------------------------------

DirichletPolynomial DirichletPolynomial::from_terms(std::vector<Term> terms) {
  for (const auto& t : terms) {
    if (t.n == 0) throw InvalidArgument("Dirichlet polynomial index must be >= 1");
    if (!std::isfinite(t.a.real()) || !std::isfinite(t.a.imag())) {
      throw InvalidArgument("non-finite coefficient at n=" + std::to_string(t.n));
    }
  }
  std::stable_sort(terms.begin(), terms.end(), [](const Term& x, const Term& y) { return x.n < y.n; });
  DirichletPolynomial out;
  out.terms_.reserve(terms.size());
  for (std::size_t i = 0; i < terms.size();) {
    Term acc = terms[i++];
    while (i < terms.size() && terms[i].n == acc.n) acc.a += terms[i++].a;
    if (acc.a != Complex(0.0, 0.0)) out.terms_.push_back(acc);
  }
  return out;
}

DirichletPolynomial DirichletPolynomial::ones(std::initializer_list<std::uint64_t> indices) {
  std::vector<Term> terms;
  for (const auto n : indices) terms.push_back({n, Complex(1.0, 0.0)});
  return from_terms(std::move(terms));
}

Complex DirichletPolynomial::coefficient(std::uint64_t n) const {
  const auto it = std::lower_bound(terms_.begin(), terms_.end(), n, [](const Term& t, std::uint64_t v) { return t.n < v; });
  return (it != terms_.end() && it->n == n) ? it->a : Complex(0.0, 0.0);
}

DirichletPolynomial operator+(const DirichletPolynomial& f, const DirichletPolynomial& g) {
  std::vector<Term> terms(f.terms().begin(), f.terms().end());
  terms.insert(terms.end(), g.terms().begin(), g.terms().end());
  return DirichletPolynomial::from_terms(std::move(terms));
}

DirichletPolynomial operator*(Complex c, const DirichletPolynomial& f) {
  std::vector<Term> terms;
  terms.reserve(f.size());
  for (const auto& t : f.terms()) terms.push_back({t.n, c * t.a});
  return DirichletPolynomial::from_terms(std::move(terms));
}

// ---------------------------------------------------------------------------

double extremal_factor_coefficient(double p, std::uint32_t e) {
  if (!(p > 0.0 && p < 2.0)) throw InvalidArgument("extremal factor requires 0 < p < 2");
  const double ed = static_cast<double>(e);
  return binomial_real(2.0 / p, e) * std::pow(1.0 - p / 2.0, 1.0 / p - ed / 2.0) * std::pow(p / 2.0, ed / 2.0);
}

GeneratedPolynomial generate_with_metadata(const GeneratorSpec& spec, const PrimeTable& table) {
  return std::visit(
      [&](const auto& s) -> GeneratedPolynomial {
        using S = std::decay_t<decltype(s)>;
        require_truncation(s.N, table);
        if constexpr (std::is_same_v<S, ZetaPartial>) {
          std::vector<Term> terms;
          check_allocation(s.N * sizeof(Term), "zeta partial sum");
          terms.reserve(s.N);
          for (std::uint64_t n = 1; n <= s.N; ++n) terms.push_back({n, Complex(1.0 / std::sqrt(static_cast<double>(n)), 0.0)});
          return {DirichletPolynomial::from_terms(std::move(terms)), std::nullopt};
        } else if constexpr (std::is_same_v<S, ZetaAlphaPartial>) {
          if (!(s.alpha > 0.0)) throw InvalidArgument("zeta-alpha requires alpha > 0");
          const auto c = binomial_cache(s.alpha, max_exponent(s.N));
          const auto d = tabulate_multiplicative(s.N, table, [&](std::uint32_t, std::uint32_t e) { return c[e]; });
          std::vector<Term> terms;
          terms.reserve(s.N);
          for (std::uint64_t n = 1; n <= s.N; ++n) {
            terms.push_back({n, Complex(d[n] / std::sqrt(static_cast<double>(n)), 0.0)});
          }
          return {DirichletPolynomial::from_terms(std::move(terms)), std::nullopt};
        } else if constexpr (std::is_same_v<S, EulerFactorPower>) {
          return euler_factor_power(s.prime_bound, s.alpha, s.N, table);
        } else if constexpr (std::is_same_v<S, ExtremalProduct>) {
          return extremal_product(s.p, s.prime_count, s.N, table);
        } else if constexpr (std::is_same_v<S, PhiBeta>) {
          if (!(s.beta > 0.0)) throw InvalidArgument("phi-beta requires beta > 0");
          std::vector<Term> terms{{1, Complex(1.0, 0.0)}};
          for (std::uint64_t n = 2; n <= s.N; ++n) {
            const double nd = static_cast<double>(n);
            terms.push_back({n, Complex(std::pow(std::log(nd), -s.beta) / std::sqrt(nd), 0.0)});
          }
          return {DirichletPolynomial::from_terms(std::move(terms)), std::nullopt};
        } else {
          if (!(s.p > 0.0)) throw InvalidArgument("duality witness requires p > 0");
          return euler_factor_power(s.prime_bound, 2.0 / s.p, s.N, table);
        }
      },
      spec);
}

DirichletPolynomial generate(const GeneratorSpec& spec, const PrimeTable& table) {
  return generate_with_metadata(spec, table).poly;
}

GeneratorSpec parse_generator(const std::string& text) {
  const auto colon = text.find(':');
  const std::string name = text.substr(0, colon);
  std::map<std::string, double> kv;
  if (colon != std::string::npos) {
    std::stringstream ss(text.substr(colon + 1));
    std::string item;
    while (std::getline(ss, item, ',')) {
      const auto eq = item.find('=');
      if (eq == std::string::npos) throw InvalidArgument("generator parameter without '=': '" + item + "'");
      const std::string key = item.substr(0, eq);
      kv[key] = parse_number(key, item.substr(eq + 1));
    }
  }
  auto take = [&](const std::set<std::string>& allowed) {
    for (const auto& [k, v] : kv) {
      if (!allowed.count(k)) throw InvalidArgument("unknown parameter '" + k + "' for generator " + name);
    }
    for (const auto& k : allowed) {
      if (!kv.count(k)) throw InvalidArgument("generator " + name + " needs parameter " + k);
    }
  };
  if (name == "zeta") {
    take({"N"});
    return ZetaPartial{to_count("N", kv["N"])};
  }
  if (name == "zeta-alpha") {
    take({"N", "alpha"});
    return ZetaAlphaPartial{to_count("N", kv["N"]), kv["alpha"]};
  }
  if (name == "euler-power") {
    take({"x", "alpha", "N"});
    return EulerFactorPower{to_count("x", kv["x"]), kv["alpha"], to_count("N", kv["N"])};
  }
  if (name == "extremal") {
    take({"p", "k", "N"});
    return ExtremalProduct{kv["p"], static_cast<std::uint32_t>(to_count("k", kv["k"])), to_count("N", kv["N"])};
  }
  if (name == "phi-beta") {
    take({"beta", "N"});
    return PhiBeta{kv["beta"], to_count("N", kv["N"])};
  }
  if (name == "duality") {
    take({"p", "x", "N"});
    return DualityWitness{kv["p"], to_count("x", kv["x"]), to_count("N", kv["N"])};
  }
  throw InvalidArgument("unknown generator '" + name + "'");
}

std::string format_generator(const GeneratorSpec& spec) {
  return std::visit(
      [](const auto& s) -> std::string {
        using S = std::decay_t<decltype(s)>;
        const std::string N = std::to_string(s.N);
        if constexpr (std::is_same_v<S, ZetaPartial>) return "zeta:N=" + N;
        else if constexpr (std::is_same_v<S, ZetaAlphaPartial>) return "zeta-alpha:N=" + N + ",alpha=" + fmt(s.alpha);
        else if constexpr (std::is_same_v<S, EulerFactorPower>)
          return "euler-power:x=" + std::to_string(s.prime_bound) + ",alpha=" + fmt(s.alpha) + ",N=" + N;
        else if constexpr (std::is_same_v<S, ExtremalProduct>)
          return "extremal:p=" + fmt(s.p) + ",k=" + std::to_string(s.prime_count) + ",N=" + N;
        else if constexpr (std::is_same_v<S, PhiBeta>) return "phi-beta:beta=" + fmt(s.beta) + ",N=" + N;
        else return "duality:p=" + fmt(s.p) + ",x=" + std::to_string(s.prime_bound) + ",N=" + N;
      },
      spec);
}

// ---------------------------------------------------------------------------
// Algebra

DirichletPolynomial dirichlet_multiply(const DirichletPolynomial& f, const DirichletPolynomial& g,
                                       std::optional<std::uint64_t> truncation) {
  if (truncation && *truncation == 0) throw InvalidArgument("truncation must be >= 1");
  if (f.empty() || g.empty()) return {};
  std::uint64_t bound = saturating_mul(f.length(), g.length());
  if (truncation) bound = std::min(bound, *truncation);

  const std::uint64_t pairs = saturating_mul(f.size(), g.size());
  const std::uint64_t cap = memory_cap();
  const std::uint64_t dense_bytes = saturating_mul(bound + 1, sizeof(Complex));
  const std::uint64_t sparse_bytes = saturating_mul(pairs, sizeof(Term));
  const bool dense_fits = dense_bytes <= cap;
  const bool sparse_fits = sparse_bytes <= cap;
  if (!dense_fits && !sparse_fits) {
    throw ResourceError("Dirichlet convolution exceeds memory cap", std::min(dense_bytes, sparse_bytes), cap);
  }
  const bool use_dense = dense_fits && (!sparse_fits || bound / 8 <= pairs + 4096);

  std::vector<Term> out;
  if (use_dense) {
    std::vector<Complex> acc(bound + 1, Complex(0.0, 0.0));
    for (const auto& x : f.terms()) {
      if (x.n > bound) break;
      const std::uint64_t emax = bound / x.n;
      for (const auto& y : g.terms()) {
        if (y.n > emax) break;
        acc[x.n * y.n] += mul(x.a, y.a);
      }
    }
    for (std::uint64_t m = 1; m <= bound; ++m) {
      if (acc[m] != Complex(0.0, 0.0)) out.push_back({m, acc[m]});
    }
    return DirichletPolynomial::from_terms(std::move(out));
  }
  out.reserve(pairs);
  for (const auto& x : f.terms()) {
    if (x.n > bound) break;
    const std::uint64_t emax = bound / x.n;
    for (const auto& y : g.terms()) {
      if (y.n > emax) break;
      out.push_back({x.n * y.n, mul(x.a, y.a)});
    }
  }
  return DirichletPolynomial::from_terms(std::move(out));
}

DirichletPolynomial dirichlet_power(const DirichletPolynomial& f, unsigned k, std::optional<std::uint64_t> truncation) {
  if (k == 0) throw InvalidArgument("dirichlet_power requires k >= 1");
  if (k == 1) {
    return truncation ? partial_sum(f, *truncation) : f;
  }
  DirichletPolynomial result;
  bool have = false;
  DirichletPolynomial base = f;
  while (k > 0) {
    if (k & 1U) {
      result = have ? dirichlet_multiply(result, base, truncation) : (truncation ? partial_sum(base, *truncation) : base);
      have = true;
    }
    k >>= 1U;
    if (k > 0) base = dirichlet_multiply(base, base, truncation);
  }
  return result;
}

double convolution_l2_squared(const DirichletPolynomial& f, const DirichletPolynomial& g, double index_power) {
  if (f.empty() || g.empty()) return 0.0;
  const auto weight = [index_power](std::uint64_t m) {
    const double md = static_cast<double>(m);
    return index_power == 0.0 ? 1.0 : index_power == 1.0 ? 1.0 / md : std::pow(md, -index_power);
  };
  const std::uint64_t bound = saturating_mul(f.length(), g.length());
  const std::uint64_t pairs = saturating_mul(f.size(), g.size());
  const std::uint64_t cap = memory_cap();

  // Very sparse operands: materializing the product is cheaper than sweeping.
  if (bound / 16 > pairs && saturating_mul(pairs, sizeof(Term)) <= cap) {
    const auto fg = dirichlet_multiply(f, g);
    if (index_power == 0.0) return kept_l2_mass(fg);
    CompensatedSum<double> acc;
    for (const auto& t : fg.terms()) acc.add(norm2(t.a) * weight(t.n));
    return acc.value();
  }

  std::uint64_t block = std::uint64_t{1} << 20;
  block = std::min(block, std::max<std::uint64_t>(1024, cap / (4 * sizeof(Complex))));
  block = std::min(block, bound);
  check_allocation(block * sizeof(Complex), "convolution block");
  std::vector<Complex> buf(block);
  const auto gt = g.terms();

  CompensatedSum<double> total;
  for (std::uint64_t lo = 1; lo <= bound; lo += block) {
    const std::uint64_t hi = std::min(bound, lo + block - 1);
    std::fill(buf.begin(), buf.begin() + static_cast<std::ptrdiff_t>(hi - lo + 1), Complex(0.0, 0.0));
    for (const auto& x : f.terms()) {
      if (x.n > hi) break;
      const std::uint64_t emin = (lo + x.n - 1) / x.n;
      const std::uint64_t emax = hi / x.n;
      auto it = std::lower_bound(gt.begin(), gt.end(), emin, [](const Term& t, std::uint64_t v) { return t.n < v; });
      for (; it != gt.end() && it->n <= emax; ++it) buf[x.n * it->n - lo] += mul(x.a, it->a);
    }
    CompensatedSum<double> part;
    if (index_power == 0.0) {
      for (std::uint64_t i = 0; i <= hi - lo; ++i) part.add(norm2(buf[i]));
    } else {
      for (std::uint64_t i = 0; i <= hi - lo; ++i) {
        if (buf[i] != Complex(0.0, 0.0)) part.add(norm2(buf[i]) * weight(lo + i));
      }
    }
    total.add(part.value());
    if (hi == bound) break;
  }
  return total.value();
}

DirichletPolynomial partial_sum(const DirichletPolynomial& f, std::uint64_t N) {
  if (N < 1) throw InvalidArgument("partial sum requires N >= 1");
  std::vector<Term> terms;
  for (const auto& t : f.terms()) {
    if (t.n > N) break;
    terms.push_back(t);
  }
  return DirichletPolynomial::from_terms(std::move(terms));
}

DirichletPolynomial homogeneous_projection(const DirichletPolynomial& f, unsigned m, const PrimeTable& table) {
  table.require(f.length());
  std::vector<Term> terms;
  for (const auto& t : f.terms()) {
    if (big_omega_of(t.n, table) == m) terms.push_back(t);
  }
  return DirichletPolynomial::from_terms(std::move(terms));
}

DirichletPolynomial abschnitt(const DirichletPolynomial& f, std::uint32_t m, const PrimeTable& table) {
  if (m == 0) throw InvalidArgument("abschnitt requires m >= 1");
  table.require(f.length());
  const std::uint64_t threshold =
      m <= table.primes().size() ? table.nth_prime(m) : std::numeric_limits<std::uint64_t>::max();
  std::vector<Term> terms;
  for (const auto& t : f.terms()) {
    if (largest_prime_factor(t.n, table) <= threshold) terms.push_back(t);
  }
  return DirichletPolynomial::from_terms(std::move(terms));
}

std::vector<BohrMonomial> bohr_lift(const DirichletPolynomial& f, const PrimeTable& table) {
  table.require(f.length());
  std::vector<BohrMonomial> out;
  out.reserve(f.size());
  for (const auto& t : f.terms()) out.push_back({factorize(t.n, table).kappa, t.a});
  return out;
}

DirichletPolynomial random_polynomial(std::mt19937_64& rng, std::size_t support, std::uint64_t max_index) {
  if (max_index == 0) throw InvalidArgument("random polynomial needs max_index >= 1");
  if (support > max_index) throw InvalidArgument("support larger than the index range");
  std::uniform_int_distribution<std::uint64_t> pick(1, max_index);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::set<std::uint64_t> chosen;
  while (chosen.size() < support) chosen.insert(pick(rng));
  std::vector<Term> terms;
  for (const auto n : chosen) {
    const double re = gauss(rng);
    const double im = gauss(rng);
    terms.push_back({n, Complex(re, im)});
  }
  return DirichletPolynomial::from_terms(std::move(terms));
}

}  // namespace hardyp
