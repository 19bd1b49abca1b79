#include "magicpol/angular.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <mutex>
#include <shared_mutex>
#include <unordered_map>
#include <vector>

#include "magicpol/errors.hpp"

namespace magicpol {

void HalfInt::throw_bad_denominator() {
  throw ValidationError("HalfInt denominator must be 1 or 2");
}

HalfInt HalfInt::parse(std::string_view text) {
  auto trim = [](std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
  };
  text = trim(text);
  const auto bad = [&] { return ValidationError("not an integer or half-integer: '" + std::string(text) + "'"); };
  auto to_int = [&](std::string_view s) {
    int v = 0;
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size()) throw bad();
    return v;
  };
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    const int num = to_int(trim(text.substr(0, slash)));
    const int den = to_int(trim(text.substr(slash + 1)));
    if (den == 1) return HalfInt(num);
    if (den == 2) return HalfInt(num, 2);
    throw bad();
  }
  if (text.find('.') != std::string_view::npos) {
    double v = 0;
    auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || p != text.data() + text.size()) throw bad();
    const double twice = 2.0 * v;
    if (std::abs(twice - std::round(twice)) > 1e-9) throw bad();
    return from_twice(static_cast<int>(std::lround(twice)));
  }
  return HalfInt(to_int(text));
}

std::string HalfInt::str() const {
  if (is_integer()) return std::to_string(twice_ / 2);
  return std::to_string(twice_) + "/2";
}

int parity_sign(HalfInt x) {
  if (!x.is_integer()) throw ValidationError("phase exponent is not an integer: " + x.str());
  return (x.twice() / 2) % 2 == 0 ? 1 : -1;
}

namespace {

using BigInt = boost::multiprecision::cpp_int;
using boost::multiprecision::cpp_rational;

// Exponent vector over the primes: a rational number prod p^e.
using Factored = std::vector<int>;

class PrimeTable {
 public:
  static const PrimeTable& instance() {
    static const PrimeTable table(2000);
    return table;
  }
  const std::vector<int>& primes() const { return primes_; }
  int limit() const { return limit_; }

  // Add sign * exponents of n! into acc.
  void add_factorial(Factored& acc, int n, int sign) const {
    if (n < 0) throw ValidationError("negative factorial argument");
    if (n > limit_) throw ValidationError("angular momentum too large for exact evaluation");
    for (std::size_t i = 0; i < primes_.size() && primes_[i] <= n; ++i) {
      int e = 0;
      for (long long pk = primes_[i]; pk <= n; pk *= primes_[i]) e += static_cast<int>(n / pk);
      acc[i] += sign * e;
    }
  }

 private:
  explicit PrimeTable(int limit) : limit_(limit) {
    std::vector<bool> sieve(limit + 1, true);
    for (int i = 2; i <= limit; ++i) {
      if (!sieve[i]) continue;
      primes_.push_back(i);
      for (long long j = 1LL * i * i; j <= limit; j += i) sieve[j] = false;
    }
  }
  int limit_;
  std::vector<int> primes_;
};

Factored zero_exponents() { return Factored(PrimeTable::instance().primes().size(), 0); }

BigInt power_product(const Factored& e, int sign_filter) {
  const auto& primes = PrimeTable::instance().primes();
  BigInt out = 1;
  for (std::size_t i = 0; i < e.size(); ++i) {
    const int k = e[i] * sign_filter;
    if (k > 0) out *= boost::multiprecision::pow(BigInt(primes[i]), static_cast<unsigned>(k));
  }
  return out;
}

// Evaluates sign0 * sqrt(prefactor) * sum_k (-1)^{k} * term_k exactly, where
// every term and the prefactor are products of factorials.
double racah_sum(int sign0, const Factored& prefactor, const std::vector<Factored>& terms,
                 int first_k) {
  if (terms.empty()) return 0.0;
  Factored common = terms.front();
  for (const auto& t : terms)
    for (std::size_t i = 0; i < t.size(); ++i) common[i] = std::min(common[i], t[i]);

  BigInt sum = 0;
  for (std::size_t k = 0; k < terms.size(); ++k) {
    Factored rest = terms[k];
    for (std::size_t i = 0; i < rest.size(); ++i) rest[i] -= common[i];
    BigInt n = power_product(rest, +1);
    if ((first_k + static_cast<int>(k)) % 2 == 0)
      sum += n;
    else
      sum -= n;
  }
  if (sum == 0) return 0.0;
  const int sign = sign0 * (sum < 0 ? -1 : 1);

  // value^2 = prefactor * common^2 * sum^2
  Factored squared = prefactor;
  for (std::size_t i = 0; i < squared.size(); ++i) squared[i] += 2 * common[i];
  const BigInt num = power_product(squared, +1) * sum * sum;
  const BigInt den = power_product(squared, -1);
  const cpp_rational ratio(num, den);
  return sign * std::sqrt(ratio.convert_to<double>());
}

// Triangle coefficient Delta(abc)^2 as factorials, arguments doubled.
void add_delta_squared(Factored& acc, int a2, int b2, int c2) {
  const auto& pt = PrimeTable::instance();
  pt.add_factorial(acc, (a2 + b2 - c2) / 2, +1);
  pt.add_factorial(acc, (a2 - b2 + c2) / 2, +1);
  pt.add_factorial(acc, (-a2 + b2 + c2) / 2, +1);
  pt.add_factorial(acc, (a2 + b2 + c2) / 2 + 1, -1);
}

double compute_3j(int j1, int j2, int j3, int m1, int m2, int m3) {
  // all arguments doubled
  const auto& pt = PrimeTable::instance();
  Factored pref = zero_exponents();
  add_delta_squared(pref, j1, j2, j3);
  pt.add_factorial(pref, (j1 + m1) / 2, +1);
  pt.add_factorial(pref, (j1 - m1) / 2, +1);
  pt.add_factorial(pref, (j2 + m2) / 2, +1);
  pt.add_factorial(pref, (j2 - m2) / 2, +1);
  pt.add_factorial(pref, (j3 + m3) / 2, +1);
  pt.add_factorial(pref, (j3 - m3) / 2, +1);

  const int kmin = std::max({0, (j2 - j3 - m1) / 2, (j1 - j3 + m2) / 2});
  const int kmax = std::min({(j1 + j2 - j3) / 2, (j1 - m1) / 2, (j2 + m2) / 2});
  std::vector<Factored> terms;
  for (int k = kmin; k <= kmax; ++k) {
    Factored t = zero_exponents();
    pt.add_factorial(t, k, -1);
    pt.add_factorial(t, (j3 - j2 + m1) / 2 + k, -1);
    pt.add_factorial(t, (j3 - j1 - m2) / 2 + k, -1);
    pt.add_factorial(t, (j1 + j2 - j3) / 2 - k, -1);
    pt.add_factorial(t, (j1 - m1) / 2 - k, -1);
    pt.add_factorial(t, (j2 + m2) / 2 - k, -1);
    terms.push_back(std::move(t));
  }
  const int phase = ((j1 - j2 - m3) / 2) % 2 == 0 ? 1 : -1;
  return racah_sum(phase, pref, terms, kmin);
}

double compute_6j(int a, int b, int c, int d, int e, int f) {
  const auto& pt = PrimeTable::instance();
  Factored pref = zero_exponents();
  add_delta_squared(pref, a, b, c);
  add_delta_squared(pref, a, e, f);
  add_delta_squared(pref, d, b, f);
  add_delta_squared(pref, d, e, c);

  const int kmin = std::max({a + b + c, a + e + f, d + b + f, d + e + c}) / 2;
  const int kmax = std::min({a + b + d + e, a + c + d + f, b + c + e + f}) / 2;
  std::vector<Factored> terms;
  for (int k = kmin; k <= kmax; ++k) {
    Factored t = zero_exponents();
    pt.add_factorial(t, k + 1, +1);
    pt.add_factorial(t, k - (a + b + c) / 2, -1);
    pt.add_factorial(t, k - (a + e + f) / 2, -1);
    pt.add_factorial(t, k - (d + b + f) / 2, -1);
    pt.add_factorial(t, k - (d + e + c) / 2, -1);
    pt.add_factorial(t, (a + b + d + e) / 2 - k, -1);
    pt.add_factorial(t, (a + c + d + f) / 2 - k, -1);
    pt.add_factorial(t, (b + c + e + f) / 2 - k, -1);
    terms.push_back(std::move(t));
  }
  return racah_sum(1, pref, terms, kmin);
}

// Six doubled quantum numbers packed 10 bits each.
std::uint64_t pack(const int (&v)[6]) {
  std::uint64_t key = 0;
  for (int x : v) key = (key << 10) | static_cast<std::uint64_t>((x + 512) & 0x3ff);
  return key;
}

class SymbolCache {
 public:
  template <typename Compute>
  double get(std::uint64_t key, Compute&& compute) {
    {
      std::shared_lock lock(mutex_);
      if (auto it = values_.find(key); it != values_.end()) return it->second;
    }
    const double v = compute();
    std::unique_lock lock(mutex_);
    values_.emplace(key, v);
    return v;
  }

 private:
  std::shared_mutex mutex_;
  std::unordered_map<std::uint64_t, double> values_;
};

SymbolCache& cache_3j() {
  static SymbolCache c;
  return c;
}
SymbolCache& cache_6j() {
  static SymbolCache c;
  return c;
}

bool packable(const int (&v)[6]) {
  return std::all_of(std::begin(v), std::end(v), [](int x) { return x >= -512 && x < 512; });
}

}  // namespace

double wigner3j(HalfInt j1, HalfInt j2, HalfInt j3, HalfInt m1, HalfInt m2, HalfInt m3) {
  if (m1.twice() + m2.twice() + m3.twice() != 0) return 0.0;
  if (!triangle(j1, j2, j3)) return 0.0;
  if (!valid_projection(j1, m1) || !valid_projection(j2, m2) || !valid_projection(j3, m3))
    return 0.0;
  const int v[6] = {j1.twice(), j2.twice(), j3.twice(), m1.twice(), m2.twice(), m3.twice()};
  auto compute = [&] { return compute_3j(v[0], v[1], v[2], v[3], v[4], v[5]); };
  if (!packable(v)) return compute();
  return cache_3j().get(pack(v), compute);
}

double wigner6j(HalfInt j1, HalfInt j2, HalfInt j3, HalfInt j4, HalfInt j5, HalfInt j6) {
  if (!triangle(j1, j2, j3) || !triangle(j1, j5, j6) || !triangle(j4, j2, j6) ||
      !triangle(j4, j5, j3))
    return 0.0;
  const int v[6] = {j1.twice(), j2.twice(), j3.twice(), j4.twice(), j5.twice(), j6.twice()};
  auto compute = [&] { return compute_6j(v[0], v[1], v[2], v[3], v[4], v[5]); };
  if (!packable(v)) return compute();
  return cache_6j().get(pack(v), compute);
}

double clebsch(HalfInt j1, HalfInt m1, HalfInt j2, HalfInt m2, HalfInt J, HalfInt M) {
  if (m1 + m2 != M) return 0.0;
  const double w = wigner3j(j1, j2, J, m1, m2, -M);
  if (w == 0.0) return 0.0;
  // <j1 m1 j2 m2|J M> = (-1)^{j1-j2+M} sqrt(2J+1) (j1 j2 J; m1 m2 -M)
  return parity_sign(j1 - j2 + M) * std::sqrt(static_cast<double>(J.dimension())) * w;
}

}  // namespace magicpol
