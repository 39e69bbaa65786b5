#include "ruzsa/diffset.hpp"

#include <numeric>
#include <vector>

#include "ruzsa/symmetry.hpp"

namespace ruzsa::diffset {

namespace {

std::vector<std::int64_t> prime_divisors(std::int64_t n) {
  std::vector<std::int64_t> out;
  for (std::int64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      out.push_back(d);
      while (n % d == 0) n /= d;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

std::vector<std::int64_t> divisors(std::int64_t n) {
  std::vector<std::int64_t> out;
  for (std::int64_t d = 1; d <= n; ++d) {
    if (n % d == 0) out.push_back(d);
  }
  return out;
}

std::int64_t ipow(std::int64_t base, std::int64_t exp) {
  std::int64_t out = 1;
  while (exp-- > 0) out *= base;
  return out;
}

}  // namespace

void validate(const DiffSetParams& params) {
  if (params.lambda < 1 || params.k < params.lambda || params.v < params.k) {
    throw PreconditionError("difference-set parameters need v >= k >= lambda >= 1");
  }
}

std::int64_t exact_prime_power(std::int64_t p, std::int64_t n) {
  if (p < 2) throw PreconditionError("exact_prime_power needs p >= 2");
  if (n == 0) throw PreconditionError("every power of p divides 0");
  n = n < 0 ? -n : n;
  std::int64_t e = 0;
  while (n % p == 0) {
    n /= p;
    ++e;
  }
  return e;
}

std::optional<std::int64_t> minus_one_exponent(std::int64_t p, std::int64_t w) {
  if (w < 1) throw PreconditionError("modulus w must be positive");
  if (std::gcd(p, w) != 1) throw PreconditionError("p and w must be coprime");
  if (w == 1) return 1;
  const std::int64_t target = w - 1;
  const std::int64_t base = ((p % w) + w) % w;
  std::int64_t power = 1;
  // The powers of p cycle with period ord_w(p) <= w - 1; -1 is reached within
  // one period or never.
  for (std::int64_t f = 1; f < w; ++f) {
    power = (power * base) % w;
    if (power == target) return f;
    if (power == 1) break;
  }
  return std::nullopt;
}

TestCResult test_c(const DiffSetParams& params) {
  validate(params);
  const std::int64_t order = params.k - params.lambda;
  if (order == 0) throw PreconditionError("Test C needs k > lambda");
  for (std::int64_t p : prime_divisors(order)) {
    const std::int64_t e = exact_prime_power(p, order);
    const std::int64_t l = params.v % p == 0 ? exact_prime_power(p, params.v) : 0;
    for (std::int64_t w : divisors(params.v)) {
      if (std::gcd(w, p) != 1) continue;
      const auto f = minus_one_exponent(p, w);
      if (!f) continue;
      // p^floor(e/2) < (v / w) p^-l, scaled by w p^l.
      const std::int64_t lhs = ipow(p, e / 2) * w * ipow(p, l);
      if (!(lhs < params.v)) return {TestCWitness{p, w, *f, e, l}};
    }
  }
  return {};
}

bool is_difference_set(const core::ResidueSet& a, std::int64_t lambda) {
  const auto d = core::diff_function(a);
  for (std::size_t n = 1; n < d.counts.size(); ++n) {
    if (static_cast<std::int64_t>(d.counts[n]) != lambda) return false;
  }
  return true;
}

std::optional<core::ResidueSet> brute_force_exists(const DiffSetParams& params, std::int64_t limit) {
  validate(params);
  if (params.v > limit) {
    throw PreconditionError("brute-force difference-set search is limited to v <= " + std::to_string(limit));
  }
  if (!params.counting_identity()) return std::nullopt;
  const auto v = static_cast<std::uint32_t>(params.v);
  const auto k = static_cast<std::size_t>(params.k);
  const core::Modulus mod(v);

  // Depth-first over sets containing 0 in ascending order, keeping the count
  // of every difference and abandoning a branch once one exceeds lambda. The
  // canonical form of any set contains 0, so every orbit is reachable.
  std::vector<std::uint32_t> chosen{0};
  std::vector<std::int64_t> diff(v, 0);
  std::optional<core::ResidueSet> found;

  auto rec = [&](auto&& self, std::uint32_t next) -> void {
    if (found) return;
    if (chosen.size() == k) {
      core::ResidueSet a(mod, chosen);
      if (symmetry::is_canonical(a) && is_difference_set(a, params.lambda)) found = a;
      return;
    }
    for (std::uint32_t x = next; x < v && chosen.size() + (v - x) >= k; ++x) {
      bool ok = true;
      for (std::uint32_t y : chosen) {
        if (++diff[x - y] > params.lambda) ok = false;
        if (++diff[v - (x - y)] > params.lambda) ok = false;
      }
      chosen.push_back(x);
      if (ok) self(self, x + 1);
      chosen.pop_back();
      for (std::uint32_t y : chosen) {
        --diff[x - y];
        --diff[v - (x - y)];
      }
      if (found) return;
    }
  };
  if (k == 1) {
    core::ResidueSet a(mod, chosen);
    return is_difference_set(a, params.lambda) ? std::optional(a) : std::nullopt;
  }
  rec(rec, 1);
  return found;
}

}  // namespace ruzsa::diffset
