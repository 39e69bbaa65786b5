#include "ruzsa/symmetry.hpp"

#include <algorithm>
#include <boost/crc.hpp>
#include <numeric>
#include <tuple>

namespace ruzsa::symmetry {

std::uint32_t gcd(std::uint32_t a, std::uint32_t b) { return std::gcd(a, b); }

std::uint32_t inverse_mod(std::uint32_t unit, std::uint32_t m) {
  if (m == 1) return 0;
  // Extended Euclid on signed 64-bit values.
  std::int64_t r0 = m, r1 = unit % m, s0 = 0, s1 = 1;
  while (r1 != 0) {
    const std::int64_t q = r0 / r1;
    std::tie(r0, r1) = std::pair{r1, r0 - q * r1};
    std::tie(s0, s1) = std::pair{s1, s0 - q * s1};
  }
  if (r0 != 1) throw PreconditionError(std::to_string(unit) + " is not a unit mod " + std::to_string(m));
  return static_cast<std::uint32_t>(((s0 % m) + m) % m);
}

std::vector<std::uint32_t> units(std::uint32_t m) {
  std::vector<std::uint32_t> out;
  if (m == 1) return {0};
  for (std::uint32_t l = 1; l < m; ++l) {
    if (std::gcd(l, m) == 1) out.push_back(l);
  }
  return out;
}

AffineMap AffineMap::make(std::uint32_t m, std::uint32_t translation, std::uint32_t dilation) {
  if (m == 0) throw PreconditionError("modulus must be at least 1");
  if (std::gcd(dilation % m, m) != 1 && m != 1) {
    throw PreconditionError("dilation " + std::to_string(dilation) + " is not coprime to " + std::to_string(m));
  }
  return AffineMap{m, translation % m, dilation % m};
}

std::uint32_t AffineMap::operator()(std::uint32_t x) const {
  return static_cast<std::uint32_t>((static_cast<std::uint64_t>(dilation) * x + translation) % m);
}

ResidueSet AffineMap::apply(const ResidueSet& a) const {
  if (a.m() != m) throw PreconditionError("affine map and set live in different groups");
  std::vector<std::uint32_t> image;
  for (auto x : a.members()) image.push_back((*this)(x));
  std::sort(image.begin(), image.end());
  return ResidueSet(a.modulus(), image);
}

ResidueSet translate(const ResidueSet& a, std::uint32_t t) { return AffineMap::make(a.m(), t, 1).apply(a); }

ResidueSet dilate(const ResidueSet& a, std::uint32_t l) { return AffineMap::make(a.m(), 0, l).apply(a); }

namespace {

// Least ascending image of `a` over all affine maps. Only translations that
// send some member to 0 can win, since the least image always contains 0.
std::vector<std::uint32_t> least_image(const ResidueSet& a) {
  const std::uint32_t m = a.m();
  const auto members = a.members();
  if (members.empty()) return {};
  std::vector<std::uint32_t> best, scratch;
  for (std::uint32_t l : units(m)) {
    for (std::uint32_t pivot : members) {
      scratch.clear();
      for (std::uint32_t x : members) {
        const std::uint64_t shifted = (static_cast<std::uint64_t>(x) + m - pivot) % m;
        scratch.push_back(static_cast<std::uint32_t>((shifted * l) % m));
      }
      std::sort(scratch.begin(), scratch.end());
      if (best.empty() || scratch < best) best = scratch;
    }
  }
  return best;
}

std::vector<std::uint32_t> range_vec(std::uint32_t lo, std::uint32_t hi) {
  std::vector<std::uint32_t> out;
  for (std::uint32_t x = lo; x < hi; ++x) out.push_back(x);
  return out;
}

bool is_prime(std::uint32_t n) {
  if (n < 2) return false;
  for (std::uint32_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

}  // namespace

ResidueSet canonical_form(const ResidueSet& a) { return ResidueSet(a.modulus(), least_image(a)); }

bool is_canonical(const ResidueSet& a) { return a.members() == least_image(a); }

std::uint64_t NormalizationPlan::digest() const {
  boost::crc_32_type crc;
  auto feed = [&crc](const std::string& s) { crc.process_bytes(s.data(), s.size() + 1); };
  feed(name);
  for (const auto& b : branches) {
    feed(b.name);
    std::string body = b.widest_gap_last ? "gap;" : "plain;";
    for (auto x : b.forced) body += std::to_string(x) + ",";
    body += ";";
    for (auto x : b.pool) body += std::to_string(x) + ",";
    feed(body);
  }
  return crc.checksum();
}

std::string to_string(NormalizationMode mode) {
  switch (mode) {
    case NormalizationMode::automatic:
      return "auto";
    case NormalizationMode::generic:
      return "generic";
    case NormalizationMode::zero_only:
      return "zero";
    case NormalizationMode::targeted:
      return "targeted";
  }
  return "unknown";
}

NormalizationMode parse_normalization_mode(const std::string& text) {
  if (text == "auto") return NormalizationMode::automatic;
  if (text == "generic") return NormalizationMode::generic;
  if (text == "zero") return NormalizationMode::zero_only;
  if (text == "targeted") return NormalizationMode::targeted;
  throw ParseError("unknown normalization '" + text + "' (expected auto, generic, zero or targeted)");
}

NormalizationMode resolve_mode(NormalizationMode mode, std::uint32_t m, std::uint32_t r) {
  if (mode != NormalizationMode::automatic) return mode;
  return (r == 5 && (m == 40 || m == 41)) ? NormalizationMode::targeted : NormalizationMode::generic;
}

NormalizationPlan search_normalization(std::uint32_t m, NormalizationMode mode) {
  if (m == 0) throw PreconditionError("modulus must be at least 1");
  if (mode == NormalizationMode::automatic) mode = NormalizationMode::generic;
  if (m == 1) return {"trivial", {Branch{"all", {0}, {}, false}}};

  if (mode == NormalizationMode::targeted && m == 40) {
    Branch coprime{"coprime", {0, 39}, range_vec(1, 39), false};
    Branch shared{"non-coprime", {0}, {}, false};
    for (std::uint32_t x = 1; x < m; ++x) {
      if (std::gcd(x, m) != 1) shared.pool.push_back(x);
    }
    return {"split-40", {coprime, shared}};
  }
  if (mode == NormalizationMode::targeted && is_prime(m) && m > 2) {
    return {"prime-" + std::to_string(m), {Branch{"zero-and-minus-one", {0, m - 1}, range_vec(1, m - 1), false}}};
  }
  if (mode == NormalizationMode::zero_only) return {"zero", {Branch{"zero", {0}, range_vec(1, m), false}}};
  return {"generic", {Branch{"widest-gap", {0}, range_vec(1, m), true}}};
}

bool admits(const Branch& branch, const ResidueSet& a) {
  for (auto f : branch.forced) {
    if (!a.contains(f)) return false;
  }
  for (auto x : a.members()) {
    const bool forced = std::find(branch.forced.begin(), branch.forced.end(), x) != branch.forced.end();
    const bool pooled = std::binary_search(branch.pool.begin(), branch.pool.end(), x);
    if (!forced && !pooled) return false;
  }
  if (branch.widest_gap_last) {
    const auto members = a.members();
    std::uint32_t widest = 0;
    for (std::size_t i = 1; i < members.size(); ++i) widest = std::max(widest, members[i] - members[i - 1]);
    if (!members.empty() && a.m() - members.back() < widest) return false;
  }
  return true;
}

std::optional<ResidueSet> normalize(const NormalizationPlan& plan, const ResidueSet& a) {
  const std::uint32_t m = a.m();
  for (std::uint32_t l : units(m)) {
    for (std::uint32_t t = 0; t < m; ++t) {
      const auto image = AffineMap::make(m, t, l).apply(a);
      for (const auto& b : plan.branches) {
        if (admits(b, image)) return image;
      }
    }
  }
  return std::nullopt;
}

}  // namespace ruzsa::symmetry
