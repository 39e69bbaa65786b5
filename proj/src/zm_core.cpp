#include "ruzsa/zm_core.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <charconv>
#include <nlohmann/json.hpp>

#include "ruzsa/kernels.hpp"

namespace ruzsa::core {

Modulus::Modulus(std::uint32_t m) : m_(m) {
  if (m == 0) throw PreconditionError("modulus must be at least 1");
}

ResidueSet::ResidueSet(Modulus m) : m_(m), words_((m.value() + 63) / 64, 0) {}

ResidueSet::ResidueSet(Modulus m, std::span<const std::uint32_t> members) : ResidueSet(m) {
  for (std::uint32_t a : members) {
    if (a >= m.value()) {
      throw PreconditionError("residue " + std::to_string(a) + " out of range for modulus " + std::to_string(m.value()));
    }
    std::uint64_t& w = words_[a / 64];
    const std::uint64_t bit = std::uint64_t{1} << (a % 64);
    if (w & bit) throw PreconditionError("residue " + std::to_string(a) + " listed twice");
    w |= bit;
    ++size_;
  }
}

ResidueSet::ResidueSet(Modulus m, std::initializer_list<std::uint32_t> members)
    : ResidueSet(m, std::span<const std::uint32_t>(members.begin(), members.size())) {}

ResidueSet ResidueSet::from_residues(Modulus m, std::span<const std::int64_t> values) {
  const auto mod = static_cast<std::int64_t>(m.value());
  std::vector<std::uint32_t> reduced;
  reduced.reserve(values.size());
  for (std::int64_t v : values) reduced.push_back(static_cast<std::uint32_t>(((v % mod) + mod) % mod));
  std::sort(reduced.begin(), reduced.end());
  reduced.erase(std::unique(reduced.begin(), reduced.end()), reduced.end());
  return ResidueSet(m, reduced);
}

ResidueSet ResidueSet::from_mask(Modulus m, std::uint64_t mask) {
  if (m.value() > 64) throw PreconditionError("from_mask requires m <= 64");
  ResidueSet out(m);
  out.words_[0] = mask & simd::low_mask(m.value());
  out.size_ = static_cast<std::size_t>(std::popcount(out.words_[0]));
  return out;
}

bool ResidueSet::contains(std::uint32_t residue) const {
  if (residue >= m()) return false;
  return (words_[residue / 64] >> (residue % 64)) & 1u;
}

std::vector<std::uint32_t> ResidueSet::members() const {
  std::vector<std::uint32_t> out;
  out.reserve(size_);
  for (std::size_t w = 0; w < words_.size(); ++w) {
    for (std::uint64_t rest = words_[w]; rest != 0; rest &= rest - 1) {
      out.push_back(static_cast<std::uint32_t>(w * 64 + std::countr_zero(rest)));
    }
  }
  return out;
}

std::uint64_t ResidueSet::mask() const {
  if (m() > 64) throw PreconditionError("mask() requires m <= 64");
  return words_[0];
}

std::uint64_t RepVector::total() const {
  std::uint64_t s = 0;
  for (auto c : counts) s += c;
  return s;
}

std::uint32_t RepVector::max() const { return counts.empty() ? 0 : *std::max_element(counts.begin(), counts.end()); }

std::uint32_t RepVector::min() const { return counts.empty() ? 0 : *std::min_element(counts.begin(), counts.end()); }

namespace {

// Bits [offset, offset + m) of `doubled` (a 2m-bit buffer), packed into
// ceil(m / 64) words.
void extract_window(std::span<const std::uint64_t> doubled, std::uint32_t offset, std::uint32_t m,
                    std::vector<std::uint64_t>& out) {
  const std::size_t words = (m + 63) / 64;
  out.assign(words, 0);
  const std::size_t shift = offset % 64;
  const std::size_t first = offset / 64;
  for (std::size_t w = 0; w < words; ++w) {
    const std::size_t src = first + w;
    std::uint64_t v = doubled[src] >> shift;
    if (shift != 0 && src + 1 < doubled.size()) v |= doubled[src + 1] << (64 - shift);
    out[w] = v;
  }
  if (m % 64 != 0) out.back() &= simd::low_mask(m % 64);
}

// Bit vector of length 2m holding `set` twice, so any cyclic window is a
// plain slice.
std::vector<std::uint64_t> doubled_bits(const std::vector<std::uint32_t>& members, std::uint32_t m) {
  std::vector<std::uint64_t> out((2 * static_cast<std::size_t>(m) + 63) / 64 + 1, 0);
  for (std::uint32_t a : members) {
    out[a / 64] |= std::uint64_t{1} << (a % 64);
    const std::size_t b = static_cast<std::size_t>(a) + m;
    out[b / 64] |= std::uint64_t{1} << (b % 64);
  }
  return out;
}

// counts[n] = popcount(a & window(n)), where window(n) starts at
// offset_of(n) in the doubled buffer.
template <typename OffsetFn>
RepVector correlate(const ResidueSet& a, const std::vector<std::uint32_t>& other, OffsetFn offset_of) {
  const std::uint32_t m = a.m();
  RepVector rep{a.modulus(), std::vector<std::uint32_t>(m, 0)};
  if (a.empty()) return rep;
  const auto& kernels = simd::active_kernels();
  const auto doubled = doubled_bits(other, m);
  std::vector<std::uint64_t> window;
  const auto words = a.words();
  for (std::uint32_t n = 0; n < m; ++n) {
    extract_window(doubled, offset_of(n), m, window);
    rep.counts[n] = static_cast<std::uint32_t>(kernels.and_popcount(words.data(), window.data(), words.size()));
  }
  return rep;
}

}  // namespace

RepVector rep_function(const ResidueSet& a) {
  // R_A(n) = |A ∩ (n - A)|; n - A is the reflection -A rotated by n.
  const std::uint32_t m = a.m();
  std::vector<std::uint32_t> reflected;
  for (std::uint32_t x : a.members()) reflected.push_back(x == 0 ? 0 : m - x);
  // Bit j of rotl(-A, n) is bit (j - n) mod m of -A = doubled bit j + m - n.
  return correlate(a, reflected, [m](std::uint32_t n) { return n == 0 ? 0 : m - n; });
}

RepVector diff_function(const ResidueSet& a) {
  // R_{A,-A}(n) = |A ∩ (A + n)|.
  const std::uint32_t m = a.m();
  return correlate(a, a.members(), [m](std::uint32_t n) { return n == 0 ? 0 : m - n; });
}

bool is_basis(const ResidueSet& a) { return rep_function(a).min() >= 1; }

std::uint32_t max_rep(const ResidueSet& a) { return rep_function(a).max(); }

RepProfile profile_of(const RepVector& rep, std::size_t cardinality, std::uint32_t cap) {
  RepProfile p{rep.modulus, cardinality, std::vector<std::uint32_t>(cap, 0), 0, 0};
  for (std::uint32_t c : rep.counts) {
    if (c == 0) {
      ++p.zeros;
    } else if (c > cap) {
      ++p.overflow;
    } else {
      ++p.k_counts[c - 1];
    }
  }
  return p;
}

RepProfile rep_profile(const ResidueSet& a, std::uint32_t cap) { return profile_of(rep_function(a), a.size(), cap); }

bool verify_witness(Modulus m, const ResidueSet& a, std::uint32_t r) {
  if (a.modulus() != m) {
    throw PreconditionError("set lives in Z_" + std::to_string(a.m()) + " but modulus " + std::to_string(m.value()) +
                            " was requested");
  }
  return first_violation(rep_function(a), r) < 0;
}

std::int64_t first_violation(const RepVector& rep, std::uint32_t r) {
  for (std::size_t n = 0; n < rep.counts.size(); ++n) {
    if (rep.counts[n] < 1 || rep.counts[n] > r) return static_cast<std::int64_t>(n);
  }
  return -1;
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::uint64_t parse_uint(std::string_view s, std::string_view what) {
  s = trim(s);
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
    throw ParseError("invalid " + std::string(what) + " '" + std::string(s) + "'");
  }
  return v;
}

ResidueSet build_checked(std::uint64_t m, const std::vector<std::uint64_t>& raw) {
  if (m == 0 || m > 0xffffffffULL) throw ParseError("modulus must be a positive 32-bit integer");
  std::vector<std::uint32_t> members;
  for (std::uint64_t a : raw) {
    if (a >= m) throw ParseError("residue " + std::to_string(a) + " is not in [0, " + std::to_string(m) + ")");
    members.push_back(static_cast<std::uint32_t>(a));
  }
  std::vector<std::uint32_t> sorted = members;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) throw ParseError("duplicate residue");
  return ResidueSet(Modulus(static_cast<std::uint32_t>(m)), sorted);
}

}  // namespace

ResidueSet parse_residue_set(std::string_view text) {
  text = trim(text);
  if (!text.empty() && text.front() == '{' && text.find(':') != std::string_view::npos &&
      text.find('"') != std::string_view::npos) {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(std::string("invalid JSON set: ") + e.what());
    }
    if (!j.is_object() || !j.contains("m") || !j.contains("set") || !j["m"].is_number_unsigned() ||
        !j["set"].is_array()) {
      throw ParseError(R"(JSON set must look like {"m": 6, "set": [0,3,4,5]})");
    }
    std::vector<std::uint64_t> raw;
    for (const auto& v : j["set"]) {
      if (!v.is_number_unsigned()) throw ParseError("JSON set members must be nonnegative integers");
      raw.push_back(v.get<std::uint64_t>());
    }
    return build_checked(j["m"].get<std::uint64_t>(), raw);
  }

  const auto colon = text.find(':');
  if (colon == std::string_view::npos) throw ParseError("expected 'm:{a1,a2,...}'");
  const std::uint64_t m = parse_uint(text.substr(0, colon), "modulus");
  std::string_view body = trim(text.substr(colon + 1));
  if (body.size() < 2 || body.front() != '{' || body.back() != '}') throw ParseError("expected braces around members");
  body = trim(body.substr(1, body.size() - 2));
  std::vector<std::uint64_t> raw;
  while (!body.empty()) {
    const auto comma = body.find(',');
    raw.push_back(parse_uint(body.substr(0, comma), "residue"));
    if (comma == std::string_view::npos) break;
    body.remove_prefix(comma + 1);
    if (trim(body).empty()) throw ParseError("trailing comma in set");
  }
  return build_checked(m, raw);
}

std::string format_residue_set(const ResidueSet& a) {
  std::string out = std::to_string(a.m()) + ":{";
  bool first = true;
  for (auto x : a.members()) {
    if (!first) out += ',';
    out += std::to_string(x);
    first = false;
  }
  return out + "}";
}

std::string format_residue_set_json(const ResidueSet& a) {
  nlohmann::json j;
  j["m"] = a.m();
  j["set"] = a.members();
  return j.dump();
}

}  // namespace ruzsa::core
