#pragma once

// Executable reports: the small-m classification, the analytic reductions
// for 21 <= m <= 500 and m > 500, the remaining searches, and the appendix
// witness table.

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ruzsa/search.hpp"
#include "ruzsa/zm_core.hpp"

namespace ruzsa::pipeline {

struct AppendixRow {
  std::uint32_t m = 0;
  std::uint32_t r_m = 0;
  core::ResidueSet witness;
};

/// CRC-32 of the shipped data/appendix.csv.
inline constexpr std::uint32_t kAppendixCrc32 = 0xf2efb859;

/// Parses `m,R_m,set` lines with a header row. Throws ParseError.
std::vector<AppendixRow> parse_appendix(std::string_view csv);
/// The embedded table; throws std::runtime_error if its checksum is off.
const std::vector<AppendixRow>& appendix();
std::uint32_t appendix_checksum();

enum class StageStatus { pass, fail, incomplete };
std::string to_string(StageStatus s);

struct Stage {
  std::string name;
  std::string claim_anchor;
  std::string inputs;
  std::string computed;
  std::string expected;
  StageStatus status = StageStatus::pass;
  double runtime_s = 0;
  std::vector<std::string> notes;
  /// Checkpoint files written by searches that ran out of budget.
  std::vector<std::string> checkpoints;
};

struct ReproReport {
  std::string title;
  std::vector<Stage> stages;

  std::size_t count(StageStatus s) const;
  /// True when no stage failed; with `strict`, incomplete stages fail too.
  bool passed(bool strict = false) const;
  std::string to_text() const;
  std::string to_json() const;
  void append(const ReproReport& other);
};

struct PipelineOptions {
  search::ExecOptions exec;
  /// Budget for each heavy search stage; unlimited when empty.
  std::optional<std::chrono::milliseconds> search_budget = std::chrono::minutes(5);
  /// Extra moduli for the m > 500 stage.
  std::vector<std::int64_t> large_moduli;
  /// Where timed-out searches leave checkpoints; none are written when empty.
  std::string checkpoint_dir;
  std::int64_t theorem1_limit = 10000;
};

ReproReport reproduce_theorem1(const PipelineOptions& options = {});
ReproReport reproduce_theorem2(const PipelineOptions& options = {});
/// Checks every row with verify_witness only; never searches.
ReproReport verify_appendix();

/// The published r <= 5 survivor list for 21 <= m <= 500.
const std::vector<std::pair<std::int64_t, std::int64_t>>& published_step2_pairs();

/// The published (k_1..k_5) table for (m, k) = (45, 12).
const std::vector<std::vector<std::int64_t>>& published_45_12_profiles();

struct Classification {
  std::uint32_t lower = 0;
  std::uint32_t upper = 0;
  bool exact = false;
  /// Where the value comes from.
  std::string basis;
};

/// R_m as far as it is known: exact for m <= 35, [6, 288] beyond.
Classification classify(std::uint64_t m);

}  // namespace ruzsa::pipeline
