#pragma once

// Exhaustive search for A in Z_m with 1 <= R_A(n) <= r for all n.
//
// The engine extends A depth-first in ascending residue order under a
// lossless symmetry normalization, updating representation counts
// incrementally. A branch is cut when some count exceeds r, or when an
// uncovered residue can no longer be reached from the remaining candidates.
// Supports m <= 64.

#include <chrono>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ruzsa/symmetry.hpp"
#include "ruzsa/zm_core.hpp"

namespace ruzsa::search {

inline constexpr std::uint32_t kMaxSearchModulus = 64;
inline constexpr int kCheckpointFormat = 1;

/// Resumable position inside one search: the remaining frontier as partial
/// sets plus the number of the next candidate residue to try for each.
struct WorkItem {
  std::uint32_t branch = 0;
  std::uint64_t members = 0;  // forced elements included
  std::uint32_t next = 0;     // smallest residue still to be tried as the next element
  friend bool operator==(const WorkItem&, const WorkItem&) = default;
};

struct Checkpoint {
  std::uint32_t m = 0;
  std::uint32_t r = 0;
  std::uint32_t k_lo = 0;
  std::uint32_t k_hi = 0;
  symmetry::NormalizationMode normalization = symmetry::NormalizationMode::generic;
  std::uint64_t normalization_digest = 0;
  std::uint32_t k_current = 0;
  std::uint64_t nodes = 0;
  std::vector<WorkItem> frontier;
  /// Set once the search it came from finished; such tokens cannot resume.
  bool finished = false;

  std::string serialize() const;
  /// Throws CheckpointError on corruption, version mismatch, or bad fields.
  static Checkpoint parse(const std::string& text);
  void save(const std::string& path) const;
  static Checkpoint load(const std::string& path);
};

struct Progress {
  std::uint64_t nodes = 0;
  std::vector<std::uint64_t> depth_histogram;  // nodes by |A| after the addition
  double elapsed_s = 0;
  std::string to_json() const;
};

struct ExecOptions {
  int threads = 1;
  /// Extra elements placed by the splitter before work is handed to workers.
  int split_depth = 2;
  std::optional<std::chrono::milliseconds> time_budget;
  std::function<void(const Progress&)> on_progress;
  std::chrono::milliseconds progress_interval{1000};
};

struct SearchTask {
  std::uint32_t m = 1;
  std::uint32_t r = 1;
  std::uint32_t k_lo = 1;
  std::uint32_t k_hi = 1;
  symmetry::NormalizationMode normalization = symmetry::NormalizationMode::automatic;
};

/// Default task: k over [size_lower(m), min(m, size_upper(m, r))].
SearchTask default_task(std::uint32_t m, std::uint32_t r,
                        symmetry::NormalizationMode mode = symmetry::NormalizationMode::automatic);

enum class Verdict { found, exhausted, timeout };
std::string to_string(Verdict v);

struct SearchOutcome {
  Verdict verdict = Verdict::exhausted;
  std::optional<core::ResidueSet> witness;
  /// Resumable on timeout; otherwise a finished token that resume() rejects.
  std::optional<Checkpoint> checkpoint;
  std::uint64_t nodes_explored = 0;
  double wall_time_s = 0;
};

/// Throws PreconditionError for m > 64, r = 0, or an empty/invalid k range.
SearchOutcome find_basis(const SearchTask& task, const ExecOptions& exec = {});
/// Continues a timed-out search. Throws CheckpointError for finished or
/// incompatible tokens.
SearchOutcome resume(const Checkpoint& checkpoint, const ExecOptions& exec = {});

/// Every admitted set of size in the task's k range satisfying the bounds,
/// found by the pruned engine (single-threaded). For tests on small m.
std::vector<core::ResidueSet> enumerate_solutions(const SearchTask& task);

struct RuzsaResult {
  std::optional<std::uint32_t> value;  // R_m when known
  std::optional<core::ResidueSet> witness;
  /// On timeout: the cap being searched and where to continue.
  std::optional<Checkpoint> checkpoint;
  std::uint64_t nodes_explored = 0;
  double wall_time_s = 0;
};

inline constexpr std::uint32_t kChenCeiling = 288;

/// Least r <= ceiling admitting a witness. Throws std::runtime_error if the
/// ceiling is exhausted.
RuzsaResult ruzsa_number(std::uint32_t m, std::uint32_t ceiling = kChenCeiling, const ExecOptions& exec = {},
                         symmetry::NormalizationMode mode = symmetry::NormalizationMode::automatic);
/// Continues ruzsa_number from a checkpoint produced by it.
RuzsaResult resume_ruzsa(const Checkpoint& checkpoint, std::uint32_t ceiling = kChenCeiling,
                         const ExecOptions& exec = {});

/// Independent oracle: enumerates every subset containing 0 with a direct
/// double loop for R_A. Requires m <= 16.
struct BruteForceResult {
  std::uint32_t value = 0;
  core::ResidueSet witness;
};
BruteForceResult brute_force_ruzsa(std::uint32_t m);

}  // namespace ruzsa::search
