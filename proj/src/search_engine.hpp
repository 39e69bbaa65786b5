#pragma once

// Single-threaded depth-first explorer shared by the splitter, the worker
// pool and the test-only enumerator.

#include <atomic>
#include <chrono>
#include <cstdint>
#include <optional>
#include <vector>

#include "ruzsa/kernels.hpp"
#include "ruzsa/search.hpp"

namespace ruzsa::search::detail {

struct BranchSpec {
  std::uint64_t forced = 0;
  std::uint64_t pool = 0;
  bool widest_gap_last = false;
};

struct Problem {
  std::uint32_t m = 1;
  std::uint32_t r = 1;
  std::uint32_t k = 1;
  std::vector<BranchSpec> branches;
};

Problem make_problem(std::uint32_t m, std::uint32_t r, std::uint32_t k, const symmetry::NormalizationPlan& plan);

enum class ItemStatus { complete, found, interrupted, aborted, not_started };

struct ItemResult {
  ItemStatus status = ItemStatus::not_started;
  std::uint64_t nodes = 0;
  std::uint64_t witness = 0;
  /// Remaining work in DFS order when interrupted.
  std::vector<WorkItem> frontier;
};

/// Shared flags read by explorers while they run.
struct StopSignals {
  std::optional<std::chrono::steady_clock::time_point> deadline;
  /// Items with an index above this stop early (a witness was found earlier).
  std::atomic<std::size_t>* best_found = nullptr;
  std::atomic<bool>* deadline_hit = nullptr;
  /// Optional live counters for progress reports.
  std::atomic<std::uint64_t>* live_nodes = nullptr;
  std::vector<std::atomic<std::uint64_t>>* live_depths = nullptr;
};

class Explorer {
 public:
  Explorer(const Problem& problem, const simd::KernelTable& kernels);

  /// Explores every child of `item`. With `emit_size` set, children of that
  /// size are appended to `emitted` instead of being explored. With
  /// `collect`, every solution is appended and the search continues.
  ItemResult run(const WorkItem& item, std::size_t index, const StopSignals& stop,
                 std::optional<std::uint32_t> emit_size = std::nullopt, std::vector<WorkItem>* emitted = nullptr,
                 std::vector<std::uint64_t>* collect = nullptr);

 private:
  struct Frame {
    std::uint64_t members;
    std::uint32_t size;
    std::uint32_t next;
    std::uint32_t last;
    std::uint32_t widest;
    simd::CountBlock counts;
  };

  bool build_root(const WorkItem& item, Frame& frame) const;

  const Problem& problem_;
  const simd::KernelTable& kernels_;
  std::vector<Frame> stack_;
};

}  // namespace ruzsa::search::detail
