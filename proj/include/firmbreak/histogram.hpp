#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace firmbreak {

/// Number of entities n(A) observed at integer size A (workers per firm).
/// Counts are real: averaged multi-year data is fractional.
struct SizeBin {
  int size = 1;
  double count = 0.0;

  friend bool operator==(const SizeBin&, const SizeBin&) = default;
};

/// Inclusive range of sizes [lo, hi].
struct SizeRange {
  int lo = 1;
  int hi = 1;

  int length() const noexcept { return hi - lo + 1; }
  bool contains(int size) const noexcept { return size >= lo && size <= hi; }
  bool contains(const SizeRange& other) const noexcept {
    return other.lo >= lo && other.hi <= hi;
  }

  friend bool operator==(const SizeRange&, const SizeRange&) = default;
};

/// Parses "lo:hi" (inclusive). A single number "a" means a:a.
SizeRange parse_size_range(const std::string& text);
std::string format_size_range(const SizeRange& r);

/// Validated, immutable size-frequency histogram: sizes strictly increasing,
/// contiguous, at least two bins, counts finite and nonnegative.
class SizeHistogram {
 public:
  SizeHistogram(std::vector<SizeBin> bins, std::string label = {});

  std::span<const SizeBin> bins() const noexcept { return bins_; }
  const std::string& label() const noexcept { return label_; }
  std::size_t size() const noexcept { return bins_.size(); }
  SizeRange span() const noexcept { return {bins_.front().size, bins_.back().size}; }

  /// Count at a size inside span(); throws a range error otherwise.
  double count_at(int size) const;
  /// Bins whose size lies in r; r must lie within span().
  std::span<const SizeBin> slice(const SizeRange& r) const;

  /// Same sizes and label, new counts (validated).
  SizeHistogram with_counts(std::span<const double> counts) const;

  friend bool operator==(const SizeHistogram& a, const SizeHistogram& b) {
    return a.bins_ == b.bins_;
  }

 private:
  std::vector<SizeBin> bins_;
  std::string label_;
};

/// Σ n(A) over r.
double total_firms(const SizeHistogram& h, const SizeRange& r);
/// Σ A·n(A) over r.
double total_workers(const SizeHistogram& h, const SizeRange& r);

/// Reads the "workers,count" CSV format. Rows may appear in any order.
SizeHistogram parse_histogram_csv(std::istream& in, std::string label = {});
SizeHistogram load_histogram(const std::filesystem::path& path);

/// Writes the same CSV format using the shortest exact decimal for each count.
void write_histogram_csv(std::ostream& out, const SizeHistogram& h);
void save_histogram(const std::filesystem::path& path, const SizeHistogram& h);

/// Shortest decimal text that parses back to exactly `value`.
std::string format_exact(double value);

}  // namespace firmbreak
