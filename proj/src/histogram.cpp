#include "firmbreak/histogram.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "firmbreak/error.hpp"

namespace firmbreak {

namespace {

std::string trim(std::string_view s) {
  auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

bool parse_int(const std::string& s, int& out) {
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc{} && ptr == s.data() + s.size();
}

bool parse_double(const std::string& s, double& out) {
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc{} && ptr == s.data() + s.size();
}

void check_range(const SizeHistogram& h, const SizeRange& r) {
  auto span = h.span();
  if (r.lo > r.hi || !span.contains(r)) {
    throw Error(ErrorKind::Range, "range " + format_size_range(r) +
                                      " outside histogram span " +
                                      format_size_range(span));
  }
}

}  // namespace

SizeRange parse_size_range(const std::string& text) {
  auto colon = text.find(':');
  SizeRange r;
  bool ok;
  if (colon == std::string::npos) {
    ok = parse_int(trim(text), r.lo);
    r.hi = r.lo;
  } else {
    ok = parse_int(trim(text.substr(0, colon)), r.lo) &&
         parse_int(trim(text.substr(colon + 1)), r.hi);
  }
  if (!ok) throw Error(ErrorKind::MalformedInput, "bad size range '" + text + "', expected lo:hi");
  if (r.lo > r.hi) throw Error(ErrorKind::Range, "size range '" + text + "' has lo > hi");
  return r;
}

std::string format_size_range(const SizeRange& r) {
  return std::to_string(r.lo) + ":" + std::to_string(r.hi);
}

SizeHistogram::SizeHistogram(std::vector<SizeBin> bins, std::string label)
    : bins_(std::move(bins)), label_(std::move(label)) {
  if (bins_.size() < 2) {
    throw Error(ErrorKind::Domain, "histogram needs at least 2 bins");
  }
  for (std::size_t i = 0; i < bins_.size(); ++i) {
    const auto& b = bins_[i];
    if (b.size < 1) {
      throw Error(ErrorKind::Domain, "size " + std::to_string(b.size) + " is below 1");
    }
    if (!std::isfinite(b.count) || b.count < 0.0) {
      throw Error(ErrorKind::Domain,
                  "count at size " + std::to_string(b.size) + " is negative or not finite");
    }
    if (i == 0) continue;
    int prev = bins_[i - 1].size;
    if (b.size == prev) {
      throw Error(ErrorKind::DuplicateBin, "duplicate size " + std::to_string(b.size));
    }
    if (b.size < prev) {
      throw Error(ErrorKind::Domain, "sizes not increasing at " + std::to_string(b.size));
    }
    if (b.size != prev + 1) {
      throw Error(ErrorKind::NonContiguous, "sizes " + std::to_string(prev + 1) + ".." +
                                                std::to_string(b.size - 1) + " missing");
    }
  }
}

double SizeHistogram::count_at(int size) const {
  if (!span().contains(size)) {
    throw Error(ErrorKind::Range, "size " + std::to_string(size) + " outside histogram span");
  }
  return bins_[static_cast<std::size_t>(size - bins_.front().size)].count;
}

std::span<const SizeBin> SizeHistogram::slice(const SizeRange& r) const {
  check_range(*this, r);
  auto offset = static_cast<std::size_t>(r.lo - bins_.front().size);
  return std::span<const SizeBin>(bins_).subspan(offset, static_cast<std::size_t>(r.length()));
}

SizeHistogram SizeHistogram::with_counts(std::span<const double> counts) const {
  if (counts.size() != bins_.size()) {
    throw Error(ErrorKind::Domain, "count vector length does not match histogram");
  }
  auto bins = bins_;
  for (std::size_t i = 0; i < bins.size(); ++i) bins[i].count = counts[i];
  return SizeHistogram(std::move(bins), label_);
}

double total_firms(const SizeHistogram& h, const SizeRange& r) {
  double sum = 0.0;
  for (const auto& b : h.slice(r)) sum += b.count;
  return sum;
}

double total_workers(const SizeHistogram& h, const SizeRange& r) {
  double sum = 0.0;
  for (const auto& b : h.slice(r)) sum += b.size * b.count;
  return sum;
}

SizeHistogram parse_histogram_csv(std::istream& in, std::string label) {
  std::string line;
  int lineno = 0;
  bool have_header = false;
  std::vector<SizeBin> bins;
  while (std::getline(in, line)) {
    ++lineno;
    auto text = trim(line);
    if (lineno == 1 && text.size() >= 3 && text.compare(0, 3, "\xEF\xBB\xBF") == 0) {
      text = trim(text.substr(3));
    }
    if (text.empty()) continue;
    if (!have_header) {
      if (text != "workers,count") {
        throw Error(ErrorKind::MalformedInput,
                    "line " + std::to_string(lineno) + ": expected header 'workers,count'");
      }
      have_header = true;
      continue;
    }
    auto comma = text.find(',');
    SizeBin bin;
    if (comma == std::string::npos || text.find(',', comma + 1) != std::string::npos ||
        !parse_int(trim(text.substr(0, comma)), bin.size) ||
        !parse_double(trim(text.substr(comma + 1)), bin.count)) {
      throw Error(ErrorKind::MalformedInput,
                  "line " + std::to_string(lineno) + ": expected '<integer size>,<count>'");
    }
    if (bin.count < 0.0) {
      throw Error(ErrorKind::Domain, "line " + std::to_string(lineno) + ": negative count");
    }
    bins.push_back(bin);
  }
  if (!have_header) throw Error(ErrorKind::MalformedInput, "missing header 'workers,count'");
  std::stable_sort(bins.begin(), bins.end(),
                   [](const SizeBin& a, const SizeBin& b) { return a.size < b.size; });
  return SizeHistogram(std::move(bins), std::move(label));
}

SizeHistogram load_histogram(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());
  return parse_histogram_csv(in, path.stem().string());
}

std::string format_exact(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ptr);
}

void write_histogram_csv(std::ostream& out, const SizeHistogram& h) {
  out << "workers,count\n";
  for (const auto& b : h.bins()) out << b.size << ',' << format_exact(b.count) << '\n';
}

void save_histogram(const std::filesystem::path& path, const SizeHistogram& h) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string());
  write_histogram_csv(out, h);
}

}  // namespace firmbreak
