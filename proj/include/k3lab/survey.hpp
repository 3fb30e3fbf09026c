#pragma once

// Parallel, resumable trace survey over all good prime slots up to a norm
// bound, backed by a checksummed CSV cache.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "k3lab/ffield.hpp"
#include "k3lab/models.hpp"
#include "k3lab/traces.hpp"

namespace k3lab::survey {

using traces::TraceRecord;

inline constexpr const char* kCacheHeader = "surface,p,f,index,norm,tags,trace_num,trace_den";

class CacheError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A malformed cache line; line numbers are 1-based.
class CacheCorrupt : public CacheError {
 public:
  CacheCorrupt(const std::string& path, std::size_t line, const std::string& why);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

struct SkippedSlot {
  numfield::PrimeSlot slot;
  std::string reason;
};

struct SurveyOptions {
  std::uint64_t norm_bound = 0;
  unsigned workers = 1;
  std::optional<std::filesystem::path> cache;
  std::ostream* log = nullptr;  // skipped slots are reported here
  std::uint64_t budget = ffield::kDefaultTableBudget;
};

struct SurveyResult {
  std::vector<TraceRecord> records;  // norm <= bound, ascending
  std::size_t new_records = 0;
  std::size_t cached_records = 0;
  std::vector<SkippedSlot> skipped;
};

/// All prime slots of the base field with norm <= bound over odd primes, in
/// (norm, p, index) order. Ramified primes are reported in `ramified`.
std::vector<numfield::PrimeSlot> enumerate_slots(const numfield::NumberFieldDesc& k, std::uint64_t norm_bound,
                                                 std::vector<SkippedSlot>* ramified = nullptr);

SurveyResult run_survey(const models::SurfaceSpec& spec, const SurveyOptions& opts);

std::string format_record(const TraceRecord& r);
TraceRecord parse_record(const std::string& line);  // throws std::invalid_argument

/// Reads a cache file; verifies the header, every record and the trailing
/// checksum line. Throws CacheCorrupt or CacheError.
std::vector<TraceRecord> read_cache(const std::filesystem::path& path);

/// Writes header, records and checksum line atomically (temporary file and
/// rename). Throws CacheError when the target is not writable.
void write_cache(const std::filesystem::path& path, const std::vector<TraceRecord>& records);

std::string sha256_hex(const std::string& data);

/// $K3LAB_CACHE_DIR/<surface>.csv, or ./k3lab-cache/<surface>.csv.
std::filesystem::path default_cache_path(const std::string& surface);

}  // namespace k3lab::survey
