#pragma once

// Normalized Frobenius traces on the transcendental lattice, and the named
// checks that the CLI's verify command runs over a set of trace records.

#include <cstdint>
#include <string>
#include <vector>

#include "k3lab/models.hpp"
#include "k3lab/numfield.hpp"

namespace k3lab::traces {

/// Trace of Frobenius on T(1) at one prime slot. trace = num / den in
/// lowest terms, den > 0 and den | q.
struct TraceRecord {
  std::string surface;
  std::uint64_t p = 0;
  unsigned f = 1;
  unsigned index = 0;
  std::uint64_t norm = 0;
  std::vector<std::string> tags;  // sorted
  std::int64_t num = 0;
  std::int64_t den = 1;

  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  bool is_zero() const { return num == 0; }
  bool has_tag(const std::string& tag) const;

  friend bool operator==(const TraceRecord&, const TraceRecord&) = default;
};

/// Orders records by (norm, p, index).
bool record_less(const TraceRecord& a, const TraceRecord& b);

/// Second elementary symmetric function of the Frobenius eigenvalues on H^1
/// of a genus-2 curve, from n1 = #C(F_p) and n2 = #C(F_{p^2}). Throws
/// std::domain_error when s1^2 - s2 is odd.
std::int64_t e2_from_counts(std::int64_t n1, std::int64_t n2, std::int64_t p);

/// Computes the trace at a good slot. Throws numfield::BadPrime at bad slots
/// and ffield::BudgetExceeded when a required field is too large.
TraceRecord trace_transcendental(const models::SurfaceSpec& spec, const numfield::PrimeSlot& slot,
                                 std::uint64_t budget = ffield::kDefaultTableBudget);

/// Raw double-cover count #X'(F_q) of a DOUBLE_COVER or TWIST model.
std::uint64_t raw_count(const models::SurfaceSpec& spec, const numfield::PrimeSlot& slot);

struct CheckResult {
  std::string name;
  bool experimental = false;
  bool passed = true;
  std::size_t examined = 0;
  std::vector<std::string> counterexamples;
};

/// Names of the checks applicable to a surface, in run order.
std::vector<std::string> available_checks(const models::SurfaceSpec& spec);

/// Runs one named check over the records of a surface. Throws
/// std::invalid_argument for an unknown or inapplicable check name.
CheckResult run_check(const models::SurfaceSpec& spec, const std::string& check,
                      const std::vector<TraceRecord>& records);

/// p-adic valuation of num/den (num != 0).
int valuation(std::int64_t num, std::int64_t den, std::uint64_t p);

}  // namespace k3lab::traces
