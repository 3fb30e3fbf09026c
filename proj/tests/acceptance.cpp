// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

#include "k3lab/counting.hpp"
#include "k3lab/monodromy.hpp"
#include "k3lab/stats.hpp"
#include "k3lab/survey.hpp"
#include "k3lab/traces.hpp"
#include "naive_count.hpp"

using namespace k3lab;
using traces::TraceRecord;

namespace {

std::vector<TraceRecord> survey_to(const char* name, std::uint64_t bound) {
  survey::SurveyOptions opts;
  opts.norm_bound = bound;
  opts.workers = 1;
  return survey::run_survey(models::find_surface(name), opts).records;
}

// Good rational primes of a surface up to bound, counted independently of the survey.
std::size_t good_prime_count(const char* name, std::uint64_t bound) {
  return naive::good_slots(models::find_surface(name), bound).size();
}

struct Verdict {
  bool ok = true;
  std::string note;
  void fail(const std::string& why) {
    if (ok) note = why;
    ok = false;
  }
};

std::vector<TraceRecord> x3_records, x2_records;

Verdict x3_zero_law() {
  Verdict v;
  x3_records = survey_to("X3", 100000);
  if (x3_records.size() != good_prime_count("X3", 100000)) v.fail("missing slots");
  std::size_t zeros = 0;
  for (const auto& r : x3_records) {
    if (r.p % 8 != 1) {
      if (!r.is_zero()) v.fail("p=" + std::to_string(r.p) + " nonzero");
      ++zeros;
    }
  }
  v.note += std::to_string(x3_records.size()) + " primes, " + std::to_string(zeros) + " with p != 1 mod 8";
  return v;
}

Verdict x2_zero_law() {
  Verdict v;
  x2_records = survey_to("X2", 3000);
  if (x2_records.size() != good_prime_count("X2", 3000)) v.fail("missing slots");
  for (const auto& r : x2_records) {
    const std::string at = "p=" + std::to_string(r.p);
    if (r.p % 5 != 1) {
      if (!r.is_zero()) v.fail(at + " nonzero");
    } else {
      if (std::abs(r.num) > 4 * r.den) v.fail(at + " |trace| > 4");
      if (r.p % static_cast<std::uint64_t>(r.den) != 0) v.fail(at + " denominator");
    }
  }
  v.note += std::to_string(x2_records.size()) + " primes";
  return v;
}

Verdict x1_pipeline_law() {
  Verdict v;
  const auto& spec = models::find_surface("X1");
  const auto records = survey_to("X1", 300);
  if (records.size() != good_prime_count("X1", 300)) v.fail("missing slots");
  for (const auto& r : records) {
    const auto p = static_cast<std::int64_t>(r.p);
    const auto slot = numfield::factor_prime(spec.base_field, r.p).front();
    const auto n = static_cast<std::int64_t>(traces::raw_count(spec, slot));
    const std::int64_t tp = n + 15 * p - 1 - p * p - 16 * p;  // tau * p
    const std::string at = "p=" + std::to_string(p);
    if (tp * r.den != r.num * p) v.fail(at + " record disagrees with the formula");
    if (std::abs(tp) > 6 * p) v.fail(at + " Weil bound");
    if (r.p % 4 == 3 && tp != 0) v.fail(at + " nonzero at p = 3 mod 4");
  }
  v.note += std::to_string(records.size()) + " primes";
  return v;
}

Verdict x5_table_law() {
  Verdict v;
  const auto records = survey_to("X5", 2000);
  if (records.size() != good_prime_count("X5", 2000)) v.fail("missing slots");
  std::size_t split = 0;
  for (const auto& r : records) {
    const std::string at = "norm=" + std::to_string(r.norm) + " index=" + std::to_string(r.index);
    if (r.norm % 4 == 3) {
      if (!r.is_zero()) v.fail(at + " nonzero at an inert slot");
    } else {
      ++split;
      // nu_p(Tr) = f - 1 with Tr = trace * q
      if (r.is_zero() || traces::valuation(r.num, r.den, r.p) + static_cast<int>(r.f) != static_cast<int>(r.f) - 1)
        v.fail(at + " valuation");
    }
  }
  v.note += std::to_string(records.size()) + " slots, " + std::to_string(split) + " split";
  return v;
}

Verdict x6_twist_identity() {
  Verdict v;
  const auto& twisted = models::find_surface("X6");
  const auto& base = models::find_surface("X6~");
  const auto slots = naive::good_slots(twisted, 500);
  for (const auto& slot : slots) {
    const auto n6 = traces::raw_count(twisted, slot);
    const auto nb = traces::raw_count(base, slot);
    const std::uint64_t p = slot.p;
    const auto expected = numfield::kronecker(-1974, p) == 1 ? nb : 2 * (p * p + p + 1) - nb;
    if (n6 != expected) v.fail("p=" + std::to_string(p));
  }
  v.note += std::to_string(slots.size()) + " primes";
  return v;
}

Verdict normalizer_det() {
  Verdict v;
  std::size_t checked = 0;
  for (int d = 1; d <= 3; ++d)
    for (int b = 1; b <= 3; ++b) {
      const auto rep = monodromy::verify_normalizer_det(d, b);
      checked += rep.elements_checked;
      if (!rep.passed()) v.fail(rep.violations.front());
    }
  v.note += std::to_string(checked) + " elements";
  return v;
}

Verdict predictor() {
  Verdict v;
  const std::tuple<const char*, const char*, std::uint64_t> expected[] = {
      {"X1", "(-1/.)", 2}, {"X2", "(5/.)", 4}, {"X3", "trivial", 4}, {"X4", "(-1/.)", 6}, {"X5", nullptr, 2}};
  for (auto [name, chi, order] : expected) {
    const auto& s = models::find_surface(name);
    if (chi) {
      const auto got = monodromy::jump_character_predict(s.endo, s.picard_rank).to_string();
      if (got != chi) v.fail(std::string(name) + " character " + got);
    }
    const auto c = monodromy::component_group_order(s.endo, s.kE_over_k_degree);
    if (c.order != order || c.flag() != "exact") v.fail(std::string(name) + " order " + std::to_string(c.order));
  }
  return v;
}

Verdict masses() {
  Verdict v;
  const double cm = stats::density_mass(stats::cm4());
  const double rm = stats::density_mass(stats::rm());
  if (std::abs(cm - 0.25) > 1e-6) v.fail("cm4");
  if (std::abs(rm - 0.50) > 1e-6) v.fail("rm");
  char buf[96];
  std::snprintf(buf, sizeof buf, "cm4 %.12f, rm %.12f", cm, rm);
  v.note += buf;
  return v;
}

Verdict distribution() {
  Verdict v;
  std::vector<double> xs;
  for (const auto& r : x3_records) xs.push_back(r.value());
  const double ks = stats::ks_distance(xs, stats::cm4());
  if (ks > 0.05) v.fail("KS");
  std::size_t zero = 0;
  for (const auto& r : x2_records) zero += r.is_zero();
  const double spike = static_cast<double>(zero) / static_cast<double>(x2_records.size());
  if (std::abs(spike - 0.75) > 0.05) v.fail("spike");
  char buf[96];
  std::snprintf(buf, sizeof buf, "X3 KS %.4f, X2 spike %.4f", ks, spike);
  v.note += buf;
  return v;
}

Verdict oracle_equivalence() {
  Verdict v;
  std::size_t slots = 0;
  for (const auto& spec : models::surfaces()) {
    if (spec.kind != models::ModelKind::DoubleCover && spec.kind != models::ModelKind::Twist) continue;
    for (const auto& slot : naive::good_slots(spec, 49)) {
      const auto rf = numfield::open_residue_field(spec.base_field, slot);
      const auto fast = counting::count_double_cover_raw(counting::reduce_branch(spec.branch, rf), *rf.field).value;
      if (fast != naive::weighted_points(spec, rf)) v.fail(spec.name + " q=" + std::to_string(slot.norm));
      ++slots;
    }
  }
  for (std::uint64_t p : ffield::prime_sieve(50)) {
    if (p == 2) continue;
    const auto K = ffield::ExtField::build(p, 1);
    for (const auto& c : models::curves()) {
      if (!models::good_prime(c, p)) continue;
      const auto affine = naive::affine_points(c.g, p);
      if (c.genus() == 1) {
        if (counting::ap_elliptic(c.g, p) != static_cast<std::int64_t>(p) - static_cast<std::int64_t>(affine))
          v.fail(c.name + " a_p at " + std::to_string(p));
      }
      if (counting::count_hyperelliptic_odd(c.g, K) != affine + 1) v.fail(c.name + " count at " + std::to_string(p));
    }
  }
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<int> entry(-20, 20);
  for (std::size_t n = 1; n <= 6; ++n)
    for (int trial = 0; trial < 50; ++trial) {
      monodromy::Matrix<monodromy::BigInt> m(n, n);
      for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) m(r, c) = entry(rng);
      if (monodromy::det_exact(m) != naive::cofactor_det(m)) v.fail("det n=" + std::to_string(n));
    }
  v.note += std::to_string(slots) + " surface slots";
  return v;
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<Verdict()>> criteria[] = {
      {"X3 zero-trace law, p <= 1e5", x3_zero_law},
      {"X2 zero-trace law, p <= 3000", x2_zero_law},
      {"X1 full-pipeline law, p <= 300", x1_pipeline_law},
      {"X5 table law, norm <= 2000", x5_table_law},
      {"X6 twist identity, p <= 500", x6_twist_identity},
      {"normalizer determinant law, d, b <= 3", normalizer_det},
      {"jump characters and component group orders", predictor},
      {"density continuous masses", masses},
      {"X3 KS distance and X2 spike fraction", distribution},
      {"oracle equivalence", oracle_equivalence},
  };
  int failures = 0, n = 0;
  for (const auto& [title, run] : criteria) {
    ++n;
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = run();
    } catch (const std::exception& e) {
      v.fail(std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    failures += !v.ok;
    const std::string note = v.note.empty() ? "" : v.note + "; ";
    std::printf("%s %d %s (%s%.1fs)\n", v.ok ? "PASS" : "FAIL", n, title, note.c_str(), secs);
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
