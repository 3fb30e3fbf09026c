#include "k3lab/survey.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <map>
#include <mutex>
#include <numeric>
#include <ostream>
#include <sstream>
#include <thread>
#include <tuple>

namespace k3lab::survey {

namespace fs = std::filesystem;

CacheCorrupt::CacheCorrupt(const std::string& path, std::size_t line, const std::string& why)
    : CacheError("corrupt cache " + path + " at line " + std::to_string(line) + ": " + why), line_(line) {}

std::vector<numfield::PrimeSlot> enumerate_slots(const numfield::NumberFieldDesc& k, std::uint64_t norm_bound,
                                                 std::vector<SkippedSlot>* ramified) {
  std::vector<numfield::PrimeSlot> slots;
  for (std::uint64_t p : ffield::prime_sieve(norm_bound)) {
    if (p == 2) continue;
    try {
      for (auto& s : numfield::factor_prime(k, p)) {
        if (s.norm <= norm_bound) slots.push_back(std::move(s));
      }
    } catch (const numfield::RamifiedPrime& e) {
      if (ramified) ramified->push_back({numfield::PrimeSlot{p, 1, 0, p, {}}, e.what()});
    }
  }
  std::sort(slots.begin(), slots.end(), numfield::slot_less);
  return slots;
}

std::string format_record(const TraceRecord& r) {
  std::ostringstream os;
  os << r.surface << ',' << r.p << ',' << r.f << ',' << r.index << ',' << r.norm << ',';
  for (std::size_t i = 0; i < r.tags.size(); ++i) os << (i ? ";" : "") << r.tags[i];
  os << ',' << r.num << ',' << r.den;
  return os.str();
}

namespace {

template <typename T>
T parse_number(const std::string& field, const char* what) {
  T value{};
  const auto* end = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(field.data(), end, value);
  if (ec != std::errc() || ptr != end || field.empty()) {
    throw std::invalid_argument(std::string("bad ") + what + " '" + field + "'");
  }
  return value;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) out.push_back(cur);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

}  // namespace

TraceRecord parse_record(const std::string& line) {
  const auto fields = split(line, ',');
  if (fields.size() != 8) throw std::invalid_argument("expected 8 fields, found " + std::to_string(fields.size()));
  TraceRecord r;
  r.surface = fields[0];
  if (r.surface.empty()) throw std::invalid_argument("empty surface name");
  r.p = parse_number<std::uint64_t>(fields[1], "p");
  r.f = parse_number<unsigned>(fields[2], "f");
  r.index = parse_number<unsigned>(fields[3], "index");
  r.norm = parse_number<std::uint64_t>(fields[4], "norm");
  if (!fields[5].empty()) r.tags = split(fields[5], ';');
  r.num = parse_number<std::int64_t>(fields[6], "trace_num");
  r.den = parse_number<std::int64_t>(fields[7], "trace_den");

  std::uint64_t q = 1;
  for (unsigned i = 0; i < r.f; ++i) q *= r.p;
  if (r.f == 0 || q != r.norm) throw std::invalid_argument("norm is not p^f");
  if (r.den <= 0 || std::gcd(r.num, r.den) != 1 || r.norm % static_cast<std::uint64_t>(r.den) != 0) {
    throw std::invalid_argument("trace is not a reduced fraction with denominator dividing the norm");
  }
  if (!std::is_sorted(r.tags.begin(), r.tags.end())) throw std::invalid_argument("tags are not sorted");
  return r;
}

std::string sha256_hex(const std::string& data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("sha256 failed");
  }
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned i = 0; i < len; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 15];
  }
  return out;
}

std::vector<TraceRecord> read_cache(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CacheError("cannot open cache " + path.string());
  const std::string name = path.string();
  std::string line, body;
  std::vector<TraceRecord> records;
  std::size_t lineno = 0;
  bool checksum_seen = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (checksum_seen) throw CacheCorrupt(name, lineno, "data after the checksum line");
    if (lineno == 1) {
      if (line != kCacheHeader) throw CacheCorrupt(name, lineno, "unexpected header");
      body += line + '\n';
      continue;
    }
    if (line.rfind("#sha256=", 0) == 0) {
      if (line.substr(8) != sha256_hex(body)) throw CacheCorrupt(name, lineno, "checksum mismatch");
      checksum_seen = true;
      continue;
    }
    try {
      records.push_back(parse_record(line));
    } catch (const std::invalid_argument& e) {
      throw CacheCorrupt(name, lineno, e.what());
    }
    if (records.size() > 1 && !traces::record_less(records[records.size() - 2], records.back())) {
      throw CacheCorrupt(name, lineno, "records out of order");
    }
    body += line + '\n';
  }
  if (lineno == 0) throw CacheCorrupt(name, 1, "empty file");
  if (!checksum_seen) throw CacheCorrupt(name, lineno + 1, "missing checksum line");
  return records;
}

void write_cache(const fs::path& path, const std::vector<TraceRecord>& records) {
  std::string body = std::string(kCacheHeader) + '\n';
  for (const auto& r : records) body += format_record(r) + '\n';
  const std::string content = body + "#sha256=" + sha256_hex(body) + '\n';
  std::error_code ec;
  if (path.has_parent_path()) fs::create_directories(path.parent_path(), ec);
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw CacheError("cannot write cache " + path.string());
    out << content;
    out.flush();
    if (!out) throw CacheError("write failed for cache " + path.string());
  }
  fs::rename(tmp, path, ec);
  if (ec) throw CacheError("cannot replace cache " + path.string() + ": " + ec.message());
}

fs::path default_cache_path(const std::string& surface) {
  const char* dir = std::getenv("K3LAB_CACHE_DIR");
  const fs::path base = (dir && *dir) ? fs::path(dir) : fs::path("k3lab-cache");
  return base / (surface + ".csv");
}

SurveyResult run_survey(const models::SurfaceSpec& spec, const SurveyOptions& opts) {
  if (opts.norm_bound < 3) throw std::invalid_argument("survey: norm bound must be at least 3");
  SurveyResult result;

  std::vector<TraceRecord> cached;
  if (opts.cache && fs::exists(*opts.cache)) {
    cached = read_cache(*opts.cache);
    for (const auto& r : cached) {
      if (r.surface != spec.name) {
        throw CacheError("cache " + opts.cache->string() + " holds records of " + r.surface + ", not " + spec.name);
      }
    }
  }
  std::map<std::tuple<std::uint64_t, std::uint64_t, unsigned>, const TraceRecord*> have;
  for (const auto& r : cached) have[{r.norm, r.p, r.index}] = &r;

  std::vector<numfield::PrimeSlot> todo;
  std::vector<const TraceRecord*> reused;
  for (const auto& slot : enumerate_slots(spec.base_field, opts.norm_bound, &result.skipped)) {
    if (auto it = have.find({slot.norm, slot.p, slot.index}); it != have.end()) {
      reused.push_back(it->second);
      continue;
    }
    if (!models::good_prime(spec, slot)) {
      result.skipped.push_back({slot, "bad prime for " + spec.name});
      continue;
    }
    todo.push_back(slot);
  }
  if (opts.log) {
    for (const auto& s : result.skipped) {
      *opts.log << "skip " << spec.name << " p=" << s.slot.p << " f=" << s.slot.f << " index=" << s.slot.index
                << ": " << s.reason << '\n';
    }
  }

  std::vector<TraceRecord> fresh(todo.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= todo.size()) return;
      try {
        fresh[i] = traces::trace_transcendental(spec, todo[i], opts.budget);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = todo.size();
        return;
      }
    }
  };
  const unsigned n_workers = std::max(1U, std::min<unsigned>(opts.workers, static_cast<unsigned>(todo.size())));
  if (n_workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < n_workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  result.new_records = fresh.size();
  result.cached_records = reused.size();
  for (const auto* r : reused) result.records.push_back(*r);
  result.records.insert(result.records.end(), fresh.begin(), fresh.end());
  std::sort(result.records.begin(), result.records.end(), traces::record_less);

  if (opts.cache && (!fresh.empty() || !fs::exists(*opts.cache))) {
    std::vector<TraceRecord> all = cached;
    all.insert(all.end(), fresh.begin(), fresh.end());
    std::sort(all.begin(), all.end(), traces::record_less);
    write_cache(*opts.cache, all);
  }
  return result;
}

}  // namespace k3lab::survey
