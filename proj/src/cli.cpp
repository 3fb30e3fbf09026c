#include "k3lab/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <functional>
#include <fstream>
#include <iomanip>
#include <map>
#include <ostream>
#include <sstream>

#include "k3lab/models.hpp"
#include "k3lab/monodromy.hpp"
#include "k3lab/stats.hpp"
#include "k3lab/survey.hpp"
#include "k3lab/traces.hpp"

namespace k3lab::cli {

namespace {

namespace fs = std::filesystem;
using models::SurfaceSpec;

constexpr std::uint64_t kCurveCeiling = 1000000;
constexpr std::uint64_t kSurfaceCeiling = 10000;

struct RunConfig {
  std::string surface;
  std::uint64_t max_norm = 0;
  unsigned workers = 1;
  std::string cache;
  std::string out;
  int bins = 40;
  std::string density;
  std::string density_out;
  std::string checks;
  std::string endo;
  int rank = 0;
  bool big = false;
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

fs::path cache_path(const RunConfig& cfg) {
  return cfg.cache.empty() ? survey::default_cache_path(cfg.surface) : fs::path(cfg.cache);
}

const SurfaceSpec& surface_or_throw(const std::string& name) {
  try {
    return models::find_surface(name);
  } catch (const std::out_of_range&) {
    throw UsageError("unknown surface '" + name + "'");
  }
}

std::uint64_t norm_ceiling(const SurfaceSpec& spec) {
  return spec.kind == models::ModelKind::KummerProduct ? kCurveCeiling : kSurfaceCeiling;
}

std::string prediction(const monodromy::EndoFieldDesc& E, int rho) {
  if (!E.is_cm()) return "n/a (RM)";
  return monodromy::jump_character_predict(E, rho).to_string();
}

std::string endo_label(const monodromy::EndoFieldDesc& E) {
  return E.name + (E.is_cm() ? " CM" : " RM") + (E.conjectural ? " (conjectural)" : "");
}

int cmd_catalog(std::ostream& out) {
  out << std::left << std::setw(5) << "name" << std::setw(17) << "kind" << std::setw(28) << "base field"
      << std::setw(5) << "rho" << std::setw(44) << "endomorphism field" << std::setw(26) << "component group"
      << "jump character" << '\n';
  for (const auto& s : models::surfaces()) {
    const auto order = monodromy::component_group_order(s.endo, s.kE_over_k_degree);
    out << std::setw(5) << s.name << std::setw(17) << models::kind_name(s.kind) << std::setw(28) << s.base_field.name
        << std::setw(5) << s.picard_rank << std::setw(44) << endo_label(s.endo) << std::setw(26)
        << (std::to_string(order.order) + " (" + order.flag() + ")") << prediction(s.endo, s.picard_rank) << '\n';
    out << "     " << s.equation << '\n';
  }
  for (const auto& c : models::curves()) {
    out << std::setw(5) << c.name << std::setw(17) << (c.genus() == 1 ? "ELLIPTIC" : "HYPERELLIPTIC")
        << std::setw(28) << "Q" << c.equation << '\n';
  }
  return kOk;
}

int cmd_survey(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const auto& spec = surface_or_throw(cfg.surface);
  if (cfg.max_norm > norm_ceiling(spec) && !cfg.big) {
    throw UsageError("--max-norm " + std::to_string(cfg.max_norm) + " exceeds the ceiling " +
                     std::to_string(norm_ceiling(spec)) + " for " + spec.name + " (use --i-know-this-is-big)");
  }
  survey::SurveyOptions opts;
  opts.norm_bound = cfg.max_norm;
  opts.workers = cfg.workers;
  opts.cache = cache_path(cfg);
  opts.log = &err;
  const auto res = survey::run_survey(spec, opts);

  std::map<std::string, std::pair<std::size_t, std::size_t>> by_tag;  // zero, nonzero
  std::size_t zero = 0, anomalies = 0;
  for (const auto& r : res.records) {
    zero += r.is_zero();
    for (const auto& t : r.tags) {
      auto& c = by_tag[t];
      (r.is_zero() ? c.first : c.second) += 1;
      if (t.rfind("anomaly=", 0) == 0) ++anomalies;
    }
  }
  out << spec.name << ": " << res.records.size() << " records up to norm " << cfg.max_norm << ", "
      << res.new_records << " new slots, " << res.cached_records << " cached, " << res.skipped.size()
      << " skipped; cache " << opts.cache->string() << '\n';
  out << "zero " << zero << " nonzero " << res.records.size() - zero << '\n';
  for (const auto& [tag, c] : by_tag) out << "  " << tag << ": zero " << c.first << " nonzero " << c.second << '\n';
  if (spec.endo.conjectural) out << "note: endomorphism field " << spec.endo.name << " is conjectural\n";
  if (anomalies > 0) {
    err << "error: " << anomalies << " records violate the Weil bound or the denominator law\n";
    return kVerifyFailed;
  }
  return kOk;
}

std::vector<traces::TraceRecord> load_records(const RunConfig& cfg) {
  const fs::path path = cache_path(cfg);
  if (!fs::exists(path)) throw survey::CacheError("missing cache " + path.string() + " (run survey first)");
  return survey::read_cache(path);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

int cmd_verify(const RunConfig& cfg, std::ostream& out) {
  const auto& spec = surface_or_throw(cfg.surface);
  std::vector<std::string> checks = split_list(cfg.checks);
  if (checks.empty()) {
    checks = traces::available_checks(spec);
    checks.emplace_back("normalizer-det");
  }
  const auto records = load_records(cfg);
  bool ok = true;
  for (const auto& name : checks) {
    traces::CheckResult res;
    if (name == "normalizer-det") {
      res.name = name;
      for (int d = 1; d <= 3; ++d)
        for (int b = 1; b <= 3; ++b) {
          const auto rep = monodromy::verify_normalizer_det(d, b);
          res.examined += rep.elements_checked;
          for (const auto& v : rep.violations) res.counterexamples.push_back(v);
        }
      res.passed = res.counterexamples.empty();
    } else {
      try {
        res = traces::run_check(spec, name, records);
      } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
      }
    }
    out << (res.passed ? "PASS " : "FAIL ") << res.name << " (" << res.examined << " examined)"
        << (res.experimental ? " [experimental]" : "") << '\n';
    for (const auto& c : res.counterexamples) out << "  " << c << '\n';
    if (!res.passed && !res.experimental) ok = false;
  }
  return ok ? kOk : kVerifyFailed;
}

std::string default_density(const SurfaceSpec& spec) {
  if (spec.picard_rank == 18 && spec.endo.is_cm()) return "cm4";
  if (spec.kind == models::ModelKind::Twist) return "rm";
  return "none";
}

void write_to(const std::string& path, std::ostream& fallback, const std::function<void(std::ostream&)>& body) {
  if (path.empty() || path == "-") {
    body(fallback);
    return;
  }
  std::ofstream f(path);
  if (!f) throw survey::CacheError("cannot write " + path);
  body(f);
  if (!f) throw survey::CacheError("write failed for " + path);
}

int cmd_hist(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const auto& spec = surface_or_throw(cfg.surface);
  const std::string density = cfg.density.empty() ? default_density(spec) : cfg.density;
  std::optional<stats::DensityModel> model;
  try {
    model = stats::density_by_name(density);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  if (cfg.bins < 10) throw UsageError("--bins must be at least 10");
  const auto records = load_records(cfg);
  if (records.empty()) throw UsageError("cache holds no records");
  const auto n_nonzero = static_cast<std::size_t>(
      std::count_if(records.begin(), records.end(), [](const auto& r) { return !r.is_zero(); }));
  if (model && n_nonzero < static_cast<std::size_t>(cfg.bins)) {
    throw UsageError("insufficient data: " + std::to_string(n_nonzero) + " nonzero traces for " +
                     std::to_string(cfg.bins) + " bins");
  }
  stats::Histogram h;
  try {
    h = stats::build_histogram(records, cfg.bins, model);
  } catch (const std::domain_error& e) {
    err << "error: anomaly: " << e.what() << '\n';
    return kVerifyFailed;
  }
  write_to(cfg.out, out, [&h](std::ostream& o) { stats::write_histogram_csv(o, h); });
  if (model && !cfg.density_out.empty()) {
    write_to(cfg.density_out, out, [&model](std::ostream& o) { stats::write_density_csv(o, *model); });
  }
  return kOk;
}

int cmd_density(const RunConfig& cfg, std::ostream& out) {
  std::optional<stats::DensityModel> model;
  try {
    model = stats::density_by_name(cfg.density.empty() ? "cm4" : cfg.density);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  if (!model) throw UsageError("density requires --density cm4 or rm");
  write_to(cfg.out, out, [&model](std::ostream& o) { stats::write_density_csv(o, *model); });
  return kOk;
}

std::int64_t parse_int(const std::string& s, const std::string& what) {
  try {
    std::size_t pos = 0;
    const long long v = std::stoll(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw UsageError("bad " + what + " '" + s + "'");
  }
}

monodromy::EndoFieldDesc parse_endo(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw UsageError("--E expects imagquad:<delta>, cyclo:<N> or realquad:<D>");
  const std::string kind = text.substr(0, colon);
  const std::int64_t n = parse_int(text.substr(colon + 1), "--E parameter");
  if (kind == "imagquad") {
    if (n <= 0) throw UsageError("imagquad expects delta > 0");
    return monodromy::imag_quadratic(n);
  }
  if (kind == "realquad") {
    monodromy::EndoFieldDesc E;
    E.kind = monodromy::EndoKind::RmRealQuadratic;
    E.name = "Q(sqrt(" + std::to_string(n) + "))";
    E.degree = 2;
    E.rm_disc = n;
    return E;
  }
  if (kind == "cyclo") {
    if (n < 3) throw UsageError("cyclo expects N >= 3");
    const auto N = static_cast<std::uint64_t>(n);
    monodromy::EndoFieldDesc E;
    E.kind = monodromy::EndoKind::CmCyclic;
    E.name = "Q(zeta_" + std::to_string(N) + ")";
    E.action = std::make_shared<const monodromy::GaloisAction>(monodromy::GaloisAction::abelian(N, {1}));
    E.degree = 2 * E.action->pairs();
    if (E.action->group_order() != static_cast<std::size_t>(E.degree)) {
      throw UsageError("cyclo: Gal(Q(zeta_N)/Q) is not cyclic for N = " + std::to_string(N));
    }
    if (ffield::is_prime(N)) E.quadratic_subfield = (N % 4 == 1) ? n : -n;
    return E;
  }
  throw UsageError("unknown --E kind '" + kind + "'");
}

int cmd_predict(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  monodromy::EndoFieldDesc E;
  int rho = 0;
  std::uint64_t kE = 1;
  if (!cfg.surface.empty()) {
    const auto& spec = surface_or_throw(cfg.surface);
    E = spec.endo;
    rho = spec.picard_rank;
    kE = spec.kE_over_k_degree;
    out << "surface: " << spec.name << '\n';
  } else {
    if (cfg.endo.empty() || cfg.rank == 0) throw UsageError("predict needs --surface or both --E and --rank");
    E = parse_endo(cfg.endo);
    rho = cfg.rank;
    kE = static_cast<std::uint64_t>(E.degree);
  }
  out << "endomorphism field: " << endo_label(E) << '\n';
  if (!E.is_cm()) {
    err << "the jump character predictor applies to CM endomorphism fields only; " << E.name
        << " is totally real (RM)\n";
    const auto order = monodromy::component_group_order(E, kE);
    out << "component group order: " << order.order << " (" << order.flag() << ")\n";
    return kUsage;
  }
  const int r = 22 - rho;
  out << "r = 22 - rho = " << r << '\n';
  out << "[E:Q] = " << E.degree << ", d = " << E.degree / 2 << '\n';
  if (r > 0 && r % E.degree == 0) {
    out << "r/[E:Q] = " << r / E.degree << " (" << ((r / E.degree) % 2 == 0 ? "even" : "odd") << ")\n";
  }
  try {
    const auto chi = monodromy::jump_character_predict(E, rho);
    out << "jump character: " << chi.to_string() << '\n';
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  const auto order = monodromy::component_group_order(E, kE);
  out << "component group order: " << order.order << " (" << order.flag() << ")\n";
  return kOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Frobenius traces and monodromy component groups of catalogued K3 surfaces", "k3lab"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto* catalog = app.add_subcommand("catalog", "List the catalogued surfaces and curves");

  auto* survey_cmd = app.add_subcommand("survey", "Compute traces at all good prime slots up to a norm bound");
  survey_cmd->add_option("--surface", cfg.surface, "Surface name")->required();
  survey_cmd->add_option("--max-norm", cfg.max_norm, "Largest slot norm")->required();
  survey_cmd->add_option("--workers", cfg.workers, "Worker threads")->check(CLI::PositiveNumber);
  survey_cmd->add_option("--cache", cfg.cache, "Trace cache (default $K3LAB_CACHE_DIR/<surface>.csv)");
  survey_cmd->add_flag("--i-know-this-is-big", cfg.big, "Allow norm bounds above the safety ceiling");

  auto* verify = app.add_subcommand("verify", "Run the named checks over a trace cache");
  verify->add_option("--surface", cfg.surface, "Surface name")->required();
  verify->add_option("--cache", cfg.cache, "Trace cache");
  verify->add_option("--checks", cfg.checks, "Comma separated check names (default: all)");

  auto* hist = app.add_subcommand("hist", "Histogram of cached traces");
  hist->add_option("--surface", cfg.surface, "Surface name")->required();
  hist->add_option("--cache", cfg.cache, "Trace cache");
  hist->add_option("--bins", cfg.bins, "Number of bins");
  hist->add_option("--density", cfg.density, "cm4, rm or none");
  hist->add_option("--out", cfg.out, "Histogram CSV (default stdout)");
  hist->add_option("--density-out", cfg.density_out, "Also write the density table here");

  auto* predict = app.add_subcommand("predict", "Predict the jump character and component group order");
  predict->add_option("--surface", cfg.surface, "Surface name");
  predict->add_option("--E", cfg.endo, "imagquad:<delta>, cyclo:<N> or realquad:<D>");
  predict->add_option("--rank", cfg.rank, "Geometric Picard rank");

  auto* density = app.add_subcommand("density", "Tabulate a theoretical density");
  density->add_option("--density", cfg.density, "cm4 or rm")->required();
  density->add_option("--out", cfg.out, "Output CSV (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (catalog->parsed()) return cmd_catalog(out);
    if (survey_cmd->parsed()) return cmd_survey(cfg, out, err);
    if (verify->parsed()) return cmd_verify(cfg, out);
    if (hist->parsed()) return cmd_hist(cfg, out, err);
    if (predict->parsed()) return cmd_predict(cfg, out, err);
    if (density->parsed()) return cmd_density(cfg, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const survey::CacheError& e) {
    err << "error: " << e.what() << '\n';
    return kIo;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kIo;
  } catch (const ffield::BudgetExceeded& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}

}  // namespace k3lab::cli
