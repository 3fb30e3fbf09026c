#include "k3lab/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <ostream>
#include <stdexcept>

namespace k3lab::stats {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kAgmTol = 1e-15;

double agm(double a, double b) {
  for (int i = 0; i < 100 && std::abs(a - b) > kAgmTol * a; ++i) {
    const double an = 0.5 * (a + b);
    b = std::sqrt(a * b);
    a = an;
  }
  return a;
}

// K and E as functions of the complementary modulus kp = sqrt(1 - m); this
// keeps full precision near the logarithmic singularity m -> 1.
double k_from_kp(double kp) { return kPi / (2.0 * agm(1.0, kp)); }

double e_from_kp(double kp) {
  if (kp == 0.0) return 1.0;
  double a = 1.0, b = kp;
  double weight = 0.5;
  double sum = weight * (1.0 - kp * kp);  // c_0^2 = m
  for (int i = 0; i < 100; ++i) {
    const double c = 0.5 * (a - b);
    if (std::abs(c) <= kAgmTol * a) break;
    const double an = 0.5 * (a + b);
    b = std::sqrt(a * b);
    a = an;
    weight *= 2.0;
    sum += weight * c * c;
  }
  return kPi / (2.0 * a) * (1.0 - sum);
}

// density at distance h > 0 from the singular point, side = +1 / -1
double density_at_offset(const DensityModel& model, double h, int side) {
  const double kp = h / 4.0;
  const double norm = 8.0 * kPi * kPi;
  switch (model.kind) {
    case DensityKind::CM4:
      return k_from_kp(kp) / norm;
    case DensityKind::RM: {
      const double t_minus_2 = side * h;
      return (-t_minus_2 * k_from_kp(kp) + 4.0 * e_from_kp(kp)) / norm;
    }
  }
  return 0.0;
}

double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double fa, double fm,
                        double fb, double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  return adaptive_simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         adaptive_simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

double integrate(const std::function<double(double)>& f, double a, double b, double tol) {
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return adaptive_simpson(f, a, b, fa, fm, fb, whole, tol, 48);
}

// Signed integral of the density from the singular point to x. With
// t = s + side * h * exp(-u) the log singularity becomes a factor u.
double from_singular(const DensityModel& model, double x) {
  const double h = std::abs(x - model.singular);
  if (h == 0.0) return 0.0;
  const int side = x > model.singular ? 1 : -1;
  auto phi = [&](double u) {
    const double offset = h * std::exp(-u);
    if (offset == 0.0) return 0.0;
    return density_at_offset(model, offset, side) * offset;
  };
  constexpr double kUpper = 64.0;
  double total = 0.0;
  for (double lo = 0.0; lo < kUpper; lo += 4.0) total += integrate(phi, lo, lo + 4.0, 1e-14);
  return side * total;
}

void check_support(const DensityModel& model, double t) {
  if (!(t >= model.lo && t <= model.hi)) {
    throw std::domain_error("density: t = " + std::to_string(t) + " outside the support of " + model.name);
  }
}

}  // namespace

double agm_K(double m) {
  if (!(m >= 0.0 && m < 1.0)) throw std::domain_error("agm_K: parameter must lie in [0, 1)");
  return k_from_kp(std::sqrt(1.0 - m));
}

double agm_E(double m) {
  if (!(m >= 0.0 && m <= 1.0)) throw std::domain_error("agm_E: parameter must lie in [0, 1]");
  return e_from_kp(std::sqrt(1.0 - m));
}

DensityModel cm4() { return {DensityKind::CM4, "cm4", -4.0, 4.0, 0.0, 0.25, 0.75}; }
DensityModel rm() { return {DensityKind::RM, "rm", -2.0, 6.0, 2.0, 0.5, 0.5}; }

std::optional<DensityModel> density_by_name(const std::string& name) {
  if (name == "cm4") return cm4();
  if (name == "rm") return rm();
  if (name == "none") return std::nullopt;
  throw std::invalid_argument("unknown density '" + name + "' (expected cm4, rm or none)");
}

double density_eval(const DensityModel& model, double t) {
  check_support(model, t);
  if (t == model.singular) throw std::domain_error("density: singular point " + std::to_string(t));
  return density_at_offset(model, std::abs(t - model.singular), t > model.singular ? 1 : -1);
}

double density_integral(const DensityModel& model, double a, double b) {
  check_support(model, a);
  check_support(model, b);
  if (a > b) throw std::invalid_argument("density_integral: a > b");
  return from_singular(model, b) - from_singular(model, a);
}

double density_mass(const DensityModel& model) { return density_integral(model, model.lo, model.hi); }

double model_cdf(const DensityModel& model, double t) {
  t = std::clamp(t, model.lo, model.hi);
  const double lo = from_singular(model, model.lo);
  return (from_singular(model, t) - lo) / (from_singular(model, model.hi) - lo);
}

Histogram build_histogram(const std::vector<double>& values, int bins, const std::optional<DensityModel>& model) {
  if (bins < 10) throw std::invalid_argument("build_histogram: at least 10 bins required");
  if (values.empty()) throw std::invalid_argument("build_histogram: no samples");
  Histogram h;
  h.sample_count = values.size();
  std::vector<double> nonzero;
  for (double v : values) {
    if (v != 0.0) nonzero.push_back(v);
  }
  h.nonzero_count = nonzero.size();
  if (model) {
    h.lo = model->lo;
    h.hi = model->hi;
    for (double v : nonzero) {
      if (v < h.lo || v > h.hi) {
        throw std::domain_error("build_histogram: trace " + std::to_string(v) + " outside the support of " +
                                model->name);
      }
    }
  } else if (nonzero.empty()) {
    h.lo = -1.0;
    h.hi = 1.0;
  } else {
    const auto [mn, mx] = std::minmax_element(nonzero.begin(), nonzero.end());
    h.lo = *mn;
    h.hi = *mx;
    if (h.lo == h.hi) {
      h.lo -= 1.0;
      h.hi += 1.0;
    }
  }
  const double width = (h.hi - h.lo) / bins;
  for (int i = 0; i <= bins; ++i) h.edges.push_back(h.lo + width * i);
  h.edges.back() = h.hi;
  std::vector<std::size_t> counts(bins, 0);
  for (double v : nonzero) {
    auto k = static_cast<long>(std::ceil((v - h.lo) / width)) - 1;
    k = std::clamp<long>(k, 0, bins - 1);
    ++counts[k];
  }
  const auto n = static_cast<double>(h.sample_count);
  for (int i = 0; i < bins; ++i) h.empirical.push_back(static_cast<double>(counts[i]) / n);
  h.spike_fraction = static_cast<double>(h.sample_count - h.nonzero_count) / n;
  if (model) {
    for (int i = 0; i < bins; ++i) h.theoretical.push_back(density_integral(*model, h.edges[i], h.edges[i + 1]));
  }
  return h;
}

Histogram build_histogram(const std::vector<traces::TraceRecord>& records, int bins,
                          const std::optional<DensityModel>& model) {
  for (const auto& r : records) {
    if (r.surface != records.front().surface) {
      throw std::invalid_argument("build_histogram: records from more than one surface");
    }
  }
  std::vector<double> values;
  values.reserve(records.size());
  for (const auto& r : records) values.push_back(r.value());
  return build_histogram(values, bins, model);
}

double ks_distance(const std::vector<double>& values, const DensityModel& model) {
  std::vector<double> xs;
  for (double v : values) {
    if (v != 0.0) xs.push_back(v);
  }
  if (xs.size() < 100) throw std::invalid_argument("ks_distance: need at least 100 nonzero samples");
  std::sort(xs.begin(), xs.end());
  const double lo = from_singular(model, model.lo);
  const double total = from_singular(model, model.hi) - lo;
  const auto n = static_cast<double>(xs.size());
  double d = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double F = (from_singular(model, std::clamp(xs[i], model.lo, model.hi)) - lo) / total;
    d = std::max({d, F - static_cast<double>(i) / n, static_cast<double>(i + 1) / n - F});
  }
  return d;
}

namespace {

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

}  // namespace

void write_histogram_csv(std::ostream& out, const Histogram& h) {
  const bool with_model = !h.theoretical.empty();
  out << "bin_lo,bin_hi,empirical" << (with_model ? ",theoretical" : "") << '\n';
  for (std::size_t i = 0; i < h.bins(); ++i) {
    out << fmt(h.edges[i]) << ',' << fmt(h.edges[i + 1]) << ',' << fmt(h.empirical[i]);
    if (with_model) out << ',' << fmt(h.theoretical[i]);
    out << '\n';
  }
  out << "#spike=" << fmt(h.spike_fraction) << '\n';
  out << "#n=" << h.sample_count << '\n';
}

void write_density_csv(std::ostream& out, const DensityModel& model, int points) {
  if (points < 2) throw std::invalid_argument("write_density_csv: need at least 2 points");
  out << "t,density\n";
  const double step = (model.hi - model.lo) / points;
  for (int i = 0; i < points; ++i) {
    const double t = model.lo + (i + 0.5) * step;
    if (t == model.singular) continue;
    out << fmt(t) << ',' << fmt(density_eval(model, t)) << '\n';
  }
}

}  // namespace k3lab::stats
