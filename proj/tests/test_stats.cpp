#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "k3lab/stats.hpp"

using namespace k3lab;
using stats::DensityModel;

namespace {

double oracle_K(double m) {
  boost::math::quadrature::tanh_sinh<double> q;
  return q.integrate([m](double t) { return 1.0 / std::sqrt(1.0 - m * std::sin(t) * std::sin(t)); }, 0.0,
                     std::numbers::pi / 2);
}

double oracle_E(double m) {
  boost::math::quadrature::tanh_sinh<double> q;
  return q.integrate([m](double t) { return std::sqrt(1.0 - m * std::sin(t) * std::sin(t)); }, 0.0,
                     std::numbers::pi / 2);
}

// Inverse CDF by interpolation in a tabulated CDF.
class Sampler {
 public:
  explicit Sampler(const DensityModel& model) {
    const int n = 2000;
    for (int i = 0; i <= n; ++i) {
      const double t = model.lo + (model.hi - model.lo) * i / n;
      ts_.push_back(t);
      cdf_.push_back(stats::model_cdf(model, t));
    }
  }
  double operator()(double u) const {
    const auto it = std::lower_bound(cdf_.begin(), cdf_.end(), u);
    const auto i = static_cast<std::size_t>(std::max<std::ptrdiff_t>(1, it - cdf_.begin()));
    const double w = (u - cdf_[i - 1]) / (cdf_[i] - cdf_[i - 1]);
    return ts_[i - 1] + w * (ts_[i] - ts_[i - 1]);
  }

 private:
  std::vector<double> ts_, cdf_;
};

}  // namespace

TEST_CASE("AGM elliptic integrals against quadrature") {
  for (double m : {0.0, 0.1, 0.3, 0.5, 0.7, 0.9, 0.99}) {
    CAPTURE(m);
    CHECK(stats::agm_K(m) == doctest::Approx(oracle_K(m)).epsilon(1e-12));
    CHECK(stats::agm_E(m) == doctest::Approx(oracle_E(m)).epsilon(1e-12));
  }
  // near m = 1 the quadrature oracle degrades; 30-digit reference values
  CHECK(stats::agm_K(0.9999) == doctest::Approx(5.99158934050705145704752515689).epsilon(1e-14));
  CHECK(stats::agm_E(0.9999) == doctest::Approx(1.00027458243066293769841334361).epsilon(1e-14));
  CHECK(stats::agm_K(0.0) == doctest::Approx(std::numbers::pi / 2).epsilon(1e-15));
  CHECK(stats::agm_E(1.0) == 1.0);
  CHECK_THROWS_AS(stats::agm_K(1.0), std::domain_error);
  CHECK_THROWS_AS(stats::agm_E(-0.1), std::domain_error);
}

TEST_CASE("Legendre relation") {
  for (double m : {0.05, 0.25, 0.5, 0.8, 0.97}) {
    const double K = stats::agm_K(m), E = stats::agm_E(m);
    const double Kp = stats::agm_K(1 - m), Ep = stats::agm_E(1 - m);
    CHECK(E * Kp + Ep * K - K * Kp == doctest::Approx(std::numbers::pi / 2).epsilon(1e-14));
  }
}

TEST_CASE("continuous masses") {
  CHECK(std::abs(stats::density_mass(stats::cm4()) - 0.25) <= 1e-8);
  CHECK(std::abs(stats::density_mass(stats::rm()) - 0.50) <= 1e-8);
  CHECK(stats::cm4().spike_mass + stats::density_mass(stats::cm4()) == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("interval integrals against tanh-sinh") {
  boost::math::quadrature::tanh_sinh<double> q;
  for (const auto& model : {stats::cm4(), stats::rm()}) {
    auto f = [&](double t) { return stats::density_eval(model, t); };
    for (auto [a, b] : {std::pair{model.lo + 0.5, model.lo + 2.0}, std::pair{model.hi - 1.0, model.hi},
                        std::pair{model.singular + 0.25, model.singular + 1.0}}) {
      CHECK(stats::density_integral(model, a, b) == doctest::Approx(q.integrate(f, a, b)).epsilon(1e-9));
    }
    // across the singular point
    const double across = q.integrate(f, model.singular - 1.0, model.singular) + q.integrate(f, model.singular, model.singular + 1.0);
    CHECK(stats::density_integral(model, model.singular - 1.0, model.singular + 1.0) ==
          doctest::Approx(across).epsilon(1e-9));
  }
}

TEST_CASE("density evaluation") {
  const auto m = stats::cm4();
  CHECK(stats::density_eval(m, 1.0) == stats::density_eval(m, -1.0));
  CHECK(stats::density_eval(m, 1.0) > stats::density_eval(m, 3.0));
  CHECK_THROWS_AS(stats::density_eval(m, 0.0), std::domain_error);
  CHECK_THROWS_AS(stats::density_eval(m, 4.5), std::domain_error);
  for (double t = -1.95; t < 6.0; t += 0.1) CHECK(stats::density_eval(stats::rm(), t) >= 0.0);
  CHECK(stats::density_by_name("none") == std::nullopt);
  CHECK_THROWS_AS(stats::density_by_name("gauss"), std::invalid_argument);
}

TEST_CASE("histogram bookkeeping") {
  std::vector<double> values = {0, 0, 0, -4, 4, 1.0, 1.0000001, 1.5};
  const auto h = stats::build_histogram(values, 16, stats::cm4());
  CHECK(h.sample_count == 8);
  CHECK(h.nonzero_count == 5);
  CHECK(h.spike_fraction == doctest::Approx(3.0 / 8));
  CHECK(h.edges.size() == 17);
  CHECK(h.empirical[0] == doctest::Approx(1.0 / 8));   // -4 goes to the first bin
  CHECK(h.empirical[9] == doctest::Approx(1.0 / 8));   // 1.0 is an edge: lower bin
  CHECK(h.empirical[10] == doctest::Approx(2.0 / 8));  // 1.0000001 and 1.5 (edge)
  CHECK(h.empirical[15] == doctest::Approx(1.0 / 8));
  double total = h.spike_fraction;
  for (double e : h.empirical) total += e;
  CHECK(std::abs(total - 1.0) <= 1e-12);
  double theo = 0;
  for (double t : h.theoretical) theo += t;
  CHECK(theo == doctest::Approx(0.25).epsilon(1e-8));
  CHECK_THROWS_AS(stats::build_histogram(std::vector<double>{5.0}, 10, stats::cm4()), std::domain_error);
  CHECK_THROWS_AS(stats::build_histogram(values, 5, std::nullopt), std::invalid_argument);

  std::ostringstream os;
  stats::write_histogram_csv(os, h);
  const std::string csv = os.str();
  CHECK(csv.rfind("bin_lo,bin_hi,empirical,theoretical\n-4,-3.5,0.125,", 0) == 0);
  CHECK(csv.find("#spike=0.375\n#n=8\n") != std::string::npos);
  std::ostringstream plain;
  stats::write_histogram_csv(plain, stats::build_histogram(values, 10, std::nullopt));
  CHECK(plain.str().rfind("bin_lo,bin_hi,empirical\n", 0) == 0);
}

TEST_CASE("KS distance of model samples is small") {
  for (const auto& model : {stats::cm4(), stats::rm()}) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const Sampler sample(model);
    std::vector<double> xs;
    for (int i = 0; i < 2000; ++i) xs.push_back(sample(u(rng)));
    CHECK(stats::ks_distance(xs, model) < 0.04);
    // a shifted sample is far
    for (double& x : xs) x = std::clamp(x + 1.0, model.lo, model.hi);
    CHECK(stats::ks_distance(xs, model) > 0.1);
  }
  CHECK_THROWS_AS(stats::ks_distance(std::vector<double>(50, 1.0), stats::cm4()), std::invalid_argument);
}

TEST_CASE("density table") {
  std::ostringstream os;
  stats::write_density_csv(os, stats::rm(), 400);
  const std::string s = os.str();
  CHECK(s.rfind("t,density\n", 0) == 0);
  CHECK(std::count(s.begin(), s.end(), '\n') == 401);
}
