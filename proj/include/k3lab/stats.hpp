#pragma once

// Sato-Tate densities built from complete elliptic integrals, histograms
// of trace data with the zero spike split off, and a KS distance.

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "k3lab/traces.hpp"

namespace k3lab::stats {

/// Complete elliptic integral of the first kind, parameter convention
/// K(m) = int_0^{pi/2} (1 - m sin^2)^{-1/2}. Requires 0 <= m < 1.
double agm_K(double m);
/// Second kind, 0 <= m <= 1, E(1) = 1.
double agm_E(double m);

enum class DensityKind { CM4, RM };

struct DensityModel {
  DensityKind kind;
  std::string name;
  double lo, hi;    // support
  double singular;  // interior point with a logarithmic singularity
  double continuous_mass;
  double spike_mass;
};

DensityModel cm4();
DensityModel rm();
/// "cm4" or "rm"; std::nullopt for "none"; throws std::invalid_argument otherwise.
std::optional<DensityModel> density_by_name(const std::string& name);

/// Pointwise density; throws std::domain_error outside the closed support
/// or at the singular point.
double density_eval(const DensityModel& model, double t);

/// Integral of the density over [a, b], a <= b inside the support.
double density_integral(const DensityModel& model, double a, double b);
double density_mass(const DensityModel& model);
/// CDF of the continuous part normalized to total mass 1.
double model_cdf(const DensityModel& model, double t);

struct Histogram {
  double lo = 0, hi = 0;
  std::vector<double> edges;        // bins + 1 values
  std::vector<double> empirical;    // count / sample_count per bin
  std::vector<double> theoretical;  // model mass per bin, empty without model
  double spike_fraction = 0;
  std::size_t sample_count = 0;
  std::size_t nonzero_count = 0;

  std::size_t bins() const { return empirical.size(); }
};

/// Zero values go to the spike; nonzero values are binned uniformly over
/// the model's support (or the data range), ties going to the lower bin.
/// Requires bins >= 10; a nonzero value outside the support throws
/// std::domain_error.
Histogram build_histogram(const std::vector<double>& values, int bins, const std::optional<DensityModel>& model);
Histogram build_histogram(const std::vector<traces::TraceRecord>& records, int bins,
                          const std::optional<DensityModel>& model);

/// sup |F_emp - F_model| over the nonzero values. Requires >= 100 of them.
double ks_distance(const std::vector<double>& values, const DensityModel& model);

void write_histogram_csv(std::ostream& out, const Histogram& h);
void write_density_csv(std::ostream& out, const DensityModel& model, int points = 400);

}  // namespace k3lab::stats
