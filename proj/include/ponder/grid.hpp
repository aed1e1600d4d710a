#pragma once

// Binned ensemble densities.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace ponder {

struct Axis {
  std::string name;
  std::string unit;
  std::vector<double> edges;  // strictly increasing, size = bins + 1

  std::size_t bins() const { return edges.empty() ? 0 : edges.size() - 1; }
  double center(std::size_t i) const { return 0.5 * (edges[i] + edges[i + 1]); }
  std::vector<double> centers() const;
  /// Bin containing x (half-open [e_i, e_{i+1}), last bin closed); empty when outside.
  std::optional<std::size_t> locate(double x) const;

  static Axis uniform(std::string name, std::string unit, double lo, double hi, std::size_t bins);
  /// Edges halfway between the given increasing sample points.
  static Axis from_centers(std::string name, std::string unit, const std::vector<double>& centers);
  /// Throws DomainError unless the edges are finite and strictly increasing.
  void validate() const;
};

/// Integer counts over (sweep, observable). `sweep` is time, effective time
/// or depth; each sweep column is normalized independently.
class CountGrid {
 public:
  CountGrid(std::size_t sweep_bins, std::size_t observable_bins)
      : sweep_(sweep_bins), obs_(observable_bins), counts_(sweep_bins * observable_bins, 0), outside_(sweep_bins, 0) {}

  void add(std::size_t sweep, std::optional<std::size_t> obs) {
    if (obs) ++counts_[*obs * sweep_ + sweep];
    else ++outside_[sweep];
  }
  void merge(const CountGrid& other);

  std::uint64_t count(std::size_t sweep, std::size_t obs) const { return counts_[obs * sweep_ + sweep]; }
  std::uint64_t outside(std::size_t sweep) const { return outside_[sweep]; }
  std::size_t sweep_bins() const { return sweep_; }
  std::size_t observable_bins() const { return obs_; }

 private:
  std::size_t sweep_, obs_;
  std::vector<std::uint64_t> counts_;
  std::vector<std::uint64_t> outside_;
};

struct SpectralDensityGrid {
  Axis sweep;
  Axis observable;
  /// density[obs * sweep.bins() + s]; each sweep column sums to 1 (or 0 if empty).
  std::vector<double> density;
  /// Samples that fell outside the observable range, per sweep column.
  std::vector<std::uint64_t> outside;
  nlohmann::json metadata = nlohmann::json::object();

  double at(std::size_t s, std::size_t obs) const { return density[obs * sweep.bins() + s]; }
  double column_sum(std::size_t s) const;
  std::vector<double> column(std::size_t s) const;

  /// Normalizes integer counts per column.
  static SpectralDensityGrid from_counts(Axis sweep, Axis observable, const CountGrid& counts);
};

/// One-dimensional normalized histogram (unit integral over in-range samples).
struct Histogram {
  Axis axis;
  std::vector<std::uint64_t> counts;
  std::uint64_t outside = 0;

  explicit Histogram(Axis a) : axis(std::move(a)), counts(axis.bins(), 0) {}
  void add(double x);
  std::uint64_t in_range() const;
  /// count / (in_range * width) per bin.
  std::vector<double> density() const;
  std::vector<double> density(std::uint64_t normalization) const;
};

/// Width of the shortest interval containing `fraction` of the samples.
double shortest_interval_width(std::vector<double> samples, double fraction);

}  // namespace ponder
