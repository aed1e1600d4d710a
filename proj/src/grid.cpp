#include "ponder/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ponder/errors.hpp"

namespace ponder {

std::vector<double> Axis::centers() const {
  std::vector<double> c(bins());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = center(i);
  return c;
}

std::optional<std::size_t> Axis::locate(double x) const {
  if (edges.size() < 2 || !(x >= edges.front()) || !(x <= edges.back())) return std::nullopt;
  if (x == edges.back()) return bins() - 1;
  const auto it = std::upper_bound(edges.begin(), edges.end(), x);
  return static_cast<std::size_t>(it - edges.begin()) - 1;
}

Axis Axis::uniform(std::string name, std::string unit, double lo, double hi, std::size_t bins) {
  if (bins == 0 || !(hi > lo)) throw DomainError("uniform axis '" + name + "' needs bins > 0 and hi > lo");
  Axis a{std::move(name), std::move(unit), std::vector<double>(bins + 1)};
  for (std::size_t i = 0; i <= bins; ++i) {
    a.edges[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(bins);
  }
  a.edges.back() = hi;
  return a;
}

Axis Axis::from_centers(std::string name, std::string unit, const std::vector<double>& c) {
  if (c.empty()) throw DomainError("axis '" + name + "' needs at least one sample");
  Axis a{std::move(name), std::move(unit), std::vector<double>(c.size() + 1)};
  if (c.size() == 1) {
    const double h = c[0] == 0.0 ? 0.5 : 0.5 * std::abs(c[0]);
    a.edges = {c[0] - h, c[0] + h};
    return a;
  }
  for (std::size_t i = 1; i < c.size(); ++i) a.edges[i] = 0.5 * (c[i - 1] + c[i]);
  a.edges.front() = c.front() - (a.edges[1] - c.front());
  a.edges.back() = c.back() + (c.back() - a.edges[c.size() - 1]);
  a.validate();
  return a;
}

void Axis::validate() const {
  if (edges.size() < 2) throw DomainError("axis '" + name + "' has no bins");
  for (std::size_t i = 0; i < edges.size(); ++i) {
    if (!std::isfinite(edges[i])) throw DomainError("axis '" + name + "' has a non-finite edge");
    if (i > 0 && !(edges[i] > edges[i - 1])) throw DomainError("axis '" + name + "' edges must increase strictly");
  }
}

void CountGrid::merge(const CountGrid& other) {
  if (other.sweep_ != sweep_ || other.obs_ != obs_) throw DomainError("CountGrid::merge: shape mismatch");
  for (std::size_t i = 0; i < counts_.size(); ++i) counts_[i] += other.counts_[i];
  for (std::size_t i = 0; i < outside_.size(); ++i) outside_[i] += other.outside_[i];
}

double SpectralDensityGrid::column_sum(std::size_t s) const {
  double acc = 0.0;
  for (std::size_t o = 0; o < observable.bins(); ++o) acc += at(s, o);
  return acc;
}

std::vector<double> SpectralDensityGrid::column(std::size_t s) const {
  std::vector<double> c(observable.bins());
  for (std::size_t o = 0; o < c.size(); ++o) c[o] = at(s, o);
  return c;
}

SpectralDensityGrid SpectralDensityGrid::from_counts(Axis sweep, Axis observable, const CountGrid& counts) {
  sweep.validate();
  observable.validate();
  if (counts.sweep_bins() != sweep.bins() || counts.observable_bins() != observable.bins()) {
    throw DomainError("SpectralDensityGrid: count shape does not match axes");
  }
  SpectralDensityGrid g;
  const std::size_t ns = sweep.bins(), no = observable.bins();
  g.sweep = std::move(sweep);
  g.observable = std::move(observable);
  g.density.assign(ns * no, 0.0);
  g.outside.resize(ns);
  for (std::size_t s = 0; s < ns; ++s) {
    std::uint64_t total = 0;
    for (std::size_t o = 0; o < no; ++o) total += counts.count(s, o);
    g.outside[s] = counts.outside(s);
    if (total == 0) continue;
    const double inv = 1.0 / static_cast<double>(total);
    for (std::size_t o = 0; o < no; ++o) g.density[o * ns + s] = static_cast<double>(counts.count(s, o)) * inv;
  }
  return g;
}

void Histogram::add(double x) {
  if (const auto b = axis.locate(x)) ++counts[*b];
  else ++outside;
}

std::uint64_t Histogram::in_range() const { return std::accumulate(counts.begin(), counts.end(), std::uint64_t{0}); }

std::vector<double> Histogram::density() const { return density(in_range()); }

std::vector<double> Histogram::density(std::uint64_t normalization) const {
  std::vector<double> d(counts.size(), 0.0);
  if (normalization == 0) return d;
  for (std::size_t i = 0; i < d.size(); ++i) {
    d[i] = static_cast<double>(counts[i]) /
           (static_cast<double>(normalization) * (axis.edges[i + 1] - axis.edges[i]));
  }
  return d;
}

double shortest_interval_width(std::vector<double> samples, double fraction) {
  if (samples.empty()) throw DomainError("shortest_interval_width: no samples");
  if (!(fraction > 0.0 && fraction <= 1.0)) throw DomainError("shortest_interval_width: fraction outside (0, 1]");
  std::sort(samples.begin(), samples.end());
  const auto n = samples.size();
  const auto k = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(n))));
  double best = samples[k - 1] - samples[0];
  for (std::size_t i = 1; i + k <= n; ++i) best = std::min(best, samples[i + k - 1] - samples[i]);
  return best;
}

}  // namespace ponder
