#include "ponder/tracer.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <random>

#include "ponder/beatwave.hpp"
#include "ponder/errors.hpp"
#include "ponder/parallel.hpp"
#include "ponder/random.hpp"

namespace ponder::tracer {

namespace {

constexpr double ln2 = std::numbers::ln2;

double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

Vec3 sub(const Vec3& a, const Vec3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }

// Local beam coordinates: axial distance from the focus and squared radius.
struct Local {
  double z;
  double r2;
};

Local to_local(const Pulse& p, const Vec3& r) {
  const Vec3 d = sub(r, p.focus);
  const double z = dot(d, p.direction);
  return {z, std::max(0.0, dot(d, d) - z * z)};
}

// Scalar field amplitude factor without the carrier, and the carrier phase.
struct Shape {
  double amplitude;
  double phase;
};

// Per-pulse constants hoisted out of the field evaluation.
struct Prepared {
  const Pulse* p;
  double k, omega, zr, inv_c, inv_tf;

  Prepared(const Pulse& pulse, const PhysicalConstants& kc)
      : p(&pulse),
        k(pulse.wavenumber()),
        omega(pulse.angular_frequency(kc)),
        zr(pulse.rayleigh_length()),
        inv_c(1.0 / kc.speed_of_light),
        inv_tf(pulse.t_fwhm > 0.0 ? 1.0 / pulse.t_fwhm : 0.0) {}

  // log of the temporal envelope; -inf when it vanishes
  double log_envelope(double tau) const {
    const double x = tau * inv_tf;
    if (p->envelope == Envelope::Gaussian) return -2.0 * ln2 * x * x;
    const double s = 4.0 * x * x;
    double pw = 1.0;
    for (unsigned i = 0; i < p->order; ++i) pw *= s;
    return -ln2 * pw;
  }

  Shape shape(const Vec3& r, double t) const {
    if (inv_tf == 0.0) return {0.0, 0.0};
    const auto [z, r2] = to_local(*p, r);
    const double log_env = log_envelope(t - p->t_center - z * inv_c);
    if (log_env < -745.0) return {0.0, 0.0};
    const double zz = z * z + zr * zr;
    const double w2 = p->waist * p->waist * zz / (zr * zr);  // w(z)^2
    const double amp = p->field_amplitude * p->waist / std::sqrt(w2) * std::exp(log_env - r2 / w2);
    // k r^2 / (2R) with 1/R = z / (z^2 + z_R^2), finite through z = 0
    const double phi = omega * t - k * z - k * r2 * z / (2.0 * zz) + p->phase0;
    return {amp, phi + std::atan(z / zr)};
  }

  void add_field(const Vec3& r, double t, Vec3& E, Vec3& B) const {
    const auto s = shape(r, t);
    if (s.amplitude == 0.0) return;
    const double e = s.amplitude * std::sin(s.phase);
    const Vec3& d = p->direction;
    const Vec3& q = p->polarization;
    // B = d x E / c with E = e q
    const double b = e * inv_c;
    E[0] += e * q[0];
    E[1] += e * q[1];
    E[2] += e * q[2];
    B[0] += b * (d[1] * q[2] - d[2] * q[1]);
    B[1] += b * (d[2] * q[0] - d[0] * q[2]);
    B[2] += b * (d[0] * q[1] - d[1] * q[0]);
  }
};

Shape shape(const Pulse& p, const Vec3& r, double t, const PhysicalConstants& k) {
  return Prepared(p, k).shape(r, t);
}

}  // namespace

double Pulse::wavenumber() const { return 2.0 * std::numbers::pi / wavelength; }
double Pulse::angular_frequency(const PhysicalConstants& k) const { return wavenumber() * k.speed_of_light; }
double Pulse::rayleigh_length() const { return std::numbers::pi * waist * waist / wavelength; }

double Pulse::beam_radius(double z) const {
  const double s = z / rayleigh_length();
  return waist * std::sqrt(1.0 + s * s);
}

double Pulse::gouy_phase(double z) const { return std::atan(z / rayleigh_length()); }

double Pulse::curvature_phase(double z, double r2) const {
  // k r^2 / (2R) with 1/R = z / (z^2 + z_R^2), finite through z = 0
  const double zr = rayleigh_length();
  return wavenumber() * r2 * z / (2.0 * (z * z + zr * zr));
}

void validate(const Pulse& p) {
  auto unit = [](const Vec3& v) { return std::abs(dot(v, v) - 1.0) < 1e-12; };
  if (!(p.wavelength > 0.0)) throw DomainError("pulse wavelength must be positive");
  if (!(p.waist > 0.0)) throw DomainError("pulse waist must be positive");
  if (!(p.t_fwhm >= 0.0)) throw DomainError("pulse duration must be non-negative");
  if (!std::isfinite(p.field_amplitude)) throw DomainError("pulse field amplitude must be finite");
  if (p.envelope == Envelope::SuperGaussian && p.order == 0) throw DomainError("super-Gaussian order must be positive");
  if (!unit(p.direction) || !unit(p.polarization)) throw DomainError("pulse direction and polarization must be unit vectors");
  if (std::abs(dot(p.direction, p.polarization)) > 1e-12) throw DomainError("pulse polarization must be transverse");
}

double envelope(const Pulse& p, double tau, const PhysicalConstants& k) {
  if (p.t_fwhm == 0.0) return 0.0;
  return std::exp(Prepared(p, k).log_envelope(tau));
}

FieldSample pulse_field(const Pulse& p, const Vec3& r, double t, const PhysicalConstants& k) {
  FieldSample out;
  const auto s = shape(p, r, t, k);
  if (s.amplitude == 0.0) return out;
  const double e = s.amplitude * std::sin(s.phase);
  for (int i = 0; i < 3; ++i) out.E[i] = e * p.polarization[i];
  const Vec3 b = cross(p.direction, out.E);
  for (int i = 0; i < 3; ++i) out.B[i] = b[i] / k.speed_of_light;
  return out;
}

Vec3 pulse_vector_potential(const Pulse& p, const Vec3& r, double t, const PhysicalConstants& k) {
  const auto s = shape(p, r, t, k);
  const double a = s.amplitude == 0.0 ? 0.0 : s.amplitude * std::cos(s.phase) / p.angular_frequency(k);
  return {a * p.polarization[0], a * p.polarization[1], a * p.polarization[2]};
}

double ParticleState::gamma(const PhysicalConstants& k) const {
  return std::sqrt(1.0 + dot(u, u) / (k.speed_of_light * k.speed_of_light));
}

Vec3 ParticleState::velocity(const PhysicalConstants& k) const {
  const double g = gamma(k);
  return {u[0] / g, u[1] / g, u[2] / g};
}

double ParticleState::kinetic_energy(const PhysicalConstants& k) const {
  // (gamma - 1) m c^2 without cancellation at low speed
  const double u2 = dot(u, u);
  return k.electron_mass * u2 / (gamma(k) + 1.0);
}

namespace {

template <class FieldFn>
ParticleState integrate(const ParticleState& s0, double dt, const PushOptions& o, PushStats* stats,
                        const PhysicalConstants& k, double max_step, double length_scale, FieldFn&& fields) {
  const double qm = -k.elementary_charge / k.electron_mass;
  const double c2 = k.speed_of_light * k.speed_of_light;
  auto rhs = [&](double t, const ode::State<6>& y, ode::State<6>& dy) {
    const Vec3 r{y[0], y[1], y[2]};
    const Vec3 u{y[3], y[4], y[5]};
    const double g = std::sqrt(1.0 + dot(u, u) / c2);
    const Vec3 v{u[0] / g, u[1] / g, u[2] / g};
    Vec3 E{}, B{};
    fields(r, t, E, B);
    const Vec3 vxb = cross(v, B);
    for (int i = 0; i < 3; ++i) {
      dy[i] = v[i];
      dy[3 + i] = qm * (E[i] + vxb[i]);
    }
  };
  ode::State<6> y{s0.r[0], s0.r[1], s0.r[2], s0.u[0], s0.u[1], s0.u[2]};
  double t = s0.t;
  const double t_end = s0.t + dt;
  if (o.integrator == Integrator::RK4) {
    if (!(o.rk4_step > 0.0)) throw DomainError("RK4 needs a positive step");
    const auto steps = static_cast<std::size_t>(std::ceil(std::abs(dt) / o.rk4_step));
    if (steps > 0) y = ode::rk4_integrate<6>(rhs, t, y, t_end, steps);
    if (stats) {
      stats->steps += steps;
      stats->evaluations += 4 * steps;
    }
  } else {
    ode::Tolerance<6> tol;
    tol.rtol = o.rtol;
    for (int i = 0; i < 3; ++i) {
      tol.atol[i] = o.rtol * length_scale;
      tol.atol[3 + i] = o.rtol * k.speed_of_light;
    }
    ode::DormandPrince<6> dp(tol, max_step > 0.0 ? max_step : std::numeric_limits<double>::infinity());
    dp.integrate(rhs, t, y, t_end);
    if (stats) {
      stats->steps += dp.stats().accepted;
      stats->rejected += dp.stats().rejected;
      stats->evaluations += dp.stats().evaluations;
    }
  }
  return {{y[0], y[1], y[2]}, {y[3], y[4], y[5]}, t_end};
}

double default_length_scale(const std::vector<Pulse>& pulses, const PushOptions& o) {
  if (o.length_scale > 0.0) return o.length_scale;
  double shortest = 1e-6;
  for (std::size_t i = 0; i < pulses.size(); ++i) {
    shortest = i == 0 ? pulses[i].wavelength : std::min(shortest, pulses[i].wavelength);
  }
  return shortest;
}

double default_max_step(const std::vector<Pulse>& pulses, const PushOptions& o, const PhysicalConstants& k) {
  if (o.max_step > 0.0) return o.max_step;
  double shortest = std::numeric_limits<double>::infinity();
  for (const auto& p : pulses) shortest = std::min(shortest, p.wavelength / k.speed_of_light);
  // keeps the controller from stepping over a pulse it has not yet seen
  return std::isfinite(shortest) ? 0.25 * shortest : 0.0;
}

}  // namespace

ParticleState push(const ParticleState& state, const std::vector<Pulse>& pulses, double dt, const PushOptions& o,
                   PushStats* stats, const PhysicalConstants& k) {
  std::vector<Prepared> prepared;
  for (const auto& p : pulses) prepared.emplace_back(p, k);
  return integrate(state, dt, o, stats, k, default_max_step(pulses, o, k), default_length_scale(pulses, o),
                   [&](const Vec3& r, double t, Vec3& E, Vec3& B) {
                     for (const auto& p : prepared) p.add_field(r, t, E, B);
                   });
}

ParticleState push_static(const ParticleState& state, const Vec3& E, const Vec3& B, double dt, const PushOptions& o,
                          PushStats* stats, const PhysicalConstants& k) {
  return integrate(state, dt, o, stats, k, o.max_step, default_length_scale({}, o), [&](const Vec3&, double, Vec3& e, Vec3& b) {
    e = E;
    b = B;
  });
}

Geometry geometry_from_string(const std::string& name) {
  if (name == "inelastic-gaussian") return Geometry::InelasticGaussian;
  if (name == "inelastic-supergaussian") return Geometry::InelasticSuperGaussian;
  if (name == "elastic-gaussian") return Geometry::ElasticGaussian;
  throw ConfigError("geometry", "unknown geometry '" + name + "'");
}

std::string to_string(Geometry g) {
  switch (g) {
    case Geometry::InelasticGaussian: return "inelastic-gaussian";
    case Geometry::InelasticSuperGaussian: return "inelastic-supergaussian";
    case Geometry::ElasticGaussian: return "elastic-gaussian";
  }
  return "unknown";
}

double effective_time(double t_fwhm, double beta, Geometry g) {
  if (!(t_fwhm >= 0.0)) throw DomainError("effective_time: t_fwhm must be non-negative");
  const double pi = std::numbers::pi;
  switch (g) {
    case Geometry::InelasticGaussian: return t_fwhm * std::sqrt(pi / (4.0 * ln2 * (1.0 + beta * beta)));
    case Geometry::InelasticSuperGaussian: return t_fwhm;
    case Geometry::ElasticGaussian: return t_fwhm * std::sqrt(pi / (4.0 * ln2));
  }
  throw ConfigError("geometry", "unknown geometry");
}

double effective_time(double t_fwhm, double beta, const std::string& geometry) {
  return effective_time(t_fwhm, beta, geometry_from_string(geometry));
}

std::array<Pulse, 2> inelastic_pulses(double lambda1, double lambda2, double amplitude, double waist,
                                      Envelope envelope, const PhysicalConstants& k) {
  if (!(lambda1 > 0.0 && lambda2 > 0.0) || lambda1 == lambda2) {
    throw DomainError("inelastic pulses need two distinct positive wavelengths");
  }
  const double ls = std::min(lambda1, lambda2), ll = std::max(lambda1, lambda2);
  const double w1 = beatwave::angular_frequency(ls, k), w2 = beatwave::angular_frequency(ll, k);
  const double e0 = beatwave::field_amplitude_for(amplitude, w1, w2, k);
  Pulse fast;
  fast.wavelength = ls;
  fast.field_amplitude = e0;
  fast.waist = waist;
  fast.envelope = envelope;
  Pulse slow = fast;
  slow.wavelength = ll;
  slow.direction = {0.0, 0.0, -1.0};
  return {fast, slow};
}

double beat_velocity(const std::array<Pulse, 2>& pulses, const PhysicalConstants& k) {
  const double w1 = pulses[0].angular_frequency(k), w2 = pulses[1].angular_frequency(k);
  const double d1 = pulses[0].direction[2], d2 = pulses[1].direction[2];
  if (!(d1 * d2 < 0.0)) throw DomainError("beat velocity needs a pair counterpropagating along z");
  // the beat moves with the higher-frequency pulse
  const double sign = w1 >= w2 ? (d1 > 0.0 ? 1.0 : -1.0) : (d2 > 0.0 ? 1.0 : -1.0);
  return sign * k.speed_of_light * std::abs(w1 - w2) / (w1 + w2);
}

std::array<Pulse, 2> elastic_pulses(double lambda, double field_amplitude, double waist, double alpha) {
  Pulse a;
  a.wavelength = lambda;
  a.field_amplitude = field_amplitude;
  a.waist = waist;
  a.direction = {std::cos(alpha), 0.0, -std::sin(alpha)};
  a.polarization = {0.0, 1.0, 0.0};
  Pulse b = a;
  b.direction = {-a.direction[0], 0.0, -a.direction[2]};
  return {a, b};
}

ParticleState initial_particle(const TracerEnsemble& e, std::size_t index, const PhysicalConstants& k) {
  auto gen = particle_stream(e.seed, index);
  std::normal_distribution<double> n01;
  ParticleState s;
  s.r = {e.sigma_xy * n01(gen), e.sigma_xy * n01(gen), e.sigma_z * n01(gen)};
  const double mc2 = k.electron_mass * k.speed_of_light * k.speed_of_light;
  const double beta = e.reference_speed / k.speed_of_light;
  const double ref_kinetic = mc2 * beta * beta / (std::sqrt(1.0 - beta * beta) * (1.0 + std::sqrt(1.0 - beta * beta)));
  const double offset = e.energy_fwhm > 0.0 ? e.energy_mean + sigma_from_fwhm(e.energy_fwhm) * n01(gen) : e.energy_mean;
  const double kinetic = ref_kinetic + offset;
  if (!(kinetic > 0.0)) throw DomainError("energy offset leaves no kinetic energy");
  const double g = 1.0 + kinetic / mc2;
  // gamma beta c = sqrt(g^2 - 1) c, written to avoid cancellation
  const double gb = std::sqrt((kinetic / mc2) * (g + 1.0));
  s.u = {0.0, 0.0, gb * k.speed_of_light};
  s.t = 0.0;
  return s;
}

std::array<double, 2> interaction_window(const std::array<Pulse, 2>& pulses, const ParticleState& at_zero,
                                         double cutoff, const PhysicalConstants& k) {
  if (!(cutoff > 0.0 && cutoff < 1.0)) throw DomainError("envelope cutoff must lie in (0, 1)");
  const double tf = std::max(pulses[0].t_fwhm, pulses[1].t_fwhm);
  if (tf == 0.0 || pulses[0].t_fwhm == 0.0 || pulses[1].t_fwhm == 0.0) return {0.0, 0.0};
  const Vec3 v = at_zero.velocity(k);
  auto product = [&](double t) {
    const Vec3 r{at_zero.r[0] + v[0] * t, at_zero.r[1] + v[1] * t, at_zero.r[2] + v[2] * t};
    double prod = 1.0;
    for (const auto& p : pulses) {
      const double z = dot(sub(r, p.focus), p.direction);
      prod *= envelope(p, t - p.t_center - z / k.speed_of_light, k);
    }
    return prod;
  };
  // Coarse scan to bracket the region above the cutoff, then bisect each edge.
  const double centre = 0.5 * (pulses[0].t_center + pulses[1].t_center);
  const double step = tf / 64.0, reach = 64.0 * tf + std::abs(centre);
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (double t = centre - reach; t <= centre + reach; t += step) {
    if (product(t) > cutoff) {
      lo = std::min(lo, t);
      hi = std::max(hi, t);
    }
  }
  if (!std::isfinite(lo)) return {0.0, 0.0};
  auto edge = [&](double inside, double outside) {
    for (int i = 0; i < 60; ++i) {
      const double mid = 0.5 * (inside + outside);
      (product(mid) > cutoff ? inside : outside) = mid;
    }
    return outside;
  };
  return {edge(lo, lo - step), edge(hi, hi + step)};
}

TraceResult trace(const std::array<Pulse, 2>& pulses, const ParticleState& at_zero, const PushOptions& options,
                  double cutoff, const PhysicalConstants& k) {
  TraceResult out;
  const auto [t0, t1] = interaction_window(pulses, at_zero, cutoff, k);
  if (t1 <= t0) {
    out.final_state = at_zero;
    return out;
  }
  const double qm = -k.elementary_charge / k.electron_mass;
  auto quiver = [&](const ParticleState& s) {
    Vec3 a{};
    for (const auto& p : pulses) {
      const auto ap = pulse_vector_potential(p, s.r, s.t, k);
      for (int i = 0; i < 3; ++i) a[i] += ap[i];
    }
    return Vec3{qm * a[0], qm * a[1], qm * a[2]};
  };
  // straight-line drift to the window start, then add the quiver the fields impose there
  ParticleState s = at_zero;
  const Vec3 v = at_zero.velocity(k);
  for (int i = 0; i < 3; ++i) s.r[i] += v[i] * t0;
  s.t = t0;
  const Vec3 q0 = quiver(s);
  for (int i = 0; i < 3; ++i) s.u[i] -= q0[i];
  const std::vector<Pulse> list(pulses.begin(), pulses.end());
  try {
    s = push(s, list, t1 - t0, options, &out.stats, k);
  } catch (const StiffnessError&) {
    out.failed = true;
  }
  const Vec3 q1 = quiver(s);
  for (int i = 0; i < 3; ++i) s.u[i] += q1[i];
  out.final_state = s;
  return out;
}

namespace {

double reference_kinetic(const TracerEnsemble& e, const PhysicalConstants& k) {
  TracerEnsemble ref = e;
  ref.energy_mean = 0.0;
  ref.energy_fwhm = 0.0;
  return initial_particle(ref, 0, k).kinetic_energy(k);
}

template <class ObservableFn>
SpectralDensityGrid run(const TracerScenario& s, unsigned workers, const PhysicalConstants& k, ObservableFn&& obs,
                        const char* kind) {
  for (const auto& p : s.pulses) validate(p);
  if (s.t_fwhm.empty()) throw DomainError("tracer sweep needs at least one pulse duration");
  for (double t : s.t_fwhm) {
    if (!(t >= 0.0)) throw DomainError("tracer sweep values must be non-negative");
  }
  if (s.ensemble.n_particles == 0) throw DomainError("tracer ensemble is empty");
  s.observable_axis.validate();

  const std::size_t ns = s.t_fwhm.size(), np = s.ensemble.n_particles;
  std::vector<ParticleState> initial(np);
  for (std::size_t i = 0; i < np; ++i) initial[i] = initial_particle(s.ensemble, i, k);

  std::vector<double> value(ns * np, 0.0);
  std::vector<unsigned char> failed(ns * np, 0);
  std::vector<std::uint64_t> steps(ns * np, 0);
  std::atomic<std::uint64_t> used{0};
  std::atomic<bool> over_budget{false};
  // longest pulses first, so the load balances across workers
  std::vector<std::size_t> order(ns);
  for (std::size_t i = 0; i < ns; ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return s.t_fwhm[a] > s.t_fwhm[b]; });

  parallel_for(ns * np, workers, [&](std::size_t job, unsigned) {
    const std::size_t si = order[job / np], pi = job % np;
    if (over_budget.load(std::memory_order_relaxed)) {
      failed[si * np + pi] = 2;
      return;
    }
    auto pulses = s.pulses;
    for (auto& p : pulses) p.t_fwhm = s.t_fwhm[si];
    const auto r = trace(pulses, initial[pi], s.push, s.envelope_cutoff, k);
    steps[si * np + pi] = r.stats.steps + r.stats.rejected;
    failed[si * np + pi] = r.failed ? 1 : 0;
    value[si * np + pi] = obs(r.final_state);
    const auto total = used.fetch_add(r.stats.evaluations, std::memory_order_relaxed) + r.stats.evaluations;
    if (s.evaluation_budget > 0 && total > s.evaluation_budget) over_budget.store(true, std::memory_order_relaxed);
  }, 1);

  if (over_budget.load()) {
    throw TruncationError(std::string(kind) + " run exceeded its budget of " + std::to_string(s.evaluation_budget) +
                          " field evaluations");
  }

  const double beta = s.ensemble.reference_speed / k.speed_of_light;
  std::vector<double> t_eff(ns);
  for (std::size_t i = 0; i < ns; ++i) t_eff[i] = effective_time(s.t_fwhm[i], beta, s.geometry);
  std::vector<std::size_t> by_time(ns);
  for (std::size_t i = 0; i < ns; ++i) by_time[i] = i;
  std::stable_sort(by_time.begin(), by_time.end(), [&](std::size_t a, std::size_t b) { return t_eff[a] < t_eff[b]; });
  std::vector<double> centres(ns);
  for (std::size_t i = 0; i < ns; ++i) centres[i] = t_eff[by_time[i]];
  for (std::size_t i = 1; i < ns; ++i) {
    if (!(centres[i] > centres[i - 1])) throw DomainError("tracer sweep durations must be distinct");
  }

  CountGrid counts(ns, s.observable_axis.bins());
  std::uint64_t failures = 0, total_steps = 0;
  for (std::size_t col = 0; col < ns; ++col) {
    const std::size_t si = by_time[col];
    for (std::size_t pi = 0; pi < np; ++pi) {
      total_steps += steps[si * np + pi];
      if (failed[si * np + pi]) {
        ++failures;
        continue;
      }
      counts.add(col, s.observable_axis.locate(value[si * np + pi]));
    }
  }
  Axis sweep = ns == 1 ? Axis::uniform("effective time", "s", centres[0] - 0.5e-15, centres[0] + 0.5e-15, 1)
                       : Axis::from_centers("effective time", "s", centres);
  auto grid = SpectralDensityGrid::from_counts(std::move(sweep), s.observable_axis, counts);
  std::vector<double> fwhm_sorted(ns);
  for (std::size_t i = 0; i < ns; ++i) fwhm_sorted[i] = s.t_fwhm[by_time[i]];
  grid.metadata["t_fwhm_s"] = fwhm_sorted;
  grid.metadata["geometry"] = to_string(s.geometry);
  grid.metadata["integrator_failures"] = failures;
  grid.metadata["integrator_steps"] = total_steps;
  grid.metadata["field_evaluations"] = used.load();
  grid.metadata["particles"] = np;
  return grid;
}

}  // namespace

SpectralDensityGrid run_inelastic(const TracerScenario& s, unsigned workers, const PhysicalConstants& k) {
  const double ref = reference_kinetic(s.ensemble, k);
  return run(s, workers, k, [&](const ParticleState& p) { return p.kinetic_energy(k) - ref; }, "inelastic");
}

SpectralDensityGrid run_elastic(const TracerScenario& s, unsigned workers, const PhysicalConstants& k) {
  return run(s, workers, k, [](const ParticleState& p) { return std::atan2(p.u[0], p.u[2]); }, "elastic");
}

}  // namespace ponder::tracer
