#include <cmath>
#include <filesystem>
#include <iomanip>
#include <sstream>

#include "lasalt/burgers1d.hpp"
#include "lasalt/diagio.hpp"
#include "lasalt/errors.hpp"
#include "lasalt/euler2d.hpp"
#include "lasalt/meanfield.hpp"
#include "lasalt/peakons.hpp"
#include "lasalt/rigidbody.hpp"

namespace lasalt::io {

namespace fs = std::filesystem;

namespace {

std::string step_tag(std::size_t step) {
  std::ostringstream ss;
  ss << std::setw(8) << std::setfill('0') << step;
  return ss.str();
}

RunParams make_params(const RunConfig& c, unsigned threads) {
  RunParams p;
  p.dt = c.dt;
  p.steps = c.steps();
  p.stepper = c.stepper == "em" ? Stepper::EulerMaruyama : Stepper::Heun;
  p.mode = c.mode == "decoupled" ? Mode::Decoupled : Mode::Coupled;
  p.seed = c.seed;
  p.output_every = c.output_every;
  p.threads = threads;
  return p;
}

noise::NoiseBasis make_basis(const RunConfig& c, int dimension) {
  if (c.noise.kind == "constant")
    return noise::build_constant_basis(dimension, c.noise.nu);
  std::vector<noise::FourierModeSpec> modes;
  for (const auto& m : c.noise.modes) {
    modes.push_back({static_cast<int>(std::llround(m[0])),
                     static_cast<int>(std::llround(m[1])), m[2], m[3]});
  }
  if (dimension == 1) return noise::build_fourier_basis_1d(modes);
  if (dimension == 2) return noise::build_fourier_divfree_basis(modes);
  throw ConfigError("noise.kind 'fourier' is not available for this model");
}

template <class Sink>
void run_rigidbody(const RunConfig& c, const RunParams& params, Sink&& sink) {
  using namespace rigidbody;
  auto basis = make_basis(c, 3);
  RigidBodyModel model(
      InertiaSpec{c.rigidbody.inertia[0], c.rigidbody.inertia[1],
                  c.rigidbody.inertia[2]},
      basis);
  RigidBodyState init;
  init.pi = c.rigidbody.pi0;
  std::vector<RigidBodyState> members(c.members, init);
  const bool decoupled = params.mode == Mode::Decoupled;
  const fs::path fields = fs::path(c.output_dir) / "fields";

  auto diag = [&](const RigidBodyModel& m, const Ensemble<RigidBodyModel>& e) {
    const RigidBodyState emp =
        decoupled ? empirical_mean_state(std::span<const RigidBodyState>(
                        e.members))
                  : e.frozen_mean;
    DiagnosticsRecord rec =
        rb_diagnostics(e.members, emp, m.basis(), e.t);
    const auto& p0 = e.members[0].pi;
    rec.set("casimir_member0", p0[0] * p0[0] + p0[1] * p0[1] + p0[2] * p0[2]);
    if (decoupled) {
      const auto& d = e.frozen_mean.pi;
      rec.set("det_mean_norm2", d[0] * d[0] + d[1] * d[1] + d[2] * d[2]);
      double prod = 0.0;
      for (std::size_t k = 0; k < m.basis().size(); ++k) {
        const auto cr = cross(m.basis().constant3(k), d);
        prod += cr[0] * cr[0] + cr[1] * cr[1] + cr[2] * cr[2];
      }
      rec.set("det_production", prod);
      rec.set("det_mean_pi_x", d[0]);
      rec.set("det_mean_pi_y", d[1]);
      rec.set("det_mean_pi_z", d[2]);
    }
    // every member's momentum, for distribution-on-the-sphere studies
    std::vector<double> flatpi(3 * e.members.size());
    for (std::size_t i = 0; i < e.members.size(); ++i)
      for (int j = 0; j < 3; ++j) flatpi[3 * i + j] = e.members[i].pi[j];
    dump_field(flatpi,
               {e.members.size(), 3, 0.0, e.t, "members_pi", "rigidbody"},
               fields / ("members_pi_" + step_tag(e.step_index)));
    return rec;
  };
  run(model, std::move(members), params, diag, sink);
}

template <class Sink>
void run_burgers(const RunConfig& c, const RunParams& params, Sink&& sink) {
  using namespace burgers;
  auto grid = std::make_shared<Grid1D>(c.burgers.n, c.burgers.length);
  auto basis = make_basis(c, 1);
  BurgersModel model(grid, basis);
  Field1D u0;
  if (c.burgers.u0 == "sine") {
    u0 = sine_initial(*grid);
  } else {
    FieldMeta meta;
    u0.values = load_field(c.burgers.u0, &meta);
    if (u0.values.size() != grid->n())
      throw ConfigError("burgers.u0: field dump does not match burgers.n");
  }
  std::vector<Field1D> members(c.members, u0);
  const bool decoupled = params.mode == Mode::Decoupled;
  const fs::path fields = fs::path(c.output_dir) / "fields";

  auto diag = [&](const BurgersModel& m, const Ensemble<BurgersModel>& e) {
    const Grid1D& g = m.grid();
    const Field1D emp =
        decoupled
            ? empirical_mean_state(std::span<const Field1D>(e.members))
            : e.frozen_mean;
    DiagnosticsRecord rec;
    rec.t = e.t;
    rec.set("mean_mass", g.integral(emp.values));
    rec.set("mean_l2", g.inner(emp.values, emp.values));
    const double total =
        pairwise_sum(e.members.size(), [&](std::size_t i) {
          return g.inner(e.members[i].values, e.members[i].values);
        }) /
        static_cast<double>(e.members.size());
    rec.set("total_l2", total);
    const double variance =
        pairwise_sum(e.members.size(), [&](std::size_t i) {
          std::vector<double> d(g.n());
          for (std::size_t j = 0; j < g.n(); ++j)
            d[j] = e.members[i].values[j] - emp.values[j];
          return g.inner(d, d);
        }) /
        static_cast<double>(e.members.size());
    rec.set("variance_l2", variance);
    double lo = e.members[0].values[0], hi = lo;
    for (double v : e.members[0].values) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    rec.set("member0_min", lo);
    rec.set("member0_max", hi);
    rec.set("member0_mass", g.integral(e.members[0].values));
    if (decoupled)
      rec.set("det_mean_l2",
              g.inner(e.frozen_mean.values, e.frozen_mean.values));
    dump_field(emp.values, {g.n(), 0, g.length(), e.t, "mean_u", "burgers"},
               fields / ("mean_u_" + step_tag(e.step_index)));
    dump_field(e.members[0].values,
               {g.n(), 0, g.length(), e.t, "member0_u", "burgers"},
               fields / ("member0_u_" + step_tag(e.step_index)));
    return rec;
  };
  run(model, std::move(members), params, diag, sink);
}

template <class Sink>
void run_peakons(const RunConfig& c, const RunParams& params, Sink&& sink) {
  using namespace peakons;
  const KernelKind kind = c.peakons.kernel == "periodic"
                              ? KernelKind::Periodic
                              : KernelKind::Line;
  auto basis = make_basis(c, 1);
  PeakonModel model(c.peakons.n, c.peakons.alpha, kind, basis);
  if (kind == KernelKind::Line) {
    for (std::size_t a = 1; a < c.peakons.n; ++a)
      if (!(c.peakons.q0[a] > c.peakons.q0[a - 1]))
        throw ConfigError(
            "peakons.q0: positions must be strictly increasing for the line "
            "kernel");
  }
  PeakonState init;
  init.qp.resize(2 * c.peakons.n);
  for (std::size_t a = 0; a < c.peakons.n; ++a) {
    init.q(a) = c.peakons.q0[a];
    init.p(a) = c.peakons.p0[a];
  }
  std::vector<PeakonState> members(c.members, init);
  const bool decoupled = params.mode == Mode::Decoupled;
  const fs::path fields = fs::path(c.output_dir) / "fields";

  auto diag = [&](const PeakonModel& m, const Ensemble<PeakonModel>& e) {
    DiagnosticsRecord rec;
    rec.t = e.t;
    const std::size_t n = e.members[0].count();
    const std::size_t count = e.members.size();
    double mom_mean = pairwise_sum(count, [&](std::size_t i) {
                        double s = 0.0;
                        for (std::size_t a = 0; a < n; ++a)
                          s += e.members[i].p(a);
                        return s;
                      }) /
                      static_cast<double>(count);
    rec.set("momentum_mean", mom_mean);
    double mom0 = 0.0;
    for (std::size_t a = 0; a < n; ++a) mom0 += e.members[0].p(a);
    rec.set("momentum_member0", mom0);
    // ensemble spread of positions and momenta
    double var_q = 0.0, var_p = 0.0;
    for (std::size_t a = 0; a < n; ++a) {
      const double qa = pairwise_sum(count, [&](std::size_t i) {
                          return e.members[i].q(a);
                        }) /
                        static_cast<double>(count);
      const double pa = pairwise_sum(count, [&](std::size_t i) {
                          return e.members[i].p(a);
                        }) /
                        static_cast<double>(count);
      var_q += pairwise_sum(count, [&](std::size_t i) {
                 const double d = e.members[i].q(a) - qa;
                 return d * d;
               }) /
               static_cast<double>(count);
      var_p += pairwise_sum(count, [&](std::size_t i) {
                 const double d = e.members[i].p(a) - pa;
                 return d * d;
               }) /
               static_cast<double>(count);
    }
    rec.set("var_q", var_q / static_cast<double>(n));
    rec.set("var_p", var_p / static_cast<double>(n));
    for (std::size_t a = 0; a < std::min<std::size_t>(n, 8); ++a) {
      rec.set("member0_q" + std::to_string(a), e.members[0].q(a));
      rec.set("member0_p" + std::to_string(a), e.members[0].p(a));
    }
    if (decoupled && e.frozen_mean.is_grid()) {
      const Grid1D& g = e.frozen_mean.grid();
      rec.set("det_mean_momentum", g.integral(e.frozen_mean.grid_momentum()));
      dump_field(e.frozen_mean.grid_momentum(),
                 {g.n(), 0, g.length(), e.t, "mean_momentum", "peakons"},
                 fields / ("mean_momentum_" + step_tag(e.step_index)));
    }
    dump_field(e.members[0].qp,
               {2 * n, 0, 0.0, e.t, "member0_qp", "peakons"},
               fields / ("member0_qp_" + step_tag(e.step_index)));
    return rec;
  };
  run(model, std::move(members), params, diag, sink);
}

template <class Sink>
void run_euler2d(const RunConfig& c, const RunParams& params, Sink&& sink) {
  using namespace euler2d;
  constexpr double kTwoPi = 6.283185307179586476925286766559;
  auto grid = std::make_shared<Grid2D>(c.euler2d.n, kTwoPi);
  auto basis = make_basis(c, 2);
  Euler2DModel model(grid, basis);

  VorticityState w0;
  if (c.euler2d.omega0 == "taylor-green") {
    w0 = taylor_green_vorticity(*grid);
  } else if (c.euler2d.omega0 == "random-shear") {
    w0 = random_shear_vorticity(*grid, c.seed);
  } else {
    FieldMeta meta;
    auto phys = load_field(c.euler2d.omega0, &meta);
    if (phys.size() != grid->npoints())
      throw ConfigError("euler2d.omega0: field dump does not match euler2d.n");
    w0.hat = grid->to_hat(phys);
    grid->dealias(w0.hat);
    grid->zero_mean(w0.hat);
  }
  std::vector<VorticityState> members(c.members, w0);
  const bool decoupled = params.mode == Mode::Decoupled;
  const fs::path fields = fs::path(c.output_dir) / "fields";

  const bool with_loop = !c.euler2d.loop.empty();
  MaterialLoop loop;
  std::size_t resamples = 0;
  bool resample_failed = false;
  if (with_loop) {
    loop = make_circle_loop(c.euler2d.loop[0], c.euler2d.loop[1],
                            c.euler2d.loop[2],
                            static_cast<std::size_t>(c.euler2d.loop[3]));
  }
  auto hook = [&](const Euler2DModel& m, const Ensemble<Euler2DModel>& e,
                  const noise::WienerBatch& batch) {
    if (!with_loop) return;
    std::span<const double> dW(batch.increments.data(),
                               batch.correlate_count);
    advect_loop(loop, m.grid(), e.frozen_mean.ux, e.frozen_mean.uy, m.basis(),
                dW, batch.dt);
    if (loop_spacing_ratio(loop) > 4.0) {
      if (resample_loop_arclength(loop))
        ++resamples;
      else
        resample_failed = true;
    }
  };

  auto diag = [&](const Euler2DModel& m, const Ensemble<Euler2DModel>& e) {
    const Grid2D& g = m.grid();
    DiagnosticsRecord rec;
    rec.t = e.t;
    VorticityState emp;
    if (decoupled) {
      emp = empirical_mean_state(std::span<const VorticityState>(e.members));
      g.dealias(emp.hat);
      g.zero_mean(emp.hat);
    } else {
      emp = e.frozen_mean.omega;
    }
    const std::size_t count = e.members.size();
    const double total = pairwise_sum(count, [&](std::size_t i) {
                           return g.norm2_hat(e.members[i].hat);
                         }) /
                         static_cast<double>(count);
    const double mean_part = g.norm2_hat(emp.hat);
    const double variance =
        pairwise_sum(count, [&](std::size_t i) {
          Spectrum d(e.members[i].hat);
          for (std::size_t j = 0; j < d.size(); ++j) d[j] -= emp.hat[j];
          return g.norm2_hat(d);
        }) /
        static_cast<double>(count);
    double dissipation = 0.0;
    for (std::size_t k = 0; k < m.correlate_count(); ++k) {
      VorticityState gk = m.diffusion(emp, k);
      dissipation += g.norm2_hat(gk.hat);
    }
    rec.set("total_enstrophy", total);
    rec.set("mean_enstrophy", mean_part);
    rec.set("variance_enstrophy", variance);
    rec.set("dissipation", dissipation);
    auto w0p = g.to_phys(e.members[0].hat);
    const double h2 = g.dx() * g.dx();
    double l1 = 0.0, l4 = 0.0, c3 = 0.0, mass = 0.0;
    for (double v : w0p) {
      l1 += std::abs(v);
      l4 += v * v * v * v;
      c3 += v * v * v;
      mass += v;
    }
    rec.set("member0_enstrophy", g.norm2_hat(e.members[0].hat));
    rec.set("member0_l1", l1 * h2);
    rec.set("member0_l4", std::pow(l4 * h2, 0.25));
    rec.set("member0_casimir_cubic", c3 * h2);
    rec.set("member0_mass", mass * h2);
    if (decoupled) {
      rec.set("det_mean_enstrophy", g.norm2_hat(e.frozen_mean.omega.hat));
      double det_diss = 0.0;
      for (std::size_t k = 0; k < m.correlate_count(); ++k) {
        VorticityState gk = m.diffusion(e.frozen_mean.omega, k);
        det_diss += g.norm2_hat(gk.hat);
      }
      rec.set("det_dissipation", det_diss);
    }
    if (with_loop) {
      Spectrum uxh(g.ncoeff()), uyh(g.ncoeff());
      biot_savart(g, e.members[0].hat, uxh, uyh);
      auto ux = g.to_phys(uxh);
      auto uy = g.to_phys(uyh);
      rec.set("kelvin_circulation", circulation(loop, g, ux, uy));
      rec.set("loop_resamples", static_cast<double>(resamples));
      rec.set("loop_resample_failed", resample_failed ? 1.0 : 0.0);
      std::vector<double> markers(2 * loop.size());
      for (std::size_t i = 0; i < loop.size(); ++i) {
        markers[2 * i] = loop.x[i];
        markers[2 * i + 1] = loop.y[i];
      }
      dump_field(markers, {loop.size(), 2, g.length(), e.t, "loop", "euler2d"},
                 fields / ("loop_" + step_tag(e.step_index)));
    }
    auto meanp = g.to_phys(emp.hat);
    dump_field(meanp, {g.n(), g.n(), g.length(), e.t, "mean_omega", "euler2d"},
               fields / ("mean_omega_" + step_tag(e.step_index)));
    dump_field(w0p, {g.n(), g.n(), g.length(), e.t, "member0_omega", "euler2d"},
               fields / ("member0_omega_" + step_tag(e.step_index)));
    return rec;
  };
  run_hooked(model, std::move(members), params, diag, sink, hook);
}

}  // namespace

std::vector<DiagnosticsRecord> run_experiment(const RunConfig& config,
                                              unsigned threads) {
  const RunParams params = make_params(config, threads);
  fs::create_directories(config.output_dir);
  NdjsonWriter writer(fs::path(config.output_dir) / "diagnostics.ndjson");

  std::vector<DiagnosticsRecord> records;
  auto sink = [&](const DiagnosticsRecord& rec) {
    records.push_back(rec);
    writer.write(rec);
  };

  try {
    if (config.model == "rigidbody")
      run_rigidbody(config, params, sink);
    else if (config.model == "burgers")
      run_burgers(config, params, sink);
    else if (config.model == "peakons")
      run_peakons(config, params, sink);
    else if (config.model == "euler2d")
      run_euler2d(config, params, sink);
    else
      throw ConfigError("unknown model '" + config.model + "'");
  } catch (const NumericalFailure& e) {
    DiagnosticsRecord failure;
    failure.t = e.t;
    failure.set("failed", 1.0);
    writer.write(failure);
    write_plotdata(records, fs::path(config.output_dir) / "plotdata");
    throw;
  }
  write_plotdata(records, fs::path(config.output_dir) / "plotdata");
  return records;
}

}  // namespace lasalt::io
