#pragma once

#include <cmath>
#include <concepts>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "lasalt/diagnostics.hpp"
#include "lasalt/errors.hpp"
#include "lasalt/noise.hpp"
#include "lasalt/pairwise.hpp"
#include "lasalt/parallel.hpp"

// Mean-field ensemble engine. A model supplies pure per-member operators
//   drift(s, mean)      Stratonovich drift with the mean in the transport
//   diffusion(s, k)     coefficient of the k-th Wiener increment
//   ito_correction(s)   (1/2) sum_k of the iterated noise operator
// and a mean policy:
//   reduce(members)     empirical mean representation (coupled mode)
//   mean_initial / mean_step   deterministic mean solve (decoupled mode)
//   project_mean        constraint enforcement on the mean only
//   postprocess         per-member per-step enforcement (may throw)
// Member updates are pure functions of (state, frozen mean, increments), so
// any worker partition produces identical results.

namespace lasalt {

template <class S>
concept FlatState = requires(S& s, const S& cs) {
  { s.flat() } -> std::convertible_to<std::span<double>>;
  { cs.flat() } -> std::convertible_to<std::span<const double>>;
};

template <class M>
concept MeanFieldModel =
    FlatState<typename M::State> &&
    requires(const M& m, const typename M::State& s,
             const typename M::Mean& mu, typename M::State& sm,
             typename M::Mean& mum,
             std::span<const typename M::State> members, std::size_t k,
             double dt) {
      { m.correlate_count() } -> std::convertible_to<std::size_t>;
      { m.drift(s, mu) } -> std::same_as<typename M::State>;
      { m.diffusion(s, k) } -> std::same_as<typename M::State>;
      { m.ito_correction(s) } -> std::same_as<typename M::State>;
      { m.reduce(members) } -> std::same_as<typename M::Mean>;
      { m.mean_initial(members) } -> std::same_as<typename M::Mean>;
      { m.mean_step(mu, dt) } -> std::same_as<typename M::Mean>;
      m.project_mean(mum);
      m.postprocess(sm);
    };

template <FlatState S>
void axpy(S& y, double a, const S& x) {
  auto yf = y.flat();
  auto xf = x.flat();
  for (std::size_t i = 0; i < yf.size(); ++i) yf[i] += a * xf[i];
}

template <FlatState S>
bool all_finite(const S& s) {
  for (double v : s.flat())
    if (!std::isfinite(v)) return false;
  return true;
}

/// Componentwise ensemble average by a fixed-order pairwise tree; the result
/// does not depend on worker count or summation schedule.
template <FlatState S>
S empirical_mean_state(std::span<const S> members) {
  S out = members[0];
  pairwise_vector_mean(
      members.size(), [&](std::size_t i) { return members[i].flat(); },
      out.flat());
  return out;
}

/// Stratonovich-Heun predictor-corrector with the mean frozen across both
/// stages. Exact for additive noise.
template <MeanFieldModel M>
typename M::State step_heun_stratonovich(const M& model,
                                         const typename M::State& s,
                                         const typename M::Mean& mu,
                                         std::span<const double> dW,
                                         double dt) {
  using State = typename M::State;
  const std::size_t K = model.correlate_count();
  State d0 = model.drift(s, mu);
  std::vector<State> g0;
  g0.reserve(K);
  for (std::size_t k = 0; k < K; ++k) g0.push_back(model.diffusion(s, k));

  State pred = s;
  axpy(pred, dt, d0);
  for (std::size_t k = 0; k < K; ++k) axpy(pred, dW[k], g0[k]);

  State d1 = model.drift(pred, mu);
  State out = s;
  axpy(out, 0.5 * dt, d0);
  axpy(out, 0.5 * dt, d1);
  for (std::size_t k = 0; k < K; ++k) {
    State g1 = model.diffusion(pred, k);
    axpy(out, 0.5 * dW[k], g0[k]);
    axpy(out, 0.5 * dW[k], g1);
  }
  return out;
}

/// Euler-Maruyama on the Ito form; the correction is analytic.
template <MeanFieldModel M>
typename M::State step_em_ito(const M& model, const typename M::State& s,
                              const typename M::Mean& mu,
                              std::span<const double> dW, double dt) {
  using State = typename M::State;
  State out = s;
  State d = model.drift(s, mu);
  axpy(out, dt, d);
  State corr = model.ito_correction(s);
  axpy(out, dt, corr);
  for (std::size_t k = 0; k < model.correlate_count(); ++k) {
    State g = model.diffusion(s, k);
    axpy(out, dW[k], g);
  }
  return out;
}

template <class M>
concept HasCustomEmStep =
    requires(const M& m, const typename M::State& s,
             const typename M::Mean& mu, std::span<const double> dW,
             double dt) {
      { m.step_member_em(s, mu, dW, dt) } -> std::same_as<typename M::State>;
    };

template <class M>
concept HasCustomHeunStep =
    requires(const M& m, const typename M::State& s,
             const typename M::Mean& mu, std::span<const double> dW,
             double dt) {
      { m.step_member_heun(s, mu, dW, dt) } -> std::same_as<typename M::State>;
    };

template <class M>
concept HasPreStep = requires(const M& m, const typename M::Mean& mu,
                              double dt) { m.pre_step(mu, dt); };

enum class Stepper { Heun, EulerMaruyama };
enum class Mode { Coupled, Decoupled };

struct RunParams {
  double dt = 1e-3;
  std::size_t steps = 0;
  Stepper stepper = Stepper::Heun;
  Mode mode = Mode::Coupled;
  std::uint64_t seed = 0;
  std::size_t output_every = 10;
  unsigned threads = 1;
};

template <class M>
struct Ensemble {
  std::vector<typename M::State> members;
  double t = 0.0;
  std::size_t step_index = 0;
  typename M::Mean frozen_mean;
};

/// Advance an ensemble; diag(model, ensemble) builds a DiagnosticsRecord,
/// sink(record) consumes it, and hook(model, ensemble, batch) runs after the
/// member updates of every step while ensemble.frozen_mean still holds the
/// mean those updates saw. Bit-reproducible for fixed (seed, params).
template <MeanFieldModel M, class DiagFn, class Sink, class StepHook>
Ensemble<M> run_hooked(const M& model, std::vector<typename M::State> initial,
                       const RunParams& params, DiagFn&& diag, Sink&& sink,
                       StepHook&& hook) {
  Ensemble<M> ens;
  ens.members = std::move(initial);
  const std::size_t count = ens.members.size();
  if (count < 1) throw ConfigError("ensemble: need at least one member");

  ens.frozen_mean = (params.mode == Mode::Coupled)
                        ? model.reduce(std::span<const typename M::State>(
                              ens.members))
                        : model.mean_initial(std::span<const typename M::State>(
                              ens.members));
  model.project_mean(ens.frozen_mean);
  sink(diag(model, ens));

  const std::size_t K = model.correlate_count();
  std::vector<char> bad(count);
  for (std::size_t i = 0; i < params.steps; ++i) {
    if constexpr (HasPreStep<M>) model.pre_step(ens.frozen_mean, params.dt);
    const noise::WienerBatch batch =
        noise::sample_wiener_batch(params.seed, ens.step_index, count, K,
                                   params.dt);
    std::fill(bad.begin(), bad.end(), 0);
    parallel_for(count, params.threads, [&](std::size_t m) {
      std::span<const double> dW(batch.increments.data() + m * K, K);
      try {
        typename M::State next =
            (params.stepper == Stepper::Heun)
                ? [&] {
                    if constexpr (HasCustomHeunStep<M>)
                      return model.step_member_heun(ens.members[m],
                                                    ens.frozen_mean, dW,
                                                    params.dt);
                    else
                      return step_heun_stratonovich(model, ens.members[m],
                                                    ens.frozen_mean, dW,
                                                    params.dt);
                  }()
                : [&] {
                    if constexpr (HasCustomEmStep<M>)
                      return model.step_member_em(ens.members[m],
                                                  ens.frozen_mean, dW,
                                                  params.dt);
                    else
                      return step_em_ito(model, ens.members[m],
                                         ens.frozen_mean, dW, params.dt);
                  }();
        model.postprocess(next);
        if (!all_finite(next)) bad[m] = 1;
        ens.members[m] = std::move(next);
      } catch (const std::exception&) {
        bad[m] = 1;
      }
    });
    ens.step_index += 1;
    ens.t = params.dt * static_cast<double>(ens.step_index);
    for (std::size_t m = 0; m < count; ++m) {
      if (bad[m])
        throw NumericalFailure("numerical failure in member " +
                                   std::to_string(m) + " at t=" +
                                   std::to_string(ens.t),
                               ens.t);
    }
    hook(model, ens, batch);
    if (params.mode == Mode::Coupled) {
      ens.frozen_mean =
          model.reduce(std::span<const typename M::State>(ens.members));
    } else {
      ens.frozen_mean = model.mean_step(ens.frozen_mean, params.dt);
    }
    model.project_mean(ens.frozen_mean);
    if ((ens.step_index % params.output_every == 0) ||
        ens.step_index == params.steps) {
      sink(diag(model, ens));
    }
  }
  return ens;
}

template <MeanFieldModel M, class DiagFn, class Sink>
Ensemble<M> run(const M& model, std::vector<typename M::State> initial,
                const RunParams& params, DiagFn&& diag, Sink&& sink) {
  return run_hooked(model, std::move(initial), params,
                    std::forward<DiagFn>(diag), std::forward<Sink>(sink),
                    [](const M&, const Ensemble<M>&,
                       const noise::WienerBatch&) {});
}

/// One deterministic Heun stage on mean_rhs; callers apply project_mean.
template <class M, class S>
S heun_mean_rhs_step(const M& model, const S& mu, double dt) {
  S k1 = model.mean_rhs(mu);
  S pred = mu;
  axpy(pred, dt, k1);
  S k2 = model.mean_rhs(pred);
  S out = mu;
  axpy(out, 0.5 * dt, k1);
  axpy(out, 0.5 * dt, k2);
  return out;
}

}  // namespace lasalt
