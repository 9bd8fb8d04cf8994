#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <variant>
#include <vector>

#include "lasalt/noise.hpp"
#include "lasalt/spectral1d.hpp"

// Singular-momentum reduction of the LA SALT Camassa-Holm equation: closed
// SDEs for N peakon positions q_a and momenta p_a, with the transport
// velocity given by the ensemble expectation of the peakon velocity field
// u(x) = sum_a p_a K(x - q_a).

namespace lasalt::peakons {

enum class KernelKind { Line, Periodic };

/// K(x) = (1/2) exp(-|x|/alpha).
double kernel(double x, double alpha);
/// K'(x) with the principal-value convention K'(0) = 0.
double kernel_deriv(double x, double alpha);
/// Periodic Green's function of 1 - alpha^2 d^2/dx^2 on [0,L):
/// cosh((d - L/2)/alpha) / (2 alpha sinh(L/(2 alpha))), d = x mod L.
double kernel_periodic(double x, double alpha, double L);
double kernel_periodic_deriv(double x, double alpha, double L);

struct PeakonState {
  // layout: q_0..q_{N-1}, p_0..p_{N-1}
  std::vector<double> qp;

  std::size_t count() const { return qp.size() / 2; }
  double q(std::size_t a) const { return qp[a]; }
  double p(std::size_t a) const { return qp[count() + a]; }
  double& q(std::size_t a) { return qp[a]; }
  double& p(std::size_t a) { return qp[count() + a]; }
  std::span<double> flat() { return qp; }
  std::span<const double> flat() const { return qp; }
};

/// u(x) = sum_a p_a K(x - q_a) for a single realization.
double velocity(double x, const PeakonState& s, double alpha, KernelKind kind,
                double length);
/// u'(x) with the K'(0) = 0 convention at coincident points.
double velocity_deriv(double x, const PeakonState& s, double alpha,
                      KernelKind kind, double length);

/// Evaluates the ensemble (or deterministically solved) mean velocity field
/// and its slope at arbitrary points. Ensemble snapshots use sorted
/// exponential prefix sums, O(log P) per query and algebraically identical
/// to the direct double sum.
class MeanVelocityField {
 public:
  static MeanVelocityField from_ensemble(std::span<const PeakonState> members,
                                         double alpha, KernelKind kind,
                                         double length);
  static MeanVelocityField from_grid(std::shared_ptr<const Grid1D> grid,
                                     std::vector<double> momentum,
                                     double alpha);

  double u(double x) const;
  double ux(double x) const;
  bool is_grid() const;
  const std::vector<double>& grid_momentum() const;
  const Grid1D& grid() const;
  double alpha() const;

  MeanVelocityField() = default;

 private:
  struct Snapshot {
    KernelKind kind = KernelKind::Line;
    double alpha = 1.0;
    double length = 0.0;
    std::vector<double> q;  // sorted source positions (folded if periodic)
    std::vector<double> w;  // weights p/M in the same order
    // Line kernel: scaled prefix/suffix sums
    //   fwd[i] = sum_{j<=i} w_j exp((q_j - q_i)/alpha)
    //   bwd[i] = sum_{j>=i} w_j exp((q_i - q_j)/alpha)
    std::vector<double> fwd, bwd;
    // Periodic kernel: raw prefix/suffix sums of w exp(-q/alpha), w exp(q/alpha)
    std::vector<double> pre_neg, pre_pos, suf_neg, suf_pos;
  };
  struct GridField {
    std::shared_ptr<const Grid1D> grid;
    double alpha = 1.0;
    std::vector<double> momentum;  // mean momentum density on the grid
    std::vector<double> vel;       // K * momentum
    std::vector<double> vel_x;
  };
  std::variant<std::monostate, Snapshot, GridField> impl_;
};

class PeakonModel {
 public:
  using State = PeakonState;
  using Mean = MeanVelocityField;

  PeakonModel(std::size_t peakon_count, double alpha, KernelKind kind,
              noise::NoiseBasis basis, double length = 6.283185307179586,
              std::size_t mean_grid = 512);

  std::size_t correlate_count() const { return basis_.size(); }
  double alpha() const { return alpha_; }
  KernelKind kernel_kind() const { return kind_; }
  double length() const { return length_; }
  const noise::NoiseBasis& basis() const { return basis_; }

  /// dq_a = E[u](q_a), dp_a = -p_a E[u_x](q_a).
  State drift(const State& s, const Mean& mu) const;
  /// dq_a = xi(q_a), dp_a = -p_a xi'(q_a).
  State diffusion(const State& s, std::size_t k) const;
  /// Iterated Stratonovich operator:
  ///   q_a: (1/2) sum_k xi xi'(q_a)
  ///   p_a: (1/2) sum_k p_a [ (xi'(q_a))^2 - xi(q_a) xi''(q_a) ]
  State ito_correction(const State& s) const;

  Mean reduce(std::span<const State> members) const;
  /// Band-limited projection of the initial mean momentum onto the grid;
  /// decoupled mode needs the periodic kernel.
  Mean mean_initial(std::span<const State> members) const;
  /// Heun step of the mean momentum transport-diffusion equation
  /// d/dt m = -(v m_x + 2 m v_x) + (1/2) sum_k L_xi(L_xi m), v = K * m.
  Mean mean_step(const Mean& mu, double dt) const;
  void project_mean(Mean&) const {}
  /// Aborts on peakon crossing (line kernel; ordering is preserved by the
  /// continuous dynamics).
  void postprocess(State& s) const;

 private:
  std::vector<double> grid_rhs(const std::vector<double>& m) const;
  Mean make_grid_mean(std::vector<double> momentum) const;

  std::size_t count_;
  double alpha_;
  KernelKind kind_;
  double length_;
  noise::NoiseBasis basis_;
  std::shared_ptr<const Grid1D> mean_grid_;
  std::vector<std::vector<double>> xi_grid_;    // sampled on mean grid
  std::vector<std::vector<double>> xi_x_grid_;
};

}  // namespace lasalt::peakons
