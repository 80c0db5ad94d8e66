#pragma once

// TV-regularized empirical risk minimization over atomic measures on Xi:
//   min_mu (1/N) sum_i L(y_i, f_mu(x_i)) + lambda ||mu||_TV
// by atom insertion, weight correction and local refinement.

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ridgetv/ridge.hpp"
#include "ridgetv/xi_geometry.hpp"

namespace ridgetv {

struct TrainingSet {
  Eigen::MatrixXd X;  // N x d
  Eigen::VectorXd y;  // N

  /// Throws ValidationError on N = 0, size mismatch or non-finite entries.
  TrainingSet(Eigen::MatrixXd X, Eigen::VectorXd y);
  int d() const { return static_cast<int>(X.cols()); }
  int size() const { return static_cast<int>(X.rows()); }
  double max_norm() const;
};

enum class Loss { Squared, Absolute };

const char* to_string(Loss l);
Loss loss_from_string(const std::string& s);

double loss_value(Loss l, double y, double f);
/// dL/df; for the absolute loss sign(f - y) with 0 at ties.
double loss_derivative(Loss l, double y, double f);

struct SolverConfig {
  double lambda = 1e-3;
  int max_outer_iters = 100;
  int direction_grid_size = 128;
  int t_grid_size = 257;
  /// Half-width of the t search range; unset means max |x_i| + 1.
  std::optional<double> t_range;
  int refine_steps = 50;
  double weight_tol = 1e-12;     // relative objective change ending the weight solve
  int max_inner_iters = 20000;
  double dual_gap_tol = 1e-3;
  /// Unset means 1e-8 max |y_i|.
  std::optional<double> prune_tol;
  bool joint_refine = true;
  int joint_refine_passes = 30;
  /// When nonempty, atoms may only sit at these points and no refinement runs.
  std::vector<XiPoint> candidates;
};

/// A certificate grid: direction_grid_size directions times t_grid_size offsets.
std::vector<XiPoint> certificate_grid(const TrainingSet& data, const SolverConfig& cfg);

struct SolveReport {
  AtomicMeasure measure{1};
  RidgeNetwork network{2, 1};
  std::vector<double> objective_trace;
  int K = 0;
  int N = 0;
  double tv = 0.0;
  double path_norm_cylinder = 0.0;
  double path_norm_projective = 0.0;
  double certificate_sup = 0.0;  // on the search grid at exit
  double lambda = 0.0;
  bool converged = false;
  bool representer_ok = false;
  int outer_iterations = 0;
  int weight_solves_not_converged = 0;
  std::string exit_reason;
};

double objective(const AtomicMeasure& mu, const TrainingSet& data, Loss loss, int m, const BetaSpec& beta,
                 double lambda);

/// (1/N) sum_i L'(y_i, f_mu(x_i)) beta(p) sigma_m(n . x_i - t).
double certificate(const AtomicMeasure& mu, const TrainingSet& data, Loss loss, int m, const BetaSpec& beta,
                   const XiPoint& p);

struct Insertion {
  bool insert = false;  // false: the certificate vanishes on the grid
  XiPoint point{UnitVector::from_angle(0.0), 0.0};
  double sign = 0.0;    // -sgn c(point)
  double value = 0.0;   // |c(point)| after refinement
  double grid_sup = 0.0;
};

/// Grid argmax of |c| (lowest index wins ties) followed by projected ascent.
Insertion insert_atom(const AtomicMeasure& mu, const TrainingSet& data, Loss loss, int m, const BetaSpec& beta,
                      const SolverConfig& cfg);

struct WeightSolve {
  std::vector<double> weights;
  double objective = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// min_w (1/N) sum_i L(y_i, sum_k w_k beta(p_k) sigma_m(n_k . x_i - t_k)) + lambda sum |w_k|
/// by FISTA (squared) or a proximal subgradient method (absolute), started
/// from `start` (zeros if empty); never returns a worse point than the start.
WeightSolve correct_weights(const std::vector<XiPoint>& points, const TrainingSet& data, Loss loss, int m,
                            const BetaSpec& beta, double lambda, const SolverConfig& cfg,
                            std::vector<double> start = {});

SolveReport solve(const TrainingSet& data, Loss loss, int m, const BetaSpec& beta, const SolverConfig& cfg);

struct Decomposition {
  AtomicMeasure tau{1};
  AtomicMeasure nu{1};
  RidgeNetwork q_part{2, 1};
  PolynomialFit p_part;
};

/// tau/nu split, the network of tau and the polynomial fitted to the network
/// of nu. PolynomialCheckError if that network is not a polynomial.
Decomposition decompose(const AtomicMeasure& mu, int m, const BetaSpec& beta);
Decomposition decompose(const RidgeNetwork& net);

}  // namespace ridgetv
