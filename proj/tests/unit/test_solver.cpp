#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "ridgetv/parallel.hpp"
#include "ridgetv/solver.hpp"

using namespace ridgetv;

namespace {

XiPoint pt(double angle, double t) { return {UnitVector::from_angle(angle), t}; }

TrainingSet zeros(int N) {
  Eigen::MatrixXd X = Eigen::MatrixXd::Random(N, 2);
  return TrainingSet(X, Eigen::VectorXd::Zero(N));
}

double rmse(const RidgeNetwork& net, const TrainingSet& data) {
  return std::sqrt((net.eval_batch(data.X) - data.y).squaredNorm() / data.size());
}

}  // namespace

TEST(TrainingSet, Validation) {
  EXPECT_THROW(TrainingSet(Eigen::MatrixXd(0, 2), Eigen::VectorXd(0)), ValidationError);
  EXPECT_THROW(TrainingSet(Eigen::MatrixXd::Zero(3, 2), Eigen::VectorXd::Zero(2)), ValidationError);
  Eigen::MatrixXd X = Eigen::MatrixXd::Zero(2, 2);
  X(0, 0) = std::nan("");
  EXPECT_THROW(TrainingSet(X, Eigen::VectorXd::Zero(2)), ValidationError);
}

TEST(Loss, Values) {
  EXPECT_EQ(loss_value(Loss::Squared, 1.0, 3.0), 4.0);
  EXPECT_EQ(loss_value(Loss::Absolute, 1.0, -1.0), 2.0);
  EXPECT_EQ(loss_derivative(Loss::Absolute, 1.0, 1.0), 0.0);
  EXPECT_EQ(loss_derivative(Loss::Squared, 1.0, 2.0), 2.0);
  EXPECT_EQ(loss_from_string("absolute"), Loss::Absolute);
  EXPECT_THROW(loss_from_string("huber"), ValidationError);
}

TEST(Objective, Examples) {
  const auto beta = BetaSpec::default_rational(2);
  Eigen::MatrixXd X(3, 2);
  X << 0.1, 0.2, -0.4, 0.3, 0.9, -0.1;
  Eigen::VectorXd y(3);
  y << 1.0, -2.0, 0.5;
  const TrainingSet data(X, y);
  EXPECT_NEAR(objective(AtomicMeasure(2), data, Loss::Squared, 2, beta, 0.1), (1.0 + 4.0 + 0.25) / 3.0, 1e-15);
  EXPECT_EQ(objective(AtomicMeasure(2), zeros(4), Loss::Squared, 2, beta, 0.1), 0.0);

  AtomicMeasure mu(2);
  mu.add(1.5, pt(0.3, -0.2));
  const RidgeNetwork net = network_from_measure(mu, 2, beta);
  const TrainingSet fit(X, net.eval_batch(X));
  EXPECT_NEAR(objective(mu, fit, Loss::Squared, 2, beta, 0.01), 0.01 * 1.5, 1e-14);
}

TEST(Certificate, ZeroResidualAndSinglePoint) {
  const auto beta = BetaSpec::default_rational(2);
  AtomicMeasure mu(2);
  mu.add(1.0, pt(0.5, 0.1));
  Eigen::MatrixXd X(4, 2);
  X << 0.1, 0.2, -0.4, 0.3, 0.9, -0.1, 0.5, 0.5;
  const TrainingSet fit(X, network_from_measure(mu, 2, beta).eval_batch(X));
  EXPECT_NEAR(certificate(mu, fit, Loss::Squared, 2, beta, pt(1.0, -0.3)), 0.0, 1e-15);

  Eigen::MatrixXd X1(1, 2);
  X1 << 0.8, 0.1;
  Eigen::VectorXd y1(1);
  y1 << 2.0;
  const TrainingSet one(X1, y1);
  for (const auto& p : {pt(0.2, 0.1), pt(2.5, -0.4), pt(0.0, 2.0)}) {
    const double x[2] = {0.8, 0.1};
    const double want = -2.0 * 2.0 * beta(p) * sigma_m(2, p.n.dot(x) - p.t);
    EXPECT_NEAR(certificate(AtomicMeasure(2), one, Loss::Squared, 2, beta, p), want, 1e-15);
  }
}

TEST(InsertAtom, FindsPlantedNeuron) {
  const auto beta = BetaSpec::default_rational(2);
  const RidgeNetwork teacher(2, 2, {{1.0, pt(0.7, 0.15)}}, beta);
  const auto data = oracle::sample_teacher(teacher, 40, 3);
  SolverConfig cfg;
  const auto ins = insert_atom(AtomicMeasure(2), data, Loss::Squared, 2, beta, cfg);
  ASSERT_TRUE(ins.insert);
  // a positive neuron lowers the loss: c < 0, so the inserted sign is +
  EXPECT_GT(ins.sign, 0.0);
  EXPECT_GE(ins.value, ins.grid_sup);
  // the finer search agrees with the coarse one within a coarse grid step
  SolverConfig fine = cfg;
  fine.direction_grid_size = 1280;
  fine.t_grid_size = 2561;
  fine.refine_steps = 0;
  const auto ref = insert_atom(AtomicMeasure(2), data, Loss::Squared, 2, beta, fine);
  EXPECT_LE(xi_distance(ins.point, ref.point), 2.0 * 3.14159 / 128);
}

TEST(InsertAtom, ZeroTargetsAndDeterminism) {
  const auto beta = BetaSpec::default_rational(2);
  EXPECT_FALSE(insert_atom(AtomicMeasure(2), zeros(5), Loss::Squared, 2, beta, {}).insert);
  const auto data = oracle::sample_teacher(oracle::planted_teacher(), 25, 4);
  const auto a = insert_atom(AtomicMeasure(2), data, Loss::Squared, 2, beta, {});
  set_max_threads(3);
  const auto b = insert_atom(AtomicMeasure(2), data, Loss::Squared, 2, beta, {});
  set_max_threads(0);
  EXPECT_EQ(a.point, b.point);
  EXPECT_EQ(a.value, b.value);
}

TEST(CorrectWeights, SoftThresholdClosedForm) {
  const auto beta = BetaSpec::default_rational(2);
  const XiPoint p = pt(0.3, -0.2);
  Eigen::MatrixXd X(1, 2);
  X << 0.6, 0.4;
  const double x[2] = {0.6, 0.4};
  const double phi = beta(p) * rho_m(2, x, p);
  for (double y : {1.3, -0.7, 0.01}) {
    for (double lam : {1e-3, 0.1, 0.5}) {
      Eigen::VectorXd yy(1);
      yy << y;
      const auto ws = correct_weights({p}, TrainingSet(X, yy), Loss::Squared, 2, beta, lam, {});
      EXPECT_NEAR(ws.weights[0], oracle::soft_threshold_single(phi, y, lam), 1e-8) << y << " " << lam;
    }
  }
}

TEST(CorrectWeights, HugeLambdaGivesZero) {
  const auto data = oracle::sample_teacher(oracle::planted_teacher(), 20, 5);
  const auto ws = correct_weights({pt(0.1, 0.0), pt(2.0, 0.3)}, data, Loss::Squared, 2, BetaSpec::default_rational(2),
                                  1e6, {});
  for (double w : ws.weights) EXPECT_EQ(w, 0.0);
}

TEST(CorrectWeights, NeverWorseThanStart) {
  const auto beta = BetaSpec::default_rational(2);
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int rep = 0; rep < 10; ++rep) {
    const auto data = oracle::sample_teacher(oracle::planted_teacher(), 15, 100 + rep);
    std::vector<XiPoint> pts;
    std::vector<double> start;
    AtomicMeasure mu(2);
    for (int k = 0; k < 4; ++k) {
      pts.push_back(pt(3.0 * u(rng), 0.5 * u(rng)));
      start.push_back(u(rng));
      mu.add(start.back(), pts.back());
    }
    for (Loss loss : {Loss::Squared, Loss::Absolute}) {
      const double before = objective(mu, data, loss, 2, beta, 1e-2);
      const auto ws = correct_weights(pts, data, loss, 2, beta, 1e-2, {}, start);
      EXPECT_LE(ws.objective, before);
    }
  }
}

TEST(Solve, ZeroTargets) {
  const auto rep = solve(zeros(10), Loss::Squared, 2, BetaSpec::default_rational(2), {});
  EXPECT_TRUE(rep.measure.empty());
  EXPECT_EQ(rep.objective_trace.back(), 0.0);
  EXPECT_EQ(rep.outer_iterations, 0);
  EXPECT_TRUE(rep.converged);
}

TEST(Solve, RecoversSingleNeuron) {
  const auto beta = BetaSpec::default_rational(2);
  const XiPoint planted = pt(0.7, 0.15);
  const RidgeNetwork teacher(2, 2, {{1.0, planted}}, beta);
  const auto train = oracle::sample_teacher(teacher, 20, 11);
  const auto test = oracle::sample_teacher(teacher, 200, 12);
  SolverConfig cfg;
  cfg.lambda = 1e-3;
  const auto rep = solve(train, Loss::Squared, 2, beta, cfg);
  EXPECT_TRUE(rep.converged);
  EXPECT_LE(rmse(rep.network, test), 1e-2);
  // the mass sits at the planted neuron
  double near = 0.0;
  for (const auto& a : rep.measure.atoms())
    if (xi_distance(a.point, planted) < 2e-2) near += std::abs(a.weight);
  EXPECT_GE(near, 0.95 * rep.tv);
}

TEST(Solve, RepresenterBoundOnThreeNeuronTeacher) {
  const auto teacher = oracle::planted_teacher();
  const auto train = oracle::sample_teacher(teacher, 30, 21);
  const auto rep = solve(train, Loss::Squared, 2, teacher.beta(), {});
  EXPECT_TRUE(rep.converged);
  EXPECT_TRUE(rep.representer_ok);
  EXPECT_LE(rep.K, 30);
  EXPECT_LE(rep.certificate_sup, 1e-3 * (1.0 + 1e-3));
  for (std::size_t i = 1; i < rep.objective_trace.size(); ++i)
    EXPECT_LE(rep.objective_trace[i], rep.objective_trace[i - 1]);
}

TEST(Solve, AbsoluteLossDescends) {
  const auto teacher = oracle::planted_teacher();
  const auto train = oracle::sample_teacher(teacher, 20, 31);
  SolverConfig cfg;
  cfg.lambda = 1e-2;
  cfg.max_outer_iters = 8;
  cfg.max_inner_iters = 3000;
  const auto rep = solve(train, Loss::Absolute, 2, teacher.beta(), cfg);
  ASSERT_GE(rep.objective_trace.size(), 2u);
  for (std::size_t i = 1; i < rep.objective_trace.size(); ++i)
    EXPECT_LE(rep.objective_trace[i], rep.objective_trace[i - 1]);
  EXPECT_LT(rep.objective_trace.back(), rep.objective_trace.front());
}

TEST(Solve, Deterministic) {
  const auto teacher = oracle::planted_teacher();
  const auto train = oracle::sample_teacher(teacher, 15, 41);
  SolverConfig cfg;
  cfg.max_outer_iters = 5;
  const auto a = solve(train, Loss::Squared, 2, teacher.beta(), cfg);
  const auto b = solve(train, Loss::Squared, 2, teacher.beta(), cfg);
  EXPECT_EQ(a.objective_trace, b.objective_trace);
  ASSERT_EQ(a.measure.size(), b.measure.size());
  for (std::size_t k = 0; k < a.measure.size(); ++k) EXPECT_EQ(a.measure.atoms()[k].point, b.measure.atoms()[k].point);
}

TEST(Solve, ScalingEquivariance) {
  // grid-restricted problem: scaling y and lambda by s scales the minimizer by s
  const auto beta = BetaSpec::default_rational(2);
  std::vector<XiPoint> grid;
  for (int j = 0; j < 8; ++j)
    for (int i = 0; i < 9; ++i) grid.push_back(pt(3.14159265 * (j + 0.5) / 8.0, -1.0 + i * 0.25));
  const auto data = oracle::sample_teacher(oracle::planted_teacher(), 12, 51);
  SolverConfig cfg;
  cfg.candidates = grid;
  cfg.lambda = 1e-3;
  cfg.dual_gap_tol = 1e-9;
  const auto base = solve(data, Loss::Squared, 2, beta, cfg);
  const double s = 3.5;
  SolverConfig cs = cfg;
  cs.lambda = s * cfg.lambda;
  const auto scaled = solve(TrainingSet(data.X, s * data.y), Loss::Squared, 2, beta, cs);
  ASSERT_TRUE(base.converged);
  ASSERT_TRUE(scaled.converged);
  EXPECT_LE(measure_distance(scaled.measure, base.measure.scaled(s)), 1e-6 * s * base.tv);
}

TEST(Solve, Validation) {
  const auto beta = BetaSpec::default_rational(2);
  SolverConfig cfg;
  cfg.lambda = 0.0;
  EXPECT_THROW(solve(zeros(3), Loss::Squared, 2, beta, cfg), ValidationError);
  EXPECT_THROW(solve(zeros(3), Loss::Squared, 3, beta, {}), ValidationError);
  SolverConfig bad;
  bad.candidates = {{UnitVector({0.0, 0.0, 1.0}), 0.0}};
  EXPECT_THROW(solve(zeros(3), Loss::Squared, 2, beta, bad), ValidationError);
}

TEST(Decompose, EvenMeasureHasNoPolynomialPart) {
  const auto beta = BetaSpec::default_rational(2);
  AtomicMeasure mu(2);
  const auto p = pt(0.8, 0.4);
  mu.add(1.2, p);
  mu.add(1.2, involute(p));
  const auto dc = decompose(mu, 2, beta);
  EXPECT_TRUE(dc.nu.empty());
  EXPECT_TRUE(dc.p_part.is_poly);
  for (double c : dc.p_part.coefficients) EXPECT_NEAR(c, 0.0, 1e-12);
}

TEST(Decompose, SingleDiracM2) {
  const auto beta = BetaSpec::default_rational(2);
  AtomicMeasure mu(2);
  const XiPoint p{UnitVector({1.0, 0.0}), 0.0};
  mu.add(1.0, p);
  const auto dc = decompose(mu, 2, beta);
  EXPECT_EQ(dc.q_part.size(), 2u);
  EXPECT_EQ(dc.p_part.degree, 1);
  // (sigma(s) - sigma(-s)) / 2 = s / 2
  const double x[2] = {0.6, -0.3};
  EXPECT_NEAR(dc.p_part(x), 0.3, 1e-10);
  const RidgeNetwork full = network_from_measure(mu, 2, beta);
  EXPECT_NEAR(dc.q_part(x) + dc.p_part(x), full(x), 1e-10);
}

TEST(Decompose, TvBound) {
  std::mt19937_64 rng(61);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int rep = 0; rep < 50; ++rep) {
    AtomicMeasure mu(2);
    for (int k = 0; k < 4; ++k) mu.add(u(rng), pt(u(rng) * 1.6, u(rng)));
    mu.add(u(rng), involute(mu.atoms()[0].point));
    const auto dc = decompose(mu, 2, BetaSpec::default_rational(2));
    EXPECT_LE(tv_norm(dc.tau) + tv_norm(dc.nu), 2.0 * tv_norm(mu) + 1e-12);
  }
}
