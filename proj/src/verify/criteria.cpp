#include "ridgetv/verify.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "ridgetv/lizorkin.hpp"
#include "ridgetv/parallel.hpp"
#include "ridgetv/radon.hpp"
#include "ridgetv/ridge.hpp"
#include "ridgetv/solver.hpp"

namespace ridgetv::verify {

namespace {

using io::json;
constexpr double kPi = std::numbers::pi;

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

class SingleThread {
 public:
  SingleThread() : prev_(max_threads()) { set_max_threads(1); }
  ~SingleThread() { set_max_threads(prev_); }

 private:
  int prev_;
};

double rel_l2(const std::vector<double>& got, const std::vector<double>& want) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < got.size(); ++i) {
    num += (got[i] - want[i]) * (got[i] - want[i]);
    den += want[i] * want[i];
  }
  return std::sqrt(num / den);
}

double fbp_error(const TestFunctionRd& phi, const DirectionGrid& grid, double L, double h, double h_t,
                 double half, double step) {
  const int d = phi.dim();
  const auto S = radon([&](std::span<const double> x) { return phi(x); }, grid, default_tgrid(d, L, h_t), {L, h});
  std::vector<std::vector<double>> pts;
  std::vector<double> want;
  const int n = static_cast<int>(std::lround(2.0 * half / step));
  std::vector<int> idx(static_cast<std::size_t>(d), 0);
  while (true) {
    std::vector<double> x(static_cast<std::size_t>(d));
    for (int c = 0; c < d; ++c) x[c] = -half + idx[c] * step;
    want.push_back(phi(x));
    pts.push_back(std::move(x));
    int c = 0;
    while (c < d && ++idx[c] > n) idx[c++] = 0;
    if (c == d) break;
  }
  return rel_l2(fbp_invert(S, d, pts), want);
}

// --- radon suite ------------------------------------------------------------

void c1(Check& ck) {
  SingleThread one;
  Stopwatch sw;
  const auto grid = DirectionGrid::uniform_circle(256);
  const auto tg = default_tgrid(2, 8.0, 0.05);
  const auto S = radon([](std::span<const double> x) { return std::exp(-0.5 * (x[0] * x[0] + x[1] * x[1])); }, grid,
                       tg, {8.0, 0.05});
  double worst = 0.0;
  for (std::size_t j = 0; j < S.n_dir(); ++j) {
    for (int i = 0; i < S.n_t(); ++i) {
      const double t = tg[i];
      if (std::abs(t) > 4.0) continue;
      const double want = oracle::gaussian_line_integral(1.0, t);
      worst = std::max(worst, std::abs(S.at(j, i) - want) / want);
    }
  }
  const double secs = sw.seconds();
  ck.metrics = {{"max_rel_err", worst}, {"tol", 1e-6}, {"seconds_single_thread", secs}, {"limit_seconds", 60.0},
                {"n_dirs", 256}, {"parity_defect", parity_defect(S, Parity::Even)}};
  ck.passed = worst <= 1e-6 && secs <= 60.0;
}

void c2(Check& ck) {
  const auto phi2 = make_lizorkin_rd(2, 2, 1.0);
  const auto circle = DirectionGrid::uniform_circle(256);
  std::vector<double> errs;
  for (double h : {0.1, 0.05, 0.025}) errs.push_back(fbp_error(phi2, circle, 8.0, h, h, 4.0, 0.1));
  const bool monotone = errs[1] < errs[0] && errs[2] < errs[1];
  const auto phi3 = make_lizorkin_rd(3, 2, 1.0);
  const double e3 = fbp_error(phi3, DirectionGrid::fibonacci_sphere(512), 8.0, 0.5, 0.1, 3.0, 0.25);
  ck.metrics = {{"d2_h", {0.1, 0.05, 0.025}},
                {"d2_rel_l2", errs},
                {"d2_default_rel_l2", errs[1]},
                {"d2_tol", 2e-2},
                {"d2_monotone", monotone},
                {"d3_rel_l2", e3},
                {"d3_tol", 5e-2},
                {"d3_dirs", 512}};
  ck.passed = errs[1] <= 2e-2 && monotone && e3 <= 5e-2;
}

void c3(Check& ck) {
  // A and d on shifted fourth-derivative profiles; A g^(4) = g^(3) is the oracle.
  const auto grid = DirectionGrid::uniform_circle(8);
  const auto tg = TGrid::covering(12.0, 0.05);
  auto shift = [](const UnitVector& n) { return 0.3 * n[0] - 0.2 * n[1]; };
  const auto S = sample_sinogram([&](const UnitVector& n, double t) { return gaussian_derivative(4, 1.0, t - shift(n)); },
                                 grid, tg);
  const auto Ad = antider_A(dt_m(S, 1));
  const auto dA = dt_m(antider_A(S), 1);
  const auto A = antider_A(S);
  const double mx = S.max_abs();
  double e_ad = 0.0, e_da = 0.0, e_a = 0.0;
  for (std::size_t j = 0; j < S.n_dir(); ++j) {
    for (int i = 0; i < S.n_t(); ++i) {
      e_ad = std::max(e_ad, std::abs(Ad.at(j, i) - S.at(j, i)));
      e_da = std::max(e_da, std::abs(dA.at(j, i) - S.at(j, i)));
      e_a = std::max(e_a, std::abs(A.at(j, i) - gaussian_derivative(3, 1.0, tg[i] - shift(grid.dirs[j]))));
    }
  }
  e_ad /= mx;
  e_da /= mx;
  e_a /= mx;

  // H^2 = -id on a long window, H against a principal-value quadrature.
  const auto one = DirectionGrid::single(UnitVector::from_angle(0.0));
  const auto tl = TGrid::covering(150.0, 0.05);
  auto g4 = [](double t) { return gaussian_derivative(4, 1.0, t); };
  const auto P = sample_sinogram([&](const UnitVector&, double t) { return g4(t); }, one, tl);
  const auto H = hilbert_t(P);
  const auto HH = hilbert_t(H);
  double e_hh = 0.0;
  for (int i = 0; i < tl.n; ++i) e_hh = std::max(e_hh, std::abs(HH.at(0, i) + P.at(0, i)));
  e_hh /= P.max_abs();
  double e_pv = 0.0;
  for (double x : {-2.3, -0.7, 0.0, 0.45, 1.6, 3.1}) {
    const int i = static_cast<int>(std::lround(x / tl.h + 0.5 * (tl.n - 1)));
    e_pv = std::max(e_pv, std::abs(H.at(0, i) - oracle::pv_hilbert(g4, tl[i])));
  }
  e_pv /= P.max_abs();

  // Lambda^{d-1} keeps even sinograms even.
  const auto psi = make_lizorkin_xi(Parity::Even, 2, 0.7, 0.5, AngularFactor{{{1.0, {0, 0}}, {0.3, {2, 0}}, {0.2, {1, 1}}}});
  const auto E2 = sample_sinogram([&](const UnitVector& n, double t) { return psi(n, t); },
                                  DirectionGrid::uniform_circle(64), default_tgrid(2, 8.0, 0.05), Parity::Even);
  const auto L2 = lambda_filter(E2, 2);
  const double par2 = parity_defect(L2, Parity::Even) / L2.max_abs();
  const auto psi3 = make_lizorkin_xi(Parity::Even, 2, 0.7, 0.5, AngularFactor{{{1.0, {0, 0, 0}}, {0.4, {0, 1, 1}}}});
  const auto E3 = sample_sinogram([&](const UnitVector& n, double t) { return psi3(n, t); },
                                  DirectionGrid::fibonacci_sphere(128), default_tgrid(3, 6.0, 0.05), Parity::Even);
  const auto L3 = lambda_filter(E3, 3);
  const double par3 = parity_defect(L3, Parity::Even) / L3.max_abs();

  ck.metrics = {{"A_d_minus_id", e_ad},   {"d_A_minus_id", e_da},       {"A_vs_closed_form", e_a},
                {"tol_A", 1e-8},          {"H2_plus_id", e_hh},         {"H_vs_pv_quadrature", e_pv},
                {"tol_H", 1e-6},          {"lambda_parity_d2", par2},   {"lambda_parity_d3", par3},
                {"tol_parity", 1e-8}};
  ck.passed = e_ad <= 1e-8 && e_da <= 1e-8 && e_a <= 1e-8 && e_hh <= 1e-6 && e_pv <= 1e-6 && par2 <= 1e-8 &&
              par3 <= 1e-8;
}

void c4(Check& ck) {
  Stopwatch sw;
  const auto phi = make_lizorkin_rd(2, 2, 1.0);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  json pairs = json::array();
  double worst = 0.0;
  for (int m : {2, 3}) {
    const auto beta = BetaSpec::default_rational(m);
    for (int k = 0; k < 10; ++k) {
      const XiPoint p{UnitVector::from_angle(2.0 * kPi * u(rng)), -2.0 + 4.0 * u(rng)};
      const auto r = ridge_pairing_check(m, p, phi, beta);
      worst = std::max(worst, r.rel_err);
      pairs.push_back({{"m", m}, {"theta", p.n.angle()}, {"t", p.t}, {"direct", r.lhs}, {"radon", r.rhs},
                       {"rel_err", r.rel_err}});
    }
  }
  const double secs = sw.seconds();
  ck.metrics = {{"max_rel_err", worst}, {"tol", 1e-3}, {"seconds", secs}, {"limit_seconds", 300.0}, {"pairs", pairs}};
  ck.passed = worst <= 1e-3 && secs <= 300.0;
}

RidgeNetwork random_network(std::mt19937_64& rng, int K, const BetaSpec& beta) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Neuron> ns;
  for (int k = 0; k < K; ++k) {
    const double a = (u(rng) < 0.5 ? -1.0 : 1.0) * (0.5 + u(rng));
    ns.push_back({a, XiPoint{UnitVector::from_angle(2.0 * kPi * u(rng)), -1.0 + 2.0 * u(rng)}});
  }
  return RidgeNetwork(2, 2, ns, beta);
}

void c5(Check& ck) {
  const auto beta = BetaSpec::default_rational(2);
  std::mt19937_64 rng(11);
  double worst = 0.0;
  int count = 0;
  json nets = json::array();
  for (int K = 1; K <= 3; ++K) {
    const auto net = random_network(rng, K, beta);
    double w = 0.0;
    for (const auto& psi : make_lizorkin_xi_family(2, 2, 10, 100 + static_cast<std::uint64_t>(K - 1), 1.0, 0.5)) {
      const auto r = green_identity_check(net, psi);
      w = std::max(w, r.rel_err);
      ++count;
    }
    worst = std::max(worst, w);
    nets.push_back({{"K", K}, {"max_rel_err", w}});
  }
  // Pairs alpha at p, -alpha at -p: for m = 2 a linear function, tau = 0.
  double odd_ratio = 0.0;
  const std::pair<double, double> odd[] = {{0.4, 0.3}, {2.2, -0.6}};
  for (std::size_t q = 0; q < 2; ++q) {
    const XiPoint p{UnitVector::from_angle(odd[q].first), odd[q].second};
    const RidgeNetwork net(2, 2, {{1.0, p}, {-1.0, involute(p)}}, beta);
    for (const auto& psi : make_lizorkin_xi_family(2, 2, 3, 5 + q, 1.0, 0.5)) {
      const auto r = green_identity_check(net, psi);
      odd_ratio = std::max(odd_ratio, std::abs(r.lhs) / r.scale);
    }
  }
  ck.metrics = {{"pairings", count}, {"max_rel_err", worst}, {"tol", 1e-2}, {"networks", nets},
                {"odd_pair_max_lhs_over_scale", odd_ratio}, {"odd_tol", 1e-2}};
  ck.passed = worst <= 1e-2 && odd_ratio <= 1e-2;
}

// --- types suite ------------------------------------------------------------

UnitVector random_direction(std::mt19937_64& rng, int d) {
  std::normal_distribution<double> g;
  std::vector<double> v(static_cast<std::size_t>(d));
  for (auto& x : v) x = g(rng);
  return UnitVector::normalized(v);
}

// Sum |alpha| / beta after moving each neuron to the half-space whose first
// nonzero coordinate is positive and adding up coincident ones.
double canonical_path_norm(const RidgeNetwork& net) {
  struct Slot {
    std::vector<double> n;
    double t;
    double alpha;
    XiPoint p;
  };
  std::vector<Slot> slots;
  const int m = net.m();
  for (const auto& nr : net.neurons()) {
    std::vector<double> n(nr.point.n.coords().begin(), nr.point.n.coords().end());
    double t = nr.point.t;
    double a = nr.alpha;
    std::size_t first = 0;
    while (first < n.size() && n[first] == 0.0) ++first;
    XiPoint p = nr.point;
    if (first < n.size() && n[first] < 0.0) {
      for (auto& v : n) v = -v;
      t = -t;
      if (m % 2) a = -a;
      p = involute(p);
    }
    bool merged = false;
    for (auto& s : slots) {
      double dist = std::abs(s.t - t);
      for (std::size_t i = 0; i < n.size(); ++i) dist = std::max(dist, std::abs(s.n[i] - n[i]));
      if (dist <= 1e-10) {
        s.alpha += a;
        merged = true;
        break;
      }
    }
    if (!merged) slots.push_back({n, t, a, p});
  }
  double total = 0.0;
  for (const auto& s : slots) total += std::abs(s.alpha) / net.beta()(s.p);
  return total;
}

void c7(Check& ck) {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst_tv = 0.0, worst_oracle = 0.0, worst_remainder = 0.0;
  for (int rep = 0; rep < 300; ++rep) {
    const int d = 2 + rep % 2;
    const int m = 2 + rep % 3;
    const auto beta = BetaSpec::default_rational(m);
    std::vector<Neuron> ns;
    const int K = 1 + static_cast<int>(u(rng) * 6);
    for (int k = 0; k < K; ++k) {
      const XiPoint p{random_direction(rng, d), 2.0 * (u(rng) - 0.5)};
      const double a = (u(rng) - 0.5) * 4.0;
      if (a == 0.0) continue;
      ns.push_back({a, p});
      const double r = u(rng);
      if (r < 0.3) ns.push_back({(u(rng) - 0.5) * 4.0 + 5.0, involute(p)});
      else if (r < 0.4) ns.push_back({-a * (m % 2 ? -1.0 : 1.0), involute(p)});
      else if (r < 0.5) ns.push_back({0.5 * a, p});
    }
    const RidgeNetwork net(m, d, ns, beta);
    const auto pf = projective_form(net);
    const double pn = path_norm(net, PathNormMode::Projective);
    const double scale = std::max(1.0, pn);
    worst_tv = std::max(worst_tv, std::abs(pn - tv_norm(measure_from_network(pf.network))) / scale);
    worst_oracle = std::max(worst_oracle, std::abs(pn - canonical_path_norm(net)) / scale);
    for (int s = 0; s < 5; ++s) {
      std::vector<double> x(static_cast<std::size_t>(d));
      for (auto& v : x) v = 4.0 * (u(rng) - 0.5);
      const double want = oracle::reversed_sum_eval(net, x);
      worst_remainder = std::max(worst_remainder, std::abs(pf.network(x) + pf.remainder(x) - want) /
                                                      std::max(1.0, std::abs(want)));
    }
  }

  // A single neuron and an even pair, read back through the weak form: the
  // pairing with psi peaked at the neuron recovers |a| = path norm.
  const double norm_const = 2.0 * (2.0 * kPi);
  const auto beta = BetaSpec::default_rational(2);
  double worst_tau = 0.0;
  json rows = json::array();
  const XiPoint p{UnitVector::from_angle(0.9), 0.4};
  const XiPoint q{UnitVector::from_angle(-2.1), -0.7};
  const std::vector<RidgeNetwork> nets{
      RidgeNetwork(2, 2, {{0.8, p}}, beta),
      RidgeNetwork(2, 2, {{-1.3, q}}, beta),
      RidgeNetwork(2, 2, {{0.6, p}, {0.6, involute(p)}}, beta),
  };
  for (const auto& net : nets) {
    const XiPoint at = net.neurons().front().point;
    const double pn = path_norm(net, PathNormMode::Projective);
    for (double sigma : {0.5, 0.7}) {
      const auto psi = make_lizorkin_xi(Parity::Even, 2, sigma, at.t);
      const auto r = green_identity_check(net, psi);
      const double a_est = r.lhs / (norm_const * beta(at) * psi(at));
      const double err = std::abs(std::abs(a_est) - pn) / pn;
      worst_tau = std::max(worst_tau, err);
      rows.push_back({{"path_norm", pn}, {"weak_form_mass", std::abs(a_est)}, {"rel_err", err}});
    }
  }
  ck.metrics = {{"networks", 300},
                {"max_path_norm_vs_tv", worst_tv},
                {"max_path_norm_vs_canonical_sum", worst_oracle},
                {"max_projective_plus_remainder_vs_direct", worst_remainder},
                {"tol_exact", 1e-12},
                {"weak_form", rows},
                {"max_weak_form_rel_err", worst_tau},
                {"tol_weak_form", 1e-2}};
  ck.passed = worst_tv <= 1e-12 && worst_oracle <= 1e-12 && worst_remainder <= 1e-12 && worst_tau <= 1e-2;
}

void c8(Check& ck) {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double v_tau = 0.0, v_nu = 0.0, v_sum = 0.0, v_split = 0.0;
  for (int rep = 0; rep < 1000; ++rep) {
    const int d = 2 + rep % 2;
    const int m = 2 + (rep / 2) % 3;
    AtomicMeasure mu(d);
    const int K = 1 + static_cast<int>(u(rng) * 6);
    for (int k = 0; k < K; ++k) {
      const XiPoint p{random_direction(rng, d), 3.0 * (u(rng) - 0.5)};
      mu.add(4.0 * (u(rng) - 0.5), p);
      if (u(rng) < 0.35) mu.add(4.0 * (u(rng) - 0.5), involute(p));
    }
    const double tv = tv_norm(mu);
    const auto tau = signed_part(mu, m, SignedPart::Tau);
    const auto nu = signed_part(mu, m, SignedPart::Nu);
    const double a = tv_norm(tau), b = tv_norm(nu);
    v_tau = std::max(v_tau, a - tv);
    v_nu = std::max(v_nu, b - tv);
    v_sum = std::max(v_sum, a + b - 2.0 * tv);
    v_split = std::max(v_split, measure_distance(tau + nu, mu));
  }
  ck.metrics = {{"measures", 1000},
                {"max_tv_tau_minus_tv_mu", v_tau},
                {"max_tv_nu_minus_tv_mu", v_nu},
                {"max_sum_minus_twice_tv_mu", v_sum},
                {"max_tau_plus_nu_minus_mu", v_split},
                {"tol", 1e-12}};
  ck.passed = v_tau <= 1e-12 && v_nu <= 1e-12 && v_sum <= 1e-12 && v_split <= 1e-12;
}

// --- solver suite -----------------------------------------------------------

void c6(Check& ck) {
  Stopwatch sw;
  const auto teacher = oracle::planted_teacher();
  const auto train = oracle::sample_teacher(teacher, 30, 42);
  const auto test = oracle::sample_teacher(teacher, 200, 43);
  SolverConfig cfg;
  cfg.lambda = 1e-3;
  const auto rep = solve(train, Loss::Squared, 2, teacher.beta(), cfg);
  const Eigen::VectorXd f = rep.network.eval_batch(test.X);
  const double rmse = std::sqrt((f - test.y).squaredNorm() / test.size());
  bool monotone = true;
  for (std::size_t i = 1; i < rep.objective_trace.size(); ++i)
    if (rep.objective_trace[i] > rep.objective_trace[i - 1]) monotone = false;
  const double limit = cfg.lambda * (1.0 + 1e-3);
  const double secs = sw.seconds();
  ck.metrics = {{"converged", rep.converged},
                {"exit_reason", rep.exit_reason},
                {"certificate_sup", rep.certificate_sup},
                {"certificate_limit", limit},
                {"K", rep.K},
                {"N", rep.N},
                {"trace_non_increasing", monotone},
                {"outer_iterations", rep.outer_iterations},
                {"heldout_rmse", rmse},
                {"rmse_tol", 5e-2},
                {"seconds", secs},
                {"limit_seconds", 120.0}};
  ck.passed = rep.converged && rep.certificate_sup <= limit && rep.K <= 30 && monotone && rmse <= 5e-2 &&
              secs <= 120.0;
}

void c9(Check& ck) {
  const int m = 2;
  const int N = 6;
  const auto beta = BetaSpec::default_rational(m);
  std::vector<XiPoint> grid;
  for (int j = 0; j < 10; ++j)
    for (int i = 0; i < 10; ++i) grid.push_back({UnitVector::from_angle(kPi * (j + 0.5) / 10.0), -1.0 + 2.0 * i / 9.0});
  const RidgeNetwork teacher(m, 2, {{1.0, grid[23]}, {-0.7, grid[67]}}, beta);
  auto nearest = [&](const XiPoint& p) {
    std::size_t best = 0;
    for (std::size_t k = 1; k < grid.size(); ++k)
      if (xi_distance(p, grid[k]) < xi_distance(p, grid[best])) best = k;
    return best;
  };
  json rows = json::array();
  bool ok = true;
  for (std::uint64_t seed = 7; seed < 13; ++seed) {
    const auto data = oracle::sample_teacher(teacher, N, seed);
    Eigen::MatrixXd Phi(N, static_cast<Eigen::Index>(grid.size()));
    for (int i = 0; i < N; ++i) {
      const double x[2] = {data.X(i, 0), data.X(i, 1)};
      for (std::size_t k = 0; k < grid.size(); ++k)
        Phi(i, static_cast<Eigen::Index>(k)) = beta(grid[k]) * rho_m(m, x, grid[k]);
    }
    const auto lp = oracle::basis_pursuit(Phi, data.y);
    std::vector<std::size_t> lp_support;
    if (lp.feasible)
      for (std::size_t k = 0; k < grid.size(); ++k)
        if (std::abs(lp.x[static_cast<Eigen::Index>(k)]) > 1e-9) lp_support.push_back(k);

    SolverConfig cfg;
    cfg.lambda = 1e-6;
    cfg.candidates = grid;
    cfg.dual_gap_tol = 1e-8;
    cfg.max_outer_iters = 200;
    const auto rep = solve(data, Loss::Squared, m, beta, cfg);
    double wmax = 0.0;
    for (const auto& a : rep.measure.atoms()) wmax = std::max(wmax, std::abs(a.weight));
    std::vector<std::size_t> sol_support;
    double off_grid = 0.0;
    for (const auto& a : rep.measure.atoms()) {
      const auto k = nearest(a.point);
      off_grid = std::max(off_grid, xi_distance(a.point, grid[k]));
      if (std::abs(a.weight) > 1e-3 * wmax) sol_support.push_back(k);
    }
    std::sort(sol_support.begin(), sol_support.end());
    const bool match = lp.feasible && rep.converged && sol_support == lp_support &&
                       static_cast<int>(lp_support.size()) <= N && off_grid <= Tolerances{}.merge &&
                       std::abs(rep.tv - lp.objective) <= 1e-3 * lp.objective;
    ok = ok && match;
    rows.push_back({{"seed", seed}, {"lp_support", lp_support}, {"solver_support", sol_support},
                    {"lp_tv", lp.objective}, {"solver_tv", rep.tv}, {"solver_converged", rep.converged},
                    {"match", match}});
  }
  ck.metrics = {{"grid_points", grid.size()}, {"N", N}, {"lambda", 1e-6}, {"instances", rows}};
  ck.passed = ok;
}

struct Entry {
  const char* name;
  const char* suite;
  void (*fn)(Check&);
};

const std::map<std::string, Entry>& registry() {
  static const std::map<std::string, Entry> r{
      {"C1", {"radon of a Gaussian vs closed form", "radon", c1}},
      {"C2", {"filtered back-projection round trip", "radon", c2}},
      {"C3", {"t-operator identities", "radon", c3}},
      {"C4", {"ridge-Radon pairing", "radon", c4}},
      {"C5", {"weak-form Green identity", "radon", c5}},
      {"C6", {"solver on a planted 3-neuron teacher", "solver", c6}},
      {"C7", {"projective path norm", "types", c7}},
      {"C8", {"even/odd split bounds", "types", c8}},
      {"C9", {"grid-restricted solver vs LP", "solver", c9}},
  };
  return r;
}

std::string compact(const json& v) {
  if (v.is_number_float()) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v.get<double>());
    return buf;
  }
  return v.dump();
}

}  // namespace

bool SuiteResult::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"types", "radon", "solver"};
  return names;
}

std::vector<std::string> suite_checks(const std::string& suite) {
  std::vector<std::string> ids;
  for (const auto& [id, e] : registry())
    if (suite == "all" || suite == e.suite) ids.push_back(id);
  if (ids.empty()) throw ValidationError("unknown suite: " + suite);
  return ids;
}

Check run_check(const std::string& id) {
  const auto it = registry().find(id);
  if (it == registry().end()) throw ValidationError("unknown check: " + id);
  Check ck;
  ck.id = id;
  ck.name = it->second.name;
  Stopwatch sw;
  try {
    it->second.fn(ck);
  } catch (const std::exception& e) {
    ck.passed = false;
    ck.metrics["error"] = e.what();
  }
  ck.seconds = sw.seconds();
  return ck;
}

SuiteResult run_suite(const std::string& suite) {
  SuiteResult r;
  r.suite = suite;
  for (const auto& id : suite_checks(suite)) r.checks.push_back(run_check(id));
  return r;
}

json to_json(const SuiteResult& r) {
  json checks = json::array();
  for (const auto& c : r.checks)
    checks.push_back({{"id", c.id}, {"name", c.name}, {"passed", c.passed}, {"seconds", c.seconds},
                      {"metrics", c.metrics}});
  return {{"suite", r.suite}, {"passed", r.passed()}, {"checks", checks}};
}

std::string format_line(const Check& c) {
  std::string out = std::string(c.passed ? "PASS " : "FAIL ") + c.id + " " + c.name + ":";
  int shown = 0;
  for (const auto& [k, v] : c.metrics.items()) {
    if (v.is_array() || v.is_object()) continue;
    if (shown++ == 4) break;
    out += " " + k + "=" + compact(v);
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, " (%.1f s)", c.seconds);
  return out + buf;
}

}  // namespace ridgetv::verify
