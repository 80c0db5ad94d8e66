// ridgetv: train sparse ridge networks, check Radon-domain identities, run
// the filtered back-projection demo and the verification suites.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "oracles.hpp"
#include "ridgetv/io.hpp"
#include "ridgetv/lizorkin.hpp"
#include "ridgetv/parallel.hpp"
#include "ridgetv/radon.hpp"
#include "ridgetv/solver.hpp"
#include "ridgetv/verify.hpp"

#ifndef RIDGETV_VERSION
#define RIDGETV_VERSION "dev"
#endif

namespace fs = std::filesystem;
using namespace ridgetv;
using io::json;

namespace {

enum Exit { kOk = 0, kFailure = 1, kValidation = 2, kNotConverged = 3, kCheckFailed = 4 };

struct Manifest {
  std::string command;
  json config = json::object();
  json inputs = json::array();
  json outputs = json::array();
  std::optional<std::uint64_t> seed;
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  std::time_t started = std::time(nullptr);

  void write(const fs::path& primary) const {
    char when[32];
    std::strftime(when, sizeof when, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&started));
    json j = {{"command", command},
              {"tool_version", RIDGETV_VERSION},
              {"started_utc", when},
              {"wall_clock_seconds", std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count()},
              {"threads", max_threads()},
              {"seed", seed ? json(*seed) : json(nullptr)},
              {"config", config},
              {"inputs", inputs},
              {"outputs", outputs}};
    io::write_json(fs::path(primary.string() + ".manifest.json"), j);
  }
};

// --- train ------------------------------------------------------------------

struct TrainArgs {
  std::string data;
  std::string out = "model.json";
  std::string report;
  int m = 2;
  double lambda = 1e-3;
  std::string loss = "squared";
  int directions = 128;
  int t_points = 257;
  double t_range = 0.0;
  int max_outer = 100;
  int refine_steps = 50;
  double gap_tol = 1e-3;
  bool no_joint = false;
};

int cmd_train(const TrainArgs& a) {
  Manifest man;
  man.command = "train";
  const auto data = io::read_training_csv(a.data);
  SolverConfig cfg;
  cfg.lambda = a.lambda;
  cfg.direction_grid_size = a.directions;
  cfg.t_grid_size = a.t_points;
  if (a.t_range > 0.0) cfg.t_range = a.t_range;
  cfg.max_outer_iters = a.max_outer;
  cfg.refine_steps = a.refine_steps;
  cfg.dual_gap_tol = a.gap_tol;
  cfg.joint_refine = !a.no_joint;
  const Loss loss = loss_from_string(a.loss);
  const auto beta = BetaSpec::default_rational(a.m);
  const auto rep = solve(data, loss, a.m, beta, cfg);

  const fs::path report = a.report.empty() ? fs::path(a.out).replace_extension(".report.json") : fs::path(a.report);
  io::write_json(a.out, io::to_json(rep.network));
  io::write_json(report, io::to_json(rep));
  man.config = {{"m", a.m},
                {"lambda", a.lambda},
                {"loss", a.loss},
                {"directions", a.directions},
                {"t_points", a.t_points},
                {"t_range", cfg.t_range ? json(*cfg.t_range) : json(nullptr)},
                {"max_outer_iters", a.max_outer},
                {"refine_steps", a.refine_steps},
                {"dual_gap_tol", a.gap_tol},
                {"joint_refine", cfg.joint_refine}};
  man.inputs.push_back(a.data);
  man.outputs = {a.out, report.string()};
  man.write(a.out);
  std::printf("K=%d tv=%.6g objective=%.6g certificate=%.6g (lambda %.3g) %s, representer_ok=%s\n", rep.K, rep.tv,
              rep.objective_trace.back(), rep.certificate_sup, rep.lambda,
              rep.converged ? "converged" : ("not converged: " + rep.exit_reason).c_str(),
              rep.representer_ok ? "true" : "false");
  return rep.converged ? kOk : kNotConverged;
}

// --- analyze-radon ----------------------------------------------------------

struct AnalyzeArgs {
  std::string model;
  std::string out = "check.json";
  int num = 10;
  std::uint64_t seed = 100;
  double sigma = 0.5;
  double shift_range = 1.0;
  double L = 8.0;
  double h = 0.05;
  double h_t = 0.025;
  int dirs = 0;
};

int cmd_analyze(const AnalyzeArgs& a) {
  Manifest man;
  man.command = "analyze-radon";
  man.seed = a.seed;
  const auto net = io::network_from_json(io::read_json(a.model));
  const auto dc = decompose(net);
  const double reg = tv_norm(dc.tau);
  const double pn = path_norm(net, PathNormMode::Projective);
  GreenOptions opt;
  opt.L = a.L;
  opt.h = a.h;
  opt.h_t = a.h_t;
  opt.n_dirs = a.dirs;
  json pairings = json::array();
  bool ok = std::abs(reg - pn) <= 1e-12 * std::max(1.0, pn);
  for (const auto& psi : make_lizorkin_xi_family(net.dim(), net.m(), a.num, a.seed, a.shift_range, a.sigma)) {
    const auto r = green_identity_check(net, psi, opt);
    // with no tau-part the right side is zero and the left is compared to the scale
    const bool pass = r.rhs == 0.0 ? std::abs(r.lhs) <= 1e-2 * std::max(r.scale, 1e-300) || r.scale == 0.0
                                   : r.rel_err <= 1e-2;
    ok = ok && pass;
    pairings.push_back({{"test_function", psi.tag()},
                        {"lhs", r.lhs},
                        {"rhs", r.rhs},
                        {"rel_err", r.rel_err},
                        {"scale", r.scale},
                        {"truncation_bound", r.truncation_bound},
                        {"passed", pass}});
  }
  json record = {{"model", a.model},
                 {"m", net.m()},
                 {"d", net.dim()},
                 {"neurons", net.size()},
                 {"regularizer_part_tv_tau", reg},
                 {"path_norm_projective", pn},
                 {"path_norm_cylinder", path_norm(net, PathNormMode::Cylinder)},
                 {"polynomial_part", io::to_json(dc.p_part)},
                 {"green", pairings},
                 {"passed", ok}};
  io::write_json(a.out, record);
  man.config = {{"num_testfns", a.num}, {"sigma", a.sigma}, {"shift_range", a.shift_range}, {"L", a.L},
                {"h", a.h},           {"h_t", a.h_t},     {"n_dirs", a.dirs}};
  man.inputs.push_back(a.model);
  man.outputs.push_back(a.out);
  man.write(a.out);
  std::printf("regularizer part %.6g, projective path norm %.6g, polynomial degree %d, %zu pairings: %s\n", reg, pn,
              dc.p_part.degree, pairings.size(), ok ? "pass" : "FAIL");
  return ok ? kOk : kCheckFailed;
}

// --- fbp-demo ---------------------------------------------------------------

struct FbpArgs {
  int d = 2;
  int k = 2;
  double sigma = 1.0;
  double L = 8.0;
  double h = 0.05;
  double h_t = 0.0;
  int dirs = 0;
  double half = 4.0;
  double step = 0.1;
  std::string sino = "sino.csv";
  std::string recon = "recon.csv";
};

int cmd_fbp(FbpArgs a) {
  if (a.d != 2 && a.d != 3) throw ValidationError("fbp-demo: d must be 2 or 3");
  Manifest man;
  man.command = "fbp-demo";
  if (a.h_t <= 0.0) a.h_t = a.d == 2 ? a.h : 0.1;
  if (a.k == 0)
    std::fprintf(stderr, "warning: k=0 is a plain Gaussian, not Lizorkin-class; reconstruction error is still reported\n");
  const auto phi = make_lizorkin_rd(a.d, a.k, a.sigma, {}, a.k > 0);
  const auto grid = DirectionGrid::for_dimension(a.d, a.dirs);
  const auto S = radon([&](std::span<const double> x) { return phi(x); }, grid, default_tgrid(a.d, a.L, a.h_t),
                       {a.L, a.h});
  io::write_sinogram_csv(a.sino, S);

  std::vector<std::vector<double>> pts;
  const int n = static_cast<int>(std::lround(2.0 * a.half / a.step));
  std::vector<int> idx(static_cast<std::size_t>(a.d), 0);
  while (true) {
    std::vector<double> x(static_cast<std::size_t>(a.d));
    for (int c = 0; c < a.d; ++c) x[c] = -a.half + idx[c] * a.step;
    pts.push_back(std::move(x));
    int c = 0;
    while (c < a.d && ++idx[c] > n) idx[c++] = 0;
    if (c == a.d) break;
  }
  const auto rec = fbp_invert(S, a.d, pts);
  std::ofstream out(a.recon);
  if (!out) throw Error("cannot write " + a.recon);
  for (int c = 0; c < a.d; ++c) out << "x_" << c + 1 << ",";
  out << "phi,recon\n";
  double num = 0.0, den = 0.0;
  char buf[64];
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const double want = phi(pts[i]);
    num += (rec[i] - want) * (rec[i] - want);
    den += want * want;
    for (double v : pts[i]) {
      std::snprintf(buf, sizeof buf, "%.17g,", v);
      out << buf;
    }
    std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", want, rec[i]);
    out << buf;
  }
  const double err = std::sqrt(num / den);
  man.config = {{"d", a.d},   {"k", a.k},       {"sigma", a.sigma},    {"L", a.L},        {"h", a.h},
                {"h_t", a.h_t}, {"n_dirs", grid.size()}, {"eval_half_width", a.half}, {"eval_step", a.step},
                {"rel_l2_error", err}};
  man.outputs = {a.sino, a.recon};
  man.write(a.recon);
  std::printf("d=%d k=%d directions=%zu relative L2 error %.4g\n", a.d, a.k, grid.size(), err);
  return kOk;
}

// --- gen-teacher ------------------------------------------------------------

struct TeacherArgs {
  int n = 30;
  std::uint64_t seed = 42;
  std::string out = "teacher.csv";
  std::string model;
};

int cmd_teacher(const TeacherArgs& a) {
  Manifest man;
  man.command = "gen-teacher";
  man.seed = a.seed;
  const auto teacher = oracle::planted_teacher();
  io::write_training_csv(a.out, oracle::sample_teacher(teacher, a.n, a.seed));
  man.outputs.push_back(a.out);
  if (!a.model.empty()) {
    io::write_json(a.model, io::to_json(teacher));
    man.outputs.push_back(a.model);
  }
  man.config = {{"n", a.n}, {"teacher", "planted 3-neuron, m=2, d=2"}};
  man.write(a.out);
  return kOk;
}

// --- verify -----------------------------------------------------------------

struct VerifyArgs {
  std::string suite = "all";
  std::string json_out;
  std::string fixture;
  int fixture_n = 30;
  std::uint64_t fixture_seed = 42;
};

bool fixture_matches(const VerifyArgs& a, json& detail) {
  const auto got = io::read_training_csv(a.fixture);
  const auto want = oracle::sample_teacher(oracle::planted_teacher(), a.fixture_n, a.fixture_seed);
  double diff = std::numeric_limits<double>::infinity();
  if (got.size() == want.size() && got.d() == want.d())
    diff = std::max((got.X - want.X).cwiseAbs().maxCoeff(), (got.y - want.y).cwiseAbs().maxCoeff());
  detail = {{"fixture", a.fixture}, {"rows", got.size()}, {"expected_rows", want.size()},
            {"max_abs_diff", std::isfinite(diff) ? json(diff) : json(nullptr)}};
  return diff <= 1e-12;
}

int cmd_verify(const VerifyArgs& a) {
  bool ok = true;
  json fixture = nullptr;
  if (!a.fixture.empty()) {
    const bool match = fixture_matches(a, fixture);
    std::printf("%s fixture %s\n", match ? "PASS" : "FAIL", a.fixture.c_str());
    ok = ok && match;
  }
  const auto res = verify::run_suite(a.suite);
  for (const auto& c : res.checks) std::printf("%s\n", verify::format_line(c).c_str());
  ok = ok && res.passed();
  if (!a.json_out.empty()) {
    auto j = verify::to_json(res);
    if (!fixture.is_null()) j["fixture"] = fixture;
    j["passed"] = ok;
    io::write_json(a.json_out, j);
    Manifest man;
    man.command = "verify";
    man.config = {{"suite", a.suite}};
    if (!a.fixture.empty()) man.inputs.push_back(a.fixture);
    man.outputs.push_back(a.json_out);
    man.write(a.json_out);
  }
  return ok ? kOk : kCheckFailed;
}

// --- export-plot ------------------------------------------------------------

struct PlotArgs {
  std::string kind = "network";
  std::string model;
  std::string report;
  double half = 2.0;
  double step = 0.05;
  std::string out = "plot.csv";
};

int cmd_plot(const PlotArgs& a) {
  Manifest man;
  man.command = "export-plot";
  std::ofstream out(a.out);
  if (!out) throw Error("cannot write " + a.out);
  char buf[128];
  const int n = static_cast<int>(std::lround(2.0 * a.half / a.step));
  if (a.kind == "activations") {
    out << "series,s,value\n";
    for (int m = 2; m <= 4; ++m) {
      for (int i = 0; i <= n; ++i) {
        const double s = -a.half + i * a.step;
        std::snprintf(buf, sizeof buf, "sigma_%d,%.17g,%.17g\n", m, s, sigma_m(m, s));
        out << buf;
      }
    }
  } else if (a.kind == "trace") {
    if (a.report.empty()) throw ValidationError("export-plot trace needs --report");
    const auto rep = io::read_json(a.report);
    out << "iteration,objective\n";
    int it = 0;
    for (const auto& v : rep.at("objective_trace")) {
      std::snprintf(buf, sizeof buf, "%d,%.17g\n", it++, v.get<double>());
      out << buf;
    }
    man.inputs.push_back(a.report);
  } else if (a.kind == "network") {
    if (a.model.empty()) throw ValidationError("export-plot network needs --model");
    const auto net = io::network_from_json(io::read_json(a.model));
    if (net.dim() != 2) throw ValidationError("export-plot network: only d = 2 models can be gridded");
    const auto dc = decompose(net);
    out << "series,x_1,x_2,value\n";
    for (int i = 0; i <= n; ++i) {
      for (int j = 0; j <= n; ++j) {
        const double x[2] = {-a.half + i * a.step, -a.half + j * a.step};
        const double f = net(x), q = dc.q_part(x), p = dc.p_part(x);
        for (const auto& [name, v] : {std::pair{"network", f}, std::pair{"q_part", q}, std::pair{"p_part", p}}) {
          std::snprintf(buf, sizeof buf, "%s,%.17g,%.17g,%.17g\n", name, x[0], x[1], v);
          out << buf;
        }
      }
    }
    man.inputs.push_back(a.model);
  } else {
    throw ValidationError("export-plot: kind must be network, trace or activations");
  }
  man.config = {{"kind", a.kind}, {"half_width", a.half}, {"step", a.step}};
  man.outputs.push_back(a.out);
  man.write(a.out);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sparse ridge networks with total-variation regularization on the cylinder"};
  app.set_version_flag("--version", RIDGETV_VERSION);
  app.require_subcommand(1);
  int threads = 0;
  app.add_option("--threads", threads, "Worker cap (RIDGE_TV_THREADS overrides)")->check(CLI::NonNegativeNumber);

  TrainArgs ta;
  auto* train = app.add_subcommand("train", "Fit a TV-regularized ridge network to a CSV of x_1..x_d,y");
  train->add_option("data", ta.data, "Training CSV")->required()->check(CLI::ExistingFile);
  train->add_option("--out", ta.out, "Model JSON");
  train->add_option("--report", ta.report, "Report JSON (default: <out>.report.json)");
  train->add_option("--m", ta.m, "Activation order (2 = ReLU)")->check(CLI::Range(2, 8));
  train->add_option("--lambda", ta.lambda, "TV weight")->check(CLI::PositiveNumber);
  train->add_option("--loss", ta.loss, "squared or absolute")->check(CLI::IsMember({"squared", "absolute"}));
  train->add_option("--directions", ta.directions, "Certificate grid directions")->check(CLI::PositiveNumber);
  train->add_option("--t-points", ta.t_points, "Certificate grid offsets")->check(CLI::PositiveNumber);
  train->add_option("--t-range", ta.t_range, "Offset half-width (default max|x|+1)");
  train->add_option("--max-outer", ta.max_outer, "Insertion steps")->check(CLI::NonNegativeNumber);
  train->add_option("--refine-steps", ta.refine_steps, "Projected-ascent steps per insertion");
  train->add_option("--gap-tol", ta.gap_tol, "Relative certificate tolerance");
  train->add_flag("--no-joint-refine", ta.no_joint, "Skip sliding the atom positions");

  AnalyzeArgs aa;
  auto* analyze = app.add_subcommand("analyze-radon", "Weak-form Green identity and path-norm checks for a model");
  analyze->add_option("model", aa.model, "Model JSON")->required()->check(CLI::ExistingFile);
  analyze->add_option("--out", aa.out, "Check record JSON");
  analyze->add_option("--num-testfns", aa.num, "Number of test functions")->check(CLI::PositiveNumber);
  analyze->add_option("--seed", aa.seed, "Test-function family seed");
  analyze->add_option("--sigma", aa.sigma, "Test-function width")->check(CLI::PositiveNumber);
  analyze->add_option("--shift-range", aa.shift_range, "Test-function offsets in [-r, r]");
  analyze->add_option("--L", aa.L, "Integration box half-width")->check(CLI::PositiveNumber);
  analyze->add_option("--dx", aa.h, "Spatial spacing")->check(CLI::PositiveNumber);
  analyze->add_option("--dt", aa.h_t, "Offset spacing")->check(CLI::PositiveNumber);
  analyze->add_option("--dirs", aa.dirs, "Directions (0: default for d)");

  FbpArgs fa;
  auto* fbp = app.add_subcommand("fbp-demo", "Radon transform and filtered back-projection of Delta^k Gaussian");
  fbp->add_option("--d", fa.d, "Dimension (2 or 3)");
  fbp->add_option("--k", fa.k, "Laplacian power (0: plain Gaussian)")->check(CLI::NonNegativeNumber);
  fbp->add_option("--sigma", fa.sigma, "Gaussian width")->check(CLI::PositiveNumber);
  fbp->add_option("--L", fa.L, "Box half-width")->check(CLI::PositiveNumber);
  fbp->add_option("--dx", fa.h, "Hyperplane quadrature spacing")->check(CLI::PositiveNumber);
  fbp->add_option("--dt", fa.h_t, "Offset spacing (default dx for d=2, 0.1 for d=3)");
  fbp->add_option("--dirs", fa.dirs, "Directions (0: 256 for d=2, 512 for d=3)");
  fbp->add_option("--eval-half", fa.half, "Reconstruction grid half-width")->check(CLI::PositiveNumber);
  fbp->add_option("--eval-step", fa.step, "Reconstruction grid spacing")->check(CLI::PositiveNumber);
  fbp->add_option("--out-sino", fa.sino, "Sinogram CSV");
  fbp->add_option("--out-recon", fa.recon, "Reconstruction CSV");

  VerifyArgs va;
  auto* ver = app.add_subcommand("verify", "Run the verification suites");
  ver->add_option("--suite", va.suite, "all, types, radon or solver")
      ->check(CLI::IsMember({"all", "types", "radon", "solver"}));
  ver->add_option("--json", va.json_out, "Summary JSON");
  ver->add_option("--fixture", va.fixture, "Teacher CSV to compare with a fresh draw")->check(CLI::ExistingFile);
  ver->add_option("--fixture-n", va.fixture_n, "Rows of the fixture draw");
  ver->add_option("--fixture-seed", va.fixture_seed, "Seed of the fixture draw");

  TeacherArgs tea;
  auto* gen = app.add_subcommand("gen-teacher", "Sample the planted 3-neuron teacher on [-1,1]^2");
  gen->add_option("--n", tea.n, "Rows")->check(CLI::PositiveNumber);
  gen->add_option("--seed", tea.seed, "Seed");
  gen->add_option("--out", tea.out, "Training CSV");
  gen->add_option("--model", tea.model, "Also write the teacher network JSON");

  PlotArgs pa;
  auto* plot = app.add_subcommand("export-plot", "Write tidy CSV for plotting");
  plot->add_option("kind", pa.kind, "network, trace or activations")
      ->check(CLI::IsMember({"network", "trace", "activations"}));
  plot->add_option("--model", pa.model, "Model JSON (network)");
  plot->add_option("--report", pa.report, "Report JSON (trace)");
  plot->add_option("--half", pa.half, "Grid half-width")->check(CLI::PositiveNumber);
  plot->add_option("--step", pa.step, "Grid spacing")->check(CLI::PositiveNumber);
  plot->add_option("--out", pa.out, "CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kValidation;
  }
  set_max_threads(threads);

  try {
    if (*train) return cmd_train(ta);
    if (*analyze) return cmd_analyze(aa);
    if (*fbp) return cmd_fbp(fa);
    if (*ver) return cmd_verify(va);
    if (*gen) return cmd_teacher(tea);
    if (*plot) return cmd_plot(pa);
  } catch (const ValidationError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kValidation;
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kValidation;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kFailure;
  }
  return kFailure;
}
