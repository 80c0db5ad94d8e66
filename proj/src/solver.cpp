#include "ridgetv/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "ridgetv/parallel.hpp"

namespace ridgetv {

namespace {

struct Model {
  std::vector<XiPoint> points;
  std::vector<double> weights;
};

Eigen::MatrixXd feature_matrix(const std::vector<XiPoint>& pts, const TrainingSet& data, int m,
                               const BetaSpec& beta) {
  Eigen::MatrixXd Phi(data.size(), static_cast<Eigen::Index>(pts.size()));
  for (std::size_t k = 0; k < pts.size(); ++k) {
    const double b = beta(pts[k]);
    for (int i = 0; i < data.size(); ++i) {
      double z = 0.0;
      for (int a = 0; a < data.d(); ++a) z += pts[k].n[a] * data.X(i, a);
      Phi(i, static_cast<Eigen::Index>(k)) = b * sigma_m(m, z - pts[k].t);
    }
  }
  return Phi;
}

Eigen::VectorXd predictions(const Model& mdl, const TrainingSet& data, int m, const BetaSpec& beta) {
  Eigen::VectorXd f = Eigen::VectorXd::Zero(data.size());
  for (std::size_t k = 0; k < mdl.points.size(); ++k) {
    const auto& p = mdl.points[k];
    const double c = mdl.weights[k] * beta(p);
    for (int i = 0; i < data.size(); ++i) {
      double z = 0.0;
      for (int a = 0; a < data.d(); ++a) z += p.n[a] * data.X(i, a);
      f[i] += c * sigma_m(m, z - p.t);
    }
  }
  return f;
}

double data_term(const Eigen::VectorXd& f, const TrainingSet& data, Loss loss) {
  double s = 0.0;
  for (int i = 0; i < data.size(); ++i) s += loss_value(loss, data.y[i], f[i]);
  return s / data.size();
}

double l1(const std::vector<double>& w) {
  double s = 0.0;
  for (double v : w) s += std::abs(v);
  return s;
}

double model_objective(const Model& mdl, const TrainingSet& data, Loss loss, int m, const BetaSpec& beta,
                       double lambda) {
  return data_term(predictions(mdl, data, m, beta), data, loss) + lambda * l1(mdl.weights);
}

// r_i = L'(y_i, f_i) / N
Eigen::VectorXd residual_weights(const Eigen::VectorXd& f, const TrainingSet& data, Loss loss) {
  Eigen::VectorXd r(data.size());
  for (int i = 0; i < data.size(); ++i) r[i] = loss_derivative(loss, data.y[i], f[i]) / data.size();
  return r;
}

double cert_value(const Eigen::VectorXd& r, const TrainingSet& data, int m, const BetaSpec& beta, const XiPoint& p) {
  double s = 0.0;
  for (int i = 0; i < data.size(); ++i) {
    double z = 0.0;
    for (int a = 0; a < data.d(); ++a) z += p.n[a] * data.X(i, a);
    s += r[i] * sigma_m(m, z - p.t);
  }
  return beta(p) * s;
}

// Value of c and its gradient: tangential part in n, and d/dt.
struct CertGrad {
  double value = 0.0;
  std::vector<double> gn;
  double gt = 0.0;
};

CertGrad cert_grad(const Eigen::VectorXd& r, const TrainingSet& data, int m, const BetaSpec& beta, const XiPoint& p) {
  const int d = data.d();
  double s0 = 0.0;   // sum r sigma
  double s1 = 0.0;   // sum r sigma'
  std::vector<double> sx(static_cast<std::size_t>(d), 0.0);  // sum r sigma' x
  for (int i = 0; i < data.size(); ++i) {
    double z = 0.0;
    for (int a = 0; a < d; ++a) z += p.n[a] * data.X(i, a);
    const double u = z - p.t;
    const double sg = sigma_m(m, u);
    const double ds = sigma_m_derivative(m, u);
    s0 += r[i] * sg;
    s1 += r[i] * ds;
    for (int a = 0; a < d; ++a) sx[static_cast<std::size_t>(a)] += r[i] * ds * data.X(i, a);
  }
  const double b = beta(p);
  const auto bn = beta.dn(p);
  CertGrad g;
  g.value = b * s0;
  g.gt = beta.dt(p) * s0 - b * s1;
  g.gn.resize(static_cast<std::size_t>(d));
  double radial = 0.0;
  for (int a = 0; a < d; ++a) {
    g.gn[static_cast<std::size_t>(a)] = bn[static_cast<std::size_t>(a)] * s0 + b * sx[static_cast<std::size_t>(a)];
    radial += g.gn[static_cast<std::size_t>(a)] * p.n[a];
  }
  for (int a = 0; a < d; ++a) g.gn[static_cast<std::size_t>(a)] -= radial * p.n[a];
  return g;
}

XiPoint step_point(const XiPoint& p, const std::vector<double>& gn, double gt, double eta) {
  std::vector<double> v(p.n.coords().begin(), p.n.coords().end());
  for (std::size_t a = 0; a < v.size(); ++a) v[a] += eta * gn[a];
  return XiPoint{UnitVector::normalized(std::move(v)), p.t + eta * gt};
}

// Projected ascent of s * c(p) with backtracking.
XiPoint refine_point(const Eigen::VectorXd& r, const TrainingSet& data, int m, const BetaSpec& beta, XiPoint p,
                     int steps, double t_scale) {
  const double s = cert_value(r, data, m, beta, p) >= 0.0 ? 1.0 : -1.0;
  double eta = 0.0;
  for (int it = 0; it < steps; ++it) {
    const auto g = cert_grad(r, data, m, beta, p);
    double gnorm = g.gt * g.gt;
    for (double v : g.gn) gnorm += v * v;
    gnorm = std::sqrt(gnorm);
    if (gnorm == 0.0) break;
    if (eta == 0.0) eta = 0.1 * t_scale / gnorm;
    const double cur = s * g.value;
    bool moved = false;
    for (int bt = 0; bt < 40; ++bt) {
      const auto q = step_point(p, g.gn, g.gt, s * eta);
      if (s * cert_value(r, data, m, beta, q) > cur) {
        p = q;
        moved = true;
        eta *= 2.0;
        break;
      }
      eta *= 0.5;
    }
    if (!moved) break;
  }
  return p;
}

double default_t_range(const TrainingSet& data, const SolverConfig& cfg) {
  return cfg.t_range ? *cfg.t_range : data.max_norm() + 1.0;
}

std::vector<UnitVector> search_directions(int d, int count) {
  std::vector<UnitVector> dirs;
  if (d == 1) {
    dirs.push_back(UnitVector({1.0}));
    dirs.push_back(UnitVector({-1.0}));
    return dirs;
  }
  if (d == 2) {
    for (int j = 0; j < count; ++j) dirs.push_back(UnitVector::from_angle(2.0 * std::numbers::pi * j / count));
    return dirs;
  }
  // Fibonacci spiral over the full sphere in any d >= 3 (first three
  // coordinates), remaining coordinates swept by a cosine ladder.
  const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
  for (int i = 0; i < count; ++i) {
    const double z = 1.0 - (2.0 * i + 1.0) / count;
    const double rr = std::sqrt(std::max(0.0, 1.0 - z * z));
    std::vector<double> v(static_cast<std::size_t>(d), 0.0);
    v[0] = rr * std::cos(golden * i);
    v[1] = rr * std::sin(golden * i);
    v[2] = z;
    for (int a = 3; a < d; ++a) v[static_cast<std::size_t>(a)] = 0.5 * std::cos(0.37 * (i + 1) * a);
    dirs.push_back(UnitVector::normalized(v));
  }
  return dirs;
}

struct GridMax {
  double sup = 0.0;
  std::size_t index = 0;
};

// sup over the search grid (or the candidate list) of |c|; lowest index wins ties.
GridMax grid_sup(const Eigen::VectorXd& r, const TrainingSet& data, int m, const BetaSpec& beta,
                 const SolverConfig& cfg, std::vector<XiPoint>* points_out) {
  std::vector<XiPoint> pts = cfg.candidates.empty() ? certificate_grid(data, cfg) : cfg.candidates;
  std::vector<double> vals(pts.size());
  parallel_for(pts.size(), [&](std::size_t k) { vals[k] = std::abs(cert_value(r, data, m, beta, pts[k])); });
  GridMax g;
  for (std::size_t k = 0; k < vals.size(); ++k) {
    if (vals[k] > g.sup) {
      g.sup = vals[k];
      g.index = k;
    }
  }
  if (points_out) *points_out = std::move(pts);
  return g;
}

Model measure_to_model(const AtomicMeasure& mu) {
  Model mdl;
  for (const auto& a : mu.atoms()) {
    mdl.points.push_back(a.point);
    mdl.weights.push_back(a.weight);
  }
  return mdl;
}

AtomicMeasure model_to_measure(const Model& mdl, int d) {
  AtomicMeasure mu(d);
  for (std::size_t k = 0; k < mdl.points.size(); ++k) mu.add(mdl.weights[k], mdl.points[k]);
  return mu;
}

double soft(double v, double thr) {
  if (v > thr) return v - thr;
  if (v < -thr) return v + thr;
  return 0.0;
}

// min ||y - Phi w||^2 + gamma |w|_1 by feature-sign search started from w:
// solve the unconstrained problem on the active set for fixed signs, line
// search through sign changes, activate the worst violator, repeat.
Eigen::VectorXd feature_sign(const Eigen::MatrixXd& Phi, const Eigen::VectorXd& y, double gamma, Eigen::VectorXd w) {
  const Eigen::Index K = w.size();
  auto F = [&](const Eigen::VectorXd& v) { return (y - Phi * v).squaredNorm() + gamma * v.lpNorm<1>(); };
  const double tol = 1e-10 * std::max(gamma, 1e-300);
  for (int outer = 0; outer < 10 * static_cast<int>(K) + 50; ++outer) {
    Eigen::VectorXd g = 2.0 * Phi.transpose() * (Phi * w - y);
    bool active_opt = true;
    for (Eigen::Index k = 0; k < K; ++k)
      if (w[k] != 0.0 && std::abs(g[k] + gamma * (w[k] > 0 ? 1.0 : -1.0)) > tol * 10.0) active_opt = false;
    Eigen::VectorXd theta = w.unaryExpr([](double v) { return v > 0 ? 1.0 : (v < 0 ? -1.0 : 0.0); });
    if (active_opt) {
      Eigen::Index worst = -1;
      double gmax = gamma + tol;
      for (Eigen::Index k = 0; k < K; ++k) {
        if (w[k] == 0.0 && std::abs(g[k]) > gmax) {
          gmax = std::abs(g[k]);
          worst = k;
        }
      }
      if (worst < 0) break;
      theta[worst] = g[worst] > 0 ? -1.0 : 1.0;
    }
    std::vector<Eigen::Index> A;
    for (Eigen::Index k = 0; k < K; ++k)
      if (theta[k] != 0.0) A.push_back(k);
    const auto nA = static_cast<Eigen::Index>(A.size());
    Eigen::MatrixXd PA(Phi.rows(), nA);
    Eigen::VectorXd tA(nA), wA(nA);
    for (Eigen::Index j = 0; j < nA; ++j) {
      PA.col(j) = Phi.col(A[j]);
      tA[j] = theta[A[j]];
      wA[j] = w[A[j]];
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(PA);
    lu.setThreshold(1e-10);
    if (lu.rank() < nA) {
      // Dependent columns: move along a kernel vector, which leaves the fit
      // unchanged, in the direction that lowers the l1 term until a weight
      // reaches zero. A newly activated weight may only move along its sign.
      Eigen::VectorXd v = lu.kernel().col(0);
      Eigen::Index q = -1;
      for (Eigen::Index j = 0; j < nA; ++j)
        if (wA[j] == 0.0) q = j;
      if (q >= 0 && std::abs(v[q]) > 1e-12 * v.norm()) {
        if (tA[q] * v[q] < 0.0) v = -v;
      } else if (tA.dot(v) > 0.0) {
        v = -v;
      }
      if (tA.dot(v) > 1e-12 * v.norm()) break;
      double step = std::numeric_limits<double>::infinity();
      Eigen::Index hit = -1;
      for (Eigen::Index j = 0; j < nA; ++j) {
        if (wA[j] * v[j] < 0.0 && -wA[j] / v[j] < step) {
          step = -wA[j] / v[j];
          hit = j;
        }
      }
      if (hit < 0) break;
      Eigen::VectorXd c = w;
      for (Eigen::Index j = 0; j < nA; ++j) c[A[j]] = wA[j] + step * v[j];
      c[A[hit]] = 0.0;
      if (F(c) > F(w)) break;
      w = c;
      continue;
    }
    const Eigen::VectorXd wn = (PA.transpose() * PA).ldlt().solve(PA.transpose() * y - 0.5 * gamma * tA);
    if (!wn.allFinite()) break;
    // candidates: the full step and every zero crossing on the way
    std::vector<double> steps{1.0};
    for (Eigen::Index j = 0; j < nA; ++j) {
      if (wA[j] != 0.0 && wA[j] * wn[j] < 0.0) steps.push_back(wA[j] / (wA[j] - wn[j]));
    }
    Eigen::VectorXd best = w;
    double fbest = F(w);
    bool improved = false;
    for (double a : steps) {
      Eigen::VectorXd c = w;
      for (Eigen::Index j = 0; j < nA; ++j) {
        double v = wA[j] + a * (wn[j] - wA[j]);
        if (a < 1.0 && wA[j] != 0.0 && std::abs(a - wA[j] / (wA[j] - wn[j])) <= 1e-15) v = 0.0;
        c[A[j]] = v;
      }
      const double fc = F(c);
      if (fc < fbest) {
        fbest = fc;
        best = c;
        improved = true;
      }
    }
    if (!improved) break;
    w = best;
  }
  return w;
}

// Exact lasso on the current atoms for the squared loss. Accepted only when
// it lowers the objective.
bool kkt_polish(Model& mdl, const TrainingSet& data, int m, const BetaSpec& beta, double lambda, double& obj) {
  if (mdl.points.empty()) return false;
  const Eigen::MatrixXd Phi = feature_matrix(mdl.points, data, m, beta);
  const Eigen::VectorXd w0 = Eigen::Map<const Eigen::VectorXd>(mdl.weights.data(), static_cast<Eigen::Index>(mdl.weights.size()));
  const Eigen::VectorXd w = feature_sign(Phi, data.y, data.size() * lambda, w0);
  Model cand = mdl;
  cand.weights.assign(w.data(), w.data() + w.size());
  const double o = model_objective(cand, data, Loss::Squared, m, beta, lambda);
  if (o < obj) {
    mdl = std::move(cand);
    obj = o;
    return true;
  }
  return false;
}

// Drops zero weights and merges coincident atoms; keeps the result only if
// the objective does not increase.
void tidy(Model& mdl, const TrainingSet& data, Loss loss, int m, const BetaSpec& beta, double lambda,
          double prune_tol, double& obj) {
  Model cand;
  for (std::size_t k = 0; k < mdl.points.size(); ++k) {
    if (std::abs(mdl.weights[k]) < prune_tol || mdl.weights[k] == 0.0) continue;
    auto it = std::find_if(cand.points.begin(), cand.points.end(), [&](const XiPoint& q) {
      return xi_distance(q, mdl.points[k]) <= Tolerances{}.merge;
    });
    if (it == cand.points.end()) {
      cand.points.push_back(mdl.points[k]);
      cand.weights.push_back(mdl.weights[k]);
    } else {
      cand.weights[static_cast<std::size_t>(it - cand.points.begin())] += mdl.weights[k];
    }
  }
  Model kept;
  for (std::size_t k = 0; k < cand.points.size(); ++k) {
    if (cand.weights[k] == 0.0) continue;
    kept.points.push_back(cand.points[k]);
    kept.weights.push_back(cand.weights[k]);
  }
  if (kept.points.size() == mdl.points.size()) return;
  const double o = model_objective(kept, data, loss, m, beta, lambda);
  if (o <= obj) {
    mdl = std::move(kept);
    obj = o;
  }
}

void solve_weights(Model& mdl, const TrainingSet& data, Loss loss, int m, const BetaSpec& beta, double lambda,
                   const SolverConfig& cfg, double& obj, int& not_converged) {
  auto ws = correct_weights(mdl.points, data, loss, m, beta, lambda, cfg, mdl.weights);
  if (!ws.converged) ++not_converged;
  if (ws.objective <= obj) {
    mdl.weights = std::move(ws.weights);
    obj = ws.objective;
  }
  if (loss == Loss::Squared) kkt_polish(mdl, data, m, beta, lambda, obj);
}

// Alternates a projected-gradient step on all atom positions (backtracking on
// the objective) with a weight re-solve.
void slide(Model& mdl, const TrainingSet& data, Loss loss, int m, const BetaSpec& beta, double lambda,
           const SolverConfig& cfg, double t_scale, double& obj, int& not_converged) {
  double eta = 0.0;
  for (int pass = 0; pass < cfg.joint_refine_passes; ++pass) {
    const Eigen::VectorXd f = predictions(mdl, data, m, beta);
    const Eigen::VectorXd r = residual_weights(f, data, loss);
    std::vector<CertGrad> grads;
    double gnorm = 0.0;
    for (std::size_t k = 0; k < mdl.points.size(); ++k) {
      auto g = cert_grad(r, data, m, beta, mdl.points[k]);
      // d objective / d p_k = w_k grad c(p_k)
      for (double& v : g.gn) v *= mdl.weights[k];
      g.gt *= mdl.weights[k];
      gnorm += g.gt * g.gt;
      for (double v : g.gn) gnorm += v * v;
      grads.push_back(std::move(g));
    }
    gnorm = std::sqrt(gnorm);
    if (gnorm == 0.0) break;
    if (eta == 0.0) eta = 0.05 * t_scale / gnorm;
    bool moved = false;
    for (int bt = 0; bt < 40; ++bt) {
      Model cand = mdl;
      for (std::size_t k = 0; k < cand.points.size(); ++k)
        cand.points[k] = step_point(mdl.points[k], grads[k].gn, grads[k].gt, -eta);
      const double o = model_objective(cand, data, loss, m, beta, lambda);
      if (o < obj) {
        mdl = std::move(cand);
        obj = o;
        moved = true;
        eta *= 2.0;
        break;
      }
      eta *= 0.5;
    }
    if (!moved) break;
    solve_weights(mdl, data, loss, m, beta, lambda, cfg, obj, not_converged);
  }
}

}  // namespace

TrainingSet::TrainingSet(Eigen::MatrixXd Xin, Eigen::VectorXd yin) : X(std::move(Xin)), y(std::move(yin)) {
  if (X.rows() == 0) throw ValidationError("TrainingSet: need at least one sample");
  if (X.cols() == 0) throw ValidationError("TrainingSet: inputs have dimension 0");
  if (X.rows() != y.size()) throw ValidationError("TrainingSet: inputs and targets differ in length");
  if (!X.allFinite() || !y.allFinite()) throw ValidationError("TrainingSet: non-finite entries");
}

double TrainingSet::max_norm() const { return X.rowwise().norm().maxCoeff(); }

const char* to_string(Loss l) { return l == Loss::Squared ? "squared" : "absolute"; }

Loss loss_from_string(const std::string& s) {
  if (s == "squared") return Loss::Squared;
  if (s == "absolute") return Loss::Absolute;
  throw ValidationError("unknown loss '" + s + "' (expected squared or absolute)");
}

double loss_value(Loss l, double y, double f) {
  const double r = f - y;
  return l == Loss::Squared ? r * r : std::abs(r);
}

double loss_derivative(Loss l, double y, double f) {
  const double r = f - y;
  if (l == Loss::Squared) return 2.0 * r;
  return r > 0.0 ? 1.0 : (r < 0.0 ? -1.0 : 0.0);
}

std::vector<XiPoint> certificate_grid(const TrainingSet& data, const SolverConfig& cfg) {
  if (cfg.direction_grid_size < 1 || cfg.t_grid_size < 1) throw ValidationError("SolverConfig: grids must be nonempty");
  const double R = default_t_range(data, cfg);
  std::vector<XiPoint> pts;
  const auto dirs = search_directions(data.d(), cfg.direction_grid_size);
  pts.reserve(dirs.size() * static_cast<std::size_t>(cfg.t_grid_size));
  for (const auto& n : dirs) {
    for (int i = 0; i < cfg.t_grid_size; ++i) {
      const double t = cfg.t_grid_size == 1 ? 0.0 : -R + 2.0 * R * i / (cfg.t_grid_size - 1);
      pts.push_back(XiPoint{n, t});
    }
  }
  return pts;
}

double objective(const AtomicMeasure& mu, const TrainingSet& data, Loss loss, int m, const BetaSpec& beta,
                 double lambda) {
  if (mu.dim() != data.d()) throw ValidationError("objective: measure and data differ in dimension");
  const Model mdl = measure_to_model(mu);
  return data_term(predictions(mdl, data, m, beta), data, loss) + lambda * tv_norm(mu);
}

double certificate(const AtomicMeasure& mu, const TrainingSet& data, Loss loss, int m, const BetaSpec& beta,
                   const XiPoint& p) {
  if (mu.dim() != data.d() || p.dim() != data.d()) throw ValidationError("certificate: dimension mismatch");
  const Eigen::VectorXd f = predictions(measure_to_model(mu), data, m, beta);
  return cert_value(residual_weights(f, data, loss), data, m, beta, p);
}

Insertion insert_atom(const AtomicMeasure& mu, const TrainingSet& data, Loss loss, int m, const BetaSpec& beta,
                      const SolverConfig& cfg) {
  const Eigen::VectorXd f = predictions(measure_to_model(mu), data, m, beta);
  const Eigen::VectorXd r = residual_weights(f, data, loss);
  std::vector<XiPoint> pts;
  const auto g = grid_sup(r, data, m, beta, cfg, &pts);
  Insertion ins;
  ins.grid_sup = g.sup;
  if (g.sup == 0.0) return ins;
  XiPoint p = pts[g.index];
  if (cfg.candidates.empty() && cfg.refine_steps > 0) {
    p = refine_point(r, data, m, beta, p, cfg.refine_steps, default_t_range(data, cfg) / cfg.t_grid_size);
  }
  const double c = cert_value(r, data, m, beta, p);
  ins.insert = true;
  ins.point = p;
  ins.sign = c > 0.0 ? -1.0 : 1.0;
  ins.value = std::abs(c);
  return ins;
}

WeightSolve correct_weights(const std::vector<XiPoint>& points, const TrainingSet& data, Loss loss, int m,
                            const BetaSpec& beta, double lambda, const SolverConfig& cfg, std::vector<double> start) {
  const auto K = static_cast<Eigen::Index>(points.size());
  if (start.empty()) start.assign(points.size(), 0.0);
  if (static_cast<Eigen::Index>(start.size()) != K) throw ValidationError("correct_weights: start has wrong length");
  const Eigen::MatrixXd Phi = feature_matrix(points, data, m, beta);
  const double N = data.size();
  auto obj_of = [&](const Eigen::VectorXd& w) {
    const Eigen::VectorXd f = Phi * w;
    return data_term(f, data, loss) + lambda * w.lpNorm<1>();
  };
  Eigen::VectorXd w = Eigen::Map<const Eigen::VectorXd>(start.data(), K);
  WeightSolve out;
  double best = obj_of(w);
  Eigen::VectorXd best_w = w;
  if (K == 0) {
    out.objective = best;
    out.converged = true;
    return out;
  }

  if (loss == Loss::Squared) {
    const Eigen::MatrixXd G = Phi.transpose() * Phi;
    const double Lip = 2.0 / N * Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(G, Eigen::EigenvaluesOnly).eigenvalues().maxCoeff();
    if (!(Lip > 0.0)) {
      // All features vanish on the data: the minimizer is w = 0.
      const Eigen::VectorXd z = Eigen::VectorXd::Zero(K);
      const double oz = obj_of(z);
      if (oz <= best) {
        best = oz;
        best_w = z;
      }
      out.weights.assign(best_w.data(), best_w.data() + K);
      out.objective = best;
      out.converged = true;
      return out;
    }
    const Eigen::VectorXd Pty = Phi.transpose() * data.y;
    const double step = 1.0 / Lip;
    Eigen::VectorXd x = w, yk = w, x_prev = w;
    double tk = 1.0;
    double prev_obj = best;
    int calm = 0;
    for (int it = 1; it <= cfg.max_inner_iters; ++it) {
      const Eigen::VectorXd grad = 2.0 / N * (G * yk - Pty);
      Eigen::VectorXd xn = yk - step * grad;
      for (Eigen::Index k = 0; k < K; ++k) xn[k] = soft(xn[k], step * lambda);
      const double o = obj_of(xn);
      if (o > prev_obj) {
        // Restart momentum when the objective goes up.
        tk = 1.0;
        yk = x;
        continue;
      }
      const double tn = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * tk * tk));
      yk = xn + ((tk - 1.0) / tn) * (xn - x);
      x_prev = x;
      x = xn;
      tk = tn;
      out.iterations = it;
      if (o < best) {
        best = o;
        best_w = xn;
      }
      const double change = std::abs(prev_obj - o) / std::max(std::abs(o), 1e-300);
      prev_obj = o;
      calm = change < cfg.weight_tol ? calm + 1 : 0;
      if (calm >= 5) {
        out.converged = true;
        break;
      }
    }
  } else {
    // Proximal subgradient with diminishing steps; the best iterate is kept.
    const double colmax = std::max(1e-300, Phi.colwise().norm().maxCoeff());
    const double eta0 = N / (colmax * colmax);
    Eigen::VectorXd x = w;
    double window_best = best;
    for (int it = 1; it <= cfg.max_inner_iters; ++it) {
      const Eigen::VectorXd f = Phi * x;
      Eigen::VectorXd gsub(data.size());
      for (int i = 0; i < data.size(); ++i) gsub[i] = loss_derivative(Loss::Absolute, data.y[i], f[i]);
      const Eigen::VectorXd grad = Phi.transpose() * gsub / N;
      const double eta = eta0 / std::sqrt(static_cast<double>(it));
      x -= eta * grad;
      for (Eigen::Index k = 0; k < K; ++k) x[k] = soft(x[k], eta * lambda);
      const double o = obj_of(x);
      if (o < best) {
        best = o;
        best_w = x;
      }
      out.iterations = it;
      if (it % 500 == 0) {
        if (window_best - best <= cfg.weight_tol * std::max(std::abs(best), 1e-300) * 500) {
          out.converged = true;
          break;
        }
        window_best = best;
      }
    }
  }
  out.weights.assign(best_w.data(), best_w.data() + K);
  out.objective = best;
  return out;
}

SolveReport solve(const TrainingSet& data, Loss loss, int m, const BetaSpec& beta, const SolverConfig& cfg) {
  if (!(cfg.lambda > 0.0)) throw ValidationError("SolverConfig: lambda must be positive");
  if (cfg.max_outer_iters < 0) throw ValidationError("SolverConfig: max_outer_iters must be >= 0");
  if (beta.m() != m) throw ValidationError("solve: beta order differs from m");
  for (const auto& c : cfg.candidates)
    if (c.dim() != data.d()) throw ValidationError("SolverConfig: candidate dimension mismatch");
  const int d = data.d();
  const double lambda = cfg.lambda;
  const double prune_tol = cfg.prune_tol ? *cfg.prune_tol : 1e-8 * data.y.cwiseAbs().maxCoeff();
  const double t_scale = default_t_range(data, cfg) / std::max(1, cfg.t_grid_size);
  const bool fixed_grid = !cfg.candidates.empty();

  SolveReport rep;
  rep.N = data.size();
  rep.lambda = lambda;
  Model mdl;
  double obj = model_objective(mdl, data, loss, m, beta, lambda);
  rep.objective_trace.push_back(obj);
  int not_converged = 0;
  rep.exit_reason = "max_outer_iters";

  for (int it = 0; it <= cfg.max_outer_iters; ++it) {
    const Eigen::VectorXd f = predictions(mdl, data, m, beta);
    const Eigen::VectorXd r = residual_weights(f, data, loss);
    const auto g = grid_sup(r, data, m, beta, cfg, nullptr);
    rep.certificate_sup = g.sup;
    if (g.sup <= lambda * (1.0 + cfg.dual_gap_tol)) {
      rep.converged = true;
      rep.exit_reason = "certificate";
      break;
    }
    if (it == cfg.max_outer_iters) break;
    rep.outer_iterations = it + 1;

    const auto ins = insert_atom(model_to_measure(mdl, d), data, loss, m, beta, cfg);
    if (!ins.insert) {
      rep.exit_reason = "zero_certificate";
      break;
    }
    const bool present = std::any_of(mdl.points.begin(), mdl.points.end(), [&](const XiPoint& q) {
      return xi_distance(q, ins.point) <= Tolerances{}.merge;
    });
    if (!present) {
      mdl.points.push_back(ins.point);
      mdl.weights.push_back(0.0);
    }
    const double before = obj;
    solve_weights(mdl, data, loss, m, beta, lambda, cfg, obj, not_converged);
    if (cfg.joint_refine && !fixed_grid && !mdl.points.empty()) {
      slide(mdl, data, loss, m, beta, lambda, cfg, t_scale, obj, not_converged);
    }
    tidy(mdl, data, loss, m, beta, lambda, prune_tol, obj);
    rep.objective_trace.push_back(obj);
    if (present && !(obj < before)) {
      rep.exit_reason = "stalled";
      const Eigen::VectorXd f2 = predictions(mdl, data, m, beta);
      rep.certificate_sup = grid_sup(residual_weights(f2, data, loss), data, m, beta, cfg, nullptr).sup;
      break;
    }
  }

  rep.measure = model_to_measure(mdl, d);
  rep.network = network_from_measure(rep.measure, m, beta);
  rep.K = static_cast<int>(rep.measure.size());
  rep.tv = tv_norm(rep.measure);
  rep.path_norm_cylinder = path_norm(rep.network, PathNormMode::Cylinder);
  rep.path_norm_projective = path_norm(rep.network, PathNormMode::Projective);
  rep.representer_ok = rep.K <= rep.N;
  rep.weight_solves_not_converged = not_converged;
  return rep;
}

Decomposition decompose(const AtomicMeasure& mu, int m, const BetaSpec& beta) {
  Decomposition dc;
  dc.tau = signed_part(mu, m, SignedPart::Tau);
  dc.nu = signed_part(mu, m, SignedPart::Nu);
  dc.q_part = network_from_measure(dc.tau, m, beta);
  dc.p_part = polynomial_part_check(network_from_measure(dc.nu, m, beta));
  if (!dc.p_part.is_poly) {
    throw PolynomialCheckError("decompose: the odd part is not a polynomial (relative residual " +
                               std::to_string(dc.p_part.residual) + ")");
  }
  return dc;
}

Decomposition decompose(const RidgeNetwork& net) { return decompose(measure_from_network(net), net.m(), net.beta()); }

}  // namespace ridgetv
