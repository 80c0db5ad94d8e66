// Python module _ridgetv: networks, training, the Green identity check, the
// filtered back-projection and the verification suites. Networks and reports
// cross the boundary as numpy arrays or JSON text.

#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ridgetv/io.hpp"
#include "ridgetv/lizorkin.hpp"
#include "ridgetv/parallel.hpp"
#include "ridgetv/radon.hpp"
#include "ridgetv/solver.hpp"
#include "ridgetv/verify.hpp"

namespace py = pybind11;
using namespace ridgetv;

namespace {

RidgeNetwork make_network(int m, const Eigen::VectorXd& alpha, const Eigen::MatrixXd& dirs, const Eigen::VectorXd& t) {
  if (dirs.rows() != alpha.size() || t.size() != alpha.size())
    throw ValidationError("network: alpha, directions and offsets must have the same length");
  std::vector<Neuron> neurons;
  for (Eigen::Index k = 0; k < alpha.size(); ++k) {
    std::vector<double> n(static_cast<std::size_t>(dirs.cols()));
    for (Eigen::Index c = 0; c < dirs.cols(); ++c) n[static_cast<std::size_t>(c)] = dirs(k, c);
    neurons.push_back({alpha[k], XiPoint{UnitVector(std::move(n)), t[k]}});
  }
  return RidgeNetwork(m, static_cast<int>(dirs.cols()), std::move(neurons), BetaSpec::default_rational(m));
}

Eigen::MatrixXd directions(const RidgeNetwork& net) {
  Eigen::MatrixXd D(static_cast<Eigen::Index>(net.size()), net.dim());
  for (std::size_t k = 0; k < net.size(); ++k)
    for (int c = 0; c < net.dim(); ++c) D(static_cast<Eigen::Index>(k), c) = net.neurons()[k].point.n[c];
  return D;
}

}  // namespace

PYBIND11_MODULE(_ridgetv, mod) {
  mod.doc() = "Sparse ridge networks with total-variation regularization";

  // later registrations are tried first, so the subclass goes second
  py::register_exception<Error>(mod, "RidgeTVError");
  py::register_exception<ValidationError>(mod, "ValidationError", PyExc_ValueError);

  mod.def("set_max_threads", &set_max_threads, py::arg("n"));
  mod.def("sigma", py::vectorize([](int m, double s) { return sigma_m(m, s); }), py::arg("m"), py::arg("s"),
          "Truncated power max(0, s)^(m-1) / (m-1)!");

  py::class_<RidgeNetwork>(mod, "Network")
      .def(py::init(&make_network), py::arg("m"), py::arg("alpha"), py::arg("directions"), py::arg("offsets"),
           "Neurons alpha_k sigma_m(n_k . x - t_k) with the default weight 1 / (1 + |t|^m)")
      .def_static(
          "from_json", [](const std::string& s) { return io::network_from_json(io::json::parse(s)); }, py::arg("text"))
      .def("to_json", [](const RidgeNetwork& n) { return io::dump(io::to_json(n)); })
      .def_property_readonly("m", &RidgeNetwork::m)
      .def_property_readonly("d", &RidgeNetwork::dim)
      .def("__len__", &RidgeNetwork::size)
      .def_property_readonly("alpha",
                             [](const RidgeNetwork& n) {
                               Eigen::VectorXd a(static_cast<Eigen::Index>(n.size()));
                               for (std::size_t k = 0; k < n.size(); ++k) a[static_cast<Eigen::Index>(k)] = n.neurons()[k].alpha;
                               return a;
                             })
      .def_property_readonly("directions", &directions)
      .def_property_readonly("offsets",
                             [](const RidgeNetwork& n) {
                               Eigen::VectorXd t(static_cast<Eigen::Index>(n.size()));
                               for (std::size_t k = 0; k < n.size(); ++k) t[static_cast<Eigen::Index>(k)] = n.neurons()[k].point.t;
                               return t;
                             })
      .def("__call__", [](const RidgeNetwork& n, const Eigen::MatrixXd& X) { return n.eval_batch(X); }, py::arg("X"))
      .def(
          "path_norm",
          [](const RidgeNetwork& n, const std::string& mode) {
            if (mode == "cylinder") return path_norm(n, PathNormMode::Cylinder);
            if (mode == "projective") return path_norm(n, PathNormMode::Projective);
            throw ValidationError("path_norm: mode must be cylinder or projective");
          },
          py::arg("mode") = "cylinder");

  mod.def(
      "solve",
      [](const Eigen::MatrixXd& X, const Eigen::VectorXd& y, int m, double lam, const std::string& loss, int directions,
         int t_points, int max_outer, double gap_tol) {
        SolverConfig cfg;
        cfg.lambda = lam;
        cfg.direction_grid_size = directions;
        cfg.t_grid_size = t_points;
        cfg.max_outer_iters = max_outer;
        cfg.dual_gap_tol = gap_tol;
        SolveReport rep;
        {
          py::gil_scoped_release release;
          rep = solve(TrainingSet(X, y), loss_from_string(loss), m, BetaSpec::default_rational(m), cfg);
        }
        return std::make_pair(rep.network, io::dump(io::to_json(rep)));
      },
      py::arg("X"), py::arg("y"), py::arg("m") = 2, py::arg("lam") = 1e-3, py::arg("loss") = "squared",
      py::arg("directions") = 128, py::arg("t_points") = 257, py::arg("max_outer") = 100, py::arg("gap_tol") = 1e-3,
      "Fits a network; returns (network, report JSON text)");

  mod.def(
      "green_check",
      [](const RidgeNetwork& net, int count, std::uint64_t seed, double sigma) {
        std::vector<std::tuple<std::string, double, double, double>> out;
        for (const auto& psi : make_lizorkin_xi_family(net.dim(), net.m(), count, seed, 1.0, sigma)) {
          const auto r = green_identity_check(net, psi);
          out.emplace_back(psi.tag(), r.lhs, r.rhs, r.scale);
        }
        return out;
      },
      py::arg("network"), py::arg("count") = 3, py::arg("seed") = 100, py::arg("sigma") = 0.5,
      "Weak-form Green identity against a seeded test-function family: (tag, lhs, rhs, scale) per function");

  mod.def(
      "fbp_lizorkin",
      [](int d, int k, double sigma, const Eigen::MatrixXd& points, double L, double h, double h_t, int n_dirs) {
        const auto phi = make_lizorkin_rd(d, k, sigma, {}, k > 0);
        if (points.cols() != d) throw ValidationError("fbp_lizorkin: points must have d columns");
        const auto S = radon([&](std::span<const double> x) { return phi(x); }, DirectionGrid::for_dimension(d, n_dirs),
                             default_tgrid(d, L, h_t), {L, h});
        std::vector<std::vector<double>> pts;
        Eigen::VectorXd exact(points.rows());
        for (Eigen::Index i = 0; i < points.rows(); ++i) {
          pts.emplace_back(points.cols());
          for (Eigen::Index c = 0; c < points.cols(); ++c) pts.back()[static_cast<std::size_t>(c)] = points(i, c);
          exact[i] = phi(pts.back());
        }
        const auto rec = fbp_invert(S, d, pts);
        return std::make_pair(exact, Eigen::VectorXd(Eigen::Map<const Eigen::VectorXd>(rec.data(), points.rows())));
      },
      py::arg("d"), py::arg("k"), py::arg("sigma"), py::arg("points"), py::arg("L") = 8.0, py::arg("h") = 0.05,
      py::arg("h_t") = 0.05, py::arg("n_dirs") = 0,
      "Radon transform and filtered back-projection of Delta^k exp(-|x|^2 / (2 sigma^2)); returns (exact, recon)");

  mod.def(
      "verify",
      [](const std::string& suite) {
        verify::SuiteResult r;
        {
          py::gil_scoped_release release;
          r = verify::run_suite(suite);
        }
        return io::dump(verify::to_json(r));
      },
      py::arg("suite") = "types", "Runs a verification suite; returns its JSON summary");
}
