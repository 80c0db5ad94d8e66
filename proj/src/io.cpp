#include "ridgetv/io.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <numbers>
#include <sstream>

namespace ridgetv::io {

namespace {

std::string format_double(double v) {
  if (!std::isfinite(v)) return "null";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  std::string s(buf);
  // Keep it a JSON number that reads back as floating point.
  if (s.find_first_of(".eE") == std::string::npos) s += ".0";
  return s;
}

void dump_rec(const json& j, int indent, int level, std::string& out) {
  const std::string pad = indent > 0 ? std::string(static_cast<std::size_t>(indent * (level + 1)), ' ') : "";
  const std::string pad_close = indent > 0 ? std::string(static_cast<std::size_t>(indent * level), ' ') : "";
  const char* nl = indent > 0 ? "\n" : "";
  switch (j.type()) {
    case json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{";
      out += nl;
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) {
          out += ",";
          out += nl;
        }
        first = false;
        out += pad;
        out += json(it.key()).dump();
        out += indent > 0 ? ": " : ":";
        dump_rec(it.value(), indent, level + 1, out);
      }
      out += nl;
      out += pad_close;
      out += "}";
      return;
    }
    case json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      // Arrays of scalars stay on one line.
      bool scalars = true;
      for (const auto& e : j) scalars = scalars && !e.is_structured();
      out += "[";
      bool first = true;
      for (const auto& e : j) {
        if (!first) out += scalars ? ", " : ",";
        if (!scalars) {
          out += nl;
          out += pad;
        }
        first = false;
        dump_rec(e, indent, level + 1, out);
      }
      if (!scalars) {
        out += nl;
        out += pad_close;
      }
      out += "]";
      return;
    }
    case json::value_t::number_float:
      out += format_double(j.get<double>());
      return;
    default:
      out += j.dump();
      return;
  }
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, ',')) {
    while (!cell.empty() && (cell.back() == '\r' || cell.back() == ' ')) cell.pop_back();
    std::size_t b = 0;
    while (b < cell.size() && cell[b] == ' ') ++b;
    out.push_back(cell.substr(b));
  }
  return out;
}

double parse_double(const std::string& s, const std::string& where) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw ValidationError(where + ": cannot parse '" + s + "' as a number");
  }
  if (used != s.size()) throw ValidationError(where + ": cannot parse '" + s + "' as a number");
  return v;
}

std::vector<double> json_vector(const json& j, const char* what) {
  if (!j.is_array()) throw ValidationError(std::string("JSON: '") + what + "' must be an array");
  std::vector<double> v;
  for (const auto& e : j) {
    if (!e.is_number()) throw ValidationError(std::string("JSON: '") + what + "' must hold numbers");
    v.push_back(e.get<double>());
  }
  return v;
}

template <class T>
void put_le(std::ostream& os, T v) {
  unsigned char b[sizeof(T)];
  std::memcpy(b, &v, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(b, b + sizeof(T));
  os.write(reinterpret_cast<const char*>(b), sizeof(T));
}

template <class T>
T get_le(std::istream& is) {
  unsigned char b[sizeof(T)];
  if (!is.read(reinterpret_cast<char*>(b), sizeof(T))) throw ValidationError("sinogram binary: truncated file");
  if constexpr (std::endian::native == std::endian::big) std::reverse(b, b + sizeof(T));
  T v;
  std::memcpy(&v, b, sizeof(T));
  return v;
}

}  // namespace

std::string dump(const json& j, int indent) {
  std::string out;
  dump_rec(j, indent, 0, out);
  return out;
}

json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError("malformed JSON in " + path.string() + ": " + e.what());
  }
}

void write_json(const std::filesystem::path& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out << dump(j) << "\n";
}

json to_json(const AtomicMeasure& mu) {
  json atoms = json::array();
  for (const auto& a : mu.atoms()) {
    atoms.push_back(json{{"w", a.weight},
                         {"n", std::vector<double>(a.point.n.coords().begin(), a.point.n.coords().end())},
                         {"t", a.point.t}});
  }
  return json{{"d", mu.dim()}, {"atoms", atoms}};
}

AtomicMeasure measure_from_json(const json& j) {
  if (!j.is_object() || !j.contains("d") || !j.contains("atoms")) {
    throw ValidationError("measure JSON needs fields 'd' and 'atoms'");
  }
  const int d = j.at("d").get<int>();
  std::vector<Atom> atoms;
  for (const auto& a : j.at("atoms")) {
    atoms.push_back(Atom{a.at("w").get<double>(), XiPoint{UnitVector(json_vector(a.at("n"), "n")), a.at("t").get<double>()}});
  }
  return AtomicMeasure(d, std::move(atoms));
}

json to_json(const BetaSpec& beta) {
  if (beta.kind() == BetaSpec::Kind::DefaultRational) return json{{"kind", "default_rational"}};
  return json{{"kind", "custom"}, {"name", beta.name()}};
}

BetaSpec beta_from_json(const json& j, int m) {
  const auto kind = j.value("kind", std::string("default_rational"));
  if (kind == "default_rational") return BetaSpec::default_rational(m);
  throw ValidationError("beta kind '" + kind + "' cannot be read back from JSON");
}

json to_json(const RidgeNetwork& net) {
  json neurons = json::array();
  for (const auto& nr : net.neurons()) {
    neurons.push_back(json{{"alpha", nr.alpha},
                           {"n", std::vector<double>(nr.point.n.coords().begin(), nr.point.n.coords().end())},
                           {"t", nr.point.t}});
  }
  return json{{"m", net.m()}, {"d", net.dim()}, {"beta", to_json(net.beta())}, {"neurons", neurons}};
}

RidgeNetwork network_from_json(const json& j) {
  if (!j.is_object()) throw ValidationError("network JSON must be an object");
  for (const char* k : {"m", "d", "neurons"})
    if (!j.contains(k)) throw ValidationError(std::string("network JSON lacks field '") + k + "'");
  const int m = j.at("m").get<int>();
  const int d = j.at("d").get<int>();
  const BetaSpec beta = beta_from_json(j.value("beta", json::object()), m);
  std::vector<Neuron> ns;
  for (const auto& e : j.at("neurons")) {
    const auto n = json_vector(e.at("n"), "n");
    if (static_cast<int>(n.size()) != d) throw ValidationError("network JSON: neuron dimension differs from d");
    ns.push_back(Neuron{e.at("alpha").get<double>(), XiPoint{UnitVector(n), e.at("t").get<double>()}});
  }
  return RidgeNetwork(m, d, std::move(ns), beta);
}

json to_json(const SolveReport& rep) {
  return json{{"converged", rep.converged},
              {"exit_reason", rep.exit_reason},
              {"K", rep.K},
              {"N", rep.N},
              {"representer_ok", rep.representer_ok},
              {"lambda", rep.lambda},
              {"tv", rep.tv},
              {"path_norm", json{{"cylinder", rep.path_norm_cylinder}, {"projective", rep.path_norm_projective}}},
              {"certificate_sup", rep.certificate_sup},
              {"outer_iterations", rep.outer_iterations},
              {"weight_solves_not_converged", rep.weight_solves_not_converged},
              {"objective_trace", rep.objective_trace},
              {"measure", to_json(rep.measure)}};
}

json to_json(const PolynomialFit& fit) {
  json terms = json::array();
  for (std::size_t k = 0; k < fit.exponents.size(); ++k)
    terms.push_back(json{{"exponents", fit.exponents[k]}, {"coeff", fit.coefficients[k]}});
  return json{{"is_poly", fit.is_poly}, {"degree", fit.degree}, {"residual", fit.residual}, {"terms", terms}};
}

TrainingSet read_training_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw ValidationError(path.string() + ": empty file");
  const auto header = split_csv(line);
  if (header.size() < 2 || header.back() != "y") {
    throw ValidationError(path.string() + ": header must be x_1,...,x_d,y");
  }
  const std::size_t d = header.size() - 1;
  for (std::size_t i = 0; i < d; ++i) {
    if (header[i] != "x_" + std::to_string(i + 1)) {
      throw ValidationError(path.string() + ": header must be x_1,...,x_d,y");
    }
  }
  std::vector<std::vector<double>> rows;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \r\t") == std::string::npos) continue;
    const auto cells = split_csv(line);
    const std::string where = path.string() + ":" + std::to_string(lineno);
    if (cells.size() != d + 1) {
      throw ValidationError(where + ": expected " + std::to_string(d + 1) + " columns, found " +
                            std::to_string(cells.size()));
    }
    std::vector<double> r;
    for (const auto& c : cells) r.push_back(parse_double(c, where));
    rows.push_back(std::move(r));
  }
  if (rows.empty()) throw ValidationError(path.string() + ": no data rows");
  Eigen::MatrixXd X(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(d));
  Eigen::VectorXd y(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t a = 0; a < d; ++a) X(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(a)) = rows[i][a];
    y[static_cast<Eigen::Index>(i)] = rows[i][d];
  }
  return TrainingSet(std::move(X), std::move(y));
}

void write_training_csv(const std::filesystem::path& path, const TrainingSet& data) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  for (int a = 0; a < data.d(); ++a) out << "x_" << a + 1 << ",";
  out << "y\n";
  for (int i = 0; i < data.size(); ++i) {
    for (int a = 0; a < data.d(); ++a) out << format_double(data.X(i, a)) << ",";
    out << format_double(data.y[i]) << "\n";
  }
}

void write_sinogram_csv(const std::filesystem::path& path, const Sinogram& s) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out << "theta_or_index,t,value\n";
  for (std::size_t j = 0; j < s.n_dir(); ++j) {
    const std::string key = s.d() == 2 && j < s.grid.angles.size() ? format_double(s.grid.angles[j]) : std::to_string(j);
    for (int i = 0; i < s.n_t(); ++i) out << key << "," << format_double(s.tgrid[i]) << "," << format_double(s.at(j, i)) << "\n";
  }
}

Sinogram read_sinogram_csv(const std::filesystem::path& path, int d) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line) || split_csv(line) != std::vector<std::string>{"theta_or_index", "t", "value"}) {
    throw ValidationError(path.string() + ": header must be theta_or_index,t,value");
  }
  std::vector<double> keys;
  std::vector<double> ts;
  std::vector<double> vals;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \r\t") == std::string::npos) continue;
    const auto c = split_csv(line);
    const std::string where = path.string() + ":" + std::to_string(lineno);
    if (c.size() != 3) throw ValidationError(where + ": expected 3 columns");
    const double key = parse_double(c[0], where);
    if (keys.empty() || keys.back() != key) keys.push_back(key);
    if (keys.size() == 1) ts.push_back(parse_double(c[1], where));
    vals.push_back(parse_double(c[2], where));
  }
  if (keys.empty() || ts.size() < 4) throw ValidationError(path.string() + ": too few rows");
  if (vals.size() != keys.size() * ts.size()) throw ValidationError(path.string() + ": ragged sinogram");
  const double h = (ts.back() - ts.front()) / static_cast<double>(ts.size() - 1);
  TGrid tg{h, static_cast<int>(ts.size())};
  if (std::abs(tg[0] - ts.front()) > 1e-9 * std::max(1.0, std::abs(ts.front()))) {
    throw ValidationError(path.string() + ": t-grid is not symmetric about 0");
  }
  DirectionGrid grid;
  if (d == 2) {
    const auto n = static_cast<int>(keys.size());
    grid.d = 2;
    for (int j = 0; j < n; ++j) {
      grid.angles.push_back(keys[static_cast<std::size_t>(j)]);
      grid.dirs.push_back(UnitVector::from_angle(keys[static_cast<std::size_t>(j)]));
      grid.weights.push_back(2.0 * std::numbers::pi / n);
    }
    for (int j = 0; j < n; ++j) {
      int anti = -1;
      for (int k = 0; k < n && anti < 0; ++k) {
        if (xi_distance(XiPoint{grid.dirs[static_cast<std::size_t>(k)], 0.0},
                        XiPoint{-grid.dirs[static_cast<std::size_t>(j)], 0.0}) < 1e-9)
          anti = k;
      }
      grid.antipode.push_back(anti);
    }
  } else {
    grid = DirectionGrid::for_dimension(d, static_cast<int>(keys.size()));
  }
  Sinogram s(grid, tg, Parity::None);
  s.values = std::move(vals);
  return s;
}

void write_sinogram_binary(const std::filesystem::path& path, const Sinogram& s) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out.write("SINO", 4);
  put_le<std::int32_t>(out, s.d());
  put_le<std::int32_t>(out, static_cast<std::int32_t>(s.n_dir()));
  put_le<std::int32_t>(out, s.n_t());
  put_le<double>(out, s.tgrid.T());
  put_le<double>(out, s.tgrid.h);
  for (double v : s.values) put_le<double>(out, v);
}

Sinogram read_sinogram_binary(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open " + path.string());
  char magic[4];
  if (!in.read(magic, 4) || std::memcmp(magic, "SINO", 4) != 0) throw ValidationError(path.string() + ": bad magic");
  const int d = get_le<std::int32_t>(in);
  const int n_dir = get_le<std::int32_t>(in);
  const int n_t = get_le<std::int32_t>(in);
  const double T = get_le<double>(in);
  const double h = get_le<double>(in);
  if (n_dir < 1 || n_t < 4 || !(h > 0.0)) throw ValidationError(path.string() + ": bad header");
  TGrid tg{h, n_t};
  if (std::abs(tg.T() - T) > 1e-9 * std::max(1.0, T)) throw ValidationError(path.string() + ": inconsistent T and h_t");
  Sinogram s(DirectionGrid::for_dimension(d, n_dir), tg, Parity::None);
  for (double& v : s.values) v = get_le<double>(in);
  return s;
}

}  // namespace ridgetv::io
