#pragma once

// JSON and CSV/binary interchange for measures, networks, reports, training
// data and sinograms.

#include <filesystem>
#include <string>

#include <json.hpp>

#include "ridgetv/radon.hpp"
#include "ridgetv/ridge.hpp"
#include "ridgetv/solver.hpp"
#include "ridgetv/xi_geometry.hpp"

namespace ridgetv::io {

using json = nlohmann::ordered_json;

/// Serializes with every floating-point number printed as %.17g.
std::string dump(const json& j, int indent = 2);
json read_json(const std::filesystem::path& path);
void write_json(const std::filesystem::path& path, const json& j);

json to_json(const AtomicMeasure& mu);
AtomicMeasure measure_from_json(const json& j);

json to_json(const BetaSpec& beta);
BetaSpec beta_from_json(const json& j, int m);

json to_json(const RidgeNetwork& net);
RidgeNetwork network_from_json(const json& j);

json to_json(const SolveReport& rep);
json to_json(const PolynomialFit& fit);

/// Columns x_1..x_d,y with a header row.
TrainingSet read_training_csv(const std::filesystem::path& path);
void write_training_csv(const std::filesystem::path& path, const TrainingSet& data);

/// Rows "theta_or_index,t,value": the angle in radians for d = 2, the
/// direction index otherwise.
void write_sinogram_csv(const std::filesystem::path& path, const Sinogram& s);
/// Directions are rebuilt as DirectionGrid::for_dimension(d, n_dir); the
/// parity is unknown and set to none.
Sinogram read_sinogram_csv(const std::filesystem::path& path, int d);

/// "SINO", int32 d, n_dir, n_t, float64 T, h_t, then n_dir * n_t float64
/// values, all little-endian.
void write_sinogram_binary(const std::filesystem::path& path, const Sinogram& s);
Sinogram read_sinogram_binary(const std::filesystem::path& path);

}  // namespace ridgetv::io
