#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "hammerstein/estimators.hpp"
#include "hammerstein/model.hpp"
#include "json.hpp"

namespace hammerstein {

/// Shortest decimal text that round-trips the double exactly.
std::string format_double(double v);

// Dataset CSV: header `t,u,y`; row t holds u_t and the output y_{t+1} it
// drives one step later, t = 0..N-1.
void write_dataset_csv(const std::filesystem::path& path, const Dataset& data);
Dataset read_dataset_csv(const std::filesystem::path& path);

struct DatasetMeta {
  int n = 0;
  int p = 0;
  int N = 0;
  std::uint64_t seed = 0;
  double snr = 0.0;
  double sigma2 = 0.0;
  Vector g_true;
  Vector c_true;
  double tail_energy = 0.0;
};

nlohmann::json to_json(const DatasetMeta& meta);
DatasetMeta meta_from_json(const nlohmann::json& j);

/// Estimate report: g_hat, c_hat, beta, sigma2, nll, iterations, rank_ratio,
/// timings (beta, sigma2 and nll are null for LS-OP).
nlohmann::json to_json(const EstimateReport& report);

nlohmann::json vector_json(const Vector& v);
Vector vector_from_json(const nlohmann::json& j);

}  // namespace hammerstein
