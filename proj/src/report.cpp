#include "hammerstein/io.hpp"

namespace hammerstein {

nlohmann::json to_json(const EstimateReport& r) {
  nlohmann::json j;
  j["method"] = r.method;
  j["g_hat"] = vector_json(r.g_hat);
  j["c_hat"] = vector_json(r.c_hat);
  if (r.hyper) {
    j["beta"] = r.hyper->beta;
    j["sigma2"] = r.hyper->sigma2;
    j["nll"] = r.diagnostics.nll;
  } else {
    j["beta"] = nullptr;
    j["sigma2"] = nullptr;
    j["nll"] = nullptr;
  }
  j["iterations"] = r.diagnostics.iterations;
  j["converged"] = r.diagnostics.converged;
  j["rank_ratio"] = r.diagnostics.rank_ratio;
  j["condition"] = r.diagnostics.condition;
  j["timings"] = {{"total_seconds", r.seconds}};
  return j;
}

}  // namespace hammerstein
