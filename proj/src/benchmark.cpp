#include "hammerstein/benchmark.hpp"

#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "hammerstein/errors.hpp"
#include "hammerstein/estimators.hpp"
#include "hammerstein/io.hpp"
#include "hammerstein/metrics.hpp"
#include "hammerstein/model.hpp"

namespace hammerstein {
namespace {

constexpr const char* kRunsSchema = "# hammerstein-bench runs.csv v1";
constexpr const char* kSummarySchema = "# hammerstein-bench summary.csv v1";

bool known_estimator(const std::string& name) { return name == "kop" || name == "lsop"; }

EstimatorOutcome failed(const std::string& estimator, const std::string& code, const std::string& message) {
  EstimatorOutcome o;
  o.estimator = estimator;
  o.status = code;
  o.message = message;
  o.fit_g = o.fit_f = std::numeric_limits<double>::quiet_NaN();
  return o;
}

EstimatorOutcome score(const std::string& estimator, const EstimateReport& rep, const Vector& g_true,
                       const Vector& f_true, const Matrix& F) {
  // Both sides live in the same gauge; a mismatch means a normalization bug.
  if (std::abs(rep.g_hat.norm() - 1.0) > 1e-8 || leading_sign(rep.g_hat) < 0.0)
    throw InternalConsistency("estimate is not in the unit-norm, positive-lead gauge");
  EstimatorOutcome o;
  o.estimator = estimator;
  o.fit_g = fit_g(g_true, rep.g_hat);
  o.fit_f = fit_f(f_true, F * rep.c_hat);
  o.rank_ratio = rep.diagnostics.rank_ratio;
  o.nll = rep.diagnostics.nll;
  o.iterations = rep.diagnostics.iterations;
  o.converged = rep.diagnostics.converged;
  o.seconds = rep.seconds;
  o.g_hat = rep.g_hat;
  o.c_hat = rep.c_hat;
  return o;
}

std::string csv_number(double v) { return std::isfinite(v) ? format_double(v) : std::string(); }

std::string snr_label(double snr) {
  std::ostringstream s;
  s << snr;
  return s.str();
}

}  // namespace

void validate(const ExperimentConfig& c) {
  if (c.runs < 1) throw InvalidArgument("runs must be positive");
  if (c.snr.empty()) throw InvalidArgument("at least one SNR is required");
  for (double s : c.snr)
    if (!(s > 0.0) || !std::isfinite(s)) throw InvalidArgument("SNR values must be positive");
  if (c.N < 2 || c.n < 1 || c.p < 1) throw InvalidArgument("N, n and p must be positive (N >= 2)");
  if (c.p > kMaxLegendreDegree + 1) throw InvalidArgument("p exceeds the Legendre table");
  if (c.workers < 1) throw InvalidArgument("workers must be positive");
  if (c.restarts < 1) throw InvalidArgument("restarts must be positive");
  if (c.estimators.empty()) throw InvalidArgument("no estimators selected");
  for (const auto& e : c.estimators)
    if (!known_estimator(e)) throw InvalidArgument("unknown estimator '" + e + "' (expected kop or lsop)");
}

ExperimentConfig paper_scale(ExperimentConfig config) {
  config.runs = 200;
  config.snr = {10.0, 20.0, 50.0, 100.0};
  config.N = 1000;
  config.n = 30;
  config.p = 5;
  return config;
}

ExperimentConfig config_from_json(const nlohmann::json& j, ExperimentConfig c) {
  try {
    if (j.value("paper_scale", false)) c = paper_scale(c);
    c.runs = j.value("runs", c.runs);
    if (j.contains("snr")) c.snr = j["snr"].get<std::vector<double>>();
    c.N = j.value("N", c.N);
    c.n = j.value("n", c.n);
    c.p = j.value("p", c.p);
    c.seed = j.value("seed", c.seed);
    if (j.contains("estimators")) c.estimators = j["estimators"].get<std::vector<std::string>>();
    if (j.contains("out")) c.out = j["out"].get<std::string>();
    c.workers = j.value("workers", c.workers);
    c.restarts = j.value("restarts", c.restarts);
    c.timings = j.value("timings", c.timings);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("config: ") + e.what());
  }
  return c;
}

RunResult run_single(const ExperimentConfig& config, int snr_index, int run) {
  RunResult r;
  r.snr_index = snr_index;
  r.snr = config.snr.at(snr_index);
  r.run = run;

  Rng rng = substream(config.seed, static_cast<std::uint64_t>(snr_index) + 1, static_cast<std::uint64_t>(run));
  const std::uint64_t estimator_seed = rng();
  HammersteinSystem sys;
  Dataset data;
  Matrix F;
  try {
    sys = random_system(rng, config.n, config.p);
    const Vector u = gaussian_input(rng, config.N);
    r.sigma2 = snr_to_sigma2(sys, u, r.snr);
    data = simulate(sys, u, std::sqrt(r.sigma2), rng);
    data.snr = r.snr;
    F = basis_matrix(u, BasisSet{config.p});
  } catch (const Error& e) {
    for (const auto& name : config.estimators) r.outcomes.push_back(failed(name, e.code(), e.what()));
    return r;
  }
  r.g_true = sys.g;
  r.c_true = sys.c;
  r.tail_energy = sys.tail_energy;
  const Vector f_true = F * sys.c;

  for (const auto& name : config.estimators) {
    try {
      EstimateReport rep;
      if (name == "kop") {
        FitOptions opts;
        opts.restarts = config.restarts;
        rep = kop_estimate(data.y, data.u, BasisSet{config.p}, config.n, estimator_seed, opts);
      } else {
        rep = ls_op(data.y, toeplitz_mat(F, config.n), config.n, config.p);
      }
      r.outcomes.push_back(score(name, rep, sys.g, f_true, F));
    } catch (const Error& e) {
      r.outcomes.push_back(failed(name, e.code(), e.what()));
    } catch (const std::exception& e) {
      r.outcomes.push_back(failed(name, "exception", e.what()));
    }
  }
  return r;
}

std::vector<RunResult> run_all(const ExperimentConfig& config) {
  validate(config);
  const int total = config.runs * static_cast<int>(config.snr.size());
  std::vector<RunResult> results(total);
  if (config.workers == 1) {
    for (int k = 0; k < total; ++k) results[k] = run_single(config, k / config.runs, k % config.runs);
  } else {
#pragma omp parallel for schedule(dynamic, 1) num_threads(config.workers)
    for (int k = 0; k < total; ++k) results[k] = run_single(config, k / config.runs, k % config.runs);
  }
  return results;
}

double quantile(std::vector<double> v, double q) {
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(v.begin(), v.end());
  const double pos = q * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

std::vector<SummaryRow> summarize(const ExperimentConfig& config, const std::vector<RunResult>& results) {
  std::vector<SummaryRow> rows;
  for (std::size_t s = 0; s < config.snr.size(); ++s) {
    for (std::size_t e = 0; e < config.estimators.size(); ++e) {
      SummaryRow row;
      row.snr = config.snr[s];
      row.estimator = config.estimators[e];
      std::vector<double> fg, ff;
      for (const auto& r : results) {
        if (r.snr_index != static_cast<int>(s)) continue;
        const auto& o = r.outcomes.at(e);
        if (o.ok()) {
          ++row.ok;
          fg.push_back(o.fit_g);
          ff.push_back(o.fit_f);
        } else {
          ++row.failed;
        }
      }
      row.fit_g_q1 = quantile(fg, 0.25);
      row.fit_g_median = quantile(fg, 0.5);
      row.fit_g_q3 = quantile(fg, 0.75);
      row.fit_f_q1 = quantile(ff, 0.25);
      row.fit_f_median = quantile(ff, 0.5);
      row.fit_f_q3 = quantile(ff, 0.75);
      rows.push_back(row);
    }
  }
  return rows;
}

std::string runs_csv(const ExperimentConfig& config, const std::vector<RunResult>& results) {
  std::ostringstream out;
  out << kRunsSchema << '\n';
  out << "snr,run,estimator,status,fit_g,fit_f,rank_ratio,nll,iterations,converged";
  if (config.timings) out << ",seconds";
  out << '\n';
  for (const auto& r : results) {
    for (const auto& o : r.outcomes) {
      out << snr_label(r.snr) << ',' << r.run << ',' << o.estimator << ',' << o.status << ',' << csv_number(o.fit_g)
          << ',' << csv_number(o.fit_f) << ',' << (o.ok() ? csv_number(o.rank_ratio) : "") << ','
          << (o.ok() && o.estimator == "kop" ? csv_number(o.nll) : "") << ',' << o.iterations << ','
          << (o.converged ? 1 : 0);
      if (config.timings) out << ',' << csv_number(o.seconds);
      out << '\n';
    }
  }
  return out.str();
}

std::string summary_csv(const std::vector<SummaryRow>& rows) {
  std::ostringstream out;
  out << kSummarySchema << '\n';
  out << "snr,estimator,ok,failed,fit_g_q1,fit_g_median,fit_g_q3,fit_f_q1,fit_f_median,fit_f_q3\n";
  for (const auto& r : rows)
    out << snr_label(r.snr) << ',' << r.estimator << ',' << r.ok << ',' << r.failed << ',' << csv_number(r.fit_g_q1)
        << ',' << csv_number(r.fit_g_median) << ',' << csv_number(r.fit_g_q3) << ',' << csv_number(r.fit_f_q1) << ','
        << csv_number(r.fit_f_median) << ',' << csv_number(r.fit_f_q3) << '\n';
  return out.str();
}

std::string runs_jsonl(const std::vector<RunResult>& results) {
  std::ostringstream out;
  for (const auto& r : results) {
    nlohmann::json j;
    j["snr"] = r.snr;
    j["run"] = r.run;
    j["sigma2"] = r.sigma2;
    j["tail_energy"] = r.tail_energy;
    j["g_true"] = vector_json(r.g_true);
    j["c_true"] = vector_json(r.c_true);
    for (const auto& o : r.outcomes) {
      nlohmann::json e{{"status", o.status}};
      if (o.ok()) {
        e["fit_g"] = o.fit_g;
        e["fit_f"] = o.fit_f;
        e["g_hat"] = vector_json(o.g_hat);
        e["c_hat"] = vector_json(o.c_hat);
      } else {
        e["message"] = o.message;
      }
      j["estimates"][o.estimator] = e;
    }
    out << j.dump() << '\n';
  }
  return out.str();
}

BoxStats box_stats(const std::vector<double>& values) {
  BoxStats b;
  if (values.empty()) return b;
  b.q1 = quantile(values, 0.25);
  b.median = quantile(values, 0.5);
  b.q3 = quantile(values, 0.75);
  const double iqr = b.q3 - b.q1;
  const double lo_fence = b.q1 - 1.5 * iqr;
  const double hi_fence = b.q3 + 1.5 * iqr;
  b.whisker_lo = b.q1;
  b.whisker_hi = b.q3;
  for (double v : values) {
    if (v < lo_fence || v > hi_fence) {
      b.outliers.push_back(v);
      continue;
    }
    b.whisker_lo = std::min(b.whisker_lo, v);
    b.whisker_hi = std::max(b.whisker_hi, v);
  }
  std::sort(b.outliers.begin(), b.outliers.end());
  return b;
}

std::string boxplot_svg(const ExperimentConfig& config, const std::vector<RunResult>& results,
                        const std::string& metric) {
  const bool use_g = metric == "fit_g";
  const std::size_t n_snr = config.snr.size();
  const std::size_t n_est = config.estimators.size();

  std::vector<std::vector<BoxStats>> boxes(n_snr, std::vector<BoxStats>(n_est));
  double ymin = 100.0;
  for (std::size_t s = 0; s < n_snr; ++s) {
    for (std::size_t e = 0; e < n_est; ++e) {
      std::vector<double> vals;
      for (const auto& r : results)
        if (r.snr_index == static_cast<int>(s) && r.outcomes.at(e).ok())
          vals.push_back(use_g ? r.outcomes[e].fit_g : r.outcomes[e].fit_f);
      boxes[s][e] = box_stats(vals);
      if (!vals.empty()) ymin = std::min(ymin, boxes[s][e].whisker_lo);
    }
  }
  ymin = std::floor((ymin - 5.0) / 10.0) * 10.0;
  const double ymax = 100.0;

  const double width = 160.0 * static_cast<double>(n_snr) + 120.0;
  const double height = 360.0;
  const double left = 60.0, right = 20.0, top = 40.0, bottom = 60.0;
  const double plot_w = width - left - right;
  const double plot_h = height - top - bottom;
  auto ypix = [&](double v) { return top + (ymax - std::max(v, ymin)) / (ymax - ymin) * plot_h; };
  static const char* colors[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728"};

  std::ostringstream svg;
  svg.setf(std::ios::fixed);
  svg.precision(2);
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<text x=\"" << width / 2 << "\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">"
      << (use_g ? "Impulse response fit (%)" : "Static nonlinearity fit (%)") << "</text>\n";
  for (int k = 0; k <= 5; ++k) {
    const double v = ymin + (ymax - ymin) * k / 5.0;
    svg << "<line x1=\"" << left << "\" x2=\"" << left + plot_w << "\" y1=\"" << ypix(v) << "\" y2=\"" << ypix(v)
        << "\" stroke=\"#ddd\"/>\n";
    svg << "<text x=\"" << left - 6 << "\" y=\"" << ypix(v) + 4 << "\" text-anchor=\"end\">" << v << "</text>\n";
  }
  svg << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << plot_w << "\" height=\"" << plot_h
      << "\" fill=\"none\" stroke=\"black\"/>\n";

  const double group_w = plot_w / static_cast<double>(n_snr);
  const double box_w = std::min(40.0, group_w / (static_cast<double>(n_est) + 1.0));
  for (std::size_t s = 0; s < n_snr; ++s) {
    const double gx = left + group_w * static_cast<double>(s);
    svg << "<text x=\"" << gx + group_w / 2 << "\" y=\"" << top + plot_h + 20 << "\" text-anchor=\"middle\">SNR "
        << snr_label(config.snr[s]) << "</text>\n";
    for (std::size_t e = 0; e < n_est; ++e) {
      const BoxStats& b = boxes[s][e];
      const double cx = gx + group_w * (static_cast<double>(e) + 1.0) / (static_cast<double>(n_est) + 1.0);
      const char* col = colors[e % 4];
      svg << "<line x1=\"" << cx << "\" x2=\"" << cx << "\" y1=\"" << ypix(b.whisker_hi) << "\" y2=\""
          << ypix(b.whisker_lo) << "\" stroke=\"black\"/>\n";
      svg << "<rect x=\"" << cx - box_w / 2 << "\" y=\"" << ypix(b.q3) << "\" width=\"" << box_w << "\" height=\""
          << ypix(b.q1) - ypix(b.q3) << "\" fill=\"" << col << "\" fill-opacity=\"0.6\" stroke=\"black\"/>\n";
      svg << "<line x1=\"" << cx - box_w / 2 << "\" x2=\"" << cx + box_w / 2 << "\" y1=\"" << ypix(b.median)
          << "\" y2=\"" << ypix(b.median) << "\" stroke=\"black\" stroke-width=\"2\"/>\n";
      for (double o : b.outliers)
        svg << "<circle cx=\"" << cx << "\" cy=\"" << ypix(o) << "\" r=\"2.5\" fill=\"none\" stroke=\"" << col
            << "\"/>\n";
    }
  }
  for (std::size_t e = 0; e < n_est; ++e) {
    const double lx = left + 10 + 90.0 * static_cast<double>(e);
    svg << "<rect x=\"" << lx << "\" y=\"" << height - 22 << "\" width=\"12\" height=\"12\" fill=\"" << colors[e % 4]
        << "\" fill-opacity=\"0.6\" stroke=\"black\"/>\n";
    svg << "<text x=\"" << lx + 16 << "\" y=\"" << height - 12 << "\">" << config.estimators[e] << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

BenchmarkOutcome run_benchmark(const ExperimentConfig& config) {
  BenchmarkOutcome out;
  out.results = run_all(config);
  out.summary = summarize(config, out.results);
  for (const auto& r : out.results)
    for (const auto& o : r.outcomes)
      if (!o.ok()) ++out.failures;

  std::filesystem::create_directories(config.out);
  auto write = [&](const char* name, const std::string& text) {
    std::ofstream f(config.out / name, std::ios::binary);
    if (!f) throw InvalidArgument("cannot write " + (config.out / name).string());
    f << text;
  };
  write("runs.csv", runs_csv(config, out.results));
  write("runs.jsonl", runs_jsonl(out.results));
  write("summary.csv", summary_csv(out.summary));
  write("boxplot_g.svg", boxplot_svg(config, out.results, "fit_g"));
  write("boxplot_f.svg", boxplot_svg(config, out.results, "fit_f"));
  return out;
}

}  // namespace hammerstein
