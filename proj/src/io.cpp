#include "hammerstein/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <vector>

#include "hammerstein/errors.hpp"

namespace hammerstein {

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void write_dataset_csv(const std::filesystem::path& path, const Dataset& data) {
  if (data.u.size() != data.y.size()) throw InvalidArgument("dataset: u and y lengths differ");
  std::ofstream out(path);
  if (!out) throw InvalidArgument("cannot open " + path.string() + " for writing");
  out << "t,u,y\n";
  for (Eigen::Index t = 0; t < data.u.size(); ++t)
    out << t << ',' << format_double(data.u[t]) << ',' << format_double(data.y[t]) << '\n';
}

Dataset read_dataset_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line) || line.rfind("t,u,y", 0) != 0)
    throw InvalidArgument(path.string() + ": expected header t,u,y");
  std::vector<double> u;
  std::vector<double> y;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream row(line);
    std::string t, us, ys;
    if (!std::getline(row, t, ',') || !std::getline(row, us, ',') || !std::getline(row, ys, ','))
      throw InvalidArgument(path.string() + ": malformed row '" + line + "'");
    if (std::stoll(t) != static_cast<long long>(u.size()))
      throw InvalidArgument(path.string() + ": rows must be ordered t = 0, 1, ...");
    u.push_back(std::stod(us));
    y.push_back(std::stod(ys));
  }
  if (u.empty()) throw InvalidArgument(path.string() + ": no samples");
  Dataset d;
  d.u = Eigen::Map<Vector>(u.data(), static_cast<Eigen::Index>(u.size()));
  d.y = Eigen::Map<Vector>(y.data(), static_cast<Eigen::Index>(y.size()));
  return d;
}

nlohmann::json vector_json(const Vector& v) {
  return nlohmann::json(std::vector<double>(v.data(), v.data() + v.size()));
}

Vector vector_from_json(const nlohmann::json& j) {
  const auto v = j.get<std::vector<double>>();
  return Eigen::Map<const Vector>(v.data(), static_cast<Eigen::Index>(v.size()));
}

nlohmann::json to_json(const DatasetMeta& m) {
  return {{"n", m.n},
          {"p", m.p},
          {"N", m.N},
          {"seed", m.seed},
          {"snr", m.snr},
          {"sigma2", m.sigma2},
          {"basis", "legendre"},
          {"g_true", vector_json(m.g_true)},
          {"c_true", vector_json(m.c_true)},
          {"tail_energy", m.tail_energy}};
}

DatasetMeta meta_from_json(const nlohmann::json& j) {
  DatasetMeta m;
  m.n = j.at("n").get<int>();
  m.p = j.at("p").get<int>();
  m.N = j.value("N", 0);
  m.seed = j.value("seed", std::uint64_t{0});
  m.snr = j.value("snr", 0.0);
  m.sigma2 = j.value("sigma2", 0.0);
  if (j.contains("g_true")) m.g_true = vector_from_json(j["g_true"]);
  if (j.contains("c_true")) m.c_true = vector_from_json(j["c_true"]);
  m.tail_energy = j.value("tail_energy", 0.0);
  return m;
}

}  // namespace hammerstein
