#include "bassnet/curve_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

namespace bassnet {

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_curve_csv(const AdoptionCurve& curve, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw InvalidArgument("cannot write " + path.string());
  const bool band = curve.ci_half_width.has_value();
  out << (band ? "t,f,ci_half_width\n" : "t,f\n");
  for (Index i = 0; i < curve.size(); ++i) {
    out << format_double(curve.t[i]) << ',' << format_double(curve.f[i]);
    if (band) out << ',' << format_double((*curve.ci_half_width)[i]);
    out << '\n';
  }
}

AdoptionCurve read_curve_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw InvalidArgument("empty curve file " + path.string());
  const bool band = line == "t,f,ci_half_width";
  if (!band && line != "t,f") throw InvalidArgument("unexpected curve header in " + path.string());
  std::vector<double> t, f, ci;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string cell;
    std::vector<double> cells;
    while (std::getline(row, cell, ',')) cells.push_back(std::stod(cell));
    if (cells.size() != (band ? 3u : 2u)) throw InvalidArgument("malformed curve row in " + path.string());
    t.push_back(cells[0]);
    f.push_back(cells[1]);
    if (band) ci.push_back(cells[2]);
  }
  AdoptionCurve c;
  c.t = Eigen::Map<const Vector>(t.data(), static_cast<Index>(t.size()));
  c.f = Eigen::Map<const Vector>(f.data(), static_cast<Index>(f.size()));
  if (band) c.ci_half_width = Eigen::Map<const Vector>(ci.data(), static_cast<Index>(ci.size()));
  return c;
}

namespace {
std::vector<double> to_std(const Vector& v) { return {v.data(), v.data() + v.size()}; }
Vector to_eigen(const std::vector<double>& v) {
  return Eigen::Map<const Vector>(v.data(), static_cast<Index>(v.size()));
}
}  // namespace

nlohmann::json curve_to_json(const AdoptionCurve& curve) {
  nlohmann::json doc;
  doc["t"] = to_std(curve.t);
  doc["f"] = to_std(curve.f);
  if (curve.ci_half_width) doc["ci_half_width"] = to_std(*curve.ci_half_width);
  if (curve.n_realizations) doc["n_realizations"] = *curve.n_realizations;
  else doc["n_realizations"] = "exact";
  return doc;
}

AdoptionCurve curve_from_json(const nlohmann::json& doc) {
  AdoptionCurve c;
  c.t = to_eigen(doc.at("t").get<std::vector<double>>());
  c.f = to_eigen(doc.at("f").get<std::vector<double>>());
  if (doc.contains("ci_half_width")) c.ci_half_width = to_eigen(doc.at("ci_half_width").get<std::vector<double>>());
  if (doc.contains("n_realizations") && doc.at("n_realizations").is_number_unsigned())
    c.n_realizations = doc.at("n_realizations").get<std::uint64_t>();
  return c;
}

void write_json(const nlohmann::json& doc, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw InvalidArgument("cannot write " + path.string());
  out << doc.dump(2) << '\n';
}

void write_curve(const AdoptionCurve& curve, const std::filesystem::path& path, CurveFormat format) {
  if (format == CurveFormat::Csv) write_curve_csv(curve, path);
  else write_json(curve_to_json(curve), path);
}

}  // namespace bassnet
