#include "bassnet/network_io.hpp"

#include <fstream>
#include <string>

namespace bassnet {

std::string_view to_string(StructureKind kind) {
  switch (kind) {
    case StructureKind::Complete: return "Complete";
    case StructureKind::OneSidedCircle: return "OneSidedCircle";
    case StructureKind::TwoSidedCircle: return "TwoSidedCircle";
    case StructureKind::CartesianTorus: return "CartesianTorus";
    case StructureKind::Custom: return "Custom";
  }
  return "Custom";
}

StructureKind structure_kind_from_string(std::string_view name) {
  for (auto k : {StructureKind::Complete, StructureKind::OneSidedCircle, StructureKind::TwoSidedCircle,
                 StructureKind::CartesianTorus, StructureKind::Custom}) {
    if (to_string(k) == name) return k;
  }
  throw InvalidArgument("unknown structure tag '" + std::string(name) + "'");
}

nlohmann::json network_to_json(const Network& net) {
  nlohmann::json doc;
  doc["m"] = net.size();
  doc["p"] = std::vector<double>(net.p().begin(), net.p().end());
  auto edges = nlohmann::json::array();
  for (const Edge& e : net.edges()) edges.push_back({e.from, e.to, e.rate});
  doc["edges"] = std::move(edges);
  doc["structure_tag"] = std::string(to_string(net.structure().kind));
  if (net.structure().kind == StructureKind::CartesianTorus)
    doc["torus"] = {{"d", net.structure().torus_dim}, {"side", net.structure().torus_side}};
  if (net.policy() == ZeroHazardPolicy::Allow) doc["allow_zero_hazard"] = true;
  return doc;
}

Network network_from_json(const nlohmann::json& doc) {
  try {
    const auto p_list = doc.at("p").get<std::vector<double>>();
    Vector p = Eigen::Map<const Vector>(p_list.data(), static_cast<Index>(p_list.size()));
    if (doc.contains("m") && doc.at("m").get<Index>() != p.size())
      throw InvalidArgument("field m does not match the length of p");
    std::vector<Edge> edges;
    for (const auto& e : doc.at("edges")) {
      if (!e.is_array() || e.size() != 3) throw InvalidArgument("each edge must be [i, j, rate]");
      edges.push_back({e[0].get<Index>(), e[1].get<Index>(), e[2].get<double>()});
    }
    StructureTag tag{structure_kind_from_string(doc.value("structure_tag", std::string("Custom")))};
    if (tag.kind == StructureKind::CartesianTorus) {
      tag.torus_dim = doc.at("torus").at("d").get<int>();
      tag.torus_side = doc.at("torus").at("side").get<int>();
    }
    const auto policy =
        doc.value("allow_zero_hazard", false) ? ZeroHazardPolicy::Allow : ZeroHazardPolicy::Reject;
    return Network(std::move(p), std::move(edges), tag, policy);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("malformed network document: ") + e.what());
  }
}

Network load_network(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open network file " + path.string());
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument("cannot parse " + path.string() + ": " + e.what());
  }
  return network_from_json(doc);
}

void save_network(const Network& net, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw InvalidArgument("cannot write " + path.string());
  out << network_to_json(net).dump(2) << '\n';
}

}  // namespace bassnet
