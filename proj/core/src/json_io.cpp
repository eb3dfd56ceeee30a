#include "sibm/json_io.hpp"

#include <fstream>
#include <istream>
#include <stdexcept>

#include <json.hpp>

namespace sibm::io {

using nlohmann::json;

SetList read_set_list(std::istream& in) {
  json doc = json::parse(in);
  SetList list;
  list.dim = doc.at("dim").get<std::size_t>();
  if (list.dim < 1) throw std::invalid_argument("set list: dim must be >= 1");
  for (const auto& entry : doc.at("sets")) {
    Corner c = entry.get<Corner>();
    if (c.size() != list.dim) {
      throw std::invalid_argument("set list: corner arity does not match dim");
    }
    list.sets.push_back(Rect{std::move(c)});
  }
  return list;
}

SetList read_set_list_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open set list file: " + path);
  return read_set_list(in);
}

std::string write_set_list(const SetList& list) {
  json doc;
  doc["dim"] = list.dim;
  doc["sets"] = json::array();
  for (const Rect& r : list.sets) doc["sets"].push_back(r.corner);
  return doc.dump(2);
}

UnionSet read_union(std::istream& in) {
  json doc = json::parse(in);
  std::vector<Corner> corners;
  for (const auto& entry : doc.at("corners")) corners.push_back(entry.get<Corner>());
  return union_canonicalize(std::move(corners));
}

std::string write_union(const UnionSet& u) {
  json doc;
  doc["corners"] = json::array();
  for (const Corner& c : u.corners) doc["corners"].push_back(c);
  return doc.dump(2);
}

std::string lattice_report(const Numbering& num, const CellDecomposition& cells,
                           const Flow& flow) {
  json doc;
  doc["numbering"] = num.order;
  doc["cells"] = json::array();
  for (const Cell& c : cells.cells) {
    doc["cells"].push_back({{"i", c.index}, {"measure", c.measure}});
  }
  doc["flow"] = {{"alpha", flow.alphas}, {"theta", flow.clock}};
  return doc.dump(2);
}

}  // namespace sibm::io
