#include "dunkl/io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "dunkl/errors.hpp"

namespace dunkl {
namespace {

using nlohmann::json;

json vec_json(const Vec& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

Vec json_vec(const json& j, std::size_t n) {
  const auto v = j.get<std::vector<double>>();
  if (v.size() != n) throw ValidationError("vector has " + std::to_string(v.size()) + " entries, expected " + std::to_string(n));
  return Eigen::Map<const Vec>(v.data(), static_cast<Eigen::Index>(v.size()));
}

}  // namespace

std::string root_system_to_json(const RootSystem& r, int indent) {
  json j;
  j["name"] = r.name();
  j["ambient_dim"] = r.ambient_dim();
  j["roots"] = json::array();
  for (const Vec& a : r.roots()) j["roots"].push_back(vec_json(a));
  j["kappa"] = r.kappa();
  j["positive_choice_vector"] = vec_json(r.positive_choice());
  return j.dump(indent);
}

RootSystem root_system_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("root system JSON: ") + e.what());
  }
  try {
    const auto n = j.at("ambient_dim").get<std::size_t>();
    std::vector<Vec> roots;
    for (const auto& a : j.at("roots")) roots.push_back(json_vec(a, n));
    std::vector<double> kappa;
    if (j.contains("kappa")) {
      kappa = j["kappa"].get<std::vector<double>>();
    } else {
      kappa.assign(roots.size(), 1.0);
    }
    CustomOptions opt;
    if (j.contains("positive_choice_vector") && !j["positive_choice_vector"].is_null())
      opt.positive_choice = json_vec(j["positive_choice_vector"], n);
    if (j.contains("name")) opt.name = j["name"].get<std::string>();
    return build_custom(roots, kappa, opt);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("root system JSON: ") + e.what());
  }
}

RootSystem load_root_system(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open root system file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return root_system_from_json(ss.str());
}

}  // namespace dunkl
