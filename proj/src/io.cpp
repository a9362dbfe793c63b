#include "mhardy/io.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace mhardy {

namespace {

using nlohmann::json;

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  json j;
  in >> j;
  return j;
}

void write_json(const json& j, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << j.dump(2) << '\n';
}

CoordinateSpace coord_from_json(const json& j) {
  const auto wj = j.at("weights").get<std::vector<double>>();
  Eigen::ArrayXd w(wj.size());
  for (std::size_t i = 0; i < wj.size(); ++i) w[i] = wj[i];
  std::vector<CoordinateSpace::Partition> filt;
  for (const auto& level : j.at("filtration"))
    filt.push_back(level.get<CoordinateSpace::Partition>());
  std::vector<double> labels;
  if (j.contains("labels")) labels = j.at("labels").get<std::vector<double>>();
  return CoordinateSpace(std::move(w), std::move(filt), std::move(labels));
}

}  // namespace

ProductSpace load_space(const std::string& path) {
  const json j = read_json(path);
  if (j.value("schema_version", 0) != 1)
    throw std::runtime_error("unsupported space schema version in " + path);
  std::vector<CoordinateSpace> coords;
  for (const auto& cj : j.at("coords")) coords.push_back(coord_from_json(cj));
  return ProductSpace(std::move(coords));
}

void save_space(const ProductSpace& space, const std::string& path) {
  json coords = json::array();
  for (int k = 0; k < space.dims(); ++k) {
    const CoordinateSpace& c = space.coord(k);
    json cj;
    cj["weights"] = std::vector<double>(c.weights().data(), c.weights().data() + c.size());
    cj["labels"] = c.labels();
    json filt = json::array();
    for (int lvl = 0; lvl <= c.depth(); ++lvl) filt.push_back(c.partition(lvl));
    cj["filtration"] = std::move(filt);
    coords.push_back(std::move(cj));
  }
  write_json(json{{"schema_version", 1}, {"coords", std::move(coords)}}, path);
}

ProductSpace space_from_string(const std::string& selector) {
  const auto parse_two = [&](const std::string& body) {
    std::istringstream is(body);
    int d = 0, n = 0;
    char sep = 0;
    if (!(is >> d >> sep >> n) || sep != ':')
      throw std::runtime_error("bad space selector: " + selector);
    return std::pair<int, int>{d, n};
  };
  if (selector.rfind("dyadic:", 0) == 0) {
    const auto [d, n] = parse_two(selector.substr(7));
    return dyadic_space(d, n);
  }
  if (selector.rfind("scale:", 0) == 0) {
    const auto [d, n] = parse_two(selector.substr(6));
    return scale_space(d, n);
  }
  return load_space(selector);
}

RandomVariable load_terminal(const std::string& path, ProductSpace& space_out) {
  const json j = read_json(path);
  if (j.value("schema_version", 0) != 1)
    throw std::runtime_error("unsupported function schema version in " + path);
  space_out = space_from_string(j.at("space").get<std::string>());
  const auto vals = j.at("values").get<std::vector<double>>();
  if (static_cast<Eigen::Index>(vals.size()) != space_out.points())
    throw std::runtime_error("value count does not match the space");
  Eigen::ArrayXd v(vals.size());
  for (std::size_t i = 0; i < vals.size(); ++i) {
    if (!std::isfinite(vals[i])) throw std::runtime_error("non-finite value in " + path);
    v[i] = vals[i];
  }
  return {&space_out, std::move(v)};
}

void save_terminal(const RandomVariable& f, const std::string& space_selector,
                   const std::string& path) {
  write_json(json{{"schema_version", 1},
                  {"space", space_selector},
                  {"values", std::vector<double>(f.values.data(),
                                                 f.values.data() + f.values.size())}},
             path);
}

}  // namespace mhardy
