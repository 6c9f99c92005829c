#include "gur/json_io.hpp"

namespace gur {

using nlohmann::json;

json matrix_to_json(const CMat& m) {
  json entries = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      entries.push_back({m(i, j).real(), m(i, j).imag()});
  return {{"dim", m.rows()}, {"entries", std::move(entries)}};
}

CMat matrix_from_json(const json& j) {
  const int dim = j.at("dim").get<int>();
  const auto& entries = j.at("entries");
  if (static_cast<int>(entries.size()) != dim * dim)
    throw std::invalid_argument("matrix entries do not match dim^2");
  CMat m(dim, dim);
  int idx = 0;
  for (Eigen::Index i = 0; i < dim; ++i)
    for (Eigen::Index j2 = 0; j2 < dim; ++j2) {
      m(i, j2) = Cplx(entries[idx][0].get<double>(),
                      entries[idx][1].get<double>());
      ++idx;
    }
  return m;
}

json state_to_json(const QuantumState& s) {
  json j = matrix_to_json(s.matrix);
  j["dims"] = s.space.dims;
  return j;
}

QuantumState state_from_json(const json& j) {
  CompositeSpace sp(j.at("dims").get<std::vector<int>>());
  return make_state(sp, matrix_from_json(j));
}

json gemenge_to_json(const Gemenge& g) {
  json items = json::array();
  for (const auto& it : g.items)
    items.push_back({{"weight", it.weight}, {"state", state_to_json(it.state)}});
  return {{"items", std::move(items)}};
}

Gemenge gemenge_from_json(const json& j) {
  Gemenge g;
  for (const auto& it : j.at("items"))
    g.items.push_back(
        {it.at("weight").get<double>(), state_from_json(it.at("state"))});
  return g;
}

json outcome_to_json(const Outcome& o) {
  json j = matrix_to_json(o.projector);
  if (o.is_global())
    j["target"] = "global";
  else
    j["target"] = *o.target;
  return j;
}

Outcome outcome_from_json(const json& j) {
  Outcome o;
  o.projector = matrix_from_json(j);
  if (j.at("target").is_string())
    o.target = std::nullopt;
  else
    o.target = j.at("target").get<int>();
  return o;
}

}  // namespace gur
