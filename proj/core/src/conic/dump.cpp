#include "cscp/conic/dump.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "cscp/util/numfmt.hpp"

namespace cscp::conic {

using nlohmann::json;
using util::format_double;
using util::parse_double;

namespace {

json vec_json(const Vec& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(format_double(v[i]));
  return a;
}

json mat_json(const SpMat& M, const Vec& rhs) {
  json trip = json::array();
  for (int j = 0; j < M.outerSize(); ++j)
    for (SpMat::InnerIterator it(M, j); it; ++it)
      trip.push_back({it.row(), it.col(), format_double(it.value())});
  return {{"triplets", trip}, {"rhs", vec_json(rhs)}};
}

Vec json_vec(const json& a) {
  Vec v(static_cast<Eigen::Index>(a.size()));
  for (std::size_t i = 0; i < a.size(); ++i) v[static_cast<Eigen::Index>(i)] = parse_double(a[i].get<std::string>());
  return v;
}

SpMat json_mat(const json& j, Eigen::Index rows, Eigen::Index cols) {
  std::vector<Eigen::Triplet<double>> trip;
  for (const auto& t : j.at("triplets")) {
    const int r = t.at(0).get<int>();
    const int c = t.at(1).get<int>();
    if (r < 0 || r >= rows || c < 0 || c >= cols) throw std::invalid_argument("triplet index out of range");
    trip.emplace_back(r, c, parse_double(t.at(2).get<std::string>()));
  }
  SpMat M(rows, cols);
  M.setFromTriplets(trip.begin(), trip.end());
  M.makeCompressed();
  return M;
}

}  // namespace

std::string dump_program(const ConicProgram& prog) {
  json j;
  j["objective"] = vec_json(prog.objective);
  j["objective_offset"] = format_double(prog.objective_offset);
  j["eq"] = mat_json(prog.eq_matrix, prog.eq_rhs);
  j["ineq"] = mat_json(prog.ineq_matrix, prog.ineq_rhs);
  j["cone"] = {{"nonneg", prog.cone.nonneg}, {"soc_dims", prog.cone.soc_dims}};
  return j.dump();
}

ConicProgram load_program(const std::string& json_text) {
  const json j = json::parse(json_text);
  ConicProgram p;
  p.objective = json_vec(j.at("objective"));
  if (j.contains("objective_offset")) p.objective_offset = parse_double(j.at("objective_offset").get<std::string>());
  p.eq_rhs = json_vec(j.at("eq").at("rhs"));
  p.ineq_rhs = json_vec(j.at("ineq").at("rhs"));
  p.cone.nonneg = j.at("cone").at("nonneg").get<int>();
  p.cone.soc_dims = j.at("cone").at("soc_dims").get<std::vector<int>>();
  p.eq_matrix = json_mat(j.at("eq"), p.eq_rhs.size(), p.objective.size());
  p.ineq_matrix = json_mat(j.at("ineq"), p.ineq_rhs.size(), p.objective.size());
  if (!p.well_formed()) throw std::invalid_argument("dumped program is not well formed");
  return p;
}

void write_program(const ConicProgram& prog, const std::filesystem::path& file) {
  std::ofstream os(file);
  if (!os) throw std::runtime_error("cannot write " + file.string());
  os << dump_program(prog) << '\n';
}

ConicProgram read_program(const std::filesystem::path& file) {
  std::ifstream is(file);
  if (!is) throw std::runtime_error("cannot read " + file.string());
  std::stringstream ss;
  ss << is.rdbuf();
  return load_program(ss.str());
}

}  // namespace cscp::conic
