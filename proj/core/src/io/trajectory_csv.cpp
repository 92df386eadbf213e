#include "cscp/io/trajectory_csv.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "cscp/util/numfmt.hpp"

namespace cscp::io {

namespace {

std::vector<std::string> header(const model::ProblemSpec& spec) {
  std::vector<std::string> h = {"t", "dt", "com_x", "com_y", "com_z", "l_x", "l_y", "l_z", "k_x", "k_y", "k_z"};
  for (const auto& ee : spec.endeffectors)
    for (const char* f : {"active", "px", "py", "pz", "fx", "fy", "fz", "cop_x", "cop_y", "lambda"})
      h.push_back(ee.id + "_" + f);
  return h;
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(',', start);
    out.push_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

}  // namespace

std::string trajectory_to_csv(const model::Trajectory& traj, const model::ProblemSpec& spec) {
  const int N = traj.horizon();
  const int ne = spec.num_endeffectors();
  if (static_cast<int>(traj.states.size()) != N + 1 || static_cast<int>(traj.samples.size()) != N)
    throw std::invalid_argument("trajectory arrays inconsistent with its horizon");
  std::ostringstream os;
  const auto h = header(spec);
  for (std::size_t i = 0; i < h.size(); ++i) os << (i ? "," : "") << h[i];
  os << "\n";

  auto num = [&](double v) { os << ',' << util::format_double(v); };
  double t = 0.0;
  for (int k = 0; k <= N; ++k) {
    const double dt = k == 0 ? 0.0 : traj.timesteps[k - 1];
    t += dt;
    os << util::format_double(t);
    num(dt);
    const auto& s = traj.states[k];
    for (int i = 0; i < 3; ++i) num(s.com[i]);
    for (int i = 0; i < 3; ++i) num(s.lin_momentum[i]);
    for (int i = 0; i < 3; ++i) num(s.ang_momentum[i]);
    for (int e = 0; e < ne; ++e) {
      if (k == 0 || static_cast<int>(traj.samples[k - 1].size()) != ne) {
        os << ",0";
        for (int i = 0; i < 9; ++i) num(0.0);
        continue;
      }
      const auto& smp = traj.samples[k - 1][e];
      os << ',' << (smp.active ? 1 : 0);
      for (int i = 0; i < 3; ++i) num(smp.position[i]);
      for (int i = 0; i < 3; ++i) num(smp.wrench.force[i]);
      for (int i = 0; i < 2; ++i) num(smp.wrench.cop[i]);
      num(smp.wrench.normal_torque);
    }
    os << "\n";
  }
  return os.str();
}

void write_trajectory_csv(const std::filesystem::path& path, const model::Trajectory& traj,
                          const model::ProblemSpec& spec) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << trajectory_to_csv(traj, spec);
}

model::Trajectory parse_trajectory_csv(const std::string& text, const model::ProblemSpec& spec) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("empty trajectory file");
  const auto expected = header(spec);
  const auto cols = split(line);
  if (cols.size() != expected.size()) throw std::invalid_argument("trajectory header has the wrong column count");
  for (std::size_t i = 0; i < cols.size(); ++i)
    if (cols[i] != expected[i])
      throw std::invalid_argument("trajectory column " + std::to_string(i + 1) + " is \"" + std::string(cols[i]) +
                                  "\", expected \"" + expected[i] + "\"");

  const int ne = spec.num_endeffectors();
  model::Trajectory tr;
  int row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) continue;
    const auto f = split(line);
    if (f.size() != expected.size())
      throw std::invalid_argument("row " + std::to_string(row) + " has " + std::to_string(f.size()) + " fields");
    std::vector<double> v(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) {
      try {
        v[i] = util::parse_double(f[i]);
      } catch (const std::invalid_argument&) {
        throw std::invalid_argument("row " + std::to_string(row) + ", column " + expected[i] + ": not a number");
      }
    }
    model::CentroidalState s;
    s.com = model::Vec3(v[2], v[3], v[4]);
    s.lin_momentum = model::Vec3(v[5], v[6], v[7]);
    s.ang_momentum = model::Vec3(v[8], v[9], v[10]);
    const bool initial = tr.states.empty();
    tr.states.push_back(s);
    if (initial) continue;
    tr.timesteps.push_back(v[1]);
    std::vector<model::EndeffectorSample> samples(ne);
    for (int e = 0; e < ne; ++e) {
      const double* c = v.data() + 11 + 10 * e;
      auto& smp = samples[e];
      smp.active = c[0] != 0.0;
      smp.position = model::Vec3(c[1], c[2], c[3]);
      smp.wrench.force = model::Vec3(c[4], c[5], c[6]);
      smp.wrench.cop = model::Vec2(c[7], c[8]);
      smp.wrench.normal_torque = c[9];
    }
    tr.samples.push_back(std::move(samples));
  }
  if (tr.states.empty()) throw std::invalid_argument("trajectory has no rows");
  return tr;
}

model::Trajectory read_trajectory_csv(const std::filesystem::path& path, const model::ProblemSpec& spec) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_trajectory_csv(ss.str(), spec);
}

}  // namespace cscp::io
