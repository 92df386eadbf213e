#include "cscp/mip/bnb.hpp"

#include <algorithm>
#include <cmath>
#include <condition_variable>
#include <cstdlib>
#include <limits>
#include <mutex>
#include <queue>
#include <set>
#include <stdexcept>
#include <thread>

namespace cscp::mip {

std::string_view to_string(MipStatus s) {
  switch (s) {
    case MipStatus::Optimal: return "optimal";
    case MipStatus::Infeasible: return "infeasible";
    case MipStatus::NodeLimit: return "node_limit";
  }
  return "unknown";
}

double relative_gap(double lb, double ub) {
  if (!std::isfinite(ub)) return std::numeric_limits<double>::infinity();
  return std::max(0.0, ub - lb) / std::max(1.0, std::abs(ub));
}

int worker_count(int requested) {
  int n = requested > 0 ? requested : static_cast<int>(std::thread::hardware_concurrency());
  if (const char* cap = std::getenv("CSCP_THREADS")) {
    const int c = std::atoi(cap);
    if (c > 0) n = std::min(n, c);
  }
  return std::max(n, 1);
}

ContactAssignment make_assignment(const ContactProblem& P, const NodeSolution& sol) {
  const int ns = P.num_surfaces();
  const int l = P.yaw_model().segments();
  const int np = static_cast<int>(P.planned().size());
  ContactAssignment a;
  a.planned = P.planned();
  a.H = Eigen::MatrixXi::Zero(np, ns);
  if (P.settings().rotated_reach) {
    a.S = Eigen::MatrixXi::Zero(l, np);
    a.C = Eigen::MatrixXi::Zero(l, np);
  }
  a.surface.resize(P.num_contacts());
  for (int c = 0; c < P.num_contacts(); ++c) a.surface[c] = P.spec().schedule.phases()[c].surface;
  for (int i = 0; i < np; ++i) {
    const int c = a.planned[i];
    const int first = P.first_binary(c);
    a.surface[c] = -1;
    for (int r = 0; r < ns; ++r) {
      a.H(i, r) = sol.binaries[first + r] > 0.5 ? 1 : 0;
      if (a.H(i, r)) a.surface[c] = r;
    }
    if (P.settings().rotated_reach)
      for (int k = 0; k < l; ++k) {
        a.S(k, i) = sol.binaries[first + ns + k] > 0.5 ? 1 : 0;
        a.C(k, i) = sol.binaries[first + ns + l + k] > 0.5 ? 1 : 0;
      }
  }
  a.positions = sol.positions;
  a.yaw = sol.yaw;
  a.sin = sol.sin;
  a.cos = sol.cos;
  return a;
}

model::ProblemSpec apply_assignment(const model::ProblemSpec& spec, const ContactAssignment& a) {
  model::ProblemSpec out = spec;
  auto& phases = out.schedule.phases();
  if (a.surface.size() != phases.size()) throw std::invalid_argument("assignment does not match the schedule");
  for (std::size_t c = 0; c < phases.size(); ++c) {
    phases[c].surface = a.surface[c];
    phases[c].position = a.positions[c];
    phases[c].yaw = a.yaw[c];
  }
  return out;
}

namespace {

struct QueueEntry {
  BnBNode node;
  bool operator>(const QueueEntry& o) const {
    if (node.lower_bound != o.node.lower_bound) return node.lower_bound > o.node.lower_bound;
    return node.id > o.node.id;
  }
};

// Most fractional free binary; ties resolve to the lowest contact, then the lowest index.
int branching_binary(const ContactProblem& P, const Fixings& fix, const std::vector<double>& values) {
  int best = -1;
  double best_dist = 1e-6;
  const auto& keys = P.binaries();
  for (int i = 0; i < P.num_binaries(); ++i) {
    if (fix[i] >= 0) continue;
    const double d = std::min(std::abs(values[i]), std::abs(1.0 - values[i]));
    if (d <= 1e-6) continue;
    const bool better = best < 0 || d > best_dist + 1e-12 ||
                        (std::abs(d - best_dist) <= 1e-12 &&
                         (keys[i].contact < keys[best].contact ||
                          (keys[i].contact == keys[best].contact && keys[i].index < keys[best].index)));
    if (better) {
      best = i;
      best_dist = d;
    }
  }
  return best;
}

}  // namespace

MipResult plan_contacts(const model::ProblemSpec& spec, const MipSettings& settings) {
  return plan_contacts(ContactProblem(spec, settings));
}

MipResult plan_contacts(const ContactProblem& P) {
  const auto& set = P.settings();
  const double inf = std::numeric_limits<double>::infinity();
  MipResult res;

  std::mutex mu;
  std::condition_variable cv;
  std::priority_queue<QueueEntry, std::vector<QueueEntry>, std::greater<>> open;
  std::multiset<double> active;  // parent bounds of nodes being solved
  long next_id = 0;
  double ub = inf;
  double last_lb = -inf;
  double pruned = inf;  // smallest bound discarded against the incumbent
  bool stop = false;
  bool limit_hit = false;
  NodeSolution best;

  open.push({BnBNode{P.free_fixings(), -inf, false, 0, next_id++, -1}});

  auto global_lb = [&]() {
    double lb = std::min(ub, pruned);
    if (!open.empty()) lb = std::min(lb, open.top().node.lower_bound);
    if (!active.empty()) lb = std::min(lb, *active.begin());
    return lb;
  };
  auto prune_level = [&]() { return ub - set.gap_tol * std::max(1.0, std::abs(ub)); };
  auto record = [&]() {
    const double lb = std::max(global_lb(), last_lb);
    last_lb = lb;
    res.bounds.push_back({lb, ub, res.nodes});
    if (std::isfinite(ub) && relative_gap(lb, ub) <= set.gap_tol) stop = true;
  };

  auto worker = [&]() {
    std::unique_lock lock(mu);
    for (;;) {
      cv.wait(lock, [&] { return stop || !open.empty() || active.empty(); });
      if (stop || (open.empty() && active.empty())) break;
      BnBNode node = open.top().node;
      open.pop();
      if (std::isfinite(ub) && node.lower_bound >= prune_level()) {
        pruned = std::min(pruned, node.lower_bound);
        continue;
      }
      if (res.nodes >= set.node_limit) {
        limit_hit = true;
        stop = true;
        open.push({node});
        cv.notify_all();
        break;
      }
      ++res.nodes;
      const auto slot = active.insert(node.lower_bound);
      lock.unlock();

      NodeSolution sol = solve_node(P, node.fixings);
      int branch = -1;
      NodeSolution leaf;
      bool integral = false;
      if (sol.feasible) {
        branch = branching_binary(P, node.fixings, sol.binaries);
        if (branch < 0) {
          integral = true;
          Fixings full = node.fixings;
          for (int i = 0; i < P.num_binaries(); ++i) full[i] = sol.binaries[i] > 0.5 ? 1 : 0;
          leaf = full == node.fixings ? sol : solve_node(P, full);
        }
      }

      lock.lock();
      active.erase(slot);
      const double bound = sol.feasible ? sol.objective : inf;
      res.node_log.push_back({node.id, node.parent, node.depth, bound, node.lower_bound, integral});
      if (sol.feasible) {
        const double lb = std::max(sol.objective, node.lower_bound);
        if (integral) {
          if (leaf.feasible && leaf.objective < ub) {
            ub = leaf.objective;
            best = std::move(leaf);
          }
        } else if (!std::isfinite(ub) || lb < prune_level()) {
          for (std::int8_t v : {0, 1}) {
            BnBNode child{node.fixings, lb, false, node.depth + 1, next_id++, node.id};
            child.fixings[branch] = v;
            open.push({std::move(child)});
          }
        } else {
          pruned = std::min(pruned, lb);
        }
      }
      record();
      cv.notify_all();
    }
  };

  const int workers = worker_count(set.threads);
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int i = 0; i < workers; ++i) pool.emplace_back(worker);
  }

  res.has_incumbent = std::isfinite(ub);
  res.objective = ub;
  {
    std::lock_guard lock(mu);
    res.lower_bound = res.has_incumbent ? std::min(std::max(global_lb(), last_lb), ub) : inf;
  }
  if (!res.has_incumbent) {
    res.status = limit_hit ? MipStatus::NodeLimit : MipStatus::Infeasible;
    res.gap = inf;
    return res;
  }
  res.gap = relative_gap(res.lower_bound, ub);
  res.status = res.gap <= set.gap_tol ? MipStatus::Optimal : MipStatus::NodeLimit;
  res.assignment = make_assignment(P, best);
  res.trajectory = best.trajectory;
  return res;
}

}  // namespace cscp::mip
