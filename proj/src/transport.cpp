#include "wpot/transport.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include "wpot/errors.hpp"

namespace wpot {

void require_valid_exponent(double p) {
  if (!(p >= 1.0) || !std::isfinite(p)) {
    throw std::invalid_argument("exponent p must be a finite number >= 1");
  }
}

namespace {

double pow_p(double d, double p) {
  if (p == 1.0) return d;
  if (p == 2.0) return d * d;
  return std::pow(d, p);
}

void require_same_manifold(const DiscreteMeasure& mu, const DiscreteMeasure& nu) {
  if (mu.manifold() != nu.manifold()) {
    throw std::invalid_argument("measures live on different manifolds (" + mu.manifold().name() +
                                " vs " + nu.manifold().name() + ")");
  }
}

TransportResult make_result(Coupling pi, const Eigen::MatrixXd& c, double p) {
  double cost = 0.0;
  for (int i = 0; i < pi.rows; ++i) {
    for (int j = 0; j < pi.cols; ++j) cost += pi(i, j) * c(i, j);
  }
  cost = std::max(cost, 0.0);
  return {std::pow(cost, 1.0 / p), cost, std::move(pi), p};
}

// Spanning-tree basis of the transportation problem. Nodes 0..N-1 are rows,
// N..N+M-1 columns; every basic cell is a tree edge.
class TransportSimplex {
 public:
  TransportSimplex(std::span<const double> a, std::span<const double> b, const Eigen::MatrixXd& c)
      : n_(static_cast<int>(a.size())),
        m_(static_cast<int>(b.size())),
        cost_(c),
        flow_(n_, m_),
        basic_(static_cast<std::size_t>(n_) * m_, false),
        adj_(static_cast<std::size_t>(n_ + m_)) {
    northwest_corner(a, b);
    cmax_ = std::max(cost_.cwiseAbs().maxCoeff(), std::numeric_limits<double>::min());
  }

  Coupling solve() {
    const long max_iter = 100L * n_ * m_ + 1000;
    int degenerate_run = 0;
    std::vector<double> u(static_cast<std::size_t>(n_));
    std::vector<double> v(static_cast<std::size_t>(m_));
    for (long iter = 0; iter < max_iter; ++iter) {
      compute_potentials(u, v);
      const bool bland = degenerate_run > n_ + m_;
      const int entering = price(u, v, bland);
      if (entering < 0) {
        for (double& x : flow_.mass) x = std::max(x, 0.0);
        return flow_;
      }
      const double theta = pivot(entering);
      degenerate_run = theta > 0.0 ? 0 : degenerate_run + 1;
    }
    throw ResourceError("transport simplex did not converge");
  }

 private:
  int cell(int i, int j) const { return i * m_ + j; }

  void add_edge(int i, int j) {
    basic_[static_cast<std::size_t>(cell(i, j))] = true;
    adj_[static_cast<std::size_t>(i)].push_back(n_ + j);
    adj_[static_cast<std::size_t>(n_ + j)].push_back(i);
  }

  void remove_edge(int i, int j) {
    basic_[static_cast<std::size_t>(cell(i, j))] = false;
    auto drop = [](std::vector<int>& list, int node) {
      list.erase(std::find(list.begin(), list.end(), node));
    };
    drop(adj_[static_cast<std::size_t>(i)], n_ + j);
    drop(adj_[static_cast<std::size_t>(n_ + j)], i);
  }

  void northwest_corner(std::span<const double> a_in, std::span<const double> b_in) {
    std::vector<double> a(a_in.begin(), a_in.end());
    std::vector<double> b(b_in.begin(), b_in.end());
    int i = 0;
    int j = 0;
    while (true) {
      const double x = (i == n_ - 1 && j == m_ - 1) ? std::max(a[static_cast<std::size_t>(i)], 0.0)
                                                    : std::min(a[static_cast<std::size_t>(i)],
                                                               b[static_cast<std::size_t>(j)]);
      flow_(i, j) = std::max(x, 0.0);
      add_edge(i, j);
      a[static_cast<std::size_t>(i)] -= x;
      b[static_cast<std::size_t>(j)] -= x;
      if (i == n_ - 1 && j == m_ - 1) break;
      if (j == m_ - 1 || (i < n_ - 1 && a[static_cast<std::size_t>(i)] <= b[static_cast<std::size_t>(j)])) {
        ++i;
      } else {
        ++j;
      }
    }
  }

  // u_i + v_j = c_ij on basic cells, rooted at u_0 = 0.
  void compute_potentials(std::vector<double>& u, std::vector<double>& v) const {
    std::vector<bool> done(static_cast<std::size_t>(n_ + m_), false);
    std::vector<int> stack{0};
    u[0] = 0.0;
    done[0] = true;
    while (!stack.empty()) {
      const int node = stack.back();
      stack.pop_back();
      for (int next : adj_[static_cast<std::size_t>(node)]) {
        if (done[static_cast<std::size_t>(next)]) continue;
        done[static_cast<std::size_t>(next)] = true;
        if (node < n_) {
          const int j = next - n_;
          v[static_cast<std::size_t>(j)] = cost_(node, j) - u[static_cast<std::size_t>(node)];
        } else {
          const int j = node - n_;
          u[static_cast<std::size_t>(next)] = cost_(next, j) - v[static_cast<std::size_t>(j)];
        }
        stack.push_back(next);
      }
    }
  }

  // Entering cell index, or -1 at optimality.
  int price(const std::vector<double>& u, const std::vector<double>& v, bool bland) const {
    const double tol = 1e-13 * cmax_;
    int best = -1;
    double best_rc = -tol;
    for (int i = 0; i < n_; ++i) {
      for (int j = 0; j < m_; ++j) {
        if (basic_[static_cast<std::size_t>(cell(i, j))]) continue;
        const double rc = cost_(i, j) - u[static_cast<std::size_t>(i)] - v[static_cast<std::size_t>(j)];
        if (rc < best_rc) {
          if (bland) return cell(i, j);
          best_rc = rc;
          best = cell(i, j);
        }
      }
    }
    return best;
  }

  // Tree path from row node `from` to column node `to` as a node sequence.
  std::vector<int> tree_path(int from, int to) const {
    std::vector<int> parent(static_cast<std::size_t>(n_ + m_), -2);
    std::vector<int> queue{from};
    parent[static_cast<std::size_t>(from)] = -1;
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const int node = queue[head];
      if (node == to) break;
      for (int next : adj_[static_cast<std::size_t>(node)]) {
        if (parent[static_cast<std::size_t>(next)] != -2) continue;
        parent[static_cast<std::size_t>(next)] = node;
        queue.push_back(next);
      }
    }
    std::vector<int> path;
    for (int node = to; node != -1; node = parent[static_cast<std::size_t>(node)]) path.push_back(node);
    std::reverse(path.begin(), path.end());
    return path;
  }

  // Performs the pivot on entering cell; returns the step length theta.
  double pivot(int entering) {
    const int ei = entering / m_;
    const int ej = entering % m_;
    const std::vector<int> path = tree_path(ei, n_ + ej);
    // Edges along the path alternate -, +, -, ... starting at row ei.
    struct Step {
      int i, j;
      bool minus;
    };
    std::vector<Step> steps;
    for (std::size_t e = 0; e + 1 < path.size(); ++e) {
      const int p = path[e];
      const int q = path[e + 1];
      const int i = p < n_ ? p : q;
      const int j = (p < n_ ? q : p) - n_;
      steps.push_back({i, j, e % 2 == 0});
    }
    double theta = std::numeric_limits<double>::infinity();
    int leave = -1;
    for (const Step& s : steps) {
      if (!s.minus) continue;
      const double x = flow_(s.i, s.j);
      const int idx = cell(s.i, s.j);
      if (x < theta || (x == theta && idx < leave)) {
        theta = x;
        leave = idx;
      }
    }
    theta = std::max(theta, 0.0);
    for (const Step& s : steps) flow_(s.i, s.j) += s.minus ? -theta : theta;
    flow_(ei, ej) = theta;
    const int li = leave / m_;
    const int lj = leave % m_;
    flow_(li, lj) = 0.0;
    remove_edge(li, lj);
    add_edge(ei, ej);
    return theta;
  }

  int n_;
  int m_;
  const Eigen::MatrixXd& cost_;
  double cmax_ = 1.0;
  Coupling flow_;
  std::vector<bool> basic_;
  std::vector<std::vector<int>> adj_;
};

}  // namespace

Coupling Coupling::product(std::span<const double> a, std::span<const double> b) {
  Coupling pi(static_cast<int>(a.size()), static_cast<int>(b.size()));
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) {
      pi(static_cast<int>(i), static_cast<int>(j)) = a[i] * b[j];
    }
  }
  return pi;
}

Eigen::MatrixXd cost_matrix(const DiscreteMeasure& mu, const DiscreteMeasure& nu, double p) {
  require_same_manifold(mu, nu);
  Eigen::MatrixXd c(static_cast<Eigen::Index>(mu.size()), static_cast<Eigen::Index>(nu.size()));
  for (std::size_t i = 0; i < mu.size(); ++i) {
    for (std::size_t j = 0; j < nu.size(); ++j) {
      c(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          pow_p(distance(mu.point(i), nu.point(j)), p);
    }
  }
  return c;
}

double coupling_cost(const Coupling& pi, const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                     double p) {
  require_valid_exponent(p);
  require_same_manifold(mu, nu);
  if (pi.rows != static_cast<int>(mu.size()) || pi.cols != static_cast<int>(nu.size())) {
    throw std::invalid_argument("coupling is " + std::to_string(pi.rows) + "x" +
                                std::to_string(pi.cols) + " but supports have sizes " +
                                std::to_string(mu.size()) + " and " + std::to_string(nu.size()));
  }
  constexpr double kMarginalTolerance = 1e-8;
  for (int i = 0; i < pi.rows; ++i) {
    double row = 0.0;
    for (int j = 0; j < pi.cols; ++j) {
      if (pi(i, j) < -kMarginalTolerance) {
        throw InvalidCoupling("negative coupling entry at (" + std::to_string(i) + ", " +
                              std::to_string(j) + ")");
      }
      row += pi(i, j);
    }
    if (std::abs(row - mu.weight(static_cast<std::size_t>(i))) > kMarginalTolerance) {
      throw InvalidCoupling("row " + std::to_string(i) + " of the coupling does not sum to the source weight");
    }
  }
  for (int j = 0; j < pi.cols; ++j) {
    double col = 0.0;
    for (int i = 0; i < pi.rows; ++i) col += pi(i, j);
    if (std::abs(col - nu.weight(static_cast<std::size_t>(j))) > kMarginalTolerance) {
      throw InvalidCoupling("column " + std::to_string(j) + " of the coupling does not sum to the target weight");
    }
  }
  const Eigen::MatrixXd c = cost_matrix(mu, nu, p);
  double cost = 0.0;
  for (int i = 0; i < pi.rows; ++i) {
    for (int j = 0; j < pi.cols; ++j) cost += std::max(pi(i, j), 0.0) * c(i, j);
  }
  return cost;
}

Coupling solve_transport_lp(std::span<const double> a, std::span<const double> b,
                            const Eigen::MatrixXd& c) {
  if (a.empty() || b.empty()) throw std::invalid_argument("transport LP with an empty side");
  if (c.rows() != static_cast<Eigen::Index>(a.size()) ||
      c.cols() != static_cast<Eigen::Index>(b.size())) {
    throw std::invalid_argument("cost matrix shape does not match the marginals");
  }
  TransportSimplex simplex(a, b, c);
  return simplex.solve();
}

TransportResult solve_transport(const DiscreteMeasure& mu, const DiscreteMeasure& nu, double p) {
  require_valid_exponent(p);
  const Eigen::MatrixXd c = cost_matrix(mu, nu, p);
  return make_result(solve_transport_lp(mu.weights(), nu.weights(), c), c, p);
}

namespace {

bool equal_weights(const DiscreteMeasure& mu) {
  const double w = 1.0 / static_cast<double>(mu.size());
  return std::all_of(mu.weights().begin(), mu.weights().end(),
                     [w](double x) { return std::abs(x - w) <= 1e-12; });
}

Coupling best_permutation(int n, const Eigen::MatrixXd& c) {
  std::vector<int> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<int> best = perm;
  double best_cost = std::numeric_limits<double>::infinity();
  do {
    double cost = 0.0;
    for (int i = 0; i < n; ++i) cost += c(i, perm[static_cast<std::size_t>(i)]);
    if (cost < best_cost) {
      best_cost = cost;
      best = perm;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  Coupling pi(n, n);
  for (int i = 0; i < n; ++i) pi(i, best[static_cast<std::size_t>(i)]) = 1.0 / n;
  return pi;
}

// Flows on a candidate basis (cells must form a spanning tree of the
// bipartite graph); returns false if the cells do not, or a flow is negative.
bool basis_flows(const std::vector<int>& cells, int n, int m, std::span<const double> a,
                 std::span<const double> b, Coupling& pi) {
  const int nodes = n + m;
  std::vector<double> residual(static_cast<std::size_t>(nodes));
  for (int i = 0; i < n; ++i) residual[static_cast<std::size_t>(i)] = a[static_cast<std::size_t>(i)];
  for (int j = 0; j < m; ++j) residual[static_cast<std::size_t>(n + j)] = b[static_cast<std::size_t>(j)];
  std::vector<int> degree(static_cast<std::size_t>(nodes), 0);
  for (int c : cells) {
    ++degree[static_cast<std::size_t>(c / m)];
    ++degree[static_cast<std::size_t>(n + c % m)];
  }
  std::vector<bool> used(cells.size(), false);
  pi = Coupling(n, m);
  // Peel leaves: a degree-one node fixes the flow on its only edge.
  for (std::size_t round = 0; round < cells.size(); ++round) {
    bool progressed = false;
    for (std::size_t e = 0; e < cells.size(); ++e) {
      if (used[e]) continue;
      const int i = cells[e] / m;
      const int j = n + cells[e] % m;
      int leaf = -1;
      if (degree[static_cast<std::size_t>(i)] == 1) {
        leaf = i;
      } else if (degree[static_cast<std::size_t>(j)] == 1) {
        leaf = j;
      }
      if (leaf < 0) continue;
      const int other = leaf == i ? j : i;
      const double x = residual[static_cast<std::size_t>(leaf)];
      if (x < -1e-12) return false;
      pi(i, j - n) = std::max(x, 0.0);
      residual[static_cast<std::size_t>(leaf)] = 0.0;
      residual[static_cast<std::size_t>(other)] -= x;
      --degree[static_cast<std::size_t>(i)];
      --degree[static_cast<std::size_t>(j)];
      used[e] = true;
      progressed = true;
      break;
    }
    if (!progressed) return false;  // a cycle: not a tree
  }
  // Every node must have been reached (spanning).
  return std::all_of(residual.begin(), residual.end(), [](double r) { return std::abs(r) <= 1e-9; });
}

Coupling best_vertex(std::span<const double> a, std::span<const double> b, const Eigen::MatrixXd& c) {
  const int n = static_cast<int>(a.size());
  const int m = static_cast<int>(b.size());
  const int cells = n * m;
  const int k = n + m - 1;
  std::vector<bool> choose(static_cast<std::size_t>(cells), false);
  std::fill(choose.begin(), choose.begin() + k, true);
  Coupling best;
  double best_cost = std::numeric_limits<double>::infinity();
  Coupling candidate;
  do {
    std::vector<int> subset;
    for (int e = 0; e < cells; ++e) {
      if (choose[static_cast<std::size_t>(e)]) subset.push_back(e);
    }
    if (!basis_flows(subset, n, m, a, b, candidate)) continue;
    double cost = 0.0;
    for (int e : subset) cost += candidate(e / m, e % m) * c(e / m, e % m);
    if (cost < best_cost) {
      best_cost = cost;
      best = candidate;
    }
  } while (std::prev_permutation(choose.begin(), choose.end()));
  if (best.rows == 0) throw ResourceError("brute_force_transport: no feasible vertex found");
  return best;
}

}  // namespace

TransportResult brute_force_transport(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                                      double p) {
  require_valid_exponent(p);
  const Eigen::MatrixXd c = cost_matrix(mu, nu, p);
  const auto n = mu.size();
  const auto m = nu.size();
  if (n == m && n <= 6 && equal_weights(mu) && equal_weights(nu)) {
    return make_result(best_permutation(static_cast<int>(n), c), c, p);
  }
  if (n * m <= 12) return make_result(best_vertex(mu.weights(), nu.weights(), c), c, p);
  throw ResourceError("brute_force_transport: instance " + std::to_string(n) + "x" +
                      std::to_string(m) + " is too large");
}

}  // namespace wpot
