#include "lsbm/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>
#include <unordered_set>

namespace lsbm {

namespace {

int draw_categorical(const Eigen::VectorXd& weights, SplitRng& rng) {
  const double u = rng.uniform01();
  double cumulative = 0.0;
  for (Eigen::Index j = 0; j < weights.size(); ++j) {
    cumulative += weights[j];
    if (u < cumulative) return static_cast<int>(j);
  }
  return static_cast<int>(weights.size()) - 1;
}

// Unrank r in [0, m(m-1)/2) to the r-th pair (a, b), a < b, in lexicographic
// order over a then b.
std::pair<int, int> unrank_within(std::int64_t r, std::int64_t m) {
  // rank(a, .) starts at a*m - a*(a+1)/2; invert with a guarded scan around
  // the quadratic-formula estimate.
  const double discriminant = (2.0 * m - 1.0) * (2.0 * m - 1.0) - 8.0 * static_cast<double>(r);
  std::int64_t a = static_cast<std::int64_t>((2.0 * m - 1.0 - std::sqrt(std::max(0.0, discriminant))) / 2.0);
  a = std::clamp<std::int64_t>(a, 0, m - 2);
  const auto rowStart = [m](std::int64_t row) { return row * (m - 1) - row * (row - 1) / 2; };
  while (a > 0 && rowStart(a) > r) --a;
  while (a < m - 2 && rowStart(a + 1) <= r) ++a;
  const std::int64_t b = a + 1 + (r - rowStart(a));
  return {static_cast<int>(a), static_cast<int>(b)};
}

// m_b distinct values in [0, total), in deterministic draw order.
std::vector<std::int64_t> sample_distinct(std::int64_t count, std::int64_t total, SplitRng& rng) {
  std::vector<std::int64_t> out;
  out.reserve(static_cast<std::size_t>(count));
  if (count <= 0) return out;
  if (2 * count >= total) {
    // Dense case: partial Fisher-Yates over the full index range.
    std::vector<std::int64_t> all(static_cast<std::size_t>(total));
    for (std::int64_t i = 0; i < total; ++i) all[static_cast<std::size_t>(i)] = i;
    for (std::int64_t i = 0; i < count; ++i) {
      const std::int64_t j = i + static_cast<std::int64_t>(rng.uniform_below(static_cast<std::uint64_t>(total - i)));
      std::swap(all[static_cast<std::size_t>(i)], all[static_cast<std::size_t>(j)]);
      out.push_back(all[static_cast<std::size_t>(i)]);
    }
    return out;
  }
  std::unordered_set<std::int64_t> seen;
  seen.reserve(static_cast<std::size_t>(count) * 2);
  while (static_cast<std::int64_t>(out.size()) < count) {
    const std::int64_t candidate = static_cast<std::int64_t>(rng.uniform_below(static_cast<std::uint64_t>(total)));
    if (seen.insert(candidate).second) out.push_back(candidate);
  }
  return out;
}

}  // namespace

CommunityAssignment sample_assignment(const LsbmParams& params, SplitRng rng) {
  CommunityAssignment assignment;
  assignment.sigma.resize(params.n);
  assignment.sizes = Eigen::VectorXi::Zero(params.k);
  for (int v = 0; v < params.n; ++v) {
    const int j = draw_categorical(params.pi, rng);
    assignment.sigma[v] = j;
    assignment.sizes[j] += 1;
  }
  return assignment;
}

bool is_balanced(const CommunityAssignment& assignment, const LsbmParams& params) {
  const double n = static_cast<double>(assignment.n());
  const double cbrtN = std::cbrt(n);
  const double bound = cbrtN * cbrtN;
  for (int j = 0; j < params.k; ++j) {
    if (std::abs(assignment.sizes[j] - n * params.pi[j]) > bound) return false;
  }
  return true;
}

LabeledGraph::LabeledGraph(int n, int k, int L, std::vector<LabeledPair> pairs,
                           std::optional<CommunityAssignment> assignment)
    : n_(n), k_(k), L_(L), pairs_(std::move(pairs)), assignment_(std::move(assignment)) {
  for (const auto& p : pairs_) {
    if (p.u < 0 || p.v >= n_ || p.u >= p.v) {
      throw Error(ErrorCode::ConfigError, "labeled pairs must satisfy 0 <= u < v < n");
    }
    if (p.label < 1 || p.label > L_) {
      throw Error(ErrorCode::ConfigError, "stored pair labels must lie in [1, L]");
    }
  }
  std::sort(pairs_.begin(), pairs_.end(), [](const LabeledPair& a, const LabeledPair& b) {
    return std::tie(a.u, a.v) < std::tie(b.u, b.v);
  });
  for (std::size_t i = 1; i < pairs_.size(); ++i) {
    if (pairs_[i - 1].u == pairs_[i].u && pairs_[i - 1].v == pairs_[i].v) {
      throw Error(ErrorCode::ConfigError, "duplicate labeled pair");
    }
  }

  std::vector<std::int64_t> degree(static_cast<std::size_t>(n_) + 1, 0);
  for (const auto& p : pairs_) {
    ++degree[static_cast<std::size_t>(p.u) + 1];
    ++degree[static_cast<std::size_t>(p.v) + 1];
  }
  adjacencyOffsets_.assign(degree.begin(), degree.end());
  for (std::size_t i = 1; i < adjacencyOffsets_.size(); ++i) adjacencyOffsets_[i] += adjacencyOffsets_[i - 1];
  adjacency_.resize(static_cast<std::size_t>(adjacencyOffsets_.back()));
  std::vector<std::int64_t> cursor(adjacencyOffsets_.begin(), adjacencyOffsets_.end() - 1);
  for (const auto& p : pairs_) {
    adjacency_[static_cast<std::size_t>(cursor[static_cast<std::size_t>(p.u)]++)] = {p.v, p.label};
    adjacency_[static_cast<std::size_t>(cursor[static_cast<std::size_t>(p.v)]++)] = {p.u, p.label};
  }
  for (int v = 0; v < n_; ++v) {
    auto begin = adjacency_.begin() + adjacencyOffsets_[static_cast<std::size_t>(v)];
    auto end = adjacency_.begin() + adjacencyOffsets_[static_cast<std::size_t>(v) + 1];
    std::sort(begin, end, [](const NeighborEntry& a, const NeighborEntry& b) { return a.vertex < b.vertex; });
  }
}

int LabeledGraph::label(int u, int v) const {
  if (u == v) return 0;
  if (u < 0 || v < 0 || u >= n_ || v >= n_) {
    throw Error(ErrorCode::IndexOutOfRange, "vertex out of range");
  }
  const auto row = neighbors(u);
  auto it = std::lower_bound(row.begin(), row.end(), v,
                             [](const NeighborEntry& e, int target) { return e.vertex < target; });
  if (it != row.end() && it->vertex == v) return it->label;
  return 0;
}

std::span<const NeighborEntry> LabeledGraph::neighbors(int v) const {
  const auto begin = static_cast<std::size_t>(adjacencyOffsets_[static_cast<std::size_t>(v)]);
  const auto end = static_cast<std::size_t>(adjacencyOffsets_[static_cast<std::size_t>(v) + 1]);
  return {adjacency_.data() + begin, end - begin};
}

void LabeledGraph::save(std::ostream& out) const {
  out << n_ << ' ' << k_ << ' ' << L_ << '\n';
  for (const auto& p : pairs_) out << p.u << ' ' << p.v << ' ' << p.label << '\n';
}

void LabeledGraph::save_file(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::IoError, "cannot open " + path + " for writing");
  save(out);
  if (!out) throw Error(ErrorCode::IoError, "failed writing " + path);
}

LabeledGraph LabeledGraph::load(std::istream& in) {
  int n = 0, k = 0, L = 0;
  if (!(in >> n >> k >> L)) throw Error(ErrorCode::IoError, "graph header must be 'n k L'");
  std::vector<LabeledPair> pairs;
  LabeledPair p;
  while (in >> p.u >> p.v >> p.label) pairs.push_back(p);
  return LabeledGraph(n, k, L, std::move(pairs));
}

LabeledGraph LabeledGraph::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open graph file " + path);
  return load(in);
}

LabeledGraph sample_labels(const CommunityAssignment& assignment, const LsbmParams& params,
                           SplitRng rng) {
  const int n = assignment.n();
  const int k = params.k;
  const double edgeProb = params.edge_probability(n);

  std::vector<std::vector<int>> members(static_cast<std::size_t>(k));
  for (int j = 0; j < k; ++j) members[static_cast<std::size_t>(j)].reserve(static_cast<std::size_t>(assignment.sizes[j]));
  for (int v = 0; v < n; ++v) members[static_cast<std::size_t>(assignment.sigma[v])].push_back(v);

  std::vector<LabeledPair> pairs;
  pairs.reserve(static_cast<std::size_t>(edgeProb * 0.5 * n * (n - 1.0)) + 16);

  Eigen::VectorXd labelWeights(params.L);
  // One block of pairs at a time: binomial count, uniform placement without
  // replacement, then a label draw per placed pair. Distributionally identical
  // to per-pair iteration at O(expected edges) cost.
  for (int i = 0; i < k; ++i) {
    for (int j = i; j < k; ++j) {
      const auto& mi = members[static_cast<std::size_t>(i)];
      const auto& mj = members[static_cast<std::size_t>(j)];
      const std::int64_t blockPairs =
          (i == j) ? static_cast<std::int64_t>(mi.size()) * (static_cast<std::int64_t>(mi.size()) - 1) / 2
                   : static_cast<std::int64_t>(mi.size()) * static_cast<std::int64_t>(mj.size());
      if (blockPairs == 0) continue;

      SplitRng blockRng = rng.split(static_cast<std::uint64_t>(i) * static_cast<std::uint64_t>(k) +
                                    static_cast<std::uint64_t>(j) + 1);
      std::int64_t labeledCount;
      if (edgeProb >= 1.0) {
        labeledCount = blockPairs;
      } else {
        std::binomial_distribution<std::int64_t> binomial(blockPairs, edgeProb);
        labeledCount = binomial(blockRng);
      }
      if (labeledCount == 0) continue;

      for (int l = 0; l < params.L; ++l) labelWeights[l] = params.q[l](i, j);
      const auto ranks = sample_distinct(labeledCount, blockPairs, blockRng);
      for (const std::int64_t r : ranks) {
        int u, v;
        if (i == j) {
          const auto [a, b] = unrank_within(r, static_cast<std::int64_t>(mi.size()));
          u = mi[static_cast<std::size_t>(a)];
          v = mi[static_cast<std::size_t>(b)];
        } else {
          u = mi[static_cast<std::size_t>(r / static_cast<std::int64_t>(mj.size()))];
          v = mj[static_cast<std::size_t>(r % static_cast<std::int64_t>(mj.size()))];
        }
        if (u > v) std::swap(u, v);
        const int label = 1 + draw_categorical(labelWeights, blockRng);
        pairs.push_back({u, v, label});
      }
    }
  }

  return LabeledGraph(n, k, params.L, std::move(pairs), assignment);
}

LabelMatrix label_matrix(const LabeledGraph& graph, int ell) {
  if (ell < 1 || ell > graph.L()) throw Error(ErrorCode::IndexOutOfRange, "label out of range");
  std::vector<Eigen::Triplet<double>> triplets;
  for (const auto& p : graph.pairs()) {
    if (p.label == ell) {
      triplets.emplace_back(p.u, p.v, 1.0);
      triplets.emplace_back(p.v, p.u, 1.0);
    }
  }
  LabelMatrix matrix;
  matrix.label = ell;
  matrix.entries.resize(graph.n(), graph.n());
  matrix.entries.setFromTriplets(triplets.begin(), triplets.end());
  return matrix;
}

void save_assignment(const CommunityAssignment& assignment, std::ostream& out) {
  for (int v = 0; v < assignment.n(); ++v) out << assignment.sigma[v] << '\n';
}

CommunityAssignment load_assignment(std::istream& in, int k) {
  std::vector<int> sigma;
  int value;
  while (in >> value) sigma.push_back(value);
  CommunityAssignment assignment;
  assignment.sigma.resize(static_cast<Eigen::Index>(sigma.size()));
  int maxLabel = -1;
  for (std::size_t v = 0; v < sigma.size(); ++v) {
    assignment.sigma[static_cast<Eigen::Index>(v)] = sigma[v];
    maxLabel = std::max(maxLabel, sigma[v]);
  }
  const int communities = k > 0 ? k : maxLabel + 1;
  assignment.sizes = Eigen::VectorXi::Zero(communities);
  for (std::size_t v = 0; v < sigma.size(); ++v) {
    if (sigma[v] < 0 || sigma[v] >= communities) {
      throw Error(ErrorCode::IoError, "community index out of range in assignment file");
    }
    assignment.sizes[sigma[v]] += 1;
  }
  return assignment;
}

}  // namespace lsbm
