#ifndef LSBM_SAMPLER_HPP
#define LSBM_SAMPLER_HPP

#include <Eigen/Sparse>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "lsbm/model.hpp"
#include "lsbm/rng.hpp"

namespace lsbm {

struct CommunityAssignment {
  Eigen::VectorXi sigma;  // sigma[v] in [0, k)
  Eigen::VectorXi sizes;  // sizes[j] = |{v : sigma[v] = j}|

  int n() const { return static_cast<int>(sigma.size()); }
  int k() const { return static_cast<int>(sizes.size()); }
};

/// Independent community labels with P(sigma[v] = j) = pi[j].
CommunityAssignment sample_assignment(const LsbmParams& params, SplitRng rng);

/// True iff |sizes[j] - n pi_j| <= n^(2/3) for every community.
bool is_balanced(const CommunityAssignment& assignment, const LsbmParams& params);

struct LabeledPair {
  int u = 0;
  int v = 0;      // u < v
  int label = 0;  // in [1, L]
};

struct NeighborEntry {
  int vertex = 0;
  int label = 0;
};

/// Immutable sampled graph: a sparse symmetric map from vertex pairs to labels
/// in 1..L (absent pairs carry the uninformative label 0). The generating
/// assignment travels with the graph for diagnostics; inference never reads it.
class LabeledGraph {
 public:
  LabeledGraph(int n, int k, int L, std::vector<LabeledPair> pairs,
               std::optional<CommunityAssignment> assignment = std::nullopt);

  int n() const { return n_; }
  int k() const { return k_; }
  int L() const { return L_; }

  const std::vector<LabeledPair>& pairs() const { return pairs_; }
  const std::optional<CommunityAssignment>& assignment() const { return assignment_; }

  /// Label of {u, v}; 0 when the pair is unlabeled. Symmetric in (u, v).
  int label(int u, int v) const;

  /// Labeled neighbors of v, sorted by vertex id.
  std::span<const NeighborEntry> neighbors(int v) const;

  void save(std::ostream& out) const;
  void save_file(const std::string& path) const;
  static LabeledGraph load(std::istream& in);
  static LabeledGraph load_file(const std::string& path);

 private:
  int n_, k_, L_;
  std::vector<LabeledPair> pairs_;                // sorted by (u, v)
  std::vector<std::int64_t> adjacencyOffsets_;    // CSR over both directions
  std::vector<NeighborEntry> adjacency_;
  std::optional<CommunityAssignment> assignment_;
};

/// Pairwise labels per the block model: for each unordered pair with endpoint
/// communities (i, j), label l in 1..L with probability
/// min(1, t log(n)/n) * q(i,j,l), else unlabeled.
LabeledGraph sample_labels(const CommunityAssignment& assignment, const LsbmParams& params,
                           SplitRng rng);

struct LabelMatrix {
  int label = 0;
  Eigen::SparseMatrix<double> entries;  // symmetric 0/1, zero diagonal
};

/// Binary adjacency encoding of one label value l in 1..L.
LabelMatrix label_matrix(const LabeledGraph& graph, int ell);

void save_assignment(const CommunityAssignment& assignment, std::ostream& out);
CommunityAssignment load_assignment(std::istream& in, int k = -1);

}  // namespace lsbm

#endif  // LSBM_SAMPLER_HPP
