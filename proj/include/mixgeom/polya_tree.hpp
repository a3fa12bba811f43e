#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mixgeom/choquet.hpp"

namespace mixgeom {

/// Beta parameters of a Polya tree on the dyadic partition of [0,1].
///
/// Both children of a node at level l-1 get alpha_l = max(l * 2^(2 l alpha), 8),
/// so the prior is symmetric within each level.
struct PolyaTreeParams {
  double alpha = 1.0;  // Holder exponent in (0, 1]
  int depth = 0;
  std::vector<double> level_alpha;  // level_alpha[l - 1] for levels 1..depth

  double node_alpha(int level) const;
  /// Parameter of the cell named by a binary string, e.g. "01".
  double node_alpha(std::string_view epsilon) const;

  friend bool operator==(const PolyaTreeParams&, const PolyaTreeParams&) = default;
};

PolyaTreeParams build_params(double alpha, int depth);

/// Places M atoms in the leftmost M dyadic cells at depth ceil(log2 M), in
/// atom order.
class AtomEmbedding {
 public:
  explicit AtomEmbedding(std::size_t atoms);

  std::size_t atoms() const noexcept { return atoms_; }
  int depth() const noexcept { return depth_; }
  std::size_t cell(std::size_t atom) const;
  /// Binary label of the atom's cell, root to leaf.
  std::string cell_label(std::size_t atom) const;

 private:
  std::size_t atoms_;
  int depth_;
};

/// Counts routed through each cell after conjugate updates. counts[l-1][c]
/// is the number of observations in cell c of level l; a node's (left,
/// right) pair is (counts[l][2i], counts[l][2i+1]).
struct PolyaTreePosterior {
  PolyaTreeParams params;
  int depth = 0;  // embedding depth; deeper levels never receive data
  std::vector<std::vector<std::uint64_t>> counts;
  std::uint64_t k = 0;

  static PolyaTreePosterior prior(const PolyaTreeParams& params,
                                  const AtomEmbedding& emb);

  friend bool operator==(const PolyaTreePosterior&, const PolyaTreePosterior&) = default;
};

PolyaTreePosterior posterior_update(const PolyaTreePosterior& post,
                                    std::span<const std::size_t> atoms,
                                    const AtomEmbedding& emb);

/// Combines posteriors built from disjoint shards of data.
PolyaTreePosterior merge(const PolyaTreePosterior& a, const PolyaTreePosterior& b);

/// Posterior-mean mass of every cell of `level` (1..depth).
std::vector<double> cell_masses(const PolyaTreePosterior& post, int level);

/// Posterior-mean masses of the atoms' cells, renormalized over the atoms.
ChoquetMeasure weight_estimate(const PolyaTreePosterior& post,
                               const AtomEmbedding& emb);

/// (log k / k)^(alpha / (2 alpha + 1)).
double minimax_rate(std::size_t k, double alpha);

struct TracePoint {
  std::size_t k = 0;
  double sup_error = 0.0;
  double rate = 0.0;
  double ratio = 0.0;  // sup_error / rate
};

/// Draws one iid stream from `truth` and records the sup-norm error of the
/// weight estimate after the first k draws, for each k in the grid.
std::vector<TracePoint> convergence_trace(const ChoquetMeasure& truth,
                                          const std::vector<std::size_t>& k_grid,
                                          const PolyaTreeParams& params,
                                          const AtomEmbedding& emb,
                                          std::uint64_t seed);

}  // namespace mixgeom
