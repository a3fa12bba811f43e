#include "mixgeom/polya_tree.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "mixgeom/errors.hpp"
#include "mixgeom/simplex.hpp"

namespace mixgeom {

namespace {
constexpr double kAlphaFloor = 8.0;
}

double PolyaTreeParams::node_alpha(int level) const {
  if (level < 1 || level > depth) {
    throw InvalidArgument("level " + std::to_string(level) +
                          " outside 1.." + std::to_string(depth));
  }
  return level_alpha[static_cast<std::size_t>(level - 1)];
}

double PolyaTreeParams::node_alpha(std::string_view epsilon) const {
  for (char c : epsilon) {
    if (c != '0' && c != '1') throw InvalidArgument("cell label must be binary");
  }
  return node_alpha(static_cast<int>(epsilon.size()));
}

PolyaTreeParams build_params(double alpha, int depth) {
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    throw InvalidArgument("Holder exponent alpha must lie in (0, 1]");
  }
  if (depth < 1 || depth > 30) throw InvalidArgument("depth must lie in 1..30");
  PolyaTreeParams params;
  params.alpha = alpha;
  params.depth = depth;
  for (int l = 1; l <= depth; ++l) {
    const double a = l * std::exp2(2.0 * l * alpha);
    params.level_alpha.push_back(std::max(a, kAlphaFloor));
  }
  return params;
}

AtomEmbedding::AtomEmbedding(std::size_t atoms) : atoms_(atoms), depth_(0) {
  if (atoms < 1) throw InvalidArgument("embedding needs at least one atom");
  while ((std::size_t{1} << depth_) < atoms) ++depth_;
}

std::size_t AtomEmbedding::cell(std::size_t atom) const {
  if (atom >= atoms_) {
    throw InvalidArgument("unknown atom id " + std::to_string(atom));
  }
  return atom;
}

std::string AtomEmbedding::cell_label(std::size_t atom) const {
  const std::size_t c = cell(atom);
  std::string label(static_cast<std::size_t>(depth_), '0');
  for (int l = 0; l < depth_; ++l) {
    if ((c >> (depth_ - 1 - l)) & 1u) label[static_cast<std::size_t>(l)] = '1';
  }
  return label;
}

PolyaTreePosterior PolyaTreePosterior::prior(const PolyaTreeParams& params,
                                             const AtomEmbedding& emb) {
  if (params.depth < emb.depth()) {
    throw InvalidArgument("tree depth " + std::to_string(params.depth) +
                          " is below the embedding depth " +
                          std::to_string(emb.depth()));
  }
  PolyaTreePosterior post;
  post.params = params;
  post.depth = emb.depth();
  for (int l = 1; l <= post.depth; ++l) {
    post.counts.emplace_back(std::size_t{1} << l, 0);
  }
  return post;
}

PolyaTreePosterior posterior_update(const PolyaTreePosterior& post,
                                    std::span<const std::size_t> atoms,
                                    const AtomEmbedding& emb) {
  if (emb.depth() != post.depth) {
    throw InvalidArgument("embedding does not match the posterior depth");
  }
  PolyaTreePosterior out = post;
  for (std::size_t atom : atoms) {
    const std::size_t c = emb.cell(atom);
    for (int l = 1; l <= out.depth; ++l) {
      ++out.counts[static_cast<std::size_t>(l - 1)][c >> (out.depth - l)];
    }
    ++out.k;
  }
  return out;
}

PolyaTreePosterior merge(const PolyaTreePosterior& a, const PolyaTreePosterior& b) {
  if (a.depth != b.depth || a.params.level_alpha != b.params.level_alpha) {
    throw InvalidArgument("cannot merge posteriors with different trees");
  }
  PolyaTreePosterior out = a;
  for (std::size_t l = 0; l < out.counts.size(); ++l) {
    for (std::size_t c = 0; c < out.counts[l].size(); ++c) {
      out.counts[l][c] += b.counts[l][c];
    }
  }
  out.k += b.k;
  return out;
}

std::vector<double> cell_masses(const PolyaTreePosterior& post, int level) {
  if (level < 0 || level > post.depth) {
    throw InvalidArgument("level outside the instantiated tree");
  }
  std::vector<double> mass{1.0};
  for (int l = 1; l <= level; ++l) {
    const double a = post.params.node_alpha(l);
    const auto& cnt = post.counts[static_cast<std::size_t>(l - 1)];
    std::vector<double> next(cnt.size());
    for (std::size_t parent = 0; parent < mass.size(); ++parent) {
      const double left = static_cast<double>(cnt[2 * parent]);
      const double right = static_cast<double>(cnt[2 * parent + 1]);
      const double denom = 2.0 * a + left + right;
      next[2 * parent] = mass[parent] * ((a + left) / denom);
      next[2 * parent + 1] = mass[parent] * ((a + right) / denom);
    }
    mass = std::move(next);
  }
  return mass;
}

ChoquetMeasure weight_estimate(const PolyaTreePosterior& post,
                               const AtomEmbedding& emb) {
  if (emb.depth() != post.depth) {
    throw InvalidArgument("embedding does not match the posterior depth");
  }
  const auto mass = cell_masses(post, post.depth);
  std::vector<double> w(emb.atoms());
  for (std::size_t atom = 0; atom < emb.atoms(); ++atom) w[atom] = mass[emb.cell(atom)];
  return ProbabilityVector::validate(w);
}

double minimax_rate(std::size_t k, double alpha) {
  if (k < 2) throw InvalidArgument("minimax rate needs k >= 2");
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    throw InvalidArgument("Holder exponent alpha must lie in (0, 1]");
  }
  const double kd = static_cast<double>(k);
  return std::pow(std::log(kd) / kd, alpha / (2.0 * alpha + 1.0));
}

std::vector<TracePoint> convergence_trace(const ChoquetMeasure& truth,
                                          const std::vector<std::size_t>& k_grid,
                                          const PolyaTreeParams& params,
                                          const AtomEmbedding& emb,
                                          std::uint64_t seed) {
  if (truth.size() != emb.atoms()) {
    throw InvalidArgument("true weights must have one entry per atom");
  }
  for (std::size_t i = 1; i < k_grid.size(); ++i) {
    if (k_grid[i] <= k_grid[i - 1]) throw InvalidArgument("k_grid must be increasing");
  }
  std::mt19937_64 engine(seed);
  std::discrete_distribution<std::size_t> draw(truth.begin(), truth.end());
  auto post = PolyaTreePosterior::prior(params, emb);
  std::vector<TracePoint> out;
  std::vector<std::size_t> batch;
  std::size_t drawn = 0;
  for (std::size_t k : k_grid) {
    batch.clear();
    for (; drawn < k; ++drawn) batch.push_back(draw(engine));
    post = posterior_update(post, batch, emb);
    const auto w = weight_estimate(post, emb);
    double err = 0.0;
    for (std::size_t l = 0; l < w.size(); ++l) err = std::max(err, std::abs(w[l] - truth[l]));
    TracePoint pt;
    pt.k = k;
    pt.sup_error = err;
    pt.rate = k >= 2 ? minimax_rate(k, params.alpha) : 0.0;
    pt.ratio = pt.rate > 0.0 ? err / pt.rate : 0.0;
    out.push_back(pt);
  }
  return out;
}

}  // namespace mixgeom
