#include "mixgeom/corpus.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <random>
#include <string>
#include <string_view>

#include "mixgeom/errors.hpp"
#include "mixgeom/simplex.hpp"

namespace mixgeom {

DocTermMatrix::DocTermMatrix(std::size_t n_docs, std::size_t n_terms,
                             std::vector<Triplet> triplets)
    : n_docs_(n_docs), n_terms_(n_terms) {
  for (const auto& t : triplets) {
    if (t.doc >= n_docs || t.term >= n_terms) {
      throw InvalidArgument("entry (" + std::to_string(t.doc) + ", " +
                            std::to_string(t.term) + ") outside a " +
                            std::to_string(n_docs) + " x " +
                            std::to_string(n_terms) + " matrix");
    }
  }
  std::sort(triplets.begin(), triplets.end(), [](const Triplet& a, const Triplet& b) {
    return a.doc != b.doc ? a.doc < b.doc : a.term < b.term;
  });
  row_ptr_.assign(n_docs + 1, 0);
  doc_totals_.assign(n_docs, 0);
  for (std::size_t k = 0; k < triplets.size();) {
    const std::size_t doc = triplets[k].doc, term = triplets[k].term;
    std::uint64_t count = 0;
    for (; k < triplets.size() && triplets[k].doc == doc && triplets[k].term == term; ++k) {
      count += triplets[k].count;
    }
    if (count == 0) continue;
    terms_.push_back(term);
    counts_.push_back(count);
    ++row_ptr_[doc + 1];
    doc_totals_[doc] += count;
    total_tokens_ += count;
  }
  for (std::size_t i = 0; i < n_docs; ++i) row_ptr_[i + 1] += row_ptr_[i];
}

std::vector<Triplet> DocTermMatrix::triplets() const {
  std::vector<Triplet> out;
  out.reserve(nnz());
  for (std::size_t i = 0; i < n_docs_; ++i) {
    for (std::size_t p = row_ptr_[i]; p < row_ptr_[i + 1]; ++p) {
      out.push_back({i, terms_[p], counts_[p]});
    }
  }
  return out;
}

std::vector<std::uint64_t> DocTermMatrix::term_totals() const {
  std::vector<std::uint64_t> out(n_terms_, 0);
  for (std::size_t p = 0; p < terms_.size(); ++p) out[terms_[p]] += counts_[p];
  return out;
}

DocTermMatrix DocTermMatrix::drop_empty_terms(std::vector<std::size_t>& kept) const {
  const auto totals = term_totals();
  std::vector<std::size_t> remap(n_terms_, 0);
  kept.clear();
  for (std::size_t j = 0; j < n_terms_; ++j) {
    if (totals[j] > 0) {
      remap[j] = kept.size();
      kept.push_back(j);
    }
  }
  auto trips = triplets();
  for (auto& t : trips) t.term = remap[t.term];
  return DocTermMatrix(n_docs_, kept.size(), std::move(trips));
}

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

// Parses whitespace-separated unsigned integers; false on any other text.
bool parse_fields(std::string_view line, std::vector<std::uint64_t>& out) {
  out.clear();
  std::size_t pos = 0;
  while (true) {
    while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\t' || line[pos] == '\r')) ++pos;
    if (pos == line.size()) return true;
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(line.data() + pos, line.data() + line.size(), v);
    if (ec != std::errc()) return false;
    pos = static_cast<std::size_t>(ptr - line.data());
    if (pos < line.size() && line[pos] != ' ' && line[pos] != '\t' && line[pos] != '\r') return false;
    out.push_back(v);
  }
}

}  // namespace

DocTermMatrix load_docword(std::istream& in) {
  static const char* const kHeader[] = {"D (document count)", "W (vocabulary size)",
                                        "NNZ (entry count)"};
  std::uint64_t header[3];
  std::string line;
  std::vector<std::uint64_t> fields;
  std::size_t line_no = 0;
  for (int h = 0; h < 3; ++h) {
    if (!std::getline(in, line)) {
      throw InvalidArgument(std::string("malformed header: missing ") + kHeader[h]);
    }
    ++line_no;
    if (!parse_fields(line, fields) || fields.size() != 1) {
      throw InvalidArgument(std::string("malformed header: line ") +
                            std::to_string(line_no) + " must hold " + kHeader[h]);
    }
    header[h] = fields[0];
  }
  const std::uint64_t D = header[0], W = header[1], NNZ = header[2];
  std::vector<Triplet> triplets;
  std::uint64_t entries = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    if (!parse_fields(line, fields) || fields.size() != 3) {
      throw InvalidArgument("line " + std::to_string(line_no) +
                            ": expected \"docID wordID count\"");
    }
    if (fields[0] < 1 || fields[0] > D) {
      throw InvalidArgument("line " + std::to_string(line_no) + ": document id " +
                            std::to_string(fields[0]) + " outside 1.." + std::to_string(D));
    }
    if (fields[1] < 1 || fields[1] > W) {
      throw InvalidArgument("line " + std::to_string(line_no) + ": word id " +
                            std::to_string(fields[1]) + " outside 1.." + std::to_string(W));
    }
    ++entries;
    triplets.push_back({static_cast<std::size_t>(fields[0] - 1),
                        static_cast<std::size_t>(fields[1] - 1), fields[2]});
  }
  if (entries != NNZ) {
    throw InvalidArgument("header declares NNZ=" + std::to_string(NNZ) + " but " +
                          std::to_string(entries) + " entries were read");
  }
  return DocTermMatrix(static_cast<std::size_t>(D), static_cast<std::size_t>(W),
                       std::move(triplets));
}

DocTermMatrix load_docword(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open " + path.string());
  return load_docword(in);
}

void write_docword(std::ostream& out, const DocTermMatrix& X) {
  out << X.n_docs() << '\n' << X.n_terms() << '\n' << X.nnz() << '\n';
  for (const auto& t : X.triplets()) {
    out << t.doc + 1 << ' ' << t.term + 1 << ' ' << t.count << '\n';
  }
}

std::vector<std::uint64_t> multinomial_draw(std::uint64_t trials,
                                            const Eigen::Ref<const Eigen::VectorXd>& p,
                                            std::uint64_t seed) {
  std::mt19937_64 engine(seed);
  std::vector<std::uint64_t> out(static_cast<std::size_t>(p.size()), 0);
  double remaining_mass = p.sum();
  std::uint64_t remaining = trials;
  for (Eigen::Index j = 0; j + 1 < p.size() && remaining > 0; ++j) {
    const double q = remaining_mass > 0.0 ? std::clamp(p[j] / remaining_mass, 0.0, 1.0) : 0.0;
    std::binomial_distribution<std::uint64_t> binom(remaining, q);
    out[static_cast<std::size_t>(j)] = binom(engine);
    remaining -= out[static_cast<std::size_t>(j)];
    remaining_mass -= p[j];
  }
  if (p.size() > 0) out.back() += remaining;
  return out;
}

SyntheticCorpus synthetic_corpus(std::size_t M_star, std::size_t J,
                                 std::size_t n_docs, std::size_t doc_len,
                                 double separation, std::uint64_t seed,
                                 double concentration) {
  if (M_star < 1 || M_star > J) throw InvalidArgument("need 1 <= M_star <= J");
  if (J < 2) throw InvalidArgument("need J >= 2");
  if (!(separation >= 0.0 && separation <= 1.0)) {
    throw InvalidArgument("separation must lie in [0, 1]");
  }
  if (n_docs < 1 || doc_len < 1) throw InvalidArgument("need n_docs >= 1 and doc_len >= 1");
  if (!(concentration > 0.0)) throw InvalidArgument("concentration must be positive");

  SyntheticCorpus out;
  out.F.resize(static_cast<Eigen::Index>(M_star), static_cast<Eigen::Index>(J));
  Sampler component_draws(SamplerSpec::uniform(J, derive_seed(seed, 0)));
  const std::size_t base = J / M_star, extra = J % M_star;
  std::size_t start = 0;
  for (std::size_t l = 0; l < M_star; ++l) {
    const std::size_t len = base + (l < extra ? 1 : 0);
    const auto f = component_draws.next();
    double block_mass = 0.0;
    for (std::size_t j = start; j < start + len; ++j) block_mass += f[j];
    for (std::size_t j = 0; j < J; ++j) {
      const bool inside = j >= start && j < start + len;
      const double block = inside ? f[j] / block_mass : 0.0;
      out.F(static_cast<Eigen::Index>(l), static_cast<Eigen::Index>(j)) =
          (1.0 - separation) * f[j] + separation * block;
    }
    start += len;
  }

  out.Phi.resize(static_cast<Eigen::Index>(n_docs), static_cast<Eigen::Index>(M_star));
  Sampler weight_draws(SamplerSpec::dirichlet(std::vector<double>(M_star, concentration),
                                              derive_seed(seed, 1)));
  std::vector<double> phi(M_star);
  std::vector<Triplet> triplets;
  const std::uint64_t doc_seed = derive_seed(seed, 2);
  for (std::size_t i = 0; i < n_docs; ++i) {
    if (M_star == 1) {
      phi[0] = 1.0;
    } else {
      weight_draws.next_into(phi);
    }
    for (std::size_t l = 0; l < M_star; ++l) {
      out.Phi(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(l)) = phi[l];
    }
    const Eigen::VectorXd pi = (out.Phi.row(static_cast<Eigen::Index>(i)) * out.F).transpose();
    const auto counts = multinomial_draw(doc_len, pi, derive_seed(doc_seed, i));
    for (std::size_t j = 0; j < J; ++j) {
      if (counts[j] > 0) triplets.push_back({i, j, counts[j]});
    }
  }
  out.X = DocTermMatrix(n_docs, J, std::move(triplets));
  return out;
}

}  // namespace mixgeom
