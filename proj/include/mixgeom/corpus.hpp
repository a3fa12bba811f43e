#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <vector>

namespace mixgeom {

struct Triplet {
  std::size_t doc = 0;
  std::size_t term = 0;
  std::uint64_t count = 0;

  friend bool operator==(const Triplet&, const Triplet&) = default;
};

/// Sparse document-term count matrix, stored row-wise (CSR) by document.
///
/// Construction sums duplicate (doc, term) pairs, drops zero counts and
/// sorts entries by (doc, term). Ids are 0-indexed.
class DocTermMatrix {
 public:
  DocTermMatrix() = default;
  DocTermMatrix(std::size_t n_docs, std::size_t n_terms, std::vector<Triplet> triplets);

  std::size_t n_docs() const noexcept { return n_docs_; }
  std::size_t n_terms() const noexcept { return n_terms_; }
  std::size_t nnz() const noexcept { return terms_.size(); }

  /// Entries of document i are positions row_ptr()[i] .. row_ptr()[i+1].
  const std::vector<std::size_t>& row_ptr() const noexcept { return row_ptr_; }
  const std::vector<std::size_t>& terms() const noexcept { return terms_; }
  const std::vector<std::uint64_t>& counts() const noexcept { return counts_; }

  std::vector<Triplet> triplets() const;
  const std::vector<std::uint64_t>& doc_totals() const noexcept { return doc_totals_; }
  std::vector<std::uint64_t> term_totals() const;
  std::uint64_t total_tokens() const noexcept { return total_tokens_; }

  /// Copy without the terms that never occur. `kept` receives the original
  /// id of every remaining term, in increasing order.
  DocTermMatrix drop_empty_terms(std::vector<std::size_t>& kept) const;

  friend bool operator==(const DocTermMatrix&, const DocTermMatrix&) = default;

 private:
  std::size_t n_docs_ = 0;
  std::size_t n_terms_ = 0;
  std::vector<std::size_t> row_ptr_{0};
  std::vector<std::size_t> terms_;
  std::vector<std::uint64_t> counts_;
  std::vector<std::uint64_t> doc_totals_;
  std::uint64_t total_tokens_ = 0;
};

/// Reads the UCI bag-of-words layout: lines D, W, NNZ, then "doc term count"
/// lines with 1-indexed ids.
DocTermMatrix load_docword(std::istream& in);
DocTermMatrix load_docword(const std::filesystem::path& path);

/// Writes the same layout; load_docword(write_docword(X)) == X.
void write_docword(std::ostream& out, const DocTermMatrix& X);

struct SyntheticCorpus {
  DocTermMatrix X;
  Eigen::MatrixXd Phi;  // n_docs x M_star mixing weights
  Eigen::MatrixXd F;    // M_star x J components
};

/// Corpus with known structure. Terms are split into M_star contiguous
/// blocks; component l is a Dirichlet(1) draw moved toward its own block by
/// `separation` (1 gives disjoint supports). Mixing weights are symmetric
/// Dirichlet(concentration); each document is a multinomial of size doc_len.
SyntheticCorpus synthetic_corpus(std::size_t M_star, std::size_t J,
                                 std::size_t n_docs, std::size_t doc_len,
                                 double separation, std::uint64_t seed,
                                 double concentration = 1.0);

/// One multinomial draw of `trials` over probabilities `p`.
std::vector<std::uint64_t> multinomial_draw(std::uint64_t trials,
                                            const Eigen::Ref<const Eigen::VectorXd>& p,
                                            std::uint64_t seed);

}  // namespace mixgeom
