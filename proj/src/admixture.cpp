#include "mixgeom/admixture.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "mixgeom/errors.hpp"
#include "mixgeom/parallel.hpp"
#include "mixgeom/simplex.hpp"

namespace mixgeom {

namespace {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

double log_coefficient(const DocTermMatrix& X, std::size_t i) {
  double c = std::lgamma(static_cast<double>(X.doc_totals()[i]) + 1.0);
  for (std::size_t p = X.row_ptr()[i]; p < X.row_ptr()[i + 1]; ++p) {
    c -= std::lgamma(static_cast<double>(X.counts()[p]) + 1.0);
  }
  return c;
}

// Column view of the CSR structure: for term j, the CSR positions of its
// entries and their documents, in document order.
struct TermIndex {
  std::vector<std::size_t> col_ptr;
  std::vector<std::size_t> pos;
  std::vector<std::size_t> doc;

  explicit TermIndex(const DocTermMatrix& X) : col_ptr(X.n_terms() + 1, 0) {
    for (std::size_t t : X.terms()) ++col_ptr[t + 1];
    for (std::size_t j = 0; j < X.n_terms(); ++j) col_ptr[j + 1] += col_ptr[j];
    pos.resize(X.nnz());
    doc.resize(X.nnz());
    std::vector<std::size_t> fill(col_ptr.begin(), col_ptr.end() - 1);
    for (std::size_t i = 0; i < X.n_docs(); ++i) {
      for (std::size_t p = X.row_ptr()[i]; p < X.row_ptr()[i + 1]; ++p) {
        const std::size_t q = fill[X.terms()[p]]++;
        pos[q] = p;
        doc[q] = i;
      }
    }
  }
};

struct RunResult {
  RowMatrix phi;  // n x L
  RowMatrix ft;   // J x L (F transposed)
  double loglik = 0.0;
  std::size_t iterations = 0;
  double max_drop = 0.0;
  double max_mass_error = 0.0;
  std::vector<double> trace;
};

class EmRunner {
 public:
  EmRunner(const DocTermMatrix& X, std::size_t L, const EmOptions& opts)
      : X_(X), L_(L), opts_(opts), index_(X), pi_(X.nnz()), ratio_(X.nnz()),
        doc_ll_(X.n_docs()), coef_(X.n_docs()) {
    for (std::size_t i = 0; i < X.n_docs(); ++i) coef_[i] = log_coefficient(X, i);
  }

  RunResult run(std::uint64_t seed) {
    const std::size_t n = X_.n_docs(), J = X_.n_terms();
    const double s = opts_.smoothing;
    RunResult r;
    r.phi = RowMatrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(L_));
    r.ft = RowMatrix::Zero(static_cast<Eigen::Index>(J), static_cast<Eigen::Index>(L_));

    // Initial M-step from responsibilities drawn Dirichlet(1) per entry.
    std::mt19937_64 engine(seed);
    std::exponential_distribution<double> expo(1.0);
    std::vector<double> resp(L_);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t p = X_.row_ptr()[i]; p < X_.row_ptr()[i + 1]; ++p) {
        double total = 0.0;
        for (auto& v : resp) total += (v = expo(engine));
        const double x = static_cast<double>(X_.counts()[p]);
        for (std::size_t l = 0; l < L_; ++l) {
          const double w = x * resp[l] / total;
          r.phi(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(l)) += w;
          r.ft(static_cast<Eigen::Index>(X_.terms()[p]), static_cast<Eigen::Index>(l)) += w;
        }
      }
    }
    r.phi.array() += s;
    r.ft.array() += s;
    normalize_phi(r.phi);
    normalize_f(r.ft);

    RowMatrix phi_next(r.phi.rows(), r.phi.cols());
    RowMatrix ft_next(r.ft.rows(), r.ft.cols());
    double prev = -std::numeric_limits<double>::infinity();
    for (std::size_t iter = 0;; ++iter) {
      const double ll = evaluate(r.phi, r.ft);
      if (opts_.keep_trace) r.trace.push_back(ll);
      if (std::isfinite(prev) && ll < prev) {
        r.max_drop = std::max(r.max_drop, (prev - ll) / std::abs(prev));
      }
      r.loglik = ll;
      r.iterations = iter;
      if (std::isfinite(prev) && std::abs(ll - prev) < opts_.rel_tol * std::abs(ll)) break;
      if (iter == opts_.max_iters) break;
      prev = ll;

      parallel_for(n, opts_.threads, [&](std::size_t i) {
        const auto row = static_cast<Eigen::Index>(i);
        phi_next.row(row).setZero();
        for (std::size_t p = X_.row_ptr()[i]; p < X_.row_ptr()[i + 1]; ++p) {
          phi_next.row(row) += ratio_[p] * r.ft.row(static_cast<Eigen::Index>(X_.terms()[p]));
        }
        phi_next.row(row).array() *= r.phi.row(row).array();
      });
      parallel_for(J, opts_.threads, [&](std::size_t j) {
        const auto row = static_cast<Eigen::Index>(j);
        ft_next.row(row).setZero();
        for (std::size_t q = index_.col_ptr[j]; q < index_.col_ptr[j + 1]; ++q) {
          ft_next.row(row) +=
              ratio_[index_.pos[q]] * r.phi.row(static_cast<Eigen::Index>(index_.doc[q]));
        }
        ft_next.row(row).array() *= r.ft.row(row).array();
      });
      r.max_mass_error = std::max(r.max_mass_error, mass_error(phi_next, ft_next));
      phi_next.array() += s;
      ft_next.array() += s;
      normalize_phi(phi_next);
      normalize_f(ft_next);
      r.phi.swap(phi_next);
      r.ft.swap(ft_next);
    }
    return r;
  }

 private:
  // Fills pi_ and ratio_ = x / pi for every entry and returns the loglik.
  double evaluate(const RowMatrix& phi, const RowMatrix& ft) {
    parallel_for(X_.n_docs(), opts_.threads, [&](std::size_t i) {
      double ll = coef_[i];
      for (std::size_t p = X_.row_ptr()[i]; p < X_.row_ptr()[i + 1]; ++p) {
        const double pi = phi.row(static_cast<Eigen::Index>(i))
                              .dot(ft.row(static_cast<Eigen::Index>(X_.terms()[p])));
        const double x = static_cast<double>(X_.counts()[p]);
        pi_[p] = pi;
        ratio_[p] = x / pi;
        ll += x * std::log(pi);
      }
      doc_ll_[i] = ll;
    });
    double total = 0.0;
    for (double v : doc_ll_) total += v;
    return total;
  }

  // Before smoothing, row i of the Phi update sums to the document length
  // and the F update sums to the token count.
  double mass_error(const RowMatrix& phi, const RowMatrix& ft) const {
    double worst = 0.0;
    for (std::size_t i = 0; i < X_.n_docs(); ++i) {
      const double len = static_cast<double>(X_.doc_totals()[i]);
      worst = std::max(worst, std::abs(phi.row(static_cast<Eigen::Index>(i)).sum() - len) / len);
    }
    const double tokens = static_cast<double>(X_.total_tokens());
    return std::max(worst, std::abs(ft.sum() - tokens) / tokens);
  }

  static void normalize_phi(RowMatrix& phi) {
    for (Eigen::Index i = 0; i < phi.rows(); ++i) phi.row(i) /= phi.row(i).sum();
  }
  static void normalize_f(RowMatrix& ft) {
    const Eigen::RowVectorXd totals = ft.colwise().sum();
    for (Eigen::Index l = 0; l < ft.cols(); ++l) ft.col(l) /= totals[l];
  }

  const DocTermMatrix& X_;
  std::size_t L_;
  EmOptions opts_;
  TermIndex index_;
  std::vector<double> pi_, ratio_, doc_ll_, coef_;
};

}  // namespace

double log_likelihood(const DocTermMatrix& X, const Eigen::MatrixXd& Phi,
                      const Eigen::MatrixXd& F) {
  if (Phi.rows() != static_cast<Eigen::Index>(X.n_docs()) ||
      F.cols() != static_cast<Eigen::Index>(X.n_terms()) || Phi.cols() != F.rows()) {
    throw InvalidArgument("Phi and F do not match the document-term matrix");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < X.n_docs(); ++i) {
    double ll = log_coefficient(X, i);
    for (std::size_t p = X.row_ptr()[i]; p < X.row_ptr()[i + 1]; ++p) {
      const double pi = Phi.row(static_cast<Eigen::Index>(i))
                            .dot(F.col(static_cast<Eigen::Index>(X.terms()[p])));
      ll += static_cast<double>(X.counts()[p]) * std::log(pi);
    }
    total += ll;
  }
  return total;
}

AdmixtureModel em_fit(const DocTermMatrix& X, std::size_t L, const EmOptions& opts) {
  if (L < 1) throw InvalidArgument("need at least one component");
  if (opts.restarts < 1) throw InvalidArgument("need at least one restart");
  if (!(opts.rel_tol >= 0.0)) throw InvalidArgument("rel_tol must be nonnegative");
  if (!(opts.smoothing >= 0.0)) throw InvalidArgument("smoothing must be nonnegative");
  if (X.n_terms() < 1) throw InvalidArgument("empty vocabulary");
  for (std::size_t i = 0; i < X.n_docs(); ++i) {
    if (X.doc_totals()[i] == 0) {
      throw InvalidArgument("document " + std::to_string(i + 1) + " is empty");
    }
  }
  if (X.n_docs() == 0) throw InvalidArgument("no documents");
  if (L > X.total_tokens()) {
    throw InvalidArgument("L=" + std::to_string(L) + " exceeds the " +
                          std::to_string(X.total_tokens()) + " tokens of the corpus");
  }

  EmRunner runner(X, L, opts);
  AdmixtureModel best;
  best.smoothing = opts.smoothing;
  bool have = false;
  for (std::size_t k = 0; k < opts.restarts; ++k) {
    auto run = runner.run(derive_seed(opts.seed, k));
    best.restart_logliks.push_back(run.loglik);
    best.max_loglik_drop = std::max(best.max_loglik_drop, run.max_drop);
    best.max_mass_error = std::max(best.max_mass_error, run.max_mass_error);
    if (!std::isfinite(run.loglik)) {
      throw NumericFailure("EM produced a non-finite log likelihood");
    }
    if (!have || run.loglik > best.loglik) {
      have = true;
      best.Phi = run.phi;
      best.F = run.ft.transpose();
      best.loglik = run.loglik;
      best.iterations = run.iterations;
      best.restart = k;
      best.trace = std::move(run.trace);
    }
  }
  return best;
}

std::vector<bool> identifiability_check(const Eigen::MatrixXd& F, double tol) {
  if (F.rows() < 2) throw InvalidArgument("identifiability needs at least two components");
  return extreme_rows(F, tol);
}

namespace {

struct Count {
  std::size_t M = 0;
  std::size_t dim = 0;
  std::vector<double> explained;
  std::vector<std::size_t> extreme;
};

Count count_extremes(const Eigen::MatrixXd& F, std::size_t pca_dim, double tol,
                     std::vector<std::string>& warnings, std::size_t round) {
  Count c;
  const std::size_t L = static_cast<std::size_t>(F.rows());
  if (L == 1) {
    c.M = 1;
    c.extreme = {0};
    return c;
  }
  const auto rank = static_cast<std::size_t>(centered_rank(F));
  std::size_t d = pca_dim;
  if (rank < d) {
    warnings.push_back("round " + std::to_string(round) + ": pca_dim " +
                       std::to_string(pca_dim) + " exceeds the attainable rank " +
                       std::to_string(rank) + "; " +
                       (rank >= 2 ? "using " + std::to_string(rank)
                                  : std::string("counting in the full space")));
    d = rank;
  }
  PointSet points = [&] {
    if (d >= 2) {
      const auto proj = pca_project(F, static_cast<Eigen::Index>(d));
      c.dim = d;
      c.explained.assign(proj.explained_variance_ratio.data(),
                         proj.explained_variance_ratio.data() + proj.explained_variance_ratio.size());
      return proj.point_set();
    }
    return PointSet(F);
  }();
  if (points.size() < 2) {
    c.M = 1;
    c.extreme = {0};
    return c;
  }
  const auto ext = extremal_set(points, tol);
  c.M = ext.f0;
  c.extreme = ext.indices;
  return c;
}

Eigen::MatrixXd expand_columns(const Eigen::MatrixXd& F, const std::vector<std::size_t>& kept,
                               std::size_t n_terms) {
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(F.rows(), static_cast<Eigen::Index>(n_terms));
  for (std::size_t j = 0; j < kept.size(); ++j) {
    out.col(static_cast<Eigen::Index>(kept[j])) = F.col(static_cast<Eigen::Index>(j));
  }
  return out;
}

}  // namespace

PipelineReport two_stage(const DocTermMatrix& X, std::size_t L0, const PipelineOptions& opts) {
  if (L0 < 2) throw InvalidArgument("L0 must be at least 2");
  if (opts.pca_dim < 2) throw InvalidArgument("pca_dim must be at least 2");
  if (opts.max_rounds < 1) throw InvalidArgument("max_rounds must be at least 1");

  PipelineReport report;
  report.initial_L = L0;
  report.pca_dim = opts.pca_dim;
  report.n_terms = X.n_terms();
  const DocTermMatrix compact = X.drop_empty_terms(report.kept_terms);
  if (compact.n_terms() < X.n_terms()) {
    report.warnings.push_back(std::to_string(X.n_terms() - compact.n_terms()) +
                              " terms with zero total count dropped before fitting");
  }

  std::size_t L = L0;
  AdmixtureModel model;
  for (std::size_t round = 1; round <= opts.max_rounds; ++round) {
    model = em_fit(compact, L, opts.em);
    const auto c = count_extremes(model.F, opts.pca_dim, opts.extreme_tol,
                                  report.warnings, round);
    RoundReport rr;
    rr.L = L;
    rr.loglik = model.loglik;
    rr.iterations = model.iterations;
    rr.max_loglik_drop = model.max_loglik_drop;
    rr.pca_dim = c.dim;
    rr.explained_variance_ratio = c.explained;
    rr.extreme_components = c.extreme;
    rr.M = c.M;
    report.rounds.push_back(rr);
    report.final_M = c.M;
    if (c.M >= L) {
      report.converged = true;
      break;
    }
    L = c.M;
  }

  if (model.components() >= 2) {
    report.final_identifiable = identifiability_check(model.F, opts.extreme_tol);
  } else {
    report.final_identifiable = {true};
  }

  if (model.components() == compact.n_terms()) {
    try {
      report.choquet = choquet_from_fit(model);
      report.choquet_note =
          "fitted distributions taken as Phi * F of the final fit; weights are the Phi rows";
    } catch (const std::exception& e) {
      report.choquet_note = std::string("Choquet read-off unavailable: ") + e.what();
    }
  } else {
    report.choquet_note = "non-simplex regime: " + std::to_string(model.components()) +
                          " components for " + std::to_string(compact.n_terms()) + " terms";
  }

  model.F = expand_columns(model.F, report.kept_terms, X.n_terms());
  report.final_model = std::move(model);
  return report;
}

std::vector<ChoquetMeasure> choquet_from_fit(const AdmixtureModel& model, double tol) {
  const auto M = model.F.rows(), J = model.F.cols();
  if (M != J) {
    throw InvalidArgument("non-simplex regime: " + std::to_string(M) +
                          " components for " + std::to_string(J) + " terms");
  }
  std::vector<ProbabilityVector> vertices;
  for (Eigen::Index l = 0; l < M; ++l) {
    const Eigen::RowVectorXd row = model.F.row(l);
    vertices.push_back(ProbabilityVector::validate(std::span<const double>(row.data(), row.size())));
  }
  const SimplexFrame frame = make_frame(std::move(vertices));
  std::vector<ChoquetMeasure> out;
  out.reserve(static_cast<std::size_t>(model.Phi.rows()));
  for (Eigen::Index i = 0; i < model.Phi.rows(); ++i) {
    const Eigen::RowVectorXd phi = model.Phi.row(i);
    auto w = ProbabilityVector::validate(std::span<const double>(phi.data(), phi.size()));
    const Eigen::RowVectorXd pi = phi * model.F;
    const auto p = ProbabilityVector::validate(std::span<const double>(pi.data(), pi.size()));
    const auto solved = choquet_measure(p, frame);
    for (std::size_t l = 0; l < w.size(); ++l) {
      if (std::abs(solved[l] - w[l]) > tol) {
        throw NumericFailure("document " + std::to_string(i + 1) +
                             ": Phi row and re-solved Choquet weights differ by " +
                             std::to_string(std::abs(solved[l] - w[l])));
      }
    }
    out.push_back(std::move(w));
  }
  return out;
}

}  // namespace mixgeom
