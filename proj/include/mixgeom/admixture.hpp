#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "mixgeom/choquet.hpp"
#include "mixgeom/corpus.hpp"
#include "mixgeom/hull.hpp"

namespace mixgeom {

struct EmOptions {
  std::size_t max_iters = 500;
  double rel_tol = 1e-8;
  std::size_t restarts = 5;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  double smoothing = 1e-10;  // added to every M-step numerator
  bool keep_trace = false;
};

/// Fitted admixture: document i has term distribution pi_i = Phi.row(i) * F.
struct AdmixtureModel {
  Eigen::MatrixXd Phi;  // n_docs x L
  Eigen::MatrixXd F;    // L x n_terms
  double loglik = 0.0;
  std::size_t iterations = 0;
  std::size_t restart = 0;  // index of the winning restart
  double smoothing = 0.0;
  std::vector<double> restart_logliks;
  /// Largest relative loglik decrease seen in any run (0 when monotone).
  double max_loglik_drop = 0.0;
  /// Largest relative deviation of M-step masses from their exact totals.
  double max_mass_error = 0.0;
  std::vector<double> trace;  // winning run, when requested

  std::size_t components() const { return static_cast<std::size_t>(F.rows()); }
};

/// Multinomial log likelihood sum_i log Mult(x_i | pi_i), including the
/// multinomial coefficients.
double log_likelihood(const DocTermMatrix& X, const Eigen::MatrixXd& Phi,
                      const Eigen::MatrixXd& F);

/// Maximum likelihood fit with L components by EM, best of opts.restarts
/// random starts. Throws InvalidArgument on an empty document or when L
/// exceeds the token count.
AdmixtureModel em_fit(const DocTermMatrix& X, std::size_t L, const EmOptions& opts);

/// For each row of F: is it outside the hull of the other rows?
std::vector<bool> identifiability_check(const Eigen::MatrixXd& F,
                                        double tol = kExtremeTolerance);

struct PipelineOptions {
  std::size_t pca_dim = 5;
  std::size_t max_rounds = 2;
  double extreme_tol = kExtremeTolerance;
  EmOptions em;
};

struct RoundReport {
  std::size_t L = 0;
  double loglik = 0.0;
  std::size_t iterations = 0;
  double max_loglik_drop = 0.0;
  std::size_t pca_dim = 0;  // dimension actually used; 0 = full space
  std::vector<double> explained_variance_ratio;
  std::vector<std::size_t> extreme_components;
  std::size_t M = 0;
};

struct PipelineReport {
  std::size_t initial_L = 0;
  std::size_t pca_dim = 0;  // requested
  std::vector<RoundReport> rounds;
  /// Final fit, with F expressed over the original term ids.
  AdmixtureModel final_model;
  std::size_t final_M = 0;
  bool converged = false;  // last round found M equal to its L
  std::vector<bool> final_identifiable;
  std::size_t n_terms = 0;                 // original vocabulary size
  std::vector<std::size_t> kept_terms;     // original ids of non-empty terms
  std::vector<std::string> warnings;
  /// Per-document measures over the final components when they form a
  /// simplex frame of the non-empty terms.
  std::vector<ChoquetMeasure> choquet;
  std::string choquet_note;
};

/// Fit with L0 components, count the extreme points of the fitted components
/// after projecting them to pca_dim principal directions, and refit with
/// that many components while the count drops, up to max_rounds fits.
PipelineReport two_stage(const DocTermMatrix& X, std::size_t L0,
                         const PipelineOptions& opts);

/// Choquet measure of every document's fitted distribution over the fitted
/// components: the Phi rows, cross-checked against a direct solve on the
/// frame formed by F. Requires as many components as terms.
std::vector<ChoquetMeasure> choquet_from_fit(const AdmixtureModel& model,
                                             double tol = 1e-6);

}  // namespace mixgeom
