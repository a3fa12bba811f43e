#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace mixgeom {

/// A point of the unit simplex: nonnegative coordinates summing to one.
///
/// Construction goes through `validate`, which clips negative round-off
/// (down to -1e-12) to zero and rescales so the coordinates sum to one.
class ProbabilityVector {
 public:
  static ProbabilityVector validate(std::span<const double> raw);
  static ProbabilityVector validate(std::initializer_list<double> raw) {
    return validate(std::span<const double>(raw.begin(), raw.size()));
  }
  /// Unit mass on coordinate `index` of a length-`size` vector.
  static ProbabilityVector vertex(std::size_t size, std::size_t index);

  std::size_t size() const noexcept { return coords_.size(); }
  double operator[](std::size_t i) const { return coords_[i]; }
  const std::vector<double>& coords() const noexcept { return coords_; }
  auto begin() const noexcept { return coords_.begin(); }
  auto end() const noexcept { return coords_.end(); }

  friend bool operator==(const ProbabilityVector&,
                         const ProbabilityVector&) = default;

 private:
  explicit ProbabilityVector(std::vector<double> coords)
      : coords_(std::move(coords)) {}
  std::vector<double> coords_;
};

enum class SamplerKind { uniform, dirichlet, point_mass_mixture };

/// Describes a distribution on the simplex together with its seed.
struct SamplerSpec {
  SamplerKind kind = SamplerKind::uniform;
  std::size_t J = 0;
  std::uint64_t seed = 0;
  std::vector<double> alpha;                // dirichlet only
  std::vector<ProbabilityVector> atoms;     // point-mass mixture only
  std::vector<double> weights;              // point-mass mixture only

  static SamplerSpec uniform(std::size_t J, std::uint64_t seed);
  static SamplerSpec dirichlet(std::vector<double> alpha, std::uint64_t seed);
  static SamplerSpec point_mass_mixture(std::vector<ProbabilityVector> atoms,
                                        std::span<const double> weights,
                                        std::uint64_t seed);

  /// Same distribution, different seed.
  SamplerSpec with_seed(std::uint64_t new_seed) const;

  /// Throws InvalidArgument if the spec is malformed.
  void check() const;

  friend bool operator==(const SamplerSpec&, const SamplerSpec&) = default;
};

/// Deterministic child seed for stream `stream` of `seed` (splitmix64).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

/// Stateful draw stream for one SamplerSpec. Cheap to construct; give each
/// worker its own.
class Sampler {
 public:
  explicit Sampler(SamplerSpec spec);

  ProbabilityVector next();
  /// Writes the next draw into `out` (size J) without allocating.
  void next_into(std::span<double> out);

  const SamplerSpec& spec() const noexcept { return spec_; }

 private:
  SamplerSpec spec_;
  std::mt19937_64 engine_;
  std::vector<std::gamma_distribution<double>> gammas_;
  std::discrete_distribution<std::size_t> atom_choice_;
};

/// n draws from `spec`; identical (spec, n) give bit-identical output.
std::vector<ProbabilityVector> sample(const SamplerSpec& spec, std::size_t n);

}  // namespace mixgeom
