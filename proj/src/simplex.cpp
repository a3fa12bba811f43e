#include "mixgeom/simplex.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "mixgeom/errors.hpp"

namespace mixgeom {

namespace {

constexpr double kNegativeSlack = 1e-12;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

}  // namespace

ProbabilityVector ProbabilityVector::validate(std::span<const double> raw) {
  if (raw.empty()) throw InvalidArgument("probability vector is empty");
  std::vector<double> coords(raw.begin(), raw.end());
  double total = 0.0;
  for (std::size_t i = 0; i < coords.size(); ++i) {
    double& c = coords[i];
    if (!std::isfinite(c)) {
      throw InvalidArgument("probability vector coordinate " +
                            std::to_string(i) + " is not finite");
    }
    if (c < 0.0) {
      if (c < -kNegativeSlack) {
        throw InvalidArgument("probability vector has negative coordinate " +
                              std::to_string(i) + " (" + std::to_string(c) +
                              ")");
      }
      c = 0.0;
    }
    total += c;
  }
  if (total <= 0.0) throw InvalidArgument("probability vector is all zero");
  if (total != 1.0) {
    for (double& c : coords) c /= total;
  }
  return ProbabilityVector(std::move(coords));
}

ProbabilityVector ProbabilityVector::vertex(std::size_t size,
                                            std::size_t index) {
  if (index >= size) throw InvalidArgument("vertex index out of range");
  std::vector<double> coords(size, 0.0);
  coords[index] = 1.0;
  return ProbabilityVector(std::move(coords));
}

SamplerSpec SamplerSpec::uniform(std::size_t J, std::uint64_t seed) {
  SamplerSpec spec;
  spec.kind = SamplerKind::uniform;
  spec.J = J;
  spec.seed = seed;
  spec.check();
  return spec;
}

SamplerSpec SamplerSpec::dirichlet(std::vector<double> alpha,
                                   std::uint64_t seed) {
  SamplerSpec spec;
  spec.kind = SamplerKind::dirichlet;
  spec.J = alpha.size();
  spec.alpha = std::move(alpha);
  spec.seed = seed;
  spec.check();
  return spec;
}

SamplerSpec SamplerSpec::point_mass_mixture(
    std::vector<ProbabilityVector> atoms, std::span<const double> weights,
    std::uint64_t seed) {
  SamplerSpec spec;
  spec.kind = SamplerKind::point_mass_mixture;
  spec.J = atoms.empty() ? 0 : atoms.front().size();
  spec.atoms = std::move(atoms);
  spec.weights = ProbabilityVector::validate(weights).coords();
  spec.seed = seed;
  spec.check();
  return spec;
}

SamplerSpec SamplerSpec::with_seed(std::uint64_t new_seed) const {
  SamplerSpec copy = *this;
  copy.seed = new_seed;
  return copy;
}

void SamplerSpec::check() const {
  if (J < 2) {
    throw InvalidArgument("sampler dimension J must be at least 2, got " +
                          std::to_string(J));
  }
  switch (kind) {
    case SamplerKind::uniform:
      break;
    case SamplerKind::dirichlet:
      if (alpha.size() != J) {
        throw InvalidArgument("dirichlet alpha length does not match J");
      }
      for (double a : alpha) {
        if (!(a > 0.0) || !std::isfinite(a)) {
          throw InvalidArgument(
              "dirichlet alpha coordinates must be strictly positive");
        }
      }
      break;
    case SamplerKind::point_mass_mixture: {
      if (atoms.empty()) throw InvalidArgument("point-mass mixture has no atoms");
      if (weights.size() != atoms.size()) {
        throw InvalidArgument("point-mass mixture needs one weight per atom");
      }
      for (const auto& atom : atoms) {
        if (atom.size() != J) {
          throw InvalidArgument("point-mass atoms must all have dimension J");
        }
      }
      // Throws if the weights are not a probability vector.
      (void)ProbabilityVector::validate(weights);
      break;
    }
  }
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  return splitmix64(splitmix64(seed) ^ splitmix64(~stream));
}

Sampler::Sampler(SamplerSpec spec) : spec_(std::move(spec)) {
  spec_.check();
  engine_.seed(spec_.seed);
  if (spec_.kind == SamplerKind::dirichlet) {
    gammas_.reserve(spec_.J);
    for (double a : spec_.alpha) gammas_.emplace_back(a, 1.0);
  } else if (spec_.kind == SamplerKind::point_mass_mixture) {
    atom_choice_ = std::discrete_distribution<std::size_t>(
        spec_.weights.begin(), spec_.weights.end());
  }
}

void Sampler::next_into(std::span<double> out) {
  if (out.size() != spec_.J) throw InvalidArgument("output size must equal J");
  switch (spec_.kind) {
    case SamplerKind::uniform:
    case SamplerKind::dirichlet: {
      // Normalized independent Gamma draws; Gamma(1) is the exponential.
      double total = 0.0;
      do {
        total = 0.0;
        for (std::size_t j = 0; j < spec_.J; ++j) {
          out[j] = spec_.kind == SamplerKind::uniform
                       ? std::exponential_distribution<double>(1.0)(engine_)
                       : gammas_[j](engine_);
          total += out[j];
        }
      } while (!(total > 0.0));
      for (double& x : out) x /= total;
      break;
    }
    case SamplerKind::point_mass_mixture: {
      const auto& atom = spec_.atoms[atom_choice_(engine_)];
      std::copy(atom.begin(), atom.end(), out.begin());
      break;
    }
  }
}

ProbabilityVector Sampler::next() {
  std::vector<double> buf(spec_.J);
  next_into(buf);
  return ProbabilityVector::validate(buf);
}

std::vector<ProbabilityVector> sample(const SamplerSpec& spec, std::size_t n) {
  if (n < 1) throw InvalidArgument("sample size must be at least 1");
  Sampler sampler(spec);
  std::vector<ProbabilityVector> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(sampler.next());
  return out;
}

}  // namespace mixgeom
