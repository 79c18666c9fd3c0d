#include "phasegbs/phase_space.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "phasegbs/rng.hpp"

namespace phasegbs {

void SqueezerSpec::validate() const {
  if (squeezing.empty()) throw InputError("squeezer spec needs at least one mode");
  for (std::size_t j = 0; j < squeezing.size(); ++j) {
    if (!std::isfinite(squeezing[j])) {
      throw InputError("squeezing of mode " + std::to_string(j) + " is not finite");
    }
  }
  if (!(decoherence >= 0.0 && decoherence <= 1.0)) {
    throw InputError("decoherence fraction must lie in [0, 1], got " +
                     std::to_string(decoherence));
  }
}

SqueezerSpec SqueezerSpec::uniform(std::size_t modes, std::size_t squeezed, double r,
                                   double decoherence) {
  if (squeezed > modes) throw InputError("more squeezed inputs than modes");
  SqueezerSpec spec;
  spec.squeezing.assign(modes, 0.0);
  for (std::size_t j = 0; j < squeezed; ++j) spec.squeezing[j] = r;
  spec.decoherence = decoherence;
  spec.validate();
  return spec;
}

InputMoments derive_moments(const SqueezerSpec& spec) {
  InputMoments out;
  out.photon_number.reserve(spec.mode_count());
  out.coherence.reserve(spec.mode_count());
  for (double r : spec.squeezing) {
    const double s = std::sinh(r);
    out.photon_number.push_back(s * s);
    out.coherence.push_back((1.0 - spec.decoherence) * s * std::cosh(r));
  }
  return out;
}

Ordering::Ordering(double sigma) : sigma_(sigma) {
  if (sigma != 0.0 && sigma != 0.5 && sigma != 1.0) {
    throw InputError("ordering parameter must be 0, 0.5 or 1, got " + std::to_string(sigma));
  }
}

void EnsembleLayout::validate() const {
  if (subensembles == 0 || subensemble_size == 0) {
    throw InputError("ensemble layout needs at least one sub-ensemble of one sample");
  }
}

PhaseSpaceEnsemble::PhaseSpaceEnsemble(Ordering ordering, std::vector<SubEnsemble> blocks,
                                       std::uint64_t seed)
    : ordering_(ordering), blocks_(std::move(blocks)), seed_(seed) {
  if (blocks_.empty()) throw InputError("ensemble has no sub-ensembles");
  const auto rows = blocks_.front().alpha.rows();
  const auto cols = blocks_.front().alpha.cols();
  for (const auto& b : blocks_) {
    if (b.alpha.rows() != rows || b.alpha.cols() != cols || b.beta.rows() != rows ||
        b.beta.cols() != cols) {
      throw InputError("sub-ensembles must share one shape");
    }
  }
}

Complex PhaseSpaceEnsemble::alpha(std::size_t s, std::size_t j) const {
  const std::size_t n = subensemble_size();
  return blocks_.at(s / n).alpha(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(s % n));
}

Complex PhaseSpaceEnsemble::beta(std::size_t s, std::size_t j) const {
  const std::size_t n = subensemble_size();
  return blocks_.at(s / n).beta(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(s % n));
}

BlockSource::BlockSource(Ordering ordering, std::size_t mode_count, EnsembleLayout layout,
                         Generator generate)
    : ordering_(ordering), modes_(mode_count), layout_(layout), generate_(std::move(generate)) {
  layout_.validate();
}

BlockSource BlockSource::from(const PhaseSpaceEnsemble& ensemble) {
  EnsembleLayout layout{ensemble.subensemble_count(), ensemble.subensemble_size()};
  return BlockSource(ensemble.ordering(), ensemble.mode_count(), layout,
                     [&ensemble](std::size_t i) { return ensemble.block(i); });
}

namespace {

struct NoiseCoefficients {
  std::vector<Complex> plus;
  std::vector<Complex> minus;
};

NoiseCoefficients noise_coefficients(const SqueezerSpec& spec, Ordering ordering) {
  spec.validate();
  const InputMoments moments = derive_moments(spec);
  const double sigma = ordering.sigma();
  NoiseCoefficients c;
  for (std::size_t j = 0; j < spec.mode_count(); ++j) {
    const double n = moments.photon_number[j];
    const double m = moments.coherence[j];
    if (!std::isfinite(n) || !std::isfinite(m)) {
      throw NumericalError("input moments of mode " + std::to_string(j) + " are not finite");
    }
    double plus = (n + sigma + m) / 2.0;
    double minus = (n + sigma - m) / 2.0;
    if (!ordering.is_normal()) {
      // A classical representation needs n + sigma >= |m|.
      const double tol = 1e-12 * std::max(1.0, n);
      if (plus < -tol || minus < -tol) {
        throw InputError("mode " + std::to_string(j) +
                         " has no classical sigma-ordered distribution (n + sigma < |m|)");
      }
      plus = std::max(plus, 0.0);
      minus = std::max(minus, 0.0);
    }
    c.plus.push_back(std::sqrt(Complex(plus, 0.0)));
    c.minus.push_back(std::sqrt(Complex(minus, 0.0)));
  }
  return c;
}

SubEnsemble sample_block(const NoiseCoefficients& c, Ordering ordering, std::uint64_t seed,
                         std::size_t index, std::size_t size) {
  const auto modes = static_cast<Eigen::Index>(c.plus.size());
  const auto cols = static_cast<Eigen::Index>(size);
  SubEnsemble block{CMatrix(modes, cols), CMatrix(modes, cols)};
  NormalStream noise(derive_stream_seed(seed, StreamDomain::input_samples, index));
  const Complex i_unit(0.0, 1.0);
  std::vector<double> w(2 * c.plus.size());
  for (Eigen::Index s = 0; s < cols; ++s) {
    for (double& x : w) x = noise();
    for (Eigen::Index j = 0; j < modes; ++j) {
      const Complex even = c.plus[j] * w[j];
      const Complex odd = i_unit * c.minus[j] * w[j + modes];
      block.alpha(j, s) = even + odd;
      block.beta(j, s) = ordering.is_normal() ? even - odd : std::conj(even + odd);
    }
  }
  return block;
}

}  // namespace

SubEnsemble sample_input_block(const SqueezerSpec& spec, Ordering ordering,
                               std::uint64_t seed, std::size_t index, std::size_t size) {
  return sample_block(noise_coefficients(spec, ordering), ordering, seed, index, size);
}

BlockSource input_source(const SqueezerSpec& spec, Ordering ordering, std::uint64_t seed,
                         EnsembleLayout layout) {
  auto coefficients = noise_coefficients(spec, ordering);
  const std::size_t size = layout.subensemble_size;
  return BlockSource(ordering, spec.mode_count(), layout,
                     [coefficients = std::move(coefficients), ordering, seed, size](std::size_t i) {
                       return sample_block(coefficients, ordering, seed, i, size);
                     });
}

namespace {

PhaseSpaceEnsemble materialize(const SqueezerSpec& spec, Ordering ordering,
                               std::uint64_t seed, EnsembleLayout layout) {
  layout.validate();
  const auto coefficients = noise_coefficients(spec, ordering);
  std::vector<SubEnsemble> blocks(layout.subensembles);
  for (std::size_t i = 0; i < layout.subensembles; ++i) {
    blocks[i] = sample_block(coefficients, ordering, seed, i, layout.subensemble_size);
  }
  return PhaseSpaceEnsemble(ordering, std::move(blocks), seed);
}

}  // namespace

PhaseSpaceEnsemble sample_positive_p(const SqueezerSpec& spec, std::uint64_t seed,
                                     EnsembleLayout layout) {
  return materialize(spec, Ordering::positive_p(), seed, layout);
}

PhaseSpaceEnsemble sample_sigma_ordered(const SqueezerSpec& spec, Ordering ordering,
                                        std::uint64_t seed, EnsembleLayout layout) {
  if (ordering.is_normal()) {
    throw InputError("sample_sigma_ordered needs sigma > 0; use sample_positive_p");
  }
  return materialize(spec, ordering, seed, layout);
}

}  // namespace phasegbs
