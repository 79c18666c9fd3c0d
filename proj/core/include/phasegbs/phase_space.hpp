#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "phasegbs/types.hpp"

namespace phasegbs {

/// Squeezed (or vacuum) inputs with an optional thermal decoherence fraction.
///
/// `squeezing[j]` is the signed squeezing parameter r_j of mode j. Positive r
/// squeezes the p quadrature, negative r the x quadrature, zero is vacuum.
/// `decoherence` (epsilon) replaces a fraction of the coherent squeezing by
/// thermal photons while keeping the photon number of each mode fixed.
struct SqueezerSpec {
  std::vector<double> squeezing;
  double decoherence = 0.0;

  std::size_t mode_count() const { return squeezing.size(); }

  /// Throws InputError unless M >= 1, every r_j is finite and 0 <= epsilon <= 1.
  void validate() const;

  /// `squeezed` leading modes with squeezing r, the remainder vacuum.
  static SqueezerSpec uniform(std::size_t modes, std::size_t squeezed, double r,
                              double decoherence = 0.0);

  bool operator==(const SqueezerSpec&) const = default;
};

/// Per-mode photon number n_j = sinh^2 r_j and coherence
/// <a_j^2> = (1 - epsilon) sinh r_j cosh r_j.
struct InputMoments {
  std::vector<double> photon_number;
  std::vector<double> coherence;
};

InputMoments derive_moments(const SqueezerSpec& spec);

/// Operator-ordering parameter sigma of a phase-space representation.
/// 0 is the normally ordered positive-P representation, 1/2 the Wigner
/// function and 1 the Husimi Q function.
class Ordering {
 public:
  /// Throws InputError unless sigma is one of 0, 1/2, 1.
  explicit Ordering(double sigma);

  static Ordering positive_p() { return Ordering(0.0); }
  static Ordering wigner() { return Ordering(0.5); }
  static Ordering husimi() { return Ordering(1.0); }

  double sigma() const { return sigma_; }
  bool is_normal() const { return sigma_ == 0.0; }

  bool operator==(const Ordering&) const = default;

 private:
  double sigma_;
};

/// Number of sub-ensembles and samples per sub-ensemble.
struct EnsembleLayout {
  std::size_t subensembles = 1;
  std::size_t subensemble_size = 1;

  std::size_t sample_count() const { return subensembles * subensemble_size; }
  void validate() const;

  bool operator==(const EnsembleLayout&) const = default;
};

/// One sub-ensemble of amplitudes. Column s holds sample s; row j is mode j.
struct SubEnsemble {
  CMatrix alpha;
  CMatrix beta;

  std::size_t mode_count() const { return static_cast<std::size_t>(alpha.rows()); }
  std::size_t sample_count() const { return static_cast<std::size_t>(alpha.cols()); }
};

/// Immutable ensemble of phase-space samples, stored as equal-sized
/// sub-ensembles. For sigma > 0, beta is exactly conj(alpha).
class PhaseSpaceEnsemble {
 public:
  PhaseSpaceEnsemble(Ordering ordering, std::vector<SubEnsemble> blocks,
                     std::uint64_t seed);

  Ordering ordering() const { return ordering_; }
  std::uint64_t seed() const { return seed_; }
  std::size_t mode_count() const { return blocks_.front().mode_count(); }
  std::size_t subensemble_count() const { return blocks_.size(); }
  std::size_t subensemble_size() const { return blocks_.front().sample_count(); }
  std::size_t sample_count() const { return subensemble_count() * subensemble_size(); }

  const SubEnsemble& block(std::size_t i) const { return blocks_.at(i); }
  std::span<const SubEnsemble> blocks() const { return blocks_; }

  /// Sample s (counted across sub-ensembles), mode j.
  Complex alpha(std::size_t s, std::size_t j) const;
  Complex beta(std::size_t s, std::size_t j) const;

 private:
  Ordering ordering_;
  std::vector<SubEnsemble> blocks_;
  std::uint64_t seed_;
};

/// A lazily evaluated sequence of sub-ensembles. Estimators consume sources so
/// that ensembles too large for memory are generated block by block.
class BlockSource {
 public:
  using Generator = std::function<SubEnsemble(std::size_t)>;

  BlockSource(Ordering ordering, std::size_t mode_count, EnsembleLayout layout,
              Generator generate);

  /// Reads the blocks of an in-memory ensemble (which must outlive the source).
  static BlockSource from(const PhaseSpaceEnsemble& ensemble);

  Ordering ordering() const { return ordering_; }
  std::size_t mode_count() const { return modes_; }
  const EnsembleLayout& layout() const { return layout_; }
  SubEnsemble block(std::size_t i) const { return generate_(i); }

 private:
  Ordering ordering_;
  std::size_t modes_;
  EnsembleLayout layout_;
  Generator generate_;
};

/// Generates input sub-ensemble `index` for any ordering. A pure function of
/// its arguments: the noise stream is derived from (seed, index) alone.
SubEnsemble sample_input_block(const SqueezerSpec& spec, Ordering ordering,
                               std::uint64_t seed, std::size_t index,
                               std::size_t size);

/// Positive-P samples alpha = d+ w1 + i d- w2, beta = d+ w1 - i d- w2 with
/// d+- = sqrt((n +- m)/2) (principal complex root).
PhaseSpaceEnsemble sample_positive_p(const SqueezerSpec& spec, std::uint64_t seed,
                                     EnsembleLayout layout);

/// Classical (beta = conj alpha) samples for sigma > 0 with
/// d+- = sqrt((n + sigma +- m)/2).
PhaseSpaceEnsemble sample_sigma_ordered(const SqueezerSpec& spec, Ordering ordering,
                                        std::uint64_t seed, EnsembleLayout layout);

/// Source producing input blocks on demand.
BlockSource input_source(const SqueezerSpec& spec, Ordering ordering,
                         std::uint64_t seed, EnsembleLayout layout);

}  // namespace phasegbs
