#pragma once

#include <cstddef>
#include <cstdint>

#include "phasegbs/phase_space.hpp"
#include "phasegbs/types.hpp"

namespace phasegbs {

inline constexpr double kAmplificationTolerance = 1e-9;
inline constexpr double kUnitaryTolerance = 1e-10;
inline constexpr double kDecoherenceClamp = 1e-12;

/// Linear map from M_in input modes (columns) to M_out output modes (rows).
/// Construction rejects matrices with a singular value above
/// 1 + kAmplificationTolerance.
class TransmissionMatrix {
 public:
  /// `declared_unitary` asks for verification: the matrix must be square with
  /// ||T^dagger T - I||_max <= kUnitaryTolerance or InputError is thrown.
  explicit TransmissionMatrix(CMatrix matrix, bool declared_unitary = false);

  static TransmissionMatrix identity(std::size_t modes);

  const CMatrix& matrix() const { return matrix_; }
  std::size_t rows() const { return static_cast<std::size_t>(matrix_.rows()); }
  std::size_t cols() const { return static_cast<std::size_t>(matrix_.cols()); }
  bool is_unitary() const { return unitary_; }
  double max_singular_value() const { return max_singular_value_; }

  /// ||T^dagger T - I||_max for square matrices, +inf otherwise.
  double unitarity_residual() const;

 private:
  CMatrix matrix_;
  bool unitary_ = false;
  double max_singular_value_ = 0.0;
};

/// Every entry multiplied by `factor`; unitarity is re-evaluated.
TransmissionMatrix scale_transmission(const TransmissionMatrix& t, double factor);

/// Haar-random unitary: QR of a complex Gaussian matrix with the phases of
/// R's diagonal moved into Q.
TransmissionMatrix random_unitary(std::size_t modes, std::uint64_t seed);

/// Hermitian square root B of the decoherence matrix D = I - T T^dagger
/// (output side). Eigenvalues of D in [-kDecoherenceClamp, 0) are clamped to
/// zero; anything more negative throws InputError.
CMatrix decoherence_matrix_sqrt(const TransmissionMatrix& t);

/// alpha' = T alpha, beta' = conj(T) beta. Losses need no added noise in
/// normal ordering.
PhaseSpaceEnsemble transform_positive_p(const PhaseSpaceEnsemble& ensemble,
                                        const TransmissionMatrix& t);

/// alpha' = T alpha + sqrt(sigma/2) B (u + i v), beta' = conj(alpha'), which
/// keeps vacuum noise at sigma when T is lossy. Noise streams derive from
/// (seed, sub-ensemble index).
PhaseSpaceEnsemble transform_sigma_ordered(const PhaseSpaceEnsemble& ensemble,
                                           const TransmissionMatrix& t,
                                           std::uint64_t seed);

/// Generates input blocks and pushes each through a network. The object used
/// by the large-ensemble estimators; `transform_*` above are the in-memory
/// equivalents and produce identical blocks for the same seeds.
class NetworkSampler {
 public:
  NetworkSampler(SqueezerSpec spec, Ordering ordering, TransmissionMatrix t,
                 std::uint64_t seed);

  SubEnsemble block(std::size_t index, std::size_t size) const;
  BlockSource source(EnsembleLayout layout) const;

  std::size_t output_modes() const { return transmission_.rows(); }

 private:
  SqueezerSpec spec_;
  Ordering ordering_;
  TransmissionMatrix transmission_;
  CMatrix noise_scale_;  // sqrt(sigma/2) B, empty when no noise is needed
  std::uint64_t seed_;
};

}  // namespace phasegbs
