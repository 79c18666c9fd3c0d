#include "phasegbs/network.hpp"

#include <cmath>
#include <limits>
#include <memory>
#include <string>
#include <utility>

#include "phasegbs/parallel.hpp"
#include "phasegbs/rng.hpp"

namespace phasegbs {

TransmissionMatrix::TransmissionMatrix(CMatrix matrix, bool declared_unitary)
    : matrix_(std::move(matrix)) {
  if (matrix_.rows() == 0 || matrix_.cols() == 0) {
    throw InputError("transmission matrix must be non-empty");
  }
  if (!matrix_.allFinite()) throw InputError("transmission matrix has non-finite entries");
  unitary_ = unitarity_residual() <= kUnitaryTolerance;
  if (unitary_) {
    max_singular_value_ = 1.0;
  } else {
    Eigen::BDCSVD<CMatrix> svd(matrix_);
    max_singular_value_ = svd.singularValues()(0);
  }
  if (max_singular_value_ > 1.0 + kAmplificationTolerance) {
    throw InputError("transmission matrix amplifies: largest singular value " +
                     std::to_string(max_singular_value_));
  }
  if (declared_unitary && !unitary_) {
    throw InputError("matrix declared unitary has ||T^dagger T - I||_max = " +
                     std::to_string(unitarity_residual()));
  }
}

TransmissionMatrix TransmissionMatrix::identity(std::size_t modes) {
  const auto n = static_cast<Eigen::Index>(modes);
  return TransmissionMatrix(CMatrix::Identity(n, n), true);
}

double TransmissionMatrix::unitarity_residual() const {
  if (matrix_.rows() != matrix_.cols()) return std::numeric_limits<double>::infinity();
  const auto n = matrix_.rows();
  return (matrix_.adjoint() * matrix_ - CMatrix::Identity(n, n)).cwiseAbs().maxCoeff();
}

TransmissionMatrix scale_transmission(const TransmissionMatrix& t, double factor) {
  if (!(factor > 0.0) || !std::isfinite(factor)) {
    throw InputError("scale factor must be positive and finite");
  }
  return TransmissionMatrix(t.matrix() * factor);
}

TransmissionMatrix random_unitary(std::size_t modes, std::uint64_t seed) {
  if (modes == 0) throw InputError("random unitary needs at least one mode");
  const auto n = static_cast<Eigen::Index>(modes);
  NormalStream noise(derive_stream_seed(seed, StreamDomain::random_unitary, modes));
  CMatrix z(n, n);
  const double scale = 1.0 / std::sqrt(2.0);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const double re = noise();
      const double im = noise();
      z(i, j) = Complex(re, im) * scale;
    }
  }
  Eigen::HouseholderQR<CMatrix> qr(z);
  CMatrix q = qr.householderQ();
  const CMatrix& r = qr.matrixQR();
  for (Eigen::Index j = 0; j < n; ++j) {
    const Complex d = r(j, j);
    const double mag = std::abs(d);
    q.col(j) *= mag > 0.0 ? d / mag : Complex(1.0, 0.0);
  }
  return TransmissionMatrix(std::move(q), true);
}

CMatrix decoherence_matrix_sqrt(const TransmissionMatrix& t) {
  const auto n = static_cast<Eigen::Index>(t.rows());
  if (t.is_unitary()) return CMatrix::Zero(n, n);
  CMatrix d = CMatrix::Identity(n, n) - t.matrix() * t.matrix().adjoint();
  d = (d + d.adjoint()).eval() * 0.5;
  Eigen::SelfAdjointEigenSolver<CMatrix> eig(d);
  RVector lambda = eig.eigenvalues();
  for (Eigen::Index i = 0; i < lambda.size(); ++i) {
    if (lambda(i) < -kDecoherenceClamp) {
      throw InputError("decoherence matrix has eigenvalue " + std::to_string(lambda(i)) +
                       " (amplifying or invalid transmission)");
    }
    lambda(i) = std::sqrt(std::max(lambda(i), 0.0));
  }
  const CMatrix& u = eig.eigenvectors();
  return u * lambda.asDiagonal() * u.adjoint();
}

namespace {

void check_input_modes(std::size_t ensemble_modes, const TransmissionMatrix& t) {
  if (ensemble_modes != t.cols()) {
    throw InputError("ensemble has " + std::to_string(ensemble_modes) +
                     " modes but the transmission matrix has " + std::to_string(t.cols()) +
                     " input columns");
  }
}

SubEnsemble apply_network(const SubEnsemble& in, Ordering ordering,
                          const TransmissionMatrix& t, const CMatrix& noise_scale,
                          std::uint64_t seed, std::size_t index) {
  SubEnsemble out;
  out.alpha.noalias() = t.matrix() * in.alpha;
  if (ordering.is_normal()) {
    out.beta.noalias() = t.matrix().conjugate() * in.beta;
    return out;
  }
  if (noise_scale.size() != 0) {
    const auto modes = t.matrix().rows();
    const auto samples = in.alpha.cols();
    NormalStream noise(derive_stream_seed(seed, StreamDomain::vacuum_noise, index));
    CMatrix z(modes, samples);
    for (Eigen::Index s = 0; s < samples; ++s) {
      for (Eigen::Index j = 0; j < modes; ++j) {
        const double u = noise();
        const double v = noise();
        z(j, s) = Complex(u, v);
      }
    }
    out.alpha.noalias() += noise_scale * z;
  }
  out.beta = out.alpha.conjugate();
  return out;
}

CMatrix noise_scale_for(Ordering ordering, const TransmissionMatrix& t) {
  if (ordering.is_normal() || t.is_unitary()) return {};
  return decoherence_matrix_sqrt(t) * std::sqrt(ordering.sigma() / 2.0);
}

}  // namespace

PhaseSpaceEnsemble transform_positive_p(const PhaseSpaceEnsemble& ensemble,
                                        const TransmissionMatrix& t) {
  if (!ensemble.ordering().is_normal()) {
    throw InputError("transform_positive_p needs a positive-P ensemble");
  }
  check_input_modes(ensemble.mode_count(), t);
  std::vector<SubEnsemble> blocks(ensemble.subensemble_count());
  for_each_ordered(
      blocks.size(),
      [&](std::size_t i) {
        return apply_network(ensemble.block(i), ensemble.ordering(), t, {}, 0, i);
      },
      [&](std::size_t i, SubEnsemble&& b) { blocks[i] = std::move(b); });
  return PhaseSpaceEnsemble(ensemble.ordering(), std::move(blocks), ensemble.seed());
}

PhaseSpaceEnsemble transform_sigma_ordered(const PhaseSpaceEnsemble& ensemble,
                                           const TransmissionMatrix& t,
                                           std::uint64_t seed) {
  if (ensemble.ordering().is_normal()) {
    throw InputError("transform_sigma_ordered needs sigma > 0; use transform_positive_p");
  }
  check_input_modes(ensemble.mode_count(), t);
  const CMatrix scale = noise_scale_for(ensemble.ordering(), t);
  std::vector<SubEnsemble> blocks(ensemble.subensemble_count());
  for_each_ordered(
      blocks.size(),
      [&](std::size_t i) {
        return apply_network(ensemble.block(i), ensemble.ordering(), t, scale, seed, i);
      },
      [&](std::size_t i, SubEnsemble&& b) { blocks[i] = std::move(b); });
  return PhaseSpaceEnsemble(ensemble.ordering(), std::move(blocks), ensemble.seed());
}

NetworkSampler::NetworkSampler(SqueezerSpec spec, Ordering ordering, TransmissionMatrix t,
                               std::uint64_t seed)
    : spec_(std::move(spec)), ordering_(ordering), transmission_(std::move(t)), seed_(seed) {
  spec_.validate();
  if (spec_.mode_count() > transmission_.cols()) {
    throw InputError("squeezer spec has " + std::to_string(spec_.mode_count()) +
                     " modes but the transmission matrix only " +
                     std::to_string(transmission_.cols()) + " inputs");
  }
  // Unused inputs are vacuum.
  spec_.squeezing.resize(transmission_.cols(), 0.0);
  noise_scale_ = noise_scale_for(ordering_, transmission_);
}

SubEnsemble NetworkSampler::block(std::size_t index, std::size_t size) const {
  const SubEnsemble in = sample_input_block(spec_, ordering_, seed_, index, size);
  return apply_network(in, ordering_, transmission_, noise_scale_, seed_, index);
}

BlockSource NetworkSampler::source(EnsembleLayout layout) const {
  const std::size_t size = layout.subensemble_size;
  auto self = std::make_shared<const NetworkSampler>(*this);
  return BlockSource(ordering_, output_modes(), layout,
                     [self, size](std::size_t i) { return self->block(i, size); });
}

}  // namespace phasegbs
