#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "phasegbs/oracles.hpp"

namespace phasegbs {

namespace {

using Tuple = std::vector<std::size_t>;

// Occupation tuples of M modes grouped by total photon number N <= K, with a
// dense lookup from the base-(K+1) encoding of a tuple to its block index.
class FockBasis {
 public:
  FockBasis(std::size_t modes, std::size_t cutoff)
      : modes_(modes), cutoff_(cutoff), blocks_(cutoff + 1) {
    std::size_t codes = 1;
    for (std::size_t j = 0; j < modes; ++j) codes *= cutoff + 1;
    index_.assign(codes, 0);
    Tuple t(modes, 0);
    enumerate(t, 0, 0);
  }

  std::size_t modes() const { return modes_; }
  std::size_t cutoff() const { return cutoff_; }
  const std::vector<Tuple>& block(std::size_t n) const { return blocks_[n]; }
  std::size_t index(const Tuple& t) const { return index_[encode(t)]; }

 private:
  std::size_t encode(const Tuple& t) const {
    std::size_t c = 0;
    for (std::size_t v : t) c = c * (cutoff_ + 1) + v;
    return c;
  }

  void enumerate(Tuple& t, std::size_t mode, std::size_t used) {
    if (mode == modes_) {
      auto& b = blocks_[used];
      index_[encode(t)] = b.size();
      b.push_back(t);
      return;
    }
    for (std::size_t v = 0; used + v <= cutoff_; ++v) {
      t[mode] = v;
      enumerate(t, mode + 1, used + v);
    }
    t[mode] = 0;
  }

  std::size_t modes_;
  std::size_t cutoff_;
  std::vector<std::vector<Tuple>> blocks_;
  std::vector<std::size_t> index_;
};

double factorial(std::size_t n) { return std::exp(std::lgamma(static_cast<double>(n) + 1.0)); }

// Density matrix on levels 0..cutoff of the zero-mean single-mode Gaussian
// state with <a^dagger a> = n and <a^2> = m (m real): a squeezed thermal state
// S(r') rho_th(n') S(r')^dagger.
RMatrix single_mode_density(double n, double m, std::size_t cutoff) {
  const auto dim = static_cast<Eigen::Index>(cutoff + 1);
  RMatrix rho = RMatrix::Zero(dim, dim);
  if (n == 0.0 && m == 0.0) {
    rho(0, 0) = 1.0;
    return rho;
  }
  const double h = n + 0.5;
  const double thermal = std::max(0.0, std::sqrt(std::max(0.0, h * h - m * m)) - 0.5);
  const double r = 0.5 * std::atanh(m / h);
  const double mu = std::cosh(r);
  const double nu = std::sinh(r);

  // Thermal weights p_k = n'^k / (1 + n')^{k+1}, kept until the tail is negligible.
  std::vector<double> weights;
  {
    double p = 1.0 / (1.0 + thermal);
    const double q = thermal / (1.0 + thermal);
    double remaining = 1.0;
    while (true) {
      weights.push_back(p);
      remaining -= p;
      if (thermal == 0.0 || remaining < 1e-17 || weights.size() > 400) break;
      p *= q;
    }
  }
  const std::size_t kmax = weights.size() - 1;
  const std::size_t work = 2 * (cutoff + kmax) + 128;

  // S|0>: c_0 = 1/sqrt(mu), c_{2k} = c_{2k-2} (nu/mu) sqrt((2k-1)/(2k)), using the
  // sign convention S^dagger a S = mu a + nu a^dagger so that <a^2> = mu nu > 0.
  Eigen::VectorXd psi = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(work));
  psi(0) = 1.0 / std::sqrt(mu);
  const double ratio = nu / mu;
  for (std::size_t k = 2; k < work; k += 2) {
    psi(static_cast<Eigen::Index>(k)) = psi(static_cast<Eigen::Index>(k - 2)) * ratio *
                                        std::sqrt(static_cast<double>(k - 1) / static_cast<double>(k));
  }
  for (std::size_t k = 0; k <= kmax; ++k) {
    if (k > 0) {
      // S|k> = (mu a^dagger - nu a) S|k-1> / sqrt(k)
      Eigen::VectorXd next = Eigen::VectorXd::Zero(psi.size());
      for (Eigen::Index i = 0; i < psi.size(); ++i) {
        const double v = psi(i);
        if (v == 0.0) continue;
        if (i + 1 < psi.size()) next(i + 1) += mu * std::sqrt(static_cast<double>(i + 1)) * v;
        if (i > 0) next(i - 1) -= nu * std::sqrt(static_cast<double>(i)) * v;
      }
      psi = next / std::sqrt(static_cast<double>(k));
    }
    const auto head = psi.head(dim);
    rho.noalias() += weights[k] * head * head.transpose();
  }
  return rho;
}

// Fock-space representation, restricted to total photon number N, of the
// passive unitary with mode map a_j^dagger -> sum_i u(i, j) a_i^dagger.
CMatrix passive_block(const FockBasis& basis, const CMatrix& u, std::size_t n) {
  const auto& tuples = basis.block(n);
  const auto size = static_cast<Eigen::Index>(tuples.size());
  CMatrix out(size, size);
  const std::size_t modes = basis.modes();
  std::vector<Complex> poly;
  std::vector<Complex> next;
  for (Eigen::Index col = 0; col < size; ++col) {
    const Tuple& in = tuples[static_cast<std::size_t>(col)];
    poly.assign(1, Complex(1.0, 0.0));
    std::size_t degree = 0;
    double norm = 1.0;
    for (std::size_t j = 0; j < modes; ++j) {
      norm *= factorial(in[j]);
      for (std::size_t rep = 0; rep < in[j]; ++rep) {
        const auto& from = basis.block(degree);
        next.assign(basis.block(degree + 1).size(), Complex(0.0, 0.0));
        for (std::size_t t = 0; t < from.size(); ++t) {
          if (poly[t] == Complex(0.0, 0.0)) continue;
          Tuple up = from[t];
          for (std::size_t i = 0; i < modes; ++i) {
            ++up[i];
            next[basis.index(up)] +=
                poly[t] * u(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
            --up[i];
          }
        }
        poly.swap(next);
        ++degree;
      }
    }
    const double inv = 1.0 / std::sqrt(norm);
    for (Eigen::Index row = 0; row < size; ++row) {
      const Tuple& t = tuples[static_cast<std::size_t>(row)];
      double w = 1.0;
      for (std::size_t v : t) w *= factorial(v);
      out(row, col) = poly[static_cast<std::size_t>(row)] * std::sqrt(w) * inv;
    }
  }
  return out;
}

void apply_passive(const FockBasis& basis, const CMatrix& u, std::vector<CMatrix>& blocks) {
  for (std::size_t n = 1; n < blocks.size(); ++n) {
    const CMatrix p = passive_block(basis, u, n);
    blocks[n] = p * blocks[n] * p.adjoint();
  }
}

// Pure loss with intensity transmissions eta_j on every mode.
void apply_loss(const FockBasis& basis, const std::vector<double>& eta,
                std::vector<CMatrix>& blocks) {
  const std::size_t k = basis.cutoff();
  const std::size_t modes = basis.modes();
  RMatrix binom = RMatrix::Zero(static_cast<Eigen::Index>(k + 1), static_cast<Eigen::Index>(k + 1));
  for (std::size_t a = 0; a <= k; ++a) {
    for (std::size_t b = 0; b <= a; ++b) {
      binom(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) =
          std::exp(std::lgamma(a + 1.0) - std::lgamma(b + 1.0) - std::lgamma(a - b + 1.0));
    }
  }
  auto pow_or_one = [](double base, std::size_t e) {
    return e == 0 ? 1.0 : std::pow(base, static_cast<double>(e));
  };

  std::vector<CMatrix> out(blocks.size());
  for (std::size_t n = 0; n <= k; ++n) {
    const auto& tuples = basis.block(n);
    const auto size = static_cast<Eigen::Index>(tuples.size());
    out[n] = CMatrix::Zero(size, size);
    for (std::size_t extra = 0; n + extra <= k; ++extra) {
      const auto& lost = basis.block(extra);
      const CMatrix& src = blocks[n + extra];
      for (const Tuple& l : lost) {
        double loss_weight = 1.0;
        for (std::size_t j = 0; j < modes; ++j) loss_weight *= pow_or_one(1.0 - eta[j], l[j]);
        if (loss_weight == 0.0) continue;
        std::vector<std::size_t> src_index(tuples.size());
        std::vector<double> amp(tuples.size());
        Tuple shifted(modes);
        for (std::size_t a = 0; a < tuples.size(); ++a) {
          double w = 1.0;
          for (std::size_t j = 0; j < modes; ++j) {
            shifted[j] = tuples[a][j] + l[j];
            w *= std::sqrt(binom(static_cast<Eigen::Index>(shifted[j]),
                                 static_cast<Eigen::Index>(l[j]))) *
                 pow_or_one(std::sqrt(eta[j]), tuples[a][j]);
          }
          src_index[a] = basis.index(shifted);
          amp[a] = w;
        }
        for (Eigen::Index a = 0; a < size; ++a) {
          const auto ua = static_cast<std::size_t>(a);
          if (amp[ua] == 0.0) continue;
          for (Eigen::Index b = 0; b < size; ++b) {
            const auto ub = static_cast<std::size_t>(b);
            out[n](a, b) += loss_weight * amp[ua] * amp[ub] *
                            src(static_cast<Eigen::Index>(src_index[ua]),
                                static_cast<Eigen::Index>(src_index[ub]));
          }
        }
      }
    }
  }
  blocks.swap(out);
}

}  // namespace

FockOracleResult fock_truncation_oracle(const SqueezerSpec& spec, const TransmissionMatrix& t,
                                        std::size_t photon_cutoff, double max_deficit) {
  spec.validate();
  const std::size_t modes = t.rows();
  if (t.rows() != t.cols()) throw InputError("Fock oracle needs a square transmission matrix");
  if (modes > kMaxFockModes) {
    throw InputError("Fock oracle is limited to " + std::to_string(kMaxFockModes) + " modes");
  }
  if (spec.mode_count() > modes) throw InputError("squeezer spec has more modes than the network");
  if (photon_cutoff == 0) throw InputError("photon cutoff must be positive");

  const InputMoments in = derive_moments(spec);
  const FockBasis basis(modes, photon_cutoff);

  std::vector<RMatrix> single;
  for (std::size_t j = 0; j < modes; ++j) {
    const double n = j < spec.mode_count() ? in.photon_number[j] : 0.0;
    const double m = j < spec.mode_count() ? in.coherence[j] : 0.0;
    single.push_back(single_mode_density(n, m, photon_cutoff));
  }

  std::vector<CMatrix> blocks(photon_cutoff + 1);
  double trace = 0.0;
  for (std::size_t n = 0; n <= photon_cutoff; ++n) {
    const auto& tuples = basis.block(n);
    const auto size = static_cast<Eigen::Index>(tuples.size());
    blocks[n].resize(size, size);
    for (Eigen::Index a = 0; a < size; ++a) {
      for (Eigen::Index b = 0; b < size; ++b) {
        double v = 1.0;
        for (std::size_t j = 0; j < modes; ++j) {
          v *= single[j](static_cast<Eigen::Index>(tuples[static_cast<std::size_t>(a)][j]),
                         static_cast<Eigen::Index>(tuples[static_cast<std::size_t>(b)][j]));
        }
        blocks[n](a, b) = v;
      }
      trace += blocks[n](a, a).real();
    }
  }
  const double deficit = 1.0 - trace;
  if (deficit > max_deficit) {
    throw NumericalError("photon cutoff " + std::to_string(photon_cutoff) +
                         " leaves a norm deficit of " + std::to_string(deficit));
  }

  if (t.is_unitary()) {
    apply_passive(basis, t.matrix(), blocks);
  } else {
    // T = U diag(s) V^dagger
    Eigen::JacobiSVD<CMatrix> svd(t.matrix(), Eigen::ComputeFullU | Eigen::ComputeFullV);
    std::vector<double> eta(modes);
    for (std::size_t j = 0; j < modes; ++j) {
      const double s = std::min(1.0, svd.singularValues()(static_cast<Eigen::Index>(j)));
      eta[j] = s * s;
    }
    apply_passive(basis, svd.matrixV().adjoint(), blocks);
    apply_loss(basis, eta, blocks);
    apply_passive(basis, svd.matrixU(), blocks);
  }

  FockOracleResult result;
  result.norm_deficit = deficit;
  result.pattern_probabilities.assign(std::size_t{1} << modes, 0.0);
  for (std::size_t n = 0; n <= photon_cutoff; ++n) {
    const auto& tuples = basis.block(n);
    for (std::size_t a = 0; a < tuples.size(); ++a) {
      std::size_t mask = 0;
      for (std::size_t j = 0; j < modes; ++j) {
        if (tuples[a][j] > 0) mask |= std::size_t{1} << j;
      }
      result.pattern_probabilities[mask] += blocks[n](static_cast<Eigen::Index>(a),
                                                      static_cast<Eigen::Index>(a)).real();
    }
  }
  return result;
}

}  // namespace phasegbs
