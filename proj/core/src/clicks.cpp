#include "phasegbs/clicks.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <string>

#include "phasegbs/parallel.hpp"
#include "phasegbs/validation.hpp"

namespace phasegbs {

GroupPartition::GroupPartition(std::vector<std::vector<std::size_t>> groups,
                               std::size_t mode_count)
    : groups_(std::move(groups)), modes_(mode_count) {
  if (groups_.empty()) throw InputError("partition needs at least one group");
  std::vector<bool> used(modes_, false);
  for (std::size_t j = 0; j < groups_.size(); ++j) {
    if (groups_[j].empty()) {
      throw InputError("group " + std::to_string(j) + " of the partition is empty");
    }
    for (std::size_t i : groups_[j]) {
      if (i >= modes_) {
        throw InputError("mode index " + std::to_string(i) + " in group " + std::to_string(j) +
                         " is outside [0, " + std::to_string(modes_) + ")");
      }
      if (used[i]) {
        throw InputError("mode " + std::to_string(i) + " appears in more than one group");
      }
      used[i] = true;
    }
  }
}

GroupPartition GroupPartition::sequential(std::span<const std::size_t> sizes,
                                          std::size_t mode_count) {
  std::vector<std::vector<std::size_t>> groups;
  std::size_t next = 0;
  for (std::size_t size : sizes) {
    std::vector<std::size_t> g(size);
    std::iota(g.begin(), g.end(), next);
    next += size;
    groups.push_back(std::move(g));
  }
  return GroupPartition(std::move(groups), mode_count);
}

GroupPartition GroupPartition::single(std::size_t mode_count) {
  const std::size_t sizes[] = {mode_count};
  return sequential(sizes, mode_count);
}

std::vector<std::size_t> GroupPartition::extents() const {
  std::vector<std::size_t> e;
  e.reserve(groups_.size());
  for (const auto& g : groups_) e.push_back(g.size() + 1);
  return e;
}

std::size_t GroupPartition::tensor_size() const {
  std::size_t total = 1;
  for (const auto& g : groups_) {
    const std::size_t extent = g.size() + 1;
    if (total > std::numeric_limits<std::size_t>::max() / extent) {
      return std::numeric_limits<std::size_t>::max();
    }
    total *= extent;
  }
  return total;
}

GroupedDistribution::GroupedDistribution(GroupPartition p) : partition(std::move(p)) {
  const std::size_t n = partition.tensor_size();
  probability.assign(n, 0.0);
  std_error.assign(n, 0.0);
  imag.assign(n, 0.0);
}

std::size_t GroupedDistribution::flat_index(std::span<const std::size_t> m) const {
  const auto ext = partition.extents();
  if (m.size() != ext.size()) throw InputError("multi-index has the wrong rank");
  std::size_t flat = 0;
  for (std::size_t j = 0; j < ext.size(); ++j) {
    if (m[j] >= ext[j]) throw InputError("multi-index out of range");
    flat = flat * ext[j] + m[j];
  }
  return flat;
}

std::vector<std::size_t> GroupedDistribution::multi_index(std::size_t flat) const {
  const auto ext = partition.extents();
  std::vector<std::size_t> m(ext.size());
  for (std::size_t j = ext.size(); j-- > 0;) {
    m[j] = flat % ext[j];
    flat /= ext[j];
  }
  return m;
}

double GroupedDistribution::at(std::initializer_list<std::size_t> m) const {
  return probability.at(flat_index(std::span<const std::size_t>(m.begin(), m.size())));
}

double GroupedDistribution::sum() const {
  return std::accumulate(probability.begin(), probability.end(), 0.0);
}

GroupedDistribution GroupedDistribution::marginal(std::span<const std::size_t> keep) const {
  std::vector<std::vector<std::size_t>> groups;
  for (std::size_t j : keep) groups.push_back(partition.group(j));
  GroupedDistribution out(GroupPartition(std::move(groups), partition.mode_count()));
  out.sample_count = sample_count;
  std::vector<std::size_t> sub(keep.size());
  for (std::size_t flat = 0; flat < size(); ++flat) {
    const auto m = multi_index(flat);
    for (std::size_t a = 0; a < keep.size(); ++a) sub[a] = m.at(keep[a]);
    const std::size_t target = out.flat_index(sub);
    out.probability[target] += probability[flat];
    out.imag[target] += imag[flat];
  }
  // Errors of summed bins are correlated; they are not propagated.
  std::fill(out.std_error.begin(), out.std_error.end(),
            std::numeric_limits<double>::quiet_NaN());
  return out;
}

ClickWeights click_weights(const SubEnsemble& block, Ordering ordering) {
  if (!ordering.is_normal()) {
    throw InputError(
        "click weights need a positive-P ensemble; sigma-ordered samples do not give "
        "normally ordered projectors");
  }
  ClickWeights w;
  w.no_click = (-(block.alpha.array() * block.beta.array())).exp().matrix();
  w.click = (1.0 - w.no_click.array()).matrix();
  return w;
}

namespace {

using RowMajor = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

void require_positive_p(const BlockSource& source) {
  if (!source.ordering().is_normal()) {
    throw InputError("click statistics need a positive-P ensemble");
  }
}

/// Kronecker product of per-group Fourier factors for one sample, last group
/// fastest.
void kronecker_row(const std::vector<RowMajor>& factors, std::size_t first, std::size_t last,
                   Eigen::Index sample, Complex* out) {
  std::size_t len = 1;
  out[0] = Complex(1.0, 0.0);
  for (std::size_t j = first; j < last; ++j) {
    const RowMajor& f = factors[j];
    const auto ext = static_cast<std::size_t>(f.cols());
    for (std::size_t a = len; a-- > 0;) {
      const Complex base = out[a];
      for (std::size_t k = ext; k-- > 0;) {
        out[a * ext + k] = base * f(sample, static_cast<Eigen::Index>(k));
      }
    }
    len *= ext;
  }
}

class GroupedEstimator {
 public:
  explicit GroupedEstimator(const GroupPartition& partition) : partition_(partition) {
    extents_ = partition.extents();
    const std::size_t d = extents_.size();
    phases_.resize(d);
    inverse_.resize(d);
    for (std::size_t j = 0; j < d; ++j) {
      const std::size_t ext = extents_[j];
      const double theta = 2.0 * std::numbers::pi / static_cast<double>(ext);
      phases_[j].resize(ext);
      inverse_[j].resize(ext * ext);
      for (std::size_t k = 0; k < ext; ++k) {
        phases_[j][k] = std::polar(1.0, -theta * static_cast<double>(k));
        for (std::size_t m = 0; m < ext; ++m) {
          // (k m) mod ext keeps the angle argument small.
          const auto km = static_cast<double>((k * m) % ext);
          inverse_[j][m * ext + k] = std::polar(1.0 / static_cast<double>(ext), theta * km);
        }
      }
    }
    // Split the groups so the two Kronecker factors have similar sizes.
    double best = std::numeric_limits<double>::infinity();
    double total_log = 0.0;
    for (std::size_t e : extents_) total_log += std::log(static_cast<double>(e));
    double left_log = 0.0;
    for (std::size_t h = 0; h <= d; ++h) {
      const double imbalance = std::abs(2.0 * left_log - total_log);
      if (imbalance < best) {
        best = imbalance;
        split_ = h;
      }
      if (h < d) left_log += std::log(static_cast<double>(extents_[h]));
    }
    left_size_ = 1;
    for (std::size_t j = 0; j < split_; ++j) left_size_ *= extents_[j];
    right_size_ = 1;
    for (std::size_t j = split_; j < d; ++j) right_size_ *= extents_[j];
  }

  std::size_t size() const { return left_size_ * right_size_; }

  /// Inverse-transformed grouped estimate of one sub-ensemble.
  std::vector<Complex> block_estimate(const SubEnsemble& block) const {
    const ClickWeights w = click_weights(block, Ordering::positive_p());
    const auto samples = static_cast<Eigen::Index>(block.sample_count());
    const std::size_t d = extents_.size();

    std::vector<RowMajor> factors(d);
    for (std::size_t j = 0; j < d; ++j) {
      const auto ext = static_cast<Eigen::Index>(extents_[j]);
      RowMajor f = RowMajor::Ones(samples, ext);
      const auto& phase = phases_[j];
      for (std::size_t i : partition_.group(j)) {
        const auto row = static_cast<Eigen::Index>(i);
        for (Eigen::Index s = 0; s < samples; ++s) {
          const Complex p0 = w.no_click(row, s);
          const Complex p1 = w.click(row, s);
          for (Eigen::Index k = 0; k < ext; ++k) {
            f(s, k) *= p0 + p1 * phase[static_cast<std::size_t>(k)];
          }
        }
      }
      factors[j] = std::move(f);
    }

    const auto left_n = static_cast<Eigen::Index>(left_size_);
    const auto right_n = static_cast<Eigen::Index>(right_size_);
    // Row-major so each sample's Kronecker row is contiguous.
    RowMajor left(samples, left_n);
    RowMajor right(samples, right_n);
    for (Eigen::Index s = 0; s < samples; ++s) {
      kronecker_row(factors, 0, split_, s, left.row(s).data());
      kronecker_row(factors, split_, d, s, right.row(s).data());
    }
    RowMajor fourier = left.transpose() * right;
    fourier /= static_cast<double>(samples);

    std::vector<Complex> tensor(fourier.data(), fourier.data() + fourier.size());
    inverse_transform(tensor);
    return tensor;
  }

 private:
  void inverse_transform(std::vector<Complex>& tensor) const {
    std::size_t stride = tensor.size();
    std::vector<Complex> line;
    for (std::size_t j = 0; j < extents_.size(); ++j) {
      const std::size_t ext = extents_[j];
      stride /= ext;
      const std::size_t outer = tensor.size() / (ext * stride);
      line.resize(ext);
      const auto& f = inverse_[j];
      for (std::size_t o = 0; o < outer; ++o) {
        for (std::size_t in = 0; in < stride; ++in) {
          const std::size_t base = o * ext * stride + in;
          for (std::size_t k = 0; k < ext; ++k) line[k] = tensor[base + k * stride];
          for (std::size_t m = 0; m < ext; ++m) {
            Complex acc{};
            const Complex* row = f.data() + m * ext;
            for (std::size_t k = 0; k < ext; ++k) acc += row[k] * line[k];
            tensor[base + m * stride] = acc;
          }
        }
      }
    }
  }

  const GroupPartition& partition_;
  std::vector<std::size_t> extents_;
  std::vector<std::vector<Complex>> phases_;
  std::vector<std::vector<Complex>> inverse_;
  std::size_t split_ = 0;
  std::size_t left_size_ = 1;
  std::size_t right_size_ = 1;
};

/// Welford accumulation of complex tensors across sub-ensembles.
class TensorStats {
 public:
  explicit TensorStats(std::size_t n) : mean_re_(n), mean_im_(n), m2_re_(n) {}

  void add(const std::vector<Complex>& x) {
    ++count_;
    const double inv = 1.0 / static_cast<double>(count_);
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double d = x[i].real() - mean_re_[i];
      mean_re_[i] += d * inv;
      m2_re_[i] += d * (x[i].real() - mean_re_[i]);
      mean_im_[i] += (x[i].imag() - mean_im_[i]) * inv;
    }
  }

  void write(GroupedDistribution& out) const {
    for (std::size_t i = 0; i < mean_re_.size(); ++i) {
      out.probability[i] = mean_re_[i];
      out.imag[i] = mean_im_[i];
      out.std_error[i] =
          count_ < 2 ? std::numeric_limits<double>::quiet_NaN()
                     : std::sqrt(m2_re_[i] / static_cast<double>(count_ - 1) /
                                 static_cast<double>(count_));
    }
  }

 private:
  std::size_t count_ = 0;
  std::vector<double> mean_re_, mean_im_, m2_re_;
};

}  // namespace

GroupedDistribution grouped_probability(const BlockSource& source,
                                        const GroupPartition& partition,
                                        const GroupedOptions& options) {
  require_positive_p(source);
  if (partition.mode_count() != source.mode_count()) {
    throw InputError("partition covers " + std::to_string(partition.mode_count()) +
                     " modes but the ensemble has " + std::to_string(source.mode_count()));
  }
  if (partition.tensor_size() > options.max_tensor_entries) {
    throw InputError("grouped tensor would need " + std::to_string(partition.tensor_size()) +
                     " entries, above the cap of " +
                     std::to_string(options.max_tensor_entries));
  }
  const GroupedEstimator estimator(partition);
  TensorStats stats(estimator.size());
  for_each_ordered(
      source.layout().subensembles,
      [&](std::size_t i) { return estimator.block_estimate(source.block(i)); },
      [&](std::size_t, std::vector<Complex>&& g) { stats.add(g); });
  GroupedDistribution out(partition);
  stats.write(out);
  out.sample_count = source.layout().sample_count();
  return out;
}

GroupedDistribution grouped_probability(const PhaseSpaceEnsemble& ensemble,
                                        const GroupPartition& partition,
                                        const GroupedOptions& options) {
  return grouped_probability(BlockSource::from(ensemble), partition, options);
}

Estimate marginal_click_probability(const BlockSource& source, std::size_t mode) {
  require_positive_p(source);
  if (mode >= source.mode_count()) {
    throw InputError("mode " + std::to_string(mode) + " is out of range");
  }
  RunningStats stats;
  const auto row = static_cast<Eigen::Index>(mode);
  for_each_ordered(
      source.layout().subensembles,
      [&](std::size_t i) {
        const SubEnsemble b = source.block(i);
        const CVector n = (b.alpha.row(row).array() * b.beta.row(row).array()).transpose();
        return (1.0 - (-n.array()).exp()).real().mean();
      },
      [&](std::size_t, double m) { stats.add(m); });
  return {stats.mean(), stats.std_error()};
}

Estimate marginal_click_probability(const PhaseSpaceEnsemble& ensemble, std::size_t mode) {
  return marginal_click_probability(BlockSource::from(ensemble), mode);
}

ComplexEstimate glauber_moment(const PhaseSpaceEnsemble& ensemble,
                               std::span<const unsigned> exponents) {
  if (!ensemble.ordering().is_normal()) {
    throw InputError("Glauber moments need a positive-P ensemble");
  }
  if (exponents.size() > ensemble.mode_count()) {
    throw InputError("more exponents than ensemble modes");
  }
  if (std::all_of(exponents.begin(), exponents.end(), [](unsigned c) { return c == 0; })) {
    throw InputError("Glauber moment needs at least one positive exponent");
  }
  RunningStats re, im;
  for (const SubEnsemble& b : ensemble.blocks()) {
    Complex sum{};
    for (Eigen::Index s = 0; s < b.alpha.cols(); ++s) {
      Complex term(1.0, 0.0);
      for (std::size_t j = 0; j < exponents.size(); ++j) {
        const auto row = static_cast<Eigen::Index>(j);
        const Complex n = b.alpha(row, s) * b.beta(row, s);
        for (unsigned c = 0; c < exponents[j]; ++c) term *= n;
      }
      sum += term;
    }
    sum /= static_cast<double>(b.alpha.cols());
    re.add(sum.real());
    im.add(sum.imag());
  }
  return {Complex(re.mean(), im.mean()), re.std_error(), im.std_error()};
}

GroupedDistribution bin_experimental_patterns(std::span<const std::string> patterns,
                                              const GroupPartition& partition) {
  GroupedDistribution out(partition);
  std::vector<double> counts(out.size(), 0.0);
  std::vector<std::size_t> group_of(partition.mode_count(), partition.group_count());
  for (std::size_t j = 0; j < partition.group_count(); ++j) {
    for (std::size_t i : partition.group(j)) group_of[i] = j;
  }
  std::vector<std::size_t> m(partition.group_count());
  for (std::size_t line = 0; line < patterns.size(); ++line) {
    const std::string& p = patterns[line];
    if (p.size() != partition.mode_count()) {
      throw InputError("pattern on line " + std::to_string(line + 1) + " has " +
                       std::to_string(p.size()) + " characters, expected " +
                       std::to_string(partition.mode_count()));
    }
    std::fill(m.begin(), m.end(), 0);
    for (std::size_t i = 0; i < p.size(); ++i) {
      if (p[i] != '0' && p[i] != '1') {
        throw InputError("pattern on line " + std::to_string(line + 1) +
                         " contains a character other than 0 or 1");
      }
      if (p[i] == '1' && group_of[i] < m.size()) ++m[group_of[i]];
    }
    counts[out.flat_index(m)] += 1.0;
  }
  const auto total = static_cast<double>(patterns.size());
  if (total > 0) {
    for (std::size_t i = 0; i < counts.size(); ++i) {
      out.probability[i] = counts[i] / total;
      out.std_error[i] = std::sqrt(counts[i]) / total;
    }
  }
  out.counts = std::move(counts);
  out.sample_count = patterns.size();
  return out;
}

GroupedDistribution bin_experimental_patterns(std::istream& in,
                                              const GroupPartition& partition) {
  std::vector<std::string> patterns;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line.size() != partition.mode_count() ||
        line.find_first_not_of("01") != std::string::npos) {
      throw InputError("malformed click pattern on line " + std::to_string(number) +
                       ": expected " + std::to_string(partition.mode_count()) +
                       " characters of 0/1");
    }
    patterns.push_back(std::move(line));
  }
  return bin_experimental_patterns(patterns, partition);
}

}  // namespace phasegbs
