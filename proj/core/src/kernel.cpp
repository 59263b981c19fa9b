#include "kkle/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>
#include <vector>

#include "kkle/error.hpp"

namespace kkle {
namespace {

void require_finite(const SampleSet& s, const char* what) {
  if (!s.allFinite()) throw InvalidInput(std::string(what) + " contains non-finite values");
}

}  // namespace

void KernelSpec::validate() const {
  if (!std::isfinite(bandwidth) || bandwidth <= 0.0) {
    throw InvalidInput("kernel bandwidth must be finite and positive, got " +
                       std::to_string(bandwidth));
  }
}

double rbf_kernel(std::span<const double> x, std::span<const double> y, const KernelSpec& spec) {
  spec.validate();
  if (x.size() != y.size()) throw InvalidInput("rbf_kernel: dimension mismatch");
  double sq = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!std::isfinite(x[i]) || !std::isfinite(y[i])) {
      throw InvalidInput("rbf_kernel: non-finite input");
    }
    const double diff = x[i] - y[i];
    sq += diff * diff;
  }
  return std::exp(-sq / (2.0 * spec.bandwidth * spec.bandwidth));
}

GramMatrix build_gram(const SampleSet& x, const SampleSet& y, const KernelSpec& spec) {
  spec.validate();
  if (x.rows() < 1 || y.rows() < 1) throw InvalidInput("build_gram: empty sample set");
  if (x.cols() != y.cols()) {
    throw InvalidInput("build_gram: dimension mismatch (" + std::to_string(x.cols()) + " vs " +
                       std::to_string(y.cols()) + ")");
  }
  require_finite(x, "build_gram: X");
  require_finite(y, "build_gram: Y");

  const Index n = x.rows();
  const Index m = y.rows();
  Matrix z(n + m, x.cols());
  z.topRows(n) = x;
  z.bottomRows(m) = y;

  // |a - b|^2 = |a|^2 + |b|^2 - 2 a.b, clamped at zero against cancellation.
  const Vector sq = z.rowwise().squaredNorm();
  Matrix k = -2.0 * (z * z.transpose());
  k.colwise() += sq;
  k.rowwise() += sq.transpose();
  const double scale = -1.0 / (2.0 * spec.bandwidth * spec.bandwidth);
  k = (k.array().max(0.0) * scale).exp().matrix();
  // Exact symmetry and unit diagonal regardless of rounding in the product.
  for (Index i = 0; i < k.rows(); ++i) {
    k(i, i) = 1.0;
    for (Index j = i + 1; j < k.cols(); ++j) k(j, i) = k(i, j);
  }
  return GramMatrix{std::move(k), n, m};
}

double median_heuristic_bandwidth(const SampleSet& x, const SampleSet& y, Seed seed,
                                  Index max_points) {
  if (x.cols() != y.cols()) throw InvalidInput("median heuristic: dimension mismatch");
  const Index total = x.rows() + y.rows();
  if (total < 2) throw InvalidInput("median heuristic: need at least two points");
  if (max_points < 2) throw InvalidInput("median heuristic: max_points must be >= 2");

  std::vector<Index> pick(static_cast<std::size_t>(total));
  std::iota(pick.begin(), pick.end(), Index{0});
  if (total > max_points) {
    Rng rng(seed);
    // Partial Fisher-Yates: the first max_points entries become the subsample.
    for (Index i = 0; i < max_points; ++i) {
      std::uniform_int_distribution<Index> dist(i, total - 1);
      std::swap(pick[static_cast<std::size_t>(i)], pick[static_cast<std::size_t>(dist(rng))]);
    }
    pick.resize(static_cast<std::size_t>(max_points));
  }
  auto row = [&](Index k) { return k < x.rows() ? x.row(k) : y.row(k - x.rows()); };

  std::vector<double> dists;
  dists.reserve(pick.size() * (pick.size() - 1) / 2);
  for (std::size_t i = 0; i < pick.size(); ++i) {
    for (std::size_t j = i + 1; j < pick.size(); ++j) {
      dists.push_back((row(pick[i]) - row(pick[j])).norm());
    }
  }
  auto median_of = [](std::vector<double>& v) {
    auto mid = v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2);
    std::nth_element(v.begin(), mid, v.end());
    return *mid;
  };
  double med = median_of(dists);
  if (med > 0.0) return med;
  std::erase_if(dists, [](double d) { return d <= 0.0; });
  return dists.empty() ? 0.0 : median_of(dists);
}

FeatureMap::FeatureMap(Matrix frequencies, Vector offsets)
    : frequencies_(std::move(frequencies)), offsets_(std::move(offsets)) {
  if (frequencies_.rows() < 1 || frequencies_.cols() < 1) {
    throw InvalidInput("feature map needs d >= 1 and D >= 1");
  }
  if (offsets_.size() != frequencies_.rows()) {
    throw InvalidInput("feature map: offsets length must equal feature dimension");
  }
}

FeatureMap sample_feature_map(Index input_dim, Index feature_dim, const KernelSpec& spec,
                              Seed seed) {
  spec.validate();
  if (input_dim < 1 || feature_dim < 1) {
    throw InvalidInput("sample_feature_map: dimensions must be >= 1");
  }
  Rng rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0 / spec.bandwidth);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
  Matrix w(feature_dim, input_dim);
  for (Index i = 0; i < feature_dim; ++i) {
    for (Index j = 0; j < input_dim; ++j) w(i, j) = normal(rng);
  }
  Vector b(feature_dim);
  for (Index i = 0; i < feature_dim; ++i) b(i) = phase(rng);
  return FeatureMap(std::move(w), std::move(b));
}

Vector apply_feature_map(const FeatureMap& fm, std::span<const double> x) {
  if (static_cast<Index>(x.size()) != fm.input_dim()) {
    throw InvalidInput("apply_feature_map: expected dimension " + std::to_string(fm.input_dim()) +
                       ", got " + std::to_string(x.size()));
  }
  const Eigen::Map<const Vector> xv(x.data(), static_cast<Index>(x.size()));
  const double scale = std::sqrt(2.0 / static_cast<double>(fm.dim()));
  return ((fm.frequencies() * xv + fm.offsets()).array().cos() * scale).matrix();
}

Matrix apply_feature_map(const FeatureMap& fm, const SampleSet& samples) {
  if (samples.cols() != fm.input_dim()) {
    throw InvalidInput("apply_feature_map: expected dimension " + std::to_string(fm.input_dim()) +
                       ", got " + std::to_string(samples.cols()));
  }
  const double scale = std::sqrt(2.0 / static_cast<double>(fm.dim()));
  Matrix out = samples * fm.frequencies().transpose();
  out.rowwise() += fm.offsets().transpose();
  out = (out.array().cos() * scale).matrix();
  return out;
}

FloatMatrix apply_feature_map_float(const FeatureMap& fm, const SampleSet& samples) {
  if (samples.cols() != fm.input_dim()) {
    throw InvalidInput("apply_feature_map: expected dimension " + std::to_string(fm.input_dim()) +
                       ", got " + std::to_string(samples.cols()));
  }
  const float scale = static_cast<float>(std::sqrt(2.0 / static_cast<double>(fm.dim())));
  const Eigen::MatrixXf w = fm.frequencies().cast<float>();  // column k: weights of input k
  const Eigen::ArrayXf b = fm.offsets().cast<float>();
  FloatMatrix out(samples.rows(), fm.dim());
  Eigen::ArrayXf phase(fm.dim());
  for (Index r = 0; r < samples.rows(); ++r) {
    phase = b;
    for (Index k = 0; k < samples.cols(); ++k) {
      phase += static_cast<float>(samples(r, k)) * w.col(k).array();
    }
    Eigen::Map<Eigen::ArrayXf>(out.row(r).data(), fm.dim()) = phase.cos() * scale;
  }
  return out;
}

}  // namespace kkle
