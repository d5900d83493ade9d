#pragma once

#include "motion_forge/motion.hpp"
#include "motion_forge/random.hpp"

#include <json.hpp>

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace motion_forge {

/// E(t) = sum_j |qdot_{t,j}|. Uses the stored joint velocities when every frame
/// carries them, raw per-frame forward differences otherwise.
std::vector<double> kineticEnergyProxy(const PoseSequence& seq);

/// Local minima of the energy profile (plateau-merged, exact-equality
/// plateaus by default), with frame 0 always included. Sorted ascending.
std::vector<std::size_t> detectAnchors(std::span<const double> energy, double plateauTolerance = 0.0);

struct SamplerParams {
  double alpha = 0.5;
  double weightMin = 1.0;
  double weightMax = 10.0;
  std::uint64_t seed = 0;

  void validate() const;
};

/// Failure-adaptive categorical sampler over episode start anchors.
///
/// Weights start at 1 (clipped into [weightMin, weightMax]). A failure at frame
/// t_f bumps the weight of the last anchor at or before t_f by alpha and clips
/// it; sample() draws anchor k with probability w_k / sum(w).
///
/// Single writer: recordFailure and sample mutate state.
class AnchorSampler {
 public:
  AnchorSampler(std::vector<std::size_t> anchors, const SamplerParams& params);

  /// Returns the index k* of the updated anchor.
  std::size_t recordFailure(std::size_t failureFrame);

  /// Returns the sampled anchor frame.
  std::size_t sample();

  std::vector<double> probabilities() const;

  const std::vector<std::size_t>& anchors() const { return anchors_; }
  const std::vector<double>& weights() const { return weights_; }
  const SamplerParams& params() const { return params_; }
  const Rng& rng() const { return rng_; }

  /// {algorithm, anchors, weights, alpha, clip: [min, max], rng_state}
  nlohmann::json toJson() const;
  static AnchorSampler fromJson(const nlohmann::json& j);

 private:
  std::vector<std::size_t> anchors_;
  std::vector<double> weights_;
  SamplerParams params_;
  Rng rng_;
};

}  // namespace motion_forge
