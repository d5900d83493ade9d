#include "motion_forge/sampling.hpp"

#include "motion_forge/extrema.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace motion_forge {

using nlohmann::json;

std::vector<double> kineticEnergyProxy(const PoseSequence& seq) {
  const bool stored = !seq.frames.empty() &&
                      std::all_of(seq.frames.begin(), seq.frames.end(),
                                  [](const Frame& f) { return f.jointVel.has_value(); });
  std::vector<double> energy(seq.frames.size());
  if (stored) {
    for (std::size_t t = 0; t < seq.frames.size(); ++t) {
      energy[t] = seq.frames[t].jointVel->cwiseAbs().sum();
    }
    return energy;
  }
  const Velocities v = finiteDifferenceVelocities(seq, VelocityUnits::PerFrame);
  for (std::size_t t = 0; t < seq.frames.size(); ++t) {
    energy[t] = v.joint[t].cwiseAbs().sum();
  }
  return energy;
}

std::vector<std::size_t> detectAnchors(std::span<const double> energy, double plateauTolerance) {
  const PlateauExtrema ext = findPlateauExtrema(energy, plateauTolerance);
  std::vector<std::size_t> anchors{0};
  for (const std::size_t m : ext.minima) {
    if (m != 0) {
      anchors.push_back(m);
    }
  }
  return anchors;
}

void SamplerParams::validate() const {
  if (!(alpha >= 0.0)) {
    throw Error("sampling.alpha must be non-negative");
  }
  if (!(weightMin >= 0.0 && weightMin <= weightMax)) {
    throw Error("sampling weight bounds must satisfy 0 <= weight_min <= weight_max");
  }
  if (!(weightMax > 0.0)) {
    throw Error("sampling.weight_max must be positive");
  }
}

AnchorSampler::AnchorSampler(std::vector<std::size_t> anchors, const SamplerParams& params)
    : anchors_(std::move(anchors)), params_(params), rng_(params.seed) {
  params_.validate();
  if (anchors_.empty()) {
    throw Error("anchor sampler needs at least one anchor");
  }
  if (!std::is_sorted(anchors_.begin(), anchors_.end()) ||
      std::adjacent_find(anchors_.begin(), anchors_.end()) != anchors_.end()) {
    throw Error("anchors must be strictly increasing");
  }
  weights_.assign(anchors_.size(), std::clamp(1.0, params_.weightMin, params_.weightMax));
}

std::size_t AnchorSampler::recordFailure(std::size_t failureFrame) {
  const auto it = std::upper_bound(anchors_.begin(), anchors_.end(), failureFrame);
  if (it == anchors_.begin()) {
    throw Error("failure frame " + std::to_string(failureFrame) + " precedes the first anchor");
  }
  const auto k = static_cast<std::size_t>(std::distance(anchors_.begin(), it) - 1);
  weights_[k] = std::clamp(weights_[k] + params_.alpha, params_.weightMin, params_.weightMax);
  return k;
}

std::size_t AnchorSampler::sample() {
  const double total = std::accumulate(weights_.begin(), weights_.end(), 0.0);
  const double target = rng_.uniform01() * total;
  double cumulative = 0.0;
  for (std::size_t k = 0; k < weights_.size(); ++k) {
    cumulative += weights_[k];
    if (target < cumulative) {
      return anchors_[k];
    }
  }
  // Rounding can leave target == total; fall back to the last positive weight.
  for (std::size_t k = weights_.size(); k-- > 0;) {
    if (weights_[k] > 0.0) {
      return anchors_[k];
    }
  }
  throw Error("anchor sampler has no positive weight");
}

std::vector<double> AnchorSampler::probabilities() const {
  const double total = std::accumulate(weights_.begin(), weights_.end(), 0.0);
  std::vector<double> p(weights_.size());
  for (std::size_t k = 0; k < weights_.size(); ++k) {
    p[k] = weights_[k] / total;
  }
  return p;
}

json AnchorSampler::toJson() const {
  return json{{"anchors", anchors_},
              {"weights", weights_},
              {"alpha", params_.alpha},
              {"clip", json::array({params_.weightMin, params_.weightMax})},
              {"rng_state",
               {{"algorithm", Rng::kAlgorithm},
                {"seed", rng_.seed()},
                {"draws", rng_.draws()},
                {"state", rng_.state()}}}};
}

AnchorSampler AnchorSampler::fromJson(const json& j) {
  try {
    SamplerParams params;
    params.alpha = j.at("alpha").get<double>();
    params.weightMin = j.at("clip").at(0).get<double>();
    params.weightMax = j.at("clip").at(1).get<double>();
    const json& rng = j.at("rng_state");
    if (rng.at("algorithm").get<std::string>() != Rng::kAlgorithm) {
      throw Error("unsupported sampler rng algorithm " + rng.at("algorithm").dump());
    }
    params.seed = rng.at("seed").get<std::uint64_t>();
    AnchorSampler sampler(j.at("anchors").get<std::vector<std::size_t>>(), params);
    const auto weights = j.at("weights").get<std::vector<double>>();
    if (weights.size() != sampler.anchors_.size()) {
      throw Error("sampler state: weights and anchors differ in length");
    }
    for (const double w : weights) {
      if (w < params.weightMin || w > params.weightMax) {
        throw Error("sampler state: weight outside the clip bounds");
      }
    }
    sampler.weights_ = weights;
    sampler.rng_ = Rng::restore(params.seed, rng.at("draws").get<std::uint64_t>(),
                                rng.at("state").get<std::string>());
    return sampler;
  } catch (const json::exception& e) {
    throw Error(std::string("sampler state: ") + e.what());
  }
}

}  // namespace motion_forge
