#pragma once

#include "motion_forge/height_correction.hpp"
#include "motion_forge/rewards.hpp"
#include "motion_forge/sampling.hpp"
#include "motion_forge/smoothing.hpp"
#include "motion_forge/termination.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace motion_forge {

/// A value of the TOML subset understood by ConfigTable.
struct ConfigValue {
  enum class Kind { Bool, Integer, Float, String, Array };
  Kind kind = Kind::Integer;
  bool boolean = false;
  std::int64_t integer = 0;
  double number = 0.0;
  std::string text;
  std::vector<ConfigValue> items;
};

/// Flat view of a TOML document: `[section.sub]` headers and `key = value`
/// lines become dotted keys ("section.sub.key"). Supported values are
/// booleans, integers, floats, basic double-quoted strings and single-line
/// arrays of those; `#` starts a comment.
class ConfigTable {
 public:
  static ConfigTable parse(std::string_view text, std::string_view source = "<config>");
  static ConfigTable load(const std::filesystem::path& path);

  const std::map<std::string, ConfigValue>& values() const { return values_; }
  bool contains(const std::string& key) const { return values_.contains(key); }

 private:
  std::map<std::string, ConfigValue> values_;
};

struct IoConfig {
  std::filesystem::path inputDir;
  std::filesystem::path outputDir;
  int formatVersion = 1;
  unsigned jobs = 1;
};

struct SamplingConfig {
  SamplerParams sampler;
  double plateauTolerance = 0.0;  // for anchor detection on E(t)
};

struct PipelineConfig {
  CorrectionConfig correction;
  SGConfig smoothing;
  ChannelSelector channels;
  RewardConfig rewards;
  TerminationConfig termination;
  SamplingConfig sampling;
  IoConfig io;

  void validate() const;
};

/// Applies every key of the table on top of `base`. Unknown keys, wrong value
/// types and invalid values throw Error naming the offending key path.
PipelineConfig applyConfig(const ConfigTable& table, PipelineConfig base = {});

PipelineConfig loadPipelineConfig(const std::filesystem::path& path);

}  // namespace motion_forge
