#include "motion_forge/config.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <functional>
#include <sstream>

namespace motion_forge {

namespace {

using Kind = ConfigValue::Kind;

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
    s.remove_prefix(1);
  }
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
    s.remove_suffix(1);
  }
  return s;
}

bool isBareKey(std::string_view key) {
  if (key.empty()) {
    return false;
  }
  for (const char c : key) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '-') {
      return false;
    }
  }
  return true;
}

bool isDottedKey(std::string_view key) {
  std::size_t start = 0;
  while (true) {
    const std::size_t dot = key.find('.', start);
    if (!isBareKey(trim(key.substr(start, dot - start)))) {
      return false;
    }
    if (dot == std::string_view::npos) {
      return true;
    }
    start = dot + 1;
  }
}

std::string normalizeKey(std::string_view key) {
  std::string out;
  std::size_t start = 0;
  while (true) {
    const std::size_t dot = key.find('.', start);
    if (!out.empty()) {
      out += '.';
    }
    out += trim(key.substr(start, dot - start));
    if (dot == std::string_view::npos) {
      return out;
    }
    start = dot + 1;
  }
}

class ValueParser {
 public:
  ValueParser(std::string_view text, std::string where) : text_(text), where_(std::move(where)) {}

  ConfigValue parseAll() {
    ConfigValue v = parseValue();
    skipSpace();
    if (pos_ != text_.size()) {
      fail("unexpected trailing characters");
    }
    return v;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const { throw Error(where_ + ": " + what); }

  void skipSpace() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
      ++pos_;
    }
  }

  ConfigValue parseValue() {
    skipSpace();
    if (pos_ >= text_.size()) {
      fail("missing value");
    }
    const char c = text_[pos_];
    if (c == '"') {
      return parseString();
    }
    if (c == '[') {
      return parseArray();
    }
    return parseScalar();
  }

  ConfigValue parseString() {
    ++pos_;
    ConfigValue v;
    v.kind = Kind::String;
    while (pos_ < text_.size() && text_[pos_] != '"') {
      char c = text_[pos_++];
      if (c == '\\') {
        if (pos_ >= text_.size()) {
          fail("unterminated escape");
        }
        const char e = text_[pos_++];
        switch (e) {
          case 'n': c = '\n'; break;
          case 't': c = '\t'; break;
          case '"': c = '"'; break;
          case '\\': c = '\\'; break;
          default: fail(std::string("unsupported escape \\") + e);
        }
      }
      v.text += c;
    }
    if (pos_ >= text_.size()) {
      fail("unterminated string");
    }
    ++pos_;
    return v;
  }

  ConfigValue parseArray() {
    ++pos_;
    ConfigValue v;
    v.kind = Kind::Array;
    skipSpace();
    while (pos_ < text_.size() && text_[pos_] != ']') {
      v.items.push_back(parseValue());
      skipSpace();
      if (pos_ < text_.size() && text_[pos_] == ',') {
        ++pos_;
        skipSpace();
      } else if (pos_ < text_.size() && text_[pos_] != ']') {
        fail("expected ',' or ']' in array");
      }
    }
    if (pos_ >= text_.size()) {
      fail("unterminated array");
    }
    ++pos_;
    return v;
  }

  ConfigValue parseScalar() {
    std::size_t end = pos_;
    while (end < text_.size() && text_[end] != ',' && text_[end] != ']' &&
           !std::isspace(static_cast<unsigned char>(text_[end]))) {
      ++end;
    }
    std::string token(text_.substr(pos_, end - pos_));
    pos_ = end;
    ConfigValue v;
    if (token == "true" || token == "false") {
      v.kind = Kind::Bool;
      v.boolean = token == "true";
      return v;
    }
    std::string digits;
    for (const char c : token) {
      if (c != '_') {
        digits += c;
      }
    }
    if (!digits.empty() && digits.front() == '+') {
      digits.erase(0, 1);
    }
    const char* first = digits.data();
    const char* last = digits.data() + digits.size();
    if (digits.find_first_of(".eE") == std::string::npos && digits != "inf" && digits != "-inf" &&
        digits != "nan") {
      std::int64_t i = 0;
      const auto res = std::from_chars(first, last, i);
      if (res.ec == std::errc() && res.ptr == last) {
        v.kind = Kind::Integer;
        v.integer = i;
        v.number = static_cast<double>(i);
        return v;
      }
    }
    double d = 0.0;
    const auto res = std::from_chars(first, last, d);
    if (res.ec != std::errc() || res.ptr != last || digits.empty()) {
      fail("invalid value '" + token + "'");
    }
    v.kind = Kind::Float;
    v.number = d;
    return v;
  }

  std::string_view text_;
  std::string where_;
  std::size_t pos_ = 0;
};

std::string stripComment(std::string_view line) {
  bool inString = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (c == '\\' && inString) {
      ++i;
    } else if (c == '"') {
      inString = !inString;
    } else if (c == '#' && !inString) {
      return std::string(line.substr(0, i));
    }
  }
  return std::string(line);
}

// --- binding ---------------------------------------------------------------

[[noreturn]] void typeError(const std::string& key, const char* expected) {
  throw Error("config key '" + key + "': expected " + expected);
}

double asNumber(const std::string& key, const ConfigValue& v) {
  if (v.kind != Kind::Float && v.kind != Kind::Integer) {
    typeError(key, "a number");
  }
  return v.number;
}

std::int64_t asInteger(const std::string& key, const ConfigValue& v) {
  if (v.kind != Kind::Integer) {
    typeError(key, "an integer");
  }
  return v.integer;
}

std::size_t asIndex(const std::string& key, const ConfigValue& v) {
  const std::int64_t i = asInteger(key, v);
  if (i < 0) {
    typeError(key, "a non-negative integer");
  }
  return static_cast<std::size_t>(i);
}

bool asBool(const std::string& key, const ConfigValue& v) {
  if (v.kind != Kind::Bool) {
    typeError(key, "a boolean");
  }
  return v.boolean;
}

std::string asString(const std::string& key, const ConfigValue& v) {
  if (v.kind != Kind::String) {
    typeError(key, "a string");
  }
  return v.text;
}

const std::vector<ConfigValue>& asArray(const std::string& key, const ConfigValue& v) {
  if (v.kind != Kind::Array) {
    typeError(key, "an array");
  }
  return v.items;
}

using Setter = std::function<void(PipelineConfig&, const std::string&, const ConfigValue&)>;

std::map<std::string, Setter> makeSetters() {
  std::map<std::string, Setter> s;
  const auto number = [&s](const std::string& key, auto member) {
    s[key] = [member](PipelineConfig& c, const std::string& k, const ConfigValue& v) {
      member(c) = asNumber(k, v);
    };
  };

  number("correction.gravity", [](PipelineConfig& c) -> double& { return c.correction.gravity; });
  s["correction.gravity_per_second"] = [](PipelineConfig& c, const std::string& k, const ConfigValue& v) {
    c.correction.gravityPerSecond = asBool(k, v);
  };
  number("correction.velocity_threshold",
         [](PipelineConfig& c) -> double& { return c.correction.velocityThreshold; });
  number("correction.plateau_tolerance",
         [](PipelineConfig& c) -> double& { return c.correction.plateauTolerance; });
  number("correction.auto_skip_prominence",
         [](PipelineConfig& c) -> double& { return c.correction.autoSkipProminence; });
  s["correction.skip_frames"] = [](PipelineConfig& c, const std::string& k, const ConfigValue& v) {
    c.correction.skipFrames.clear();
    for (const ConfigValue& item : asArray(k, v)) {
      c.correction.skipFrames.insert(asIndex(k, item));
    }
  };

  s["smoothing.order"] = [](PipelineConfig& c, const std::string& k, const ConfigValue& v) {
    c.smoothing.order = static_cast<int>(asInteger(k, v));
  };
  s["smoothing.window"] = [](PipelineConfig& c, const std::string& k, const ConfigValue& v) {
    if (v.kind == Kind::String) {
      if (v.text != "adaptive") {
        typeError(k, "an odd integer or \"adaptive\"");
      }
      c.smoothing.window.reset();
    } else {
      c.smoothing.window = static_cast<int>(asInteger(k, v));
    }
  };
  number("smoothing.adaptive_fraction",
         [](PipelineConfig& c) -> double& { return c.smoothing.adaptiveFraction; });
  s["smoothing.channels"] = [](PipelineConfig& c, const std::string& k, const ConfigValue& v) {
    ChannelSelector sel{{false, false, false}, false};
    for (const ConfigValue& item : asArray(k, v)) {
      const std::string name = asString(k, item);
      if (name == "root") {
        sel.rootAxes = {true, true, true};
      } else if (name == "root_x") {
        sel.rootAxes[0] = true;
      } else if (name == "root_y") {
        sel.rootAxes[1] = true;
      } else if (name == "root_z") {
        sel.rootAxes[2] = true;
      } else if (name == "joints") {
        sel.joints = true;
      } else {
        throw Error("config key '" + k + "': unknown channel '" + name + "'");
      }
    }
    c.channels = sel;
  };

  number("rewards.sigma2_body_pos", [](PipelineConfig& c) -> double& { return c.rewards.sigma2BodyPos; });
  number("rewards.sigma2_body_ori", [](PipelineConfig& c) -> double& { return c.rewards.sigma2BodyOri; });
  number("rewards.sigma2_ang_vel", [](PipelineConfig& c) -> double& { return c.rewards.sigma2AngVel; });
  number("rewards.sigma2_com", [](PipelineConfig& c) -> double& { return c.rewards.sigma2Com; });
  number("rewards.close_feet_threshold",
         [](PipelineConfig& c) -> double& { return c.rewards.closeFeetThreshold; });
  number("rewards.feet_slip_contact_threshold",
         [](PipelineConfig& c) -> double& { return c.rewards.feetSlipContactThreshold; });
  number("rewards.undesired_contact_threshold",
         [](PipelineConfig& c) -> double& { return c.rewards.undesiredContactThreshold; });
  number("rewards.single_support_height",
         [](PipelineConfig& c) -> double& { return c.rewards.singleSupportHeight; });
  number("rewards.recovery_threshold",
         [](PipelineConfig& c) -> double& { return c.rewards.recoveryThreshold; });
  number("rewards.recovery_gate_threshold",
         [](PipelineConfig& c) -> double& { return c.rewards.recoveryGateThreshold; });
  for (const auto names : {std::span<const std::string_view>(kTrackingTerms),
                           std::span<const std::string_view>(kRecoveryTerms)}) {
    for (const std::string_view name : names) {
      s["rewards.weights." + std::string(name)] =
          [name](PipelineConfig& c, const std::string& k, const ConfigValue& v) {
            c.rewards.weights[name] = asNumber(k, v);
          };
    }
  }

  number("termination.position_threshold",
         [](PipelineConfig& c) -> double& { return c.termination.positionThreshold; });
  number("termination.orientation_threshold",
         [](PipelineConfig& c) -> double& { return c.termination.orientationThreshold; });
  s["termination.orientation_threshold_rad"] =
      [](PipelineConfig& c, const std::string& k, const ConfigValue& v) {
        c.termination.orientationThreshold = orientationThresholdFromAngle(asNumber(k, v));
      };
  number("termination.body_threshold",
         [](PipelineConfig& c) -> double& { return c.termination.bodyThreshold; });
  s["termination.max_bad_steps"] = [](PipelineConfig& c, const std::string& k, const ConfigValue& v) {
    c.termination.maxBadSteps = asIndex(k, v);
  };

  number("sampling.alpha", [](PipelineConfig& c) -> double& { return c.sampling.sampler.alpha; });
  number("sampling.weight_min", [](PipelineConfig& c) -> double& { return c.sampling.sampler.weightMin; });
  number("sampling.weight_max", [](PipelineConfig& c) -> double& { return c.sampling.sampler.weightMax; });
  number("sampling.plateau_tolerance",
         [](PipelineConfig& c) -> double& { return c.sampling.plateauTolerance; });
  s["sampling.seed"] = [](PipelineConfig& c, const std::string& k, const ConfigValue& v) {
    c.sampling.sampler.seed = asIndex(k, v);
  };

  s["io.input_dir"] = [](PipelineConfig& c, const std::string& k, const ConfigValue& v) {
    c.io.inputDir = asString(k, v);
  };
  s["io.output_dir"] = [](PipelineConfig& c, const std::string& k, const ConfigValue& v) {
    c.io.outputDir = asString(k, v);
  };
  s["io.format_version"] = [](PipelineConfig& c, const std::string& k, const ConfigValue& v) {
    c.io.formatVersion = static_cast<int>(asInteger(k, v));
  };
  s["io.jobs"] = [](PipelineConfig& c, const std::string& k, const ConfigValue& v) {
    const std::size_t jobs = asIndex(k, v);
    if (jobs == 0) {
      typeError(k, "a positive integer");
    }
    c.io.jobs = static_cast<unsigned>(jobs);
  };
  return s;
}

}  // namespace

ConfigTable ConfigTable::parse(std::string_view text, std::string_view source) {
  ConfigTable table;
  std::string section;
  std::istringstream in{std::string(text)};
  std::string rawLine;
  int lineNo = 0;
  while (std::getline(in, rawLine)) {
    ++lineNo;
    const std::string where = std::string(source) + ":" + std::to_string(lineNo);
    const std::string stripped = stripComment(rawLine);
    const std::string_view line = trim(stripped);
    if (line.empty()) {
      continue;
    }
    if (line.front() == '[') {
      if (line.back() != ']' || line.size() < 3 || line[1] == '[') {
        throw Error(where + ": malformed table header");
      }
      const std::string_view name = trim(line.substr(1, line.size() - 2));
      if (!isDottedKey(name)) {
        throw Error(where + ": invalid table name '" + std::string(name) + "'");
      }
      section = normalizeKey(name);
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw Error(where + ": expected 'key = value'");
    }
    const std::string_view key = trim(line.substr(0, eq));
    if (!isDottedKey(key)) {
      throw Error(where + ": invalid key '" + std::string(key) + "'");
    }
    const std::string full = section.empty() ? normalizeKey(key) : section + "." + normalizeKey(key);
    if (table.values_.contains(full)) {
      throw Error(where + ": duplicate key '" + full + "'");
    }
    table.values_[full] = ValueParser(line.substr(eq + 1), where).parseAll();
  }
  return table;
}

ConfigTable ConfigTable::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error("cannot open config " + path.string());
  }
  std::ostringstream text;
  text << in.rdbuf();
  return parse(text.str(), path.string());
}

void PipelineConfig::validate() const {
  correction.validate();
  smoothing.validate();
  rewards.validate();
  termination.validate();
  sampling.sampler.validate();
  if (!(sampling.plateauTolerance >= 0.0)) {
    throw Error("sampling.plateau_tolerance must be non-negative");
  }
  if (io.formatVersion != 1) {
    throw Error("io.format_version: unsupported version " + std::to_string(io.formatVersion));
  }
}

PipelineConfig applyConfig(const ConfigTable& table, PipelineConfig base) {
  static const std::map<std::string, Setter> setters = makeSetters();
  if (table.contains("termination.orientation_threshold") &&
      table.contains("termination.orientation_threshold_rad")) {
    throw Error("config keys 'termination.orientation_threshold' and "
                "'termination.orientation_threshold_rad' are mutually exclusive");
  }
  for (const auto& [key, value] : table.values()) {
    const auto it = setters.find(key);
    if (it == setters.end()) {
      throw Error("unknown config key '" + key + "'");
    }
    it->second(base, key, value);
  }
  base.validate();
  return base;
}

PipelineConfig loadPipelineConfig(const std::filesystem::path& path) {
  return applyConfig(ConfigTable::load(path));
}

}  // namespace motion_forge
