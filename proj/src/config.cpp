#include "earcp/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>

#include <fmt/format.h>

#include "earcp/errors.hpp"

namespace earcp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Real-valued EarcpConfig fields, their admissible ranges, and whether they
// may be swept by a [grid].
struct RealParam {
  std::string_view name;
  double EarcpConfig::*member;
  double lo;
  double hi;
  bool lo_closed;
  bool hi_closed;
};

constexpr RealParam kRealParams[] = {
    {"alpha_p", &EarcpConfig::alpha_p, 0.0, 1.0, false, false},
    {"alpha_c", &EarcpConfig::alpha_c, 0.0, 1.0, false, false},
    {"beta", &EarcpConfig::beta, 0.0, 1.0, true, true},
    {"eta_s", &EarcpConfig::eta_s, 0.0, kInf, false, false},
    {"w_min", &EarcpConfig::w_min, 0.0, 1.0, true, false},
    {"s_max", &EarcpConfig::s_max, 0.0, kInf, false, false},
    {"gamma", &EarcpConfig::gamma, 0.0, kInf, false, false},
    {"epsilon", &EarcpConfig::epsilon, 0.0, kInf, false, false},
    {"hedge_eta", &EarcpConfig::hedge_eta, 0.0, kInf, false, false},
};

const RealParam* find_real_param(std::string_view name) {
  for (const auto& p : kRealParams) {
    if (p.name == name) return &p;
  }
  return nullptr;
}

std::string describe_range(const RealParam& p) {
  if (p.name == "w_min") return "[0, 1/M)";
  if (p.hi == kInf) return p.lo_closed ? fmt::format(">= {}", p.lo) : fmt::format("> {}", p.lo);
  return fmt::format("{}{}, {}{}", p.lo_closed ? '[' : '(', p.lo, p.hi, p.hi_closed ? ']' : ')');
}

bool in_range(const RealParam& p, double v) {
  if (!std::isfinite(v)) return false;
  const bool above = p.lo_closed ? v >= p.lo : v > p.lo;
  const bool below = p.hi_closed ? v <= p.hi : v < p.hi;
  return above && below;
}

// ---------------------------------------------------------------------------
// Document model

struct Value {
  enum class Kind { kString, kNumber, kBool, kArray } kind = Kind::kString;
  std::string text;  // string contents, or the number's source text
  double number = 0.0;
  bool flag = false;
  std::vector<Value> items;
};

struct Entry {
  std::string key;
  Value value;
  std::size_t line = 0;
  bool used = false;
};

struct Section {
  std::string name;  // "" for the top level
  std::size_t line = 0;
  std::vector<Entry> entries;
};

class Issues {
 public:
  void add(std::size_t line, std::string message) {
    list_.push_back(line ? fmt::format("line {}: {}", line, message) : std::move(message));
  }
  bool empty() const { return list_.empty(); }
  std::vector<std::string> take() { return std::move(list_); }

 private:
  std::vector<std::string> list_;
};

class ValueParser {
 public:
  explicit ValueParser(std::string_view text) : text_(text) {}

  std::optional<Value> parse_all(std::string& error) {
    auto v = parse(error);
    skip_space();
    if (v && pos_ != text_.size()) {
      error = fmt::format("unexpected trailing text '{}'", text_.substr(pos_));
      return std::nullopt;
    }
    return v;
  }

 private:
  void skip_space() {
    while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t')) ++pos_;
  }

  std::optional<Value> parse(std::string& error) {
    skip_space();
    if (pos_ >= text_.size()) {
      error = "missing value";
      return std::nullopt;
    }
    const char c = text_[pos_];
    if (c == '"') return parse_string(error);
    if (c == '[') return parse_array(error);
    return parse_scalar(error);
  }

  std::optional<Value> parse_string(std::string& error) {
    Value v;
    v.kind = Value::Kind::kString;
    ++pos_;
    while (pos_ < text_.size() && text_[pos_] != '"') {
      char c = text_[pos_++];
      if (c == '\\' && pos_ < text_.size()) c = text_[pos_++];
      v.text += c;
    }
    if (pos_ >= text_.size()) {
      error = "unterminated string";
      return std::nullopt;
    }
    ++pos_;
    return v;
  }

  std::optional<Value> parse_array(std::string& error) {
    Value v;
    v.kind = Value::Kind::kArray;
    ++pos_;
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == ']') {
      ++pos_;
      return v;
    }
    while (true) {
      auto item = parse(error);
      if (!item) return std::nullopt;
      v.items.push_back(std::move(*item));
      skip_space();
      if (pos_ < text_.size() && text_[pos_] == ',') {
        ++pos_;
        skip_space();
        if (pos_ < text_.size() && text_[pos_] == ']') {
          ++pos_;
          return v;
        }
        continue;
      }
      if (pos_ < text_.size() && text_[pos_] == ']') {
        ++pos_;
        return v;
      }
      error = "expected ',' or ']' in array";
      return std::nullopt;
    }
  }

  std::optional<Value> parse_scalar(std::string& error) {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && text_[pos_] != ',' && text_[pos_] != ']' && text_[pos_] != ' ' &&
           text_[pos_] != '\t') {
      ++pos_;
    }
    const std::string_view token = text_.substr(start, pos_ - start);
    Value v;
    if (token == "true" || token == "false") {
      v.kind = Value::Kind::kBool;
      v.flag = token == "true";
      return v;
    }
    v.kind = Value::Kind::kNumber;
    v.text = std::string(token);
    std::string_view digits = token;
    if (!digits.empty() && digits.front() == '+') digits.remove_prefix(1);
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), v.number);
    if (ec != std::errc() || ptr != digits.data() + digits.size() || digits.empty()) {
      error = fmt::format("'{}' is not a number, string, boolean or array", token);
      return std::nullopt;
    }
    return v;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

std::string strip_comment(const std::string& line) {
  bool in_string = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '\\' && in_string) {
      ++i;
    } else if (line[i] == '"') {
      in_string = !in_string;
    } else if (line[i] == '#' && !in_string) {
      return line.substr(0, i);
    }
  }
  return line;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

bool valid_identifier(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.';
  });
}

std::vector<Section> tokenize(std::string_view text, Issues& issues) {
  std::vector<Section> sections(1);
  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const std::string content = strip_comment(raw);
    const std::string_view s = trim(content);
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']' || !valid_identifier(trim(s.substr(1, s.size() - 2)))) {
        issues.add(line, fmt::format("malformed section header '{}'", s));
        continue;
      }
      const std::string name(trim(s.substr(1, s.size() - 2)));
      for (const auto& existing : sections) {
        if (existing.name == name) issues.add(line, fmt::format("duplicate section [{}]", name));
      }
      sections.push_back({name, line, {}});
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string_view::npos) {
      issues.add(line, fmt::format("expected 'key = value', got '{}'", s));
      continue;
    }
    const std::string key(trim(s.substr(0, eq)));
    if (!valid_identifier(key)) {
      issues.add(line, fmt::format("invalid key '{}'", key));
      continue;
    }
    std::string error;
    auto value = ValueParser(trim(s.substr(eq + 1))).parse_all(error);
    if (!value) {
      issues.add(line, fmt::format("{}: {}", key, error));
      continue;
    }
    auto& entries = sections.back().entries;
    if (std::any_of(entries.begin(), entries.end(), [&](const Entry& e) { return e.key == key; })) {
      issues.add(line, fmt::format("{}: duplicate key", key));
      continue;
    }
    entries.push_back({key, std::move(*value), line, false});
  }
  return sections;
}

// ---------------------------------------------------------------------------
// Typed access with located error reporting

class SectionReader {
 public:
  SectionReader(Section& section, Issues& issues) : section_(section), issues_(issues) {}

  Entry* find(std::string_view key) {
    for (auto& e : section_.entries) {
      if (e.key == key) {
        e.used = true;
        return &e;
      }
    }
    return nullptr;
  }

  void error(const Entry& e, const std::string& message) {
    issues_.add(e.line, fmt::format("{}{}: {}", where(), e.key, message));
  }

  void section_error(const std::string& message) {
    issues_.add(section_.line, fmt::format("{}{}", where(), message));
  }

  void missing(std::string_view key) {
    issues_.add(section_.line, fmt::format("{}{}: required key is missing", where(), key));
  }

  std::optional<double> real(std::string_view key) {
    Entry* e = find(key);
    if (!e) return std::nullopt;
    if (e->value.kind != Value::Kind::kNumber) {
      error(*e, "expected a number");
      return std::nullopt;
    }
    return e->value.number;
  }

  std::optional<std::uint64_t> integer(std::string_view key) {
    Entry* e = find(key);
    if (!e) return std::nullopt;
    return as_integer(*e, e->value);
  }

  std::optional<std::string> string(std::string_view key) {
    Entry* e = find(key);
    if (!e) return std::nullopt;
    if (e->value.kind != Value::Kind::kString) {
      error(*e, "expected a quoted string");
      return std::nullopt;
    }
    return e->value.text;
  }

  std::optional<bool> boolean(std::string_view key) {
    Entry* e = find(key);
    if (!e) return std::nullopt;
    if (e->value.kind != Value::Kind::kBool) {
      error(*e, "expected true or false");
      return std::nullopt;
    }
    return e->value.flag;
  }

  std::optional<std::vector<double>> reals(std::string_view key) {
    Entry* e = find(key);
    if (!e) return std::nullopt;
    if (!array_of(*e, Value::Kind::kNumber, "numbers")) return std::nullopt;
    std::vector<double> out;
    for (const auto& item : e->value.items) out.push_back(item.number);
    return out;
  }

  std::optional<std::vector<std::uint64_t>> integers(std::string_view key) {
    Entry* e = find(key);
    if (!e) return std::nullopt;
    if (!array_of(*e, Value::Kind::kNumber, "integers")) return std::nullopt;
    std::vector<std::uint64_t> out;
    for (const auto& item : e->value.items) {
      auto v = as_integer(*e, item);
      if (!v) return std::nullopt;
      out.push_back(*v);
    }
    return out;
  }

  std::optional<std::vector<std::string>> strings(std::string_view key) {
    Entry* e = find(key);
    if (!e) return std::nullopt;
    if (!array_of(*e, Value::Kind::kString, "strings")) return std::nullopt;
    std::vector<std::string> out;
    for (const auto& item : e->value.items) out.push_back(item.text);
    return out;
  }

  void report_unknown() {
    for (const auto& e : section_.entries) {
      if (!e.used) issues_.add(e.line, fmt::format("{}{}: unknown key", where(), e.key));
    }
  }

 private:
  std::string where() const {
    return section_.name.empty() ? std::string() : fmt::format("[{}] ", section_.name);
  }

  std::optional<std::uint64_t> as_integer(const Entry& e, const Value& v) {
    std::uint64_t out = 0;
    if (v.kind == Value::Kind::kNumber) {
      auto [ptr, ec] = std::from_chars(v.text.data(), v.text.data() + v.text.size(), out);
      if (ec == std::errc() && ptr == v.text.data() + v.text.size()) return out;
    }
    error(e, "expected a non-negative integer");
    return std::nullopt;
  }

  bool array_of(const Entry& e, Value::Kind kind, std::string_view what) {
    if (e.value.kind != Value::Kind::kArray ||
        !std::all_of(e.value.items.begin(), e.value.items.end(),
                     [kind](const Value& v) { return v.kind == kind; })) {
      error(e, fmt::format("expected an array of {}", what));
      return false;
    }
    return true;
  }

  Section& section_;
  Issues& issues_;
};

std::optional<TaskMode> read_mode(SectionReader& r) {
  Entry* e = r.find("mode");
  if (!e) {
    r.missing("mode");
    return std::nullopt;
  }
  if (e->value.kind == Value::Kind::kString) {
    if (e->value.text == "classification") return TaskMode::kClassification;
    if (e->value.text == "regression") return TaskMode::kRegression;
  }
  r.error(*e, "must be \"classification\" or \"regression\"");
  return std::nullopt;
}

EarcpConfig read_earcp(SectionReader& r) {
  EarcpConfig c;
  for (const auto& p : kRealParams) {
    if (auto v = r.real(p.name)) {
      if (!in_range(p, *v)) {
        r.error(*r.find(p.name), fmt::format("must be in {} (got {})", describe_range(p), *v));
      } else {
        c.*p.member = *v;
      }
    }
  }
  if (Entry* e = r.find("norm_window")) {
    if (e->value.kind == Value::Kind::kString && e->value.text == "unbounded") {
      c.norm_window = std::nullopt;
    } else if (auto v = r.integer("norm_window"); v && *v >= 1) {
      c.norm_window = *v;
    } else if (v) {
      r.error(*e, "must be a positive integer or \"unbounded\"");
    }
  }
  if (auto v = r.integer("coherence_sample_k")) {
    if (*v < 1) {
      r.error(*r.find("coherence_sample_k"), "must be in [1, M-1]");
    } else {
      c.coherence_sample_k = *v;
    }
  }
  if (auto v = r.boolean("hedge_compat")) c.hedge_compat = *v;
  if (auto v = r.integer("max_pending")) {
    if (*v < 1) {
      r.error(*r.find("max_pending"), "must be a positive integer");
    } else {
      c.max_pending = *v;
    }
  }
  return c;
}

std::optional<AggregatorSpec> read_aggregator(SectionReader& r, std::string name) {
  const auto kind = r.string("kind");
  if (!kind) {
    if (!r.find("kind")) r.missing("kind");
    return std::nullopt;
  }
  AggregatorSpec spec{std::move(name), EarcpConfig{}};
  if (*kind == "earcp") {
    spec.kind = read_earcp(r);
  } else if (*kind == "hedge") {
    Hedge h;
    if (auto eta = r.real("eta")) {
      if (!(*eta > 0.0) || !std::isfinite(*eta)) {
        r.error(*r.find("eta"), fmt::format("must be > 0 (got {})", *eta));
      }
      h.eta = *eta;
    }
    if (auto horizon = r.integer("horizon")) {
      if (*horizon < 1) r.error(*r.find("horizon"), "must be a positive integer");
      h.horizon = *horizon;
    }
    spec.kind = BaselineKind{h};
  } else if (*kind == "uniform") {
    spec.kind = BaselineKind{Uniform{}};
  } else if (*kind == "ftl") {
    spec.kind = BaselineKind{FollowTheLeader{}};
  } else {
    r.error(*r.find("kind"), fmt::format("unknown aggregator kind '{}' (expected earcp, hedge, "
                                         "uniform or ftl)",
                                         *kind));
    return std::nullopt;
  }
  return spec;
}

std::optional<ScenarioSpec> read_scenario(SectionReader& r) {
  ScenarioSpec s;
  bool ok = true;
  if (auto mode = read_mode(r)) {
    s.mode = *mode;
  } else {
    ok = false;
  }
  auto require = [&](std::string_view key) {
    auto v = r.integer(key);
    if (!v) {
      if (!r.find(key)) r.missing(key);
      ok = false;
    }
    return v.value_or(0);
  };
  s.m = require("m");
  s.d = require("d");
  s.horizon = require("horizon");
  if (auto cps = r.integers("change_points")) s.change_points = *cps;
  if (auto delay = r.integer("delay")) s.delay = *delay;
  if (auto experts = r.strings("experts")) {
    for (const auto& text : *experts) {
      try {
        s.experts.push_back(parse_behavior(text));
      } catch (const ConfigError& e) {
        r.error(*r.find("experts"), e.what());
        ok = false;
      }
    }
  } else {
    if (!r.find("experts")) r.missing("experts");
    ok = false;
  }
  if (!ok) return std::nullopt;
  try {
    s.validate();
  } catch (const ConfigError& e) {
    r.section_error(e.what());
    return std::nullopt;
  }
  return s;
}

std::optional<CsvInput> read_csv(SectionReader& r) {
  CsvInput c;
  bool ok = true;
  if (auto path = r.string("path")) {
    c.path = *path;
  } else {
    if (!r.find("path")) r.missing("path");
    ok = false;
  }
  if (auto mode = read_mode(r)) {
    c.mode = *mode;
  } else {
    ok = false;
  }
  for (auto [key, target] : {std::pair{"m", &c.m}, std::pair{"d", &c.d}}) {
    if (auto v = r.integer(key)) {
      *target = *v;
    } else {
      if (!r.find(key)) r.missing(key);
      ok = false;
    }
  }
  if (auto delay = r.integer("delay")) c.delay = *delay;
  if (auto cps = r.integers("change_points")) c.change_points = *cps;
  if (ok && c.m < 2) {
    r.error(*r.find("m"), "must be >= 2");
    ok = false;
  }
  if (ok && c.d < 1) {
    r.error(*r.find("d"), "must be >= 1");
    ok = false;
  }
  return ok ? std::optional(c) : std::nullopt;
}

std::string render_real(double v) { return fmt::format("{}", v); }

std::string render_reals(const std::vector<double>& values) {
  std::string out = "[";
  for (std::size_t i = 0; i < values.size(); ++i) out += (i ? ", " : "") + render_real(values[i]);
  return out + "]";
}

std::string render_integers(const std::vector<std::uint64_t>& values) {
  std::string out = "[";
  for (std::size_t i = 0; i < values.size(); ++i) out += fmt::format("{}{}", i ? ", " : "", values[i]);
  return out + "]";
}

std::string quote(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::size_t ExperimentConfig::num_experts() const {
  return std::visit([](const auto& in) { return in.m; }, input);
}

TaskMode ExperimentConfig::mode() const {
  return std::visit([](const auto& in) { return in.mode; }, input);
}

const std::vector<std::uint64_t>& ExperimentConfig::change_points() const {
  return std::visit(
      [](const auto& in) -> const std::vector<std::uint64_t>& { return in.change_points; }, input);
}

ExperimentConfig parse_config(std::string_view text) {
  Issues issues;
  auto sections = tokenize(text, issues);
  ExperimentConfig config;

  SectionReader top(sections.front(), issues);
  if (auto seeds = top.integers("seeds")) {
    config.seeds = *seeds;
    if (seeds->empty()) issues.add(top.find("seeds")->line, "seeds: at least one seed is required");
  } else if (!top.find("seeds")) {
    issues.add(0, "seeds: required key is missing");
  }
  const auto loss_name = top.string("loss").value_or("sq");
  const double bound = top.real("loss_bound").value_or(1.0);
  const double clip = top.real("loss_clip").value_or(0.01);
  try {
    config.loss = loss_from_key(loss_name, loss_name == "xent" ? clip : bound);
  } catch (const ConfigError& e) {
    const Entry* where = top.find(loss_name == "xent" ? "loss_clip" : "loss_bound");
    if (!where || loss_name == "zero_one") where = top.find("loss");
    issues.add(where ? where->line : 0, fmt::format("loss: {}", e.what()));
  }
  if (auto out = top.string("output_dir")) config.output_dir = *out;
  top.report_unknown();

  std::optional<std::size_t> input_line;
  bool input_ok = false;
  for (std::size_t i = 1; i < sections.size(); ++i) {
    Section& section = sections[i];
    SectionReader r(section, issues);
    const std::string& name = section.name;
    if (name.rfind("aggregator.", 0) == 0 && name.size() > 11) {
      if (auto spec = read_aggregator(r, name.substr(11))) config.aggregators.push_back(*spec);
    } else if (name == "scenario" || name == "csv") {
      if (input_line) {
        issues.add(section.line, "only one of [scenario] or [csv] may be given");
      } else {
        input_line = section.line;
        if (name == "scenario") {
          if (auto s = read_scenario(r)) {
            config.input = *s;
            input_ok = true;
          }
        } else if (auto c = read_csv(r)) {
          config.input = *c;
          input_ok = true;
        }
      }
    } else if (name == "grid") {
      for (auto& e : section.entries) {
        const RealParam* p = find_real_param(e.key);
        if (!p) {
          e.used = true;
          r.error(e, "not a real-valued EARCP parameter");
          continue;
        }
        auto values = r.reals(e.key);
        if (!values) continue;
        if (values->empty()) {
          r.error(e, "needs at least one value");
          continue;
        }
        for (double v : *values) {
          if (!in_range(*p, v)) {
            r.error(e, fmt::format("value {} outside {}", v, describe_range(*p)));
          }
        }
        config.grid.push_back({e.key, *values});
      }
    } else {
      issues.add(section.line, fmt::format("unknown section [{}]", name));
      for (auto& e : section.entries) e.used = true;
    }
    r.report_unknown();
  }

  if (config.aggregators.empty()) issues.add(0, "at least one [aggregator.NAME] section is required");
  if (!input_line) issues.add(0, "a [scenario] or [csv] section is required");

  // Checks that depend on M point at the key that breaks them.
  auto line_of = [&](const std::string& section, std::string_view key) -> std::size_t {
    for (const auto& sec : sections) {
      if (sec.name != section) continue;
      for (const auto& e : sec.entries) {
        if (e.key == key) return e.line;
      }
      return sec.line;
    }
    return 0;
  };
  if (input_ok) {
    const std::size_t m = config.num_experts();
    for (const auto& agg : config.aggregators) {
      if (const auto* c = std::get_if<EarcpConfig>(&agg.kind)) {
        const std::string section = "aggregator." + agg.name;
        if (c->w_min * static_cast<double>(m) >= 1.0) {
          issues.add(line_of(section, "w_min"),
                     fmt::format("[{}] w_min: must be in [0, 1/M) with M = {} (got {})", section,
                                 m, c->w_min));
        }
        if (c->coherence_sample_k && *c->coherence_sample_k > m - 1) {
          issues.add(line_of(section, "coherence_sample_k"),
                     fmt::format("[{}] coherence_sample_k: must be in [1, {}] (got {})", section,
                                 m - 1, *c->coherence_sample_k));
        }
      }
    }
    for (const auto& axis : config.grid) {
      if (axis.parameter != "w_min") continue;
      for (double v : axis.values) {
        if (v * static_cast<double>(m) >= 1.0) {
          issues.add(line_of("grid", "w_min"),
                     fmt::format("[grid] w_min: value {} violates w_min < 1/M with M = {}", v, m));
        }
      }
    }
  }

  if (!issues.empty()) throw ConfigParseError(issues.take());
  return config;
}

std::string render_config(const ExperimentConfig& config) {
  std::string out;
  out += fmt::format("seeds = {}\n", render_integers(config.seeds));
  out += fmt::format("loss = {}\n", quote(loss_key(config.loss)));
  if (const auto* sq = std::get_if<ScaledSquaredError>(&config.loss)) {
    out += fmt::format("loss_bound = {}\n", render_real(sq->bound));
  } else if (const auto* xent = std::get_if<ClippedCrossEntropy>(&config.loss)) {
    out += fmt::format("loss_clip = {}\n", render_real(xent->clip));
  }
  out += fmt::format("output_dir = {}\n", quote(config.output_dir));

  for (const auto& agg : config.aggregators) {
    out += fmt::format("\n[aggregator.{}]\nkind = {}\n", agg.name, quote(kind_key(agg)));
    if (const auto* c = std::get_if<EarcpConfig>(&agg.kind)) {
      for (const auto& p : kRealParams) {
        out += fmt::format("{} = {}\n", p.name, render_real(c->*p.member));
      }
      out += c->norm_window ? fmt::format("norm_window = {}\n", *c->norm_window)
                            : std::string("norm_window = \"unbounded\"\n");
      if (c->coherence_sample_k) {
        out += fmt::format("coherence_sample_k = {}\n", *c->coherence_sample_k);
      }
      out += fmt::format("hedge_compat = {}\n", c->hedge_compat);
      out += fmt::format("max_pending = {}\n", c->max_pending);
    } else if (const auto* h = std::get_if<Hedge>(&std::get<BaselineKind>(agg.kind))) {
      if (h->eta) out += fmt::format("eta = {}\n", render_real(*h->eta));
      if (h->horizon) out += fmt::format("horizon = {}\n", *h->horizon);
    }
  }

  if (const auto* s = std::get_if<ScenarioSpec>(&config.input)) {
    out += fmt::format("\n[scenario]\nmode = {}\nm = {}\nd = {}\nhorizon = {}\n",
                       quote(to_string(s->mode)), s->m, s->d, s->horizon);
    std::string experts = "[";
    for (std::size_t e = 0; e < s->experts.size(); ++e) {
      experts += (e ? ", " : "") + quote(to_string(s->experts[e]));
    }
    out += fmt::format("experts = {}]\n", experts);
    out += fmt::format("change_points = {}\ndelay = {}\n", render_integers(s->change_points), s->delay);
  } else {
    const auto& c = std::get<CsvInput>(config.input);
    out += fmt::format("\n[csv]\npath = {}\nmode = {}\nm = {}\nd = {}\ndelay = {}\n", quote(c.path),
                       quote(to_string(c.mode)), c.m, c.d, c.delay);
    out += fmt::format("change_points = {}\n", render_integers(c.change_points));
  }

  if (!config.grid.empty()) {
    out += "\n[grid]\n";
    for (const auto& axis : config.grid) {
      out += fmt::format("{} = {}\n", axis.parameter, render_reals(axis.values));
    }
  }
  return out;
}

std::string GridCell::label() const {
  if (assignments.empty()) return "-";
  std::string out;
  for (const auto& [name, value] : assignments) {
    out += fmt::format("{}{}={}", out.empty() ? "" : ";", name, value);
  }
  return out;
}

EarcpConfig GridCell::apply(EarcpConfig base) const {
  for (const auto& [name, value] : assignments) {
    const RealParam* p = find_real_param(name);
    if (!p) throw ConfigError(fmt::format("grid parameter '{}' is not an EARCP parameter", name));
    base.*p->member = value;
  }
  return base;
}

std::vector<GridCell> expand_grid(const std::vector<GridAxis>& grid) {
  std::vector<GridCell> cells(1);
  for (const auto& axis : grid) {
    std::vector<GridCell> next;
    next.reserve(cells.size() * axis.values.size());
    for (const auto& cell : cells) {
      for (double v : axis.values) {
        GridCell extended = cell;
        extended.assignments.emplace_back(axis.parameter, v);
        next.push_back(std::move(extended));
      }
    }
    cells = std::move(next);
  }
  return cells;
}

}  // namespace earcp
