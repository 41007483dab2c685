#include "earcp/snapshot.hpp"

#include <fmt/format.h>
#include <json.hpp>

#include "earcp/errors.hpp"
#include "earcp/metrics.hpp"

namespace earcp {

namespace {

using nlohmann::json;

class Writer {
 public:
  void key(std::string_view k) {
    comma();
    out_ += fmt::format("\"{}\":", k);
    fresh_ = true;
  }
  void real(double v) {
    comma();
    out_ += format_real(v);
  }
  void integer(std::uint64_t v) {
    comma();
    out_ += fmt::format("{}", v);
  }
  void boolean(bool v) {
    comma();
    out_ += v ? "true" : "false";
  }
  void null() {
    comma();
    out_ += "null";
  }
  void string(std::string_view v) {
    comma();
    out_ += fmt::format("\"{}\"", v);
  }
  void open(char c) {
    comma();
    out_ += c;
    fresh_ = true;
  }
  void close(char c) {
    out_ += c;
    fresh_ = false;
  }
  void reals(std::span<const double> values) {
    open('[');
    for (double v : values) real(v);
    close(']');
  }
  std::string take() { return std::move(out_); }

 private:
  void comma() {
    if (!fresh_) out_ += ',';
    fresh_ = false;
  }

  std::string out_;
  bool fresh_ = true;
};

void write_optional(Writer& w, std::string_view k, const std::optional<std::size_t>& v) {
  w.key(k);
  if (v) {
    w.integer(*v);
  } else {
    w.null();
  }
}

void write_loss(Writer& w, const LossKind& loss) {
  w.key("loss");
  w.open('{');
  w.key("kind");
  w.string(loss_key(loss));
  if (const auto* sq = std::get_if<ScaledSquaredError>(&loss)) {
    w.key("bound");
    w.real(sq->bound);
  } else if (const auto* xent = std::get_if<ClippedCrossEntropy>(&loss)) {
    w.key("clip");
    w.real(xent->clip);
  }
  w.close('}');
}

void write_config(Writer& w, const EarcpConfig& c) {
  w.key("config");
  w.open('{');
  w.key("alpha_p");
  w.real(c.alpha_p);
  w.key("alpha_c");
  w.real(c.alpha_c);
  w.key("beta");
  w.real(c.beta);
  w.key("eta_s");
  w.real(c.eta_s);
  w.key("w_min");
  w.real(c.w_min);
  w.key("s_max");
  w.real(c.s_max);
  w.key("gamma");
  w.real(c.gamma);
  w.key("epsilon");
  w.real(c.epsilon);
  write_optional(w, "norm_window", c.norm_window);
  write_optional(w, "coherence_sample_k", c.coherence_sample_k);
  w.key("coherence_seed");
  w.integer(c.coherence_seed);
  w.key("hedge_compat");
  w.boolean(c.hedge_compat);
  w.key("hedge_eta");
  w.real(c.hedge_eta);
  w.key("max_pending");
  w.integer(c.max_pending);
  w.close('}');
}

void write_history(Writer& w, std::string_view k, const std::deque<std::vector<double>>& h) {
  w.key(k);
  w.open('[');
  for (const auto& snap : h) w.reals(snap);
  w.close(']');
}

std::vector<double> reals(const json& j) {
  std::vector<double> out;
  for (const auto& v : j) out.push_back(v.get<double>());
  return out;
}

std::deque<std::vector<double>> history(const json& j) {
  std::deque<std::vector<double>> out;
  for (const auto& snap : j) out.push_back(reals(snap));
  return out;
}

std::optional<std::size_t> optional_size(const json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<std::size_t>();
}

}  // namespace

std::string snapshot(const EarcpAggregator& session) {
  const AggregatorState s = session.state();
  Writer w;
  w.open('{');
  w.key("schema_version");
  w.integer(kSnapshotSchemaVersion);
  w.key("mode");
  w.string(to_string(session.mode()));
  write_loss(w, session.loss());
  write_config(w, session.config());
  w.key("m");
  w.integer(s.m);
  w.key("t");
  w.integer(s.t);
  w.key("weights");
  w.reals(s.weights);
  w.key("perf");
  w.reals(s.perf);
  w.key("coh");
  w.reals(s.coh);
  write_history(w, "perf_history", s.perf_history);
  write_history(w, "coh_history", s.coh_history);
  w.key("cum_loss");
  w.reals(s.cum_loss);
  w.key("cum_ensemble_loss");
  w.real(s.cum_ensemble_loss);
  write_optional(w, "d", session.dimension());
  w.key("next_step");
  w.integer(session.next_step());
  w.key("pending");
  w.open('[');
  for (const auto& [step, entry] : session.pending()) {
    w.open('{');
    w.key("step");
    w.integer(step);
    w.key("predictions");
    w.open('[');
    for (const auto& p : entry.predictions) w.reals(p.values());
    w.close(']');
    w.key("ensemble");
    w.reals(entry.ensemble.values());
    w.close('}');
  }
  w.close(']');
  w.close('}');
  return w.take() + "\n";
}

EarcpAggregator restore(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw PersistenceError(fmt::format("snapshot is not valid JSON: {}", e.what()));
  }
  try {
    const int version = doc.at("schema_version").get<int>();
    if (version != kSnapshotSchemaVersion) {
      throw PersistenceError(fmt::format("unsupported snapshot schema_version {} (expected {})",
                                         version, kSnapshotSchemaVersion));
    }
    const TaskMode mode = task_mode_from_string(doc.at("mode").get<std::string>());

    const auto& jl = doc.at("loss");
    const std::string loss_name = jl.at("kind").get<std::string>();
    double loss_param = 0.0;
    if (loss_name == "sq") loss_param = jl.at("bound").get<double>();
    if (loss_name == "xent") loss_param = jl.at("clip").get<double>();
    const LossKind loss = loss_from_key(loss_name, loss_param);

    const auto& jc = doc.at("config");
    EarcpConfig c;
    c.alpha_p = jc.at("alpha_p").get<double>();
    c.alpha_c = jc.at("alpha_c").get<double>();
    c.beta = jc.at("beta").get<double>();
    c.eta_s = jc.at("eta_s").get<double>();
    c.w_min = jc.at("w_min").get<double>();
    c.s_max = jc.at("s_max").get<double>();
    c.gamma = jc.at("gamma").get<double>();
    c.epsilon = jc.at("epsilon").get<double>();
    c.norm_window = optional_size(jc.at("norm_window"));
    c.coherence_sample_k = optional_size(jc.at("coherence_sample_k"));
    c.coherence_seed = jc.at("coherence_seed").get<std::uint64_t>();
    c.hedge_compat = jc.at("hedge_compat").get<bool>();
    c.hedge_eta = jc.at("hedge_eta").get<double>();
    c.max_pending = jc.at("max_pending").get<std::size_t>();

    AggregatorState s;
    s.m = doc.at("m").get<std::size_t>();
    s.t = doc.at("t").get<std::uint64_t>();
    s.weights = reals(doc.at("weights"));
    s.perf = reals(doc.at("perf"));
    s.coh = reals(doc.at("coh"));
    s.perf_history = history(doc.at("perf_history"));
    s.coh_history = history(doc.at("coh_history"));
    s.cum_loss = reals(doc.at("cum_loss"));
    s.cum_ensemble_loss = doc.at("cum_ensemble_loss").get<double>();

    const auto dimension = doc.contains("d") ? optional_size(doc.at("d")) : std::nullopt;
    const std::uint64_t next_step =
        doc.contains("next_step") ? doc.at("next_step").get<std::uint64_t>() : s.t + 1;

    std::map<std::uint64_t, PendingFeedback> pending;
    if (doc.contains("pending")) {
      for (const auto& jp : doc.at("pending")) {
        PendingFeedback entry;
        entry.step = jp.at("step").get<std::uint64_t>();
        for (const auto& p : jp.at("predictions")) entry.predictions.emplace_back(reals(p));
        entry.ensemble = PredictionVector(reals(jp.at("ensemble")));
        if (mode == TaskMode::kClassification) {
          std::vector<std::size_t> classes;
          for (const auto& p : entry.predictions) classes.push_back(argmax(p.values()));
          entry.predicted_classes = std::move(classes);
        }
        pending.emplace(entry.step, std::move(entry));
      }
    }
    return EarcpAggregator(c, mode, loss, std::move(s), next_step, dimension, std::move(pending));
  } catch (const json::exception& e) {
    throw PersistenceError(fmt::format("corrupt snapshot: {}", e.what()));
  } catch (const PersistenceError&) {
    throw;
  } catch (const Error& e) {
    throw PersistenceError(fmt::format("snapshot rejected: {}", e.what()));
  }
}

}  // namespace earcp
