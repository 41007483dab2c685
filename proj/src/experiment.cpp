#include "earcp/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include <fmt/format.h>

#include "earcp/errors.hpp"
#include "earcp/ingest.hpp"
#include "earcp/stream.hpp"

namespace earcp {

namespace fs = std::filesystem;

namespace {

struct Job {
  const AggregatorSpec* aggregator = nullptr;
  std::size_t cell_index = 0;
  const GridCell* cell = nullptr;
  bool swept = false;
  std::uint64_t seed = 0;
};

std::string trace_name(const Job& job) {
  if (job.swept) {
    return fmt::format("{}__cell{:04}__seed{}.csv", job.aggregator->name, job.cell_index, job.seed);
  }
  return fmt::format("{}__seed{}.csv", job.aggregator->name, job.seed);
}

AggregatorSpec resolve(const Job& job) {
  AggregatorSpec spec = *job.aggregator;
  if (auto* c = std::get_if<EarcpConfig>(&spec.kind)) {
    *c = job.cell->apply(*c);
    c->coherence_seed = job.seed;
  }
  return spec;
}

class OutputTracker {
 public:
  void add(fs::path p) {
    std::lock_guard lock(mutex_);
    files_.push_back(std::move(p));
  }
  void remove_all() {
    std::lock_guard lock(mutex_);
    std::error_code ec;
    for (const auto& f : files_) fs::remove(f, ec);
  }
  std::vector<fs::path> files() const {
    std::lock_guard lock(mutex_);
    return files_;
  }

 private:
  mutable std::mutex mutex_;
  std::vector<fs::path> files_;
};

std::ofstream open_output(const fs::path& path, OutputTracker& tracker) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(fmt::format("cannot write '{}'", path.string()));
  tracker.add(path);
  return out;
}

void prepare_directory(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    throw Error(fmt::format("output directory '{}' is not writable", dir.string()));
  }
}

std::string join_reals(const std::vector<double>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) out += (i ? ";" : "") + format_real(values[i]);
  return out;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& config, const RunOptions& options) {
  if (config.aggregators.empty()) throw ConfigError("no aggregators configured");
  if (config.seeds.empty()) throw ConfigError("no seeds configured");

  const auto cells = expand_grid(options.expand_grid ? config.grid : std::vector<GridAxis>{});
  const GridCell empty_cell;
  std::vector<Job> jobs;
  for (const auto& agg : config.aggregators) {
    const bool swept = options.expand_grid && !config.grid.empty() &&
                       std::holds_alternative<EarcpConfig>(agg.kind);
    const std::size_t n_cells = swept ? cells.size() : 1;
    for (std::size_t c = 0; c < n_cells; ++c) {
      for (std::uint64_t seed : config.seeds) {
        jobs.push_back({&agg, c, swept ? &cells[c] : &empty_cell, swept, seed});
      }
    }
  }

  std::vector<StreamStep> csv_steps;
  if (const auto* csv = std::get_if<CsvInput>(&config.input)) {
    csv_steps = ingest_csv(csv->path, csv->mode, csv->m, csv->d);
    if (csv_steps.empty()) throw IngestError(1, "stream file has no steps");
  }

  const fs::path out_dir(config.output_dir);
  prepare_directory(out_dir / "traces");
  OutputTracker tracker;
  std::vector<RunSummaryRow> rows(jobs.size());

  auto run_job = [&](std::size_t index) {
    const Job& job = jobs[index];
    const AggregatorSpec spec = resolve(job);
    Trace trace;
    if (const auto* scenario = std::get_if<ScenarioSpec>(&config.input)) {
      ScenarioSpec seeded = *scenario;
      seeded.seed = job.seed;
      trace = run_scenario(seeded, spec, config.loss);
    } else {
      const auto& csv = std::get<CsvInput>(config.input);
      auto session = make_aggregator(spec, csv.m, csv.mode, config.loss);
      std::size_t next = 0;
      trace = run_stream(
          *session,
          [&]() -> std::optional<StreamStep> {
            if (next >= csv_steps.size()) return std::nullopt;
            return csv_steps[next++];
          },
          csv.delay);
    }
    RunSummaryRow row;
    row.aggregator = job.aggregator->name;
    row.kind = kind_key(*job.aggregator);
    row.cell = job.cell->label();
    row.seed = job.seed;
    row.metrics = run_metrics(trace);
    row.segment_regrets = segment_regret(trace, config.change_points());
    row.trace_file = "traces/" + trace_name(job);
    auto out = open_output(out_dir / row.trace_file, tracker);
    write_trace_csv(out, trace);
    if (!out) throw Error(fmt::format("failed writing '{}'", row.trace_file));
    rows[index] = std::move(row);
  };

  std::size_t threads = options.threads ? options.threads : std::thread::hardware_concurrency();
  threads = std::clamp<std::size_t>(threads, 1, jobs.size());
  std::atomic<std::size_t> cursor{0};
  std::atomic<std::size_t> done{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::mutex log_mutex;
  auto worker = [&] {
    while (true) {
      const std::size_t index = cursor.fetch_add(1);
      if (index >= jobs.size()) return;
      {
        std::lock_guard lock(failure_mutex);
        if (failure) return;
      }
      try {
        run_job(index);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        return;
      }
      if (options.log) {
        std::lock_guard lock(log_mutex);
        *options.log << fmt::format("[{}/{}] {} {} seed {}\n", ++done, jobs.size(),
                                    jobs[index].aggregator->name, jobs[index].cell->label(),
                                    jobs[index].seed);
      }
    }
  };
  {
    std::vector<std::jthread> pool;
    for (std::size_t i = 1; i < threads; ++i) pool.emplace_back(worker);
    worker();
  }

  try {
    if (failure) std::rethrow_exception(failure);

    auto summary = open_output(out_dir / "summary.csv", tracker);
    summary << "aggregator,kind,cell,seed,final_regret,cumulative_loss,mean_entropy,min_entropy,"
               "segment_regrets,trace\n";
    for (const auto& r : rows) {
      summary << fmt::format("{},{},{},{},{},{},{},{},{},{}\n", r.aggregator, r.kind, r.cell, r.seed,
                             format_real(r.metrics.final_regret),
                             format_real(r.metrics.cumulative_loss),
                             format_real(r.metrics.mean_entropy),
                             format_real(r.metrics.min_entropy), join_reals(r.segment_regrets),
                             r.trace_file);
    }
    if (!summary) throw Error("failed writing summary.csv");

    if (config.seeds.size() >= 2) {
      // Rows are grouped by (aggregator, cell) in job order.
      auto stats = open_output(out_dir / "summary_stats.csv", tracker);
      stats << "aggregator,cell,metric,runs,mean,std,ci_low,ci_high\n";
      for (std::size_t begin = 0; begin < rows.size(); begin += config.seeds.size()) {
        std::vector<double> regrets, losses, mean_h, min_h;
        for (std::size_t k = begin; k < begin + config.seeds.size(); ++k) {
          regrets.push_back(rows[k].metrics.final_regret);
          losses.push_back(rows[k].metrics.cumulative_loss);
          mean_h.push_back(rows[k].metrics.mean_entropy);
          min_h.push_back(rows[k].metrics.min_entropy);
        }
        for (const auto& s : {summarize_metric("final_regret", regrets),
                              summarize_metric("cumulative_loss", losses),
                              summarize_metric("mean_entropy", mean_h),
                              summarize_metric("min_entropy", min_h)}) {
          stats << fmt::format("{},{},{},{},{},{},{},{}\n", rows[begin].aggregator,
                               rows[begin].cell, s.metric, s.runs, format_real(s.mean),
                               format_real(s.std_dev), format_real(s.ci_low),
                               format_real(s.ci_high));
        }
      }
      if (!stats) throw Error("failed writing summary_stats.csv");
    }
  } catch (...) {
    tracker.remove_all();
    throw;
  }
  return {std::move(rows), tracker.files()};
}

std::vector<fs::path> simulate_streams(const ExperimentConfig& config) {
  const auto* scenario = std::get_if<ScenarioSpec>(&config.input);
  if (!scenario) throw ConfigError("simulate needs a [scenario] section");
  const fs::path dir = fs::path(config.output_dir) / "streams";
  prepare_directory(dir);
  OutputTracker tracker;
  try {
    for (std::uint64_t seed : config.seeds) {
      ScenarioSpec seeded = *scenario;
      seeded.seed = seed;
      seeded.validate();
      auto out = open_output(dir / fmt::format("seed{}.csv", seed), tracker);
      write_stream_header(out, seeded.d);
      for (std::uint64_t t = 1; t <= seeded.horizon; ++t) write_stream_step(out, generate_step(seeded, t));
      if (!out) throw Error("failed writing stream file");
    }
  } catch (...) {
    tracker.remove_all();
    throw;
  }
  return tracker.files();
}

Trace replay_stream(EarcpAggregator& session, std::istream& csv) {
  std::string header;
  if (!std::getline(csv, header)) throw IngestError(1, "empty stream file");
  std::stringstream rest;
  rest << header << '\n' << csv.rdbuf();
  rest.clear();
  CsvStreamReader reader(rest, session.mode(), session.num_experts(), csv_dimension(header));

  Trace trace;
  while (auto step = reader.next()) {
    if (step->step < session.next_step()) {
      if (session.pending().contains(step->step)) {
        trace.push_back(to_record(step->step, session.update(step->step, step->target)));
      }
      continue;
    }
    if (step->step != session.next_step()) {
      throw IngestError(0, fmt::format("stream jumps to step {} but the session expects step {}",
                                       step->step, session.next_step()));
    }
    session.predict(step->predictions);
    trace.push_back(to_record(step->step, session.update(step->step, step->target)));
  }
  return trace;
}

}  // namespace earcp
