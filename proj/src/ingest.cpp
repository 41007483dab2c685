#include "earcp/ingest.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>

#include <fmt/format.h>

#include "earcp/errors.hpp"
#include "earcp/metrics.hpp"

namespace earcp {

namespace {

constexpr double kIngestSimplexTolerance = 1e-6;

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    out.push_back(line.substr(start, comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

std::string header_for(std::string_view second, std::string_view prefix, std::size_t d) {
  std::string h = fmt::format("step,{}", second);
  for (std::size_t j = 0; j < d; ++j) h += fmt::format(",{}{}", prefix, j);
  return h;
}

template <typename T>
bool parse_number(std::string_view text, T& out) {
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, out);
  return ec == std::errc() && ptr == end;
}

}  // namespace

std::size_t csv_dimension(const std::string& header) {
  std::string_view h = header;
  if (!h.empty() && h.back() == '\r') h.remove_suffix(1);
  const auto cols = split(h);
  if (cols.size() < 3 || cols[0] != "step" || cols[1] != "expert_id") {
    throw IngestError(1, "header must be step,expert_id,p_0,...,p_{d-1}");
  }
  return cols.size() - 2;
}

CsvStreamReader::CsvStreamReader(std::istream& in, TaskMode mode, std::size_t m, std::size_t d)
    : in_(in), mode_(mode), m_(m), d_(d) {
  std::string header;
  if (!std::getline(in_, header)) throw IngestError(1, "empty stream file");
  line_ = 1;
  if (!header.empty() && header.back() == '\r') header.pop_back();
  if (header != header_for("expert_id", "p_", d_)) {
    throw IngestError(1, fmt::format("expected header '{}'", header_for("expert_id", "p_", d_)));
  }
}

CsvStreamReader::Row CsvStreamReader::parse_row(const std::string& text) const {
  const auto cols = split(text);
  if (cols.size() != d_ + 2) {
    throw IngestError(line_, fmt::format("expected {} columns, found {}", d_ + 2, cols.size()));
  }
  Row row;
  row.line = line_;
  if (!parse_number(cols[0], row.step)) {
    throw IngestError(line_, fmt::format("bad step '{}'", cols[0]));
  }
  if (cols[1] != "target") {
    std::size_t id = 0;
    if (!parse_number(cols[1], id) || id >= m_) {
      throw IngestError(line_, fmt::format("expert_id '{}' is not in [0, {})", cols[1], m_));
    }
    row.expert = id;
  }
  row.values.resize(d_);
  for (std::size_t j = 0; j < d_; ++j) {
    if (!parse_number(cols[j + 2], row.values[j]) || !std::isfinite(row.values[j])) {
      throw IngestError(line_, fmt::format("column {} is not a finite number: '{}'", j + 2,
                                           cols[j + 2]));
    }
  }
  if (mode_ == TaskMode::kClassification) {
    const double sum = std::accumulate(row.values.begin(), row.values.end(), 0.0);
    for (double v : row.values) {
      if (v < 0.0) throw IngestError(line_, "negative probability");
    }
    if (std::abs(sum - 1.0) > kIngestSimplexTolerance) {
      throw IngestError(line_, fmt::format("probabilities sum to {}, not 1", sum));
    }
    if (std::abs(sum - 1.0) > kSimplexTolerance) {
      for (double& v : row.values) v /= sum;
    }
  }
  return row;
}

std::optional<CsvStreamReader::Row> CsvStreamReader::read_row() {
  if (lookahead_) {
    auto row = std::move(lookahead_);
    lookahead_.reset();
    return row;
  }
  std::string text;
  while (std::getline(in_, text)) {
    ++line_;
    if (!text.empty() && text.back() == '\r') text.pop_back();
    if (text.empty()) continue;
    if (line_ == 2 && text == header_for("target", "y_", d_)) continue;
    return parse_row(text);
  }
  return std::nullopt;
}

std::optional<StreamStep> CsvStreamReader::next() {
  auto first = read_row();
  if (!first) return std::nullopt;
  if (last_step_ && first->step <= *last_step_) {
    throw IngestError(first->line, fmt::format("step {} does not increase (previous step {})",
                                               first->step, *last_step_));
  }
  StreamStep step;
  step.step = first->step;
  step.predictions.resize(m_);
  std::vector<bool> seen(m_, false);
  bool has_target = false;
  std::size_t last_line = first->line;

  auto absorb = [&](Row& row) {
    last_line = row.line;
    if (row.expert) {
      if (seen[*row.expert]) {
        throw IngestError(row.line, fmt::format("duplicate row for expert {} at step {}",
                                                *row.expert, row.step));
      }
      seen[*row.expert] = true;
      step.predictions[*row.expert] = PredictionVector(std::move(row.values));
    } else {
      if (has_target) throw IngestError(row.line, fmt::format("duplicate target for step {}", row.step));
      has_target = true;
      step.target = PredictionVector(std::move(row.values));
    }
  };
  absorb(*first);
  while (auto row = read_row()) {
    if (row->step != step.step) {
      if (row->step < step.step) {
        throw IngestError(row->line, fmt::format("step {} does not increase (previous step {})",
                                                 row->step, step.step));
      }
      lookahead_ = std::move(row);
      break;
    }
    absorb(*row);
  }
  for (std::size_t i = 0; i < m_; ++i) {
    if (!seen[i]) {
      throw IngestError(last_line, fmt::format("step {} has no prediction from expert {}",
                                               step.step, i));
    }
  }
  if (!has_target) throw IngestError(last_line, fmt::format("step {} has no target row", step.step));
  last_step_ = step.step;
  return step;
}

std::vector<StreamStep> ingest_csv(const std::filesystem::path& path, TaskMode mode,
                                   std::size_t m, std::size_t d) {
  std::ifstream in(path);
  if (!in) throw IngestError(0, fmt::format("cannot open '{}'", path.string()));
  CsvStreamReader reader(in, mode, m, d);
  std::vector<StreamStep> steps;
  while (auto step = reader.next()) steps.push_back(std::move(*step));
  return steps;
}

void write_stream_header(std::ostream& out, std::size_t d) {
  out << header_for("expert_id", "p_", d) << '\n';
}

void write_stream_step(std::ostream& out, const StreamStep& step) {
  for (std::size_t i = 0; i < step.predictions.size(); ++i) {
    std::string line = fmt::format("{},{}", step.step, i);
    for (double v : step.predictions[i]) line += "," + format_real(v);
    out << line << '\n';
  }
  std::string line = fmt::format("{},target", step.step);
  for (double v : step.target) line += "," + format_real(v);
  out << line << '\n';
}

void write_stream_csv(std::ostream& out, std::span<const StreamStep> steps) {
  write_stream_header(out, steps.empty() ? 0 : steps.front().target.size());
  for (const auto& step : steps) write_stream_step(out, step);
}

}  // namespace earcp
