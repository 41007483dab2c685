#include "earcp/stream.hpp"

#include <deque>

namespace earcp {

namespace {

struct InFlight {
  std::uint64_t session_step;
  std::uint64_t stream_step;
  PredictionVector target;
};

}  // namespace

Trace run_stream(Aggregator& aggregator, const StreamSource& source, std::uint64_t delay) {
  Trace trace;
  std::deque<InFlight> in_flight;
  auto deliver = [&] {
    InFlight f = std::move(in_flight.front());
    in_flight.pop_front();
    trace.push_back(to_record(f.stream_step, aggregator.update(f.session_step, f.target)));
  };
  while (auto step = source()) {
    const std::uint64_t session_step = aggregator.next_step();
    aggregator.predict(step->predictions);
    in_flight.push_back({session_step, step->step, std::move(step->target)});
    if (in_flight.size() > delay) deliver();
  }
  while (!in_flight.empty()) deliver();
  return trace;
}

}  // namespace earcp
