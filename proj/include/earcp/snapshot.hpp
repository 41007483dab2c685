#pragma once

#include <string>
#include <string_view>

#include "earcp/earcp.hpp"

namespace earcp {

inline constexpr int kSnapshotSchemaVersion = 1;

/// Serializes a session to JSON. Reals are written with 17 significant
/// digits, so restore(snapshot(s)) continues bit-for-bit like s.
///
/// Besides the state and configuration, the document records the loss, the
/// prediction dimension, the next step number and any predictions still
/// awaiting feedback.
std::string snapshot(const EarcpAggregator& session);

/// Throws PersistenceError for malformed documents or an unknown
/// schema_version.
EarcpAggregator restore(std::string_view json);

}  // namespace earcp
