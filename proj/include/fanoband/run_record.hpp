#pragma once

// JSON run records: a self-describing echo of the configuration plus every
// intermediate result of a command, with a stable key order so identical
// runs serialize to identical bytes.

#include <json.hpp>

#include "fanoband/classify.hpp"
#include "fanoband/cube.hpp"
#include "fanoband/selection.hpp"

namespace fanoband {

using RecordJson = nlohmann::ordered_json;

RecordJson to_record(const MIRanking& ranking);
RecordJson to_record(const SelectionTrace& trace);
RecordJson to_record(const EvaluationReport& report);
RecordJson to_record(const SweepResult& sweep);
RecordJson to_record(const PixelSplit& split, double train_fraction);

/// Pretty-printed with two-space indentation and a trailing newline.
std::string serialize_record(const RecordJson& record);

}  // namespace fanoband
