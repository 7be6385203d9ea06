#include "fanoband/run_record.hpp"

namespace fanoband {

RecordJson to_record(const MIRanking& ranking) {
  RecordJson out = RecordJson::array();
  for (const auto& e : ranking.entries) out.push_back({{"band", e.band}, {"mi_bits", e.mi_bits}});
  return out;
}

RecordJson to_record(const SelectionTrace& trace) {
  RecordJson steps = RecordJson::array();
  for (std::size_t i = 0; i < trace.steps.size(); ++i) {
    const auto& s = trace.steps[i];
    steps.push_back({{"step", i + 1},
                     {"band", s.band},
                     {"mi_bits", s.mi_bits},
                     {"h_c_given_est", s.h_c_given_est},
                     {"pe", s.pe_after},
                     {"accepted", s.accepted},
                     {"test_accuracy_pct", s.test_accuracy}});
  }
  RecordJson out;
  out["steps"] = std::move(steps);
  out["selected"] = trace.selected;
  out["rejected"] = trace.rejected;
  return out;
}

RecordJson to_record(const EvaluationReport& report) {
  RecordJson out;
  out["overall_accuracy_pct"] = report.overall_accuracy;
  out["total"] = report.total;
  out["correct"] = report.correct;
  RecordJson rows = RecordJson::array();
  for (const auto& c : report.per_class)
    rows.push_back({{"class", c.class_id}, {"pixels", c.pixels}, {"correct", c.correct}, {"accuracy_pct", c.percent}});
  out["per_class"] = std::move(rows);
  out["confusion"] = report.confusion;
  return out;
}

RecordJson to_record(const SweepResult& sweep) {
  RecordJson out;
  out["thresholds"] = sweep.thresholds;
  out["checkpoints"] = sweep.checkpoints;
  RecordJson cells = RecordJson::array();
  for (const auto& row : sweep.cells) {
    RecordJson r = RecordJson::array();
    for (const auto& c : row) r.push_back(c ? RecordJson(*c) : RecordJson(nullptr));
    cells.push_back(std::move(r));
  }
  out["cells"] = std::move(cells);
  RecordJson traces = RecordJson::array();
  for (std::size_t t = 0; t < sweep.traces.size(); ++t) {
    RecordJson tr = to_record(sweep.traces[t]);
    tr["threshold"] = sweep.thresholds[t];
    traces.push_back(std::move(tr));
  }
  out["traces"] = std::move(traces);
  return out;
}

RecordJson to_record(const PixelSplit& split, double train_fraction) {
  RecordJson out;
  out["seed"] = split.seed;
  out["train_fraction"] = train_fraction;
  out["train_pixels"] = split.train.size();
  out["test_pixels"] = split.test.size();
  return out;
}

std::string serialize_record(const RecordJson& record) { return record.dump(2) + "\n"; }

}  // namespace fanoband
