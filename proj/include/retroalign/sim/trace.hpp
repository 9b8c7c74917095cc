#pragma once

#include "retroalign/sim/simulator.hpp"

#include "json.hpp"

#include <iosfwd>

namespace retroalign {

struct TraceMeta {
    ModelId model;
    int M = 0;
    int K = 0;
};

nlohmann::json field_json(PrimeField::value_type v);
nlohmann::json field_json(ComplexField::value_type v);

template <class F>
nlohmann::json expr_json(const LinearExpr<F>& e);

nlohmann::json report_json(const SimReport& r);

// One JSON object per line: {"t", "H", "Hfd"?, "transmissions"}.
template <class F>
void write_slot(std::ostream& os, const SlotPlan<F>& plan, const ChannelRealization<F>& ch);

// Trailing line: {"report": ..., "model", "M", "K", "symbols": [[owner, intended], ...]}.
void write_trailer(std::ostream& os, const SimReport& r, const TraceMeta& meta, const SymbolPool& pool);

struct ReplayResult {
    SimReport recorded;
    SimReport replayed;
};

// Re-executes a trace against its recorded channel and recomputes the report.
template <class F>
ReplayResult replay_trace(std::istream& is);

} // namespace retroalign
