#pragma once

#include <compare>
#include <cstdint>
#include <vector>

namespace retroalign {

struct SymbolId {
    std::uint32_t index = 0;
    friend auto operator<=>(const SymbolId&, const SymbolId&) = default;
};

struct SymbolInfo {
    SymbolId id;
    int owner_tx = -1;
    int intended_rx = -1;
};

// Issues run-unique ids for fresh information symbols.
class SymbolPool {
public:
    std::vector<SymbolId> mint_fresh(int count, int owner_tx, int intended_rx);
    SymbolId mint(int owner_tx, int intended_rx) { return mint_fresh(1, owner_tx, intended_rx).front(); }

    std::size_t size() const { return info_.size(); }
    const SymbolInfo& info(SymbolId id) const { return info_.at(id.index); }
    const std::vector<SymbolInfo>& all() const { return info_; }

private:
    std::vector<SymbolInfo> info_;
};

} // namespace retroalign
