#include "retroalign/algebra/symbol.hpp"

namespace retroalign {

std::vector<SymbolId> SymbolPool::mint_fresh(int count, int owner_tx, int intended_rx) {
    std::vector<SymbolId> ids;
    for (int i = 0; i < count; ++i) {
        SymbolId id{static_cast<std::uint32_t>(info_.size())};
        info_.push_back({id, owner_tx, intended_rx});
        ids.push_back(id);
    }
    return ids;
}

} // namespace retroalign
