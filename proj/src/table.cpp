#include "lll/table.hpp"

#include <stdexcept>
#include <utility>

namespace lll {

resampling_table::resampling_table(var_space space, std::uint64_t seed)
    : space_(std::move(space)), seed_(seed), rows_(space_.n()) {}

int resampling_table::entry(int i, int j) const {
    if (i < 0 || i >= n()) throw std::out_of_range("table row out of range");
    if (j < 1) throw std::out_of_range("table positions start at 1");
    auto& row = rows_[i];
    while (static_cast<int>(row.size()) < j) {
        const int pos = static_cast<int>(row.size()) + 1;
        // One stream per cell, keyed by (seed, i, pos): values do not depend
        // on materialization order.
        rng_stream cell =
            rng_stream(seed_).derive("table-row", static_cast<std::uint64_t>(i))
                .derive("cell", static_cast<std::uint64_t>(pos));
        row.push_back(cell.next_categorical(space_.probs(i)));
    }
    return row[static_cast<std::size_t>(j) - 1];
}

} // namespace lll
