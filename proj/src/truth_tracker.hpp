#pragma once

#include <deque>
#include <iterator>
#include <set>
#include <vector>

#include "lll/rng.hpp"
#include "lll/selection.hpp"

namespace lll::detail {

/// Bookkeeping shared by the resampling loops: which events are currently
/// true, and which one a selection rule picks next.  The fifo queue holds
/// arrival order; entries gone stale (event turned false while queued) are
/// discarded lazily at selection time.
class truth_tracker {
  public:
    explicit truth_tracker(int m) : truth_(m, 0), in_queue_(m, 0) {}

    bool is_true(int e) const { return truth_[e]; }
    bool any_true() const { return !true_set_.empty(); }

    void set(int e, bool now) {
        if (now == static_cast<bool>(truth_[e])) return;
        truth_[e] = now;
        if (now) {
            true_set_.insert(e);
            if (!in_queue_[e]) {
                fifo_q_.push_back(e);
                in_queue_[e] = 1;
            }
        } else {
            true_set_.erase(e);
        }
    }

    /// Requires any_true().  Also clears the chosen event, so a re-evaluation
    /// finding it still true counts as a fresh arrival (and re-enters the
    /// fifo queue at the back).
    int select(select_rule rule, rng_stream& rule_rng) {
        int chosen = -1;
        switch (rule) {
            case select_rule::lowest_index:
                chosen = *true_set_.begin();
                break;
            case select_rule::random: {
                auto it = true_set_.begin();
                std::advance(it, static_cast<long>(rule_rng.next_below(true_set_.size())));
                chosen = *it;
                break;
            }
            case select_rule::fifo:
                while (!truth_[fifo_q_.front()]) {
                    in_queue_[fifo_q_.front()] = 0;
                    fifo_q_.pop_front();
                }
                chosen = fifo_q_.front();
                in_queue_[chosen] = 0;
                fifo_q_.pop_front();
                break;
        }
        set(chosen, false);
        return chosen;
    }

  private:
    std::vector<char> truth_, in_queue_;
    std::set<int> true_set_;
    std::deque<int> fifo_q_;
};

} // namespace lll::detail
