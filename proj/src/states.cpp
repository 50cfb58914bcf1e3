#include "ks/states.hpp"

#include <algorithm>
#include <functional>
#include <numeric>

namespace ks {

namespace {

constexpr std::int8_t kUnset = -1;

class StateSearch {
public:
    explicit StateSearch(const Diagram& d) : d_(d), value_(static_cast<std::size_t>(d.vertex_count()), kUnset) {
        order_.resize(static_cast<std::size_t>(d.vertex_count()));
        std::iota(order_.begin(), order_.end(), 0);
        std::stable_sort(order_.begin(), order_.end(), [&](int x, int y) { return d.degree(x) > d.degree(y); });
    }

    // Calls on_solution for each total state; stops when it returns false.
    template <typename F>
    void run(F&& on_solution) {
        on_solution_ = [&](const std::vector<std::int8_t>& v) { return on_solution(v); };
        stop_ = false;
        descend(0);
    }

private:
    // Assigns v := x and propagates. Returns false on conflict; the trail
    // records every assignment so it can be undone.
    bool assign(int v, std::int8_t x) {
        std::vector<std::pair<int, std::int8_t>> queue{{v, x}};
        while (!queue.empty()) {
            auto [u, val] = queue.back();
            queue.pop_back();
            auto& cur = value_[static_cast<std::size_t>(u)];
            if (cur != kUnset) {
                if (cur != val) return false;
                continue;
            }
            cur = val;
            trail_.push_back(u);
            for (int e : d_.incidence()[static_cast<std::size_t>(u)]) {
                int ones = 0;
                int unset = 0;
                int last_unset = -1;
                for (Vertex w : d_.edge(e)) {
                    const auto wv = value_[static_cast<std::size_t>(w)];
                    if (wv == 1) ++ones;
                    if (wv == kUnset) {
                        ++unset;
                        last_unset = w;
                    }
                }
                if (ones > 1) return false;
                if (ones == 1) {
                    for (Vertex w : d_.edge(e))
                        if (value_[static_cast<std::size_t>(w)] == kUnset) queue.emplace_back(w, 0);
                } else if (unset == 0) {
                    return false;
                } else if (unset == 1) {
                    queue.emplace_back(last_unset, 1);
                }
            }
        }
        return true;
    }

    void undo(std::size_t mark) {
        while (trail_.size() > mark) {
            value_[static_cast<std::size_t>(trail_.back())] = kUnset;
            trail_.pop_back();
        }
    }

    void descend(std::size_t pos) {
        while (pos < order_.size() && value_[static_cast<std::size_t>(order_[pos])] != kUnset) ++pos;
        if (pos == order_.size()) {
            if (!on_solution_(value_)) stop_ = true;
            return;
        }
        const int v = order_[pos];
        for (std::int8_t x : {std::int8_t{0}, std::int8_t{1}}) {
            const std::size_t mark = trail_.size();
            if (assign(v, x)) descend(pos + 1);
            undo(mark);
            if (stop_) return;
        }
    }

    const Diagram& d_;
    std::vector<std::int8_t> value_;
    std::vector<int> order_;
    std::vector<int> trail_;
    std::function<bool(const std::vector<std::int8_t>&)> on_solution_;
    bool stop_ = false;
};

}  // namespace

std::optional<StateAssignment> find_01_state(const Diagram& d) {
    std::optional<StateAssignment> found;
    StateSearch search(d);
    search.run([&](const std::vector<std::int8_t>& v) {
        found.emplace();
        found->values.assign(v.begin(), v.end());
        return false;
    });
    return found;
}

std::uint64_t count_01_states(const Diagram& d, std::optional<std::uint64_t> limit) {
    std::uint64_t count = 0;
    if (limit && *limit == 0) return 0;
    StateSearch search(d);
    search.run([&](const std::vector<std::int8_t>&) {
        ++count;
        return !(limit && count >= *limit);
    });
    return count;
}

bool verify_01_state(const Diagram& d, const StateAssignment& s) {
    if (static_cast<int>(s.values.size()) != d.vertex_count()) return false;
    for (auto x : s.values)
        if (x > 1) return false;
    for (const auto& e : d.edges()) {
        int ones = 0;
        for (Vertex v : e) ones += s.values[static_cast<std::size_t>(v)];
        if (ones != 1) return false;
    }
    return true;
}

}  // namespace ks
