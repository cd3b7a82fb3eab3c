#include "kiva/station_dp.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <numeric>
#include <unordered_set>

#include "kiva/error.hpp"

namespace kiva {

using Word = SkuSet::Word;

namespace {

// Core transition on flat residual blocks: `capacity` blocks of `width` words.
// Returns false when the rack removes nothing.
bool apply_rack(const Word* src, std::uint32_t next, const Word* rack, const Word* order_words,
                std::uint32_t length, std::size_t capacity, std::size_t width, Word* dst,
                std::uint32_t& next_out) {
    bool useful = false;
    for (std::size_t c = 0; c < capacity; ++c) {
        const Word* s = src + c * width;
        Word* d = dst + c * width;
        Word before = 0, hit = 0, after = 0;
        for (std::size_t w = 0; w < width; ++w) {
            before |= s[w];
            hit |= s[w] & rack[w];
            d[w] = s[w] & ~rack[w];
            after |= d[w];
        }
        useful = useful || hit != 0;
        if (before == 0 || after != 0) continue;
        while (next < length) {
            const Word* o = order_words + static_cast<std::size_t>(next) * width;
            ++next;
            Word left = 0;
            for (std::size_t w = 0; w < width; ++w) {
                d[w] = o[w] & ~rack[w];
                left |= d[w];
            }
            if (left != 0) break;
        }
    }
    next_out = next;
    return useful;
}

std::vector<Word> sequence_words(std::span<const OrderIdx> sequence, const Instance& instance, std::size_t width) {
    std::vector<Word> words(sequence.size() * width, 0);
    for (std::size_t i = 0; i < sequence.size(); ++i) {
        if (sequence[i] >= instance.order_count())
            fail(ErrorKind::invalid_input, "unknown order index " + std::to_string(sequence[i]));
        auto src = instance.orders[sequence[i]].words();
        std::copy(src.begin(), src.end(), words.begin() + static_cast<std::ptrdiff_t>(i * width));
    }
    return words;
}

std::size_t union_popcount(const std::vector<SkuSet>& residuals, std::size_t universe) {
    SkuSet all(universe);
    for (const auto& r : residuals) all |= r;
    return all.size();
}

} // namespace

bool BenchState::terminal(std::size_t sequence_length) const {
    return psi == sequence_length + 1 &&
           std::all_of(residuals.begin(), residuals.end(), [](const SkuSet& s) { return s.empty(); });
}

BenchState initial_state(std::span<const OrderIdx> sequence, const Instance& instance) {
    BenchState state;
    const std::size_t loaded = std::min(instance.capacity, sequence.size());
    for (std::size_t c = 0; c < instance.capacity; ++c) {
        if (c < loaded) {
            if (sequence[c] >= instance.order_count())
                fail(ErrorKind::invalid_input, "unknown order index " + std::to_string(sequence[c]));
            state.residuals.push_back(instance.orders[sequence[c]]);
        } else {
            state.residuals.emplace_back(instance.sku_count);
        }
    }
    state.psi = loaded + 1;
    return state;
}

std::optional<BenchState> transition(const BenchState& state, RackIdx rack, std::span<const OrderIdx> sequence,
                                     const Instance& instance) {
    if (rack >= instance.rack_count()) fail(ErrorKind::invalid_input, "unknown rack index " + std::to_string(rack));
    const std::size_t width = SkuSet::words_for(instance.sku_count);
    const std::size_t capacity = state.residuals.size();
    std::vector<Word> src(capacity * width), dst(capacity * width);
    for (std::size_t c = 0; c < capacity; ++c) {
        auto w = state.residuals[c].words();
        std::copy(w.begin(), w.end(), src.begin() + static_cast<std::ptrdiff_t>(c * width));
    }
    const auto orders = sequence_words(sequence, instance, width);
    std::uint32_t next = 0;
    if (!apply_rack(src.data(), static_cast<std::uint32_t>(state.psi - 1), instance.racks[rack].words().data(),
                    orders.data(), static_cast<std::uint32_t>(sequence.size()), capacity, width, dst.data(), next))
        return std::nullopt;

    BenchState out;
    out.psi = next + 1;
    out.stage = state.stage + 1;
    for (std::size_t c = 0; c < capacity; ++c) {
        SkuSet s(instance.sku_count);
        std::copy_n(dst.begin() + static_cast<std::ptrdiff_t>(c * width), width, s.words().begin());
        out.residuals.push_back(std::move(s));
    }
    return out;
}

std::vector<std::size_t> rank_states(std::span<const BenchState> nodes, std::size_t sequence_length) {
    std::vector<std::size_t> order(nodes.size());
    std::iota(order.begin(), order.end(), 0);
    std::vector<std::size_t> unprocessed(nodes.size()), bench_skus(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const std::size_t processed = std::min(nodes[i].psi, sequence_length + 1);
        unprocessed[i] = sequence_length + 1 - processed;
        bench_skus[i] = nodes[i].residuals.empty() ? 0 : union_popcount(nodes[i].residuals, nodes[i].residuals[0].universe());
    }
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (unprocessed[a] != unprocessed[b]) return unprocessed[a] < unprocessed[b];
        return bench_skus[a] < bench_skus[b];
    });
    return order;
}

std::size_t station_stage_bound(std::span<const OrderIdx> sequence, const Instance& instance) {
    std::size_t max_size = 0;
    for (OrderIdx o : sequence)
        if (o < instance.order_count()) max_size = std::max(max_size, instance.orders[o].size());
    return sequence.size() * max_size * instance.rack_count();
}

struct BeamSearcher::Impl {
    const Instance* instance;
    std::size_t full_width;  // words per instance-wide SKU set
    std::size_t capacity;    // bench positions
    std::vector<Word> stocked;

    // Per-search SKU compaction: only SKUs demanded by the sequence get a
    // bit, so blocks shrink to `width` words.
    std::size_t width = 0;
    std::vector<Word> racks;              // local rack words, indexed by position in `useful`
    std::vector<RackIdx> useful;          // racks stocking some demanded SKU
    std::vector<Word> orders;             // local order words in sequence order

    // Per-search arena. Node i owns words [i*block, (i+1)*block).
    std::size_t block = 0;
    std::vector<Word> words;
    std::vector<std::uint32_t> next;
    std::vector<std::int32_t> parent;
    std::vector<RackIdx> via;

    struct NodeHash {
        const Impl* self;
        std::size_t operator()(std::uint32_t id) const noexcept {
            std::uint64_t h = 0x9e3779b97f4a7c15ULL ^ self->next[id];
            const Word* w = self->words.data() + static_cast<std::size_t>(id) * self->block;
            for (std::size_t i = 0; i < self->block; ++i) {
                h ^= w[i] + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
            }
            return static_cast<std::size_t>(h);
        }
    };
    struct NodeEq {
        const Impl* self;
        bool operator()(std::uint32_t a, std::uint32_t b) const noexcept {
            if (self->next[a] != self->next[b]) return false;
            const Word* wa = self->words.data() + static_cast<std::size_t>(a) * self->block;
            const Word* wb = self->words.data() + static_cast<std::size_t>(b) * self->block;
            return std::equal(wa, wa + self->block, wb);
        }
    };
    std::unordered_set<std::uint32_t, NodeHash, NodeEq> seen{0, NodeHash{this}, NodeEq{this}};
    std::size_t generated = 0;

    explicit Impl(const Instance& inst)
        : instance(&inst), full_width(SkuSet::words_for(inst.sku_count)), capacity(inst.capacity),
          stocked(full_width, 0) {
        for (const auto& rack : inst.racks) {
            auto w = rack.words();
            for (std::size_t i = 0; i < full_width; ++i) stocked[i] |= w[i];
        }
    }

    void compact(std::span<const OrderIdx> sequence) {
        SkuSet demand(instance->sku_count);
        for (OrderIdx o : sequence) demand |= instance->orders[o];
        const auto skus = demand.to_vector();
        width = std::max<std::size_t>(1, SkuSet::words_for(skus.size()));
        auto project = [&](const SkuSet& set, Word* out) {
            std::fill(out, out + width, 0);
            for (std::size_t k = 0; k < skus.size(); ++k)
                if (set.contains(skus[k])) out[k / 64] |= Word{1} << (k % 64);
        };
        useful.clear();
        racks.clear();
        for (std::size_t r = 0; r < instance->rack_count(); ++r) {
            if (!instance->racks[r].intersects(demand)) continue;
            useful.push_back(static_cast<RackIdx>(r));
            racks.resize(racks.size() + width);
            project(instance->racks[r], racks.data() + racks.size() - width);
        }
        orders.assign(sequence.size() * width, 0);
        for (std::size_t i = 0; i < sequence.size(); ++i) project(instance->orders[sequence[i]], orders.data() + i * width);
    }

    Word* node_words(std::uint32_t id) { return words.data() + static_cast<std::size_t>(id) * block; }

    std::uint32_t push_node() {
        const auto id = static_cast<std::uint32_t>(next.size());
        words.resize(words.size() + block);
        next.push_back(0);
        parent.push_back(-1);
        via.push_back(0);
        return id;
    }
    void pop_node() {
        words.resize(words.size() - block);
        next.pop_back();
        parent.pop_back();
        via.pop_back();
    }

    // Sorts the residual blocks of a node so that states equal as multisets
    // share one representation.
    void canonicalize(std::uint32_t id) {
        Word* base = node_words(id);
        auto less = [this](const Word* a, const Word* b) {
            return std::lexicographical_compare(a, a + width, b, b + width);
        };
        for (std::size_t i = 1; i < capacity; ++i) {
            for (std::size_t j = i; j > 0 && less(base + j * width, base + (j - 1) * width); --j)
                std::swap_ranges(base + j * width, base + (j + 1) * width, base + (j - 1) * width);
        }
    }

    bool is_terminal(std::uint32_t id, std::uint32_t length) const {
        if (next[id] != length) return false;
        const Word* w = words.data() + static_cast<std::size_t>(id) * block;
        return std::all_of(w, w + block, [](Word x) { return x == 0; });
    }

    RackSequence backtrack(std::uint32_t id) const {
        RackSequence seq;
        for (std::int32_t cur = static_cast<std::int32_t>(id); parent[static_cast<std::size_t>(cur)] >= 0;
             cur = parent[static_cast<std::size_t>(cur)])
            seq.push_back(via[static_cast<std::size_t>(cur)]);
        std::reverse(seq.begin(), seq.end());
        return seq;
    }

    void check_coverable(std::span<const OrderIdx> sequence) const {
        for (OrderIdx o : sequence) {
            if (o >= instance->order_count())
                fail(ErrorKind::invalid_input, "unknown order index " + std::to_string(o));
            auto w = instance->orders[o].words();
            for (std::size_t i = 0; i < full_width; ++i)
                if (w[i] & ~stocked[i])
                    fail(ErrorKind::infeasible, "order " + std::to_string(o) + " demands a SKU no rack stocks");
        }
    }

    std::optional<RackSequence> search(std::span<const OrderIdx> sequence, std::size_t beam_width,
                                       std::size_t upper_bound) {
        if (beam_width < 1) fail(ErrorKind::invalid_input, "beam width must be positive");
        check_coverable(sequence);
        const auto length = static_cast<std::uint32_t>(sequence.size());
        compact(sequence);
        const std::size_t stage_cap = station_stage_bound(sequence, *instance);

        block = capacity * width;
        words.clear();
        next.clear();
        parent.clear();
        via.clear();
        seen.clear();
        generated = 0;

        const std::uint32_t root = push_node();
        {
            Word* w = node_words(root);
            const std::size_t loaded = std::min<std::size_t>(capacity, length);
            std::copy(orders.begin(), orders.begin() + static_cast<std::ptrdiff_t>(loaded * width), w);
            next[root] = static_cast<std::uint32_t>(loaded);
            canonicalize(root);
        }
        if (is_terminal(root, length)) return upper_bound > 0 ? std::optional<RackSequence>(RackSequence{}) : std::nullopt;
        seen.insert(root);

        std::vector<std::uint32_t> frontier{root};
        std::vector<std::uint32_t> children;
        std::vector<std::size_t> unprocessed, bench_skus;
        std::vector<Word> bench_union(width);
        const std::size_t rack_total = useful.size();

        for (std::size_t stage = 0; !frontier.empty(); ++stage) {
            // Children live at stage+1; a non-terminal child needs at least one more rack.
            if (stage + 1 >= upper_bound || stage + 1 > stage_cap) return std::nullopt;
            const bool children_may_continue = stage + 2 < upper_bound;
            children.clear();
            for (std::uint32_t node : frontier) {
                std::fill(bench_union.begin(), bench_union.end(), 0);
                for (std::size_t c = 0; c < capacity; ++c)
                    for (std::size_t i = 0; i < width; ++i) bench_union[i] |= node_words(node)[c * width + i];
                for (std::size_t r = 0; r < rack_total; ++r) {
                    const Word* rack = racks.data() + r * width;
                    bool touches = false;
                    for (std::size_t i = 0; i < width && !touches; ++i) touches = (bench_union[i] & rack[i]) != 0;
                    if (!touches) continue;

                    const std::uint32_t child = push_node();
                    std::uint32_t child_next = 0;
                    apply_rack(node_words(node), next[node], rack, orders.data(), length, capacity, width,
                               node_words(child), child_next);
                    ++generated;
                    next[child] = child_next;
                    parent[child] = static_cast<std::int32_t>(node);
                    via[child] = useful[r];
                    canonicalize(child);
                    if (is_terminal(child, length)) return backtrack(child);
                    if (!children_may_continue || !seen.insert(child).second) {
                        pop_node();
                        continue;
                    }
                    children.push_back(child);
                }
            }
            if (children.size() > beam_width) {
                unprocessed.resize(children.size());
                bench_skus.resize(children.size());
                for (std::size_t k = 0; k < children.size(); ++k) {
                    unprocessed[k] = length - next[children[k]];
                    std::size_t pop = 0;
                    std::fill(bench_union.begin(), bench_union.end(), 0);
                    for (std::size_t c = 0; c < capacity; ++c)
                        for (std::size_t i = 0; i < width; ++i) bench_union[i] |= node_words(children[k])[c * width + i];
                    for (Word x : bench_union) pop += static_cast<std::size_t>(std::popcount(x));
                    bench_skus[k] = pop;
                }
                std::vector<std::size_t> idx(children.size());
                std::iota(idx.begin(), idx.end(), 0);
                auto better = [&](std::size_t a, std::size_t b) {
                    if (unprocessed[a] != unprocessed[b]) return unprocessed[a] < unprocessed[b];
                    if (bench_skus[a] != bench_skus[b]) return bench_skus[a] < bench_skus[b];
                    return a < b;
                };
                std::nth_element(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(beam_width), idx.end(), better);
                idx.resize(beam_width);
                std::sort(idx.begin(), idx.end(), better);
                frontier.clear();
                for (std::size_t k : idx) frontier.push_back(children[k]);
            } else {
                frontier.swap(children);
            }
        }
        return std::nullopt;
    }
};

BeamSearcher::BeamSearcher(const Instance& instance) : impl_(std::make_unique<Impl>(instance)) {}
BeamSearcher::~BeamSearcher() = default;
BeamSearcher::BeamSearcher(BeamSearcher&&) noexcept = default;
BeamSearcher& BeamSearcher::operator=(BeamSearcher&&) noexcept = default;

std::optional<RackSequence> BeamSearcher::search(std::span<const OrderIdx> sequence, std::size_t beam_width,
                                                 std::size_t upper_bound) {
    return impl_->search(sequence, beam_width, upper_bound);
}

RackSequence BeamSearcher::iterate(std::span<const OrderIdx> sequence, std::span<const std::size_t> gamma) {
    if (gamma.empty()) fail(ErrorKind::invalid_input, "beam width list is empty");
    std::optional<RackSequence> best;
    for (std::size_t width : gamma) {
        const std::size_t bound = best ? best->size() : unbounded_width;
        if (auto found = impl_->search(sequence, width, bound)) best = std::move(found);
        if (best && best->empty()) break;
    }
    if (!best) fail(ErrorKind::infeasible, "beam search found no rack sequence within the stage bound");
    return *best;
}

std::size_t BeamSearcher::last_generated() const noexcept { return impl_->generated; }

std::optional<RackSequence> beam_search(std::span<const OrderIdx> sequence, const Instance& instance,
                                        std::size_t beam_width, std::size_t upper_bound) {
    BeamSearcher searcher(instance);
    return searcher.search(sequence, beam_width, upper_bound);
}

RackSequence iterated_beam_search(std::span<const OrderIdx> sequence, const Instance& instance,
                                  std::span<const std::size_t> gamma) {
    BeamSearcher searcher(instance);
    return searcher.iterate(sequence, gamma);
}

} // namespace kiva
