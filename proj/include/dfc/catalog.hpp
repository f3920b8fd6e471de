#ifndef DFC_CATALOG_HPP
#define DFC_CATALOG_HPP

#include <cstddef>
#include <cstdint>
#include <iterator>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "dfc/key.hpp"
#include "dfc/random.hpp"

namespace dfc {

/// A handle was used after its element was deleted.
class UseAfterDelete : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// A caller broke an operation's precondition (foreign handle, backward finger search).
class ContractViolation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Stable reference to one catalog element. Stays valid until that element is erased.
struct ElementHandle {
    std::uint64_t catalog = 0;
    std::uint32_t slot = 0;
    std::uint32_t generation = 0;

    friend bool operator==(const ElementHandle&, const ElementHandle&) = default;
};

/// Result of a predecessor-style search: an element, or std::nullopt for the -inf marker.
using Position = std::optional<ElementHandle>;

struct Entry {
    Key key;
    std::uint64_t tag = 0;

    friend bool operator==(const Entry&, const Entry&) = default;
};

struct FingerResult {
    Position position;
    std::size_t steps = 0;
};

/**
 * Ordered multiset of finite keys with stable element handles.
 *
 * Backed by a randomized skip list (p = 1/2) whose level-0 list is doubly
 * linked. Equal keys are kept in insertion order, the newest last. Nodes live
 * in a slab indexed by slot; freed slots bump a generation counter so stale
 * handles are detected instead of aliasing a new element.
 *
 * Predecessor queries are closed: pred(x) is the last element with key <= x.
 * finger_search walks forward from a known element in expected
 * O(log(d + 2)) steps, d being the rank distance to the answer.
 *
 * Not thread-safe for writers. Concurrent const access is fine.
 */
class Catalog {
public:
    static constexpr std::uint32_t kMaxHeight = 32;

    explicit Catalog(std::uint64_t seed = 1);
    /// Bulk build in O(n) from entries sorted by key (equal keys kept in given order).
    Catalog(std::span<const Entry> sorted, std::uint64_t seed);

    Catalog(const Catalog&) = delete;
    Catalog& operator=(const Catalog&) = delete;
    Catalog(Catalog&& other) noexcept;
    Catalog& operator=(Catalog&& other) noexcept;
    ~Catalog() = default;

    std::uint64_t id() const { return id_; }
    std::size_t size() const { return size_; }
    bool empty() const { return size_ == 0; }

    ElementHandle insert(Key k, std::uint64_t tag = 0);
    Key erase(ElementHandle h);

    Position pred(Key x) const;
    /// Last element with key strictly below x.
    Position pred_strict(Key x) const;
    /// Top-down predecessor search that also reports the number of steps taken.
    FingerResult locate(Key x) const;
    /// Forward search for pred(x) starting at `from`, which must not lie past x.
    FingerResult finger_search(Position from, Key x) const;

    bool contains(ElementHandle h) const;
    Key key(ElementHandle h) const;
    std::uint64_t tag(ElementHandle h) const;

    Position first() const;
    Position last() const;
    /// Successor in catalog order; next(std::nullopt) is the first element.
    Position next(Position p) const;
    /// Predecessor in catalog order, std::nullopt when h is the first element.
    Position prev(ElementHandle h) const;

    std::vector<Entry> entries() const;

    // Slot-level access, for side tables keyed by element (bridge maps).
    std::uint32_t slot_capacity() const { return static_cast<std::uint32_t>(nodes_.size()); }
    bool slot_live(std::uint32_t slot) const {
        return slot < nodes_.size() && nodes_[slot].height != 0;
    }
    ElementHandle handle_at(std::uint32_t slot) const;

    class const_iterator {
    public:
        using iterator_category = std::forward_iterator_tag;
        using value_type = ElementHandle;
        using difference_type = std::ptrdiff_t;
        using pointer = void;
        using reference = ElementHandle;

        const_iterator() = default;
        ElementHandle operator*() const { return owner_->handle_at(slot_); }
        const_iterator& operator++() {
            slot_ = owner_->next_slot(slot_, 0);
            return *this;
        }
        const_iterator operator++(int) {
            auto copy = *this;
            ++*this;
            return copy;
        }
        friend bool operator==(const const_iterator& a, const const_iterator& b) {
            return a.slot_ == b.slot_;
        }

    private:
        friend class Catalog;
        const_iterator(const Catalog* owner, std::uint32_t slot) : owner_(owner), slot_(slot) {}

        const Catalog* owner_ = nullptr;
        std::uint32_t slot_ = kNil;
    };

    const_iterator begin() const { return {this, next_slot(kHead, 0)}; }
    const_iterator end() const { return {this, kNil}; }

private:
    static constexpr std::uint32_t kNil = 0xFFFFFFFFu;
    static constexpr std::uint32_t kHead = 0xFFFFFFFEu;

    struct Node {
        std::int64_t code = 0;
        std::uint64_t tag = 0;
        std::uint32_t link = 0;  // offset of the forward links; free-slot chain while dead
        std::uint32_t back = 0;  // level-0 predecessor (kHead when first)
        std::uint32_t generation = 0;
        std::uint8_t height = 0;  // 0 marks a dead slot
    };

    std::uint32_t next_slot(std::uint32_t slot, std::uint32_t level) const {
        if (slot == kHead) return level < head_.size() ? head_[level] : kNil;
        return links_[nodes_[slot].link + level];
    }
    void set_next(std::uint32_t slot, std::uint32_t level, std::uint32_t target) {
        if (slot == kHead)
            head_[level] = target;
        else
            links_[nodes_[slot].link + level] = target;
    }
    std::uint32_t height_of(std::uint32_t slot) const {
        return slot == kHead ? static_cast<std::uint32_t>(head_.size()) : nodes_[slot].height;
    }

    std::uint32_t checked_slot(ElementHandle h) const;
    std::uint32_t random_height();
    std::uint32_t allocate(std::int64_t code, std::uint64_t tag, std::uint32_t height);
    void release(std::uint32_t slot);
    void ensure_levels(std::uint32_t height);
    Position to_position(std::uint32_t slot) const {
        if (slot == kHead || slot == kNil) return std::nullopt;
        return ElementHandle{id_, slot, nodes_[slot].generation};
    }
    // Last slot whose code is <= bound (kHead if none); counts horizontal and vertical moves.
    std::uint32_t descend(std::int64_t bound, std::size_t& steps) const;

    std::uint64_t id_ = 0;
    SplitMix64 rng_;
    std::vector<Node> nodes_;
    std::vector<std::uint32_t> links_;
    std::vector<std::uint32_t> head_;
    std::vector<std::uint32_t> free_links_;  // per height, chained through links_
    std::uint32_t free_slot_ = kNil;
    std::uint32_t tail_ = kHead;
    std::size_t size_ = 0;
};

}  // namespace dfc

#endif
