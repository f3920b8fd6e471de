#include "dfc/catalog.hpp"

#include <array>
#include <atomic>
#include <bit>
#include <limits>
#include <string>
#include <utility>

namespace dfc {

namespace {

std::atomic<std::uint64_t> next_catalog_id{1};

constexpr std::int64_t kMaxCode = std::numeric_limits<std::int64_t>::max();

// Closed upper bound for "code <= x". Only meaningful when x is not -inf.
std::int64_t closed_bound(Key x) {
    return x.kind() == Key::Kind::PlusInf ? kMaxCode : x.code();
}

}  // namespace

Catalog::Catalog(std::uint64_t seed) : id_(next_catalog_id.fetch_add(1)), rng_(seed) {
    head_.assign(1, kNil);
    free_links_.assign(1, kNil);
}

Catalog::Catalog(std::span<const Entry> sorted, std::uint64_t seed) : Catalog(seed) {
    nodes_.reserve(sorted.size());
    links_.reserve(sorted.size() * 2);
    std::array<std::uint32_t, kMaxHeight> last;
    last.fill(kHead);
    std::uint32_t prev = kHead;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        const Entry& e = sorted[i];
        if (!e.key.is_finite()) throw InvalidKey("catalog elements must be finite keys");
        if (i > 0 && e.key < sorted[i - 1].key)
            throw ContractViolation("bulk catalog build requires entries sorted by key");
        const std::uint32_t h = random_height();
        ensure_levels(h);
        const std::uint32_t slot = allocate(e.key.code(), e.tag, h);
        for (std::uint32_t l = 0; l < h; ++l) {
            set_next(last[l], l, slot);
            last[l] = slot;
        }
        nodes_[slot].back = prev;
        prev = slot;
    }
    tail_ = prev;
    size_ = sorted.size();
}

Catalog::Catalog(Catalog&& other) noexcept
    : id_(std::exchange(other.id_, 0)),
      rng_(other.rng_),
      nodes_(std::move(other.nodes_)),
      links_(std::move(other.links_)),
      head_(std::move(other.head_)),
      free_links_(std::move(other.free_links_)),
      free_slot_(std::exchange(other.free_slot_, kNil)),
      tail_(std::exchange(other.tail_, kHead)),
      size_(std::exchange(other.size_, 0)) {
    other.head_.assign(1, kNil);
    other.free_links_.assign(1, kNil);
}

Catalog& Catalog::operator=(Catalog&& other) noexcept {
    if (this != &other) {
        id_ = std::exchange(other.id_, 0);
        rng_ = other.rng_;
        nodes_ = std::move(other.nodes_);
        links_ = std::move(other.links_);
        head_ = std::move(other.head_);
        free_links_ = std::move(other.free_links_);
        free_slot_ = std::exchange(other.free_slot_, kNil);
        tail_ = std::exchange(other.tail_, kHead);
        size_ = std::exchange(other.size_, 0);
        other.head_.assign(1, kNil);
        other.free_links_.assign(1, kNil);
    }
    return *this;
}

std::uint32_t Catalog::random_height() {
    const std::uint64_t r = rng_() | (std::uint64_t{1} << (kMaxHeight - 1));
    return 1 + static_cast<std::uint32_t>(std::countr_zero(r));
}

void Catalog::ensure_levels(std::uint32_t height) {
    if (head_.size() < height) head_.resize(height, kNil);
    if (free_links_.size() < height) free_links_.resize(height, kNil);
}

std::uint32_t Catalog::allocate(std::int64_t code, std::uint64_t tag, std::uint32_t height) {
    std::uint32_t slot;
    if (free_slot_ != kNil) {
        slot = free_slot_;
        free_slot_ = nodes_[slot].link;
    } else {
        if (nodes_.size() >= kHead) throw std::length_error("catalog slot space exhausted");
        slot = static_cast<std::uint32_t>(nodes_.size());
        nodes_.emplace_back();
    }
    std::uint32_t link;
    if (free_links_[height - 1] != kNil) {
        link = free_links_[height - 1];
        free_links_[height - 1] = links_[link];
    } else {
        link = static_cast<std::uint32_t>(links_.size());
        links_.resize(links_.size() + height);
    }
    for (std::uint32_t l = 0; l < height; ++l) links_[link + l] = kNil;
    Node& n = nodes_[slot];
    n.code = code;
    n.tag = tag;
    n.link = link;
    n.back = kHead;
    n.height = static_cast<std::uint8_t>(height);
    return slot;
}

void Catalog::release(std::uint32_t slot) {
    Node& n = nodes_[slot];
    links_[n.link] = free_links_[n.height - 1];
    free_links_[n.height - 1] = n.link;
    n.height = 0;
    ++n.generation;
    n.link = free_slot_;
    free_slot_ = slot;
}

std::uint32_t Catalog::checked_slot(ElementHandle h) const {
    if (h.catalog != id_)
        throw ContractViolation("element handle belongs to a different catalog");
    if (h.slot >= nodes_.size() || nodes_[h.slot].height == 0 ||
        nodes_[h.slot].generation != h.generation)
        throw UseAfterDelete("element handle refers to a deleted element");
    return h.slot;
}

std::uint32_t Catalog::descend(std::int64_t bound, std::size_t& steps) const {
    std::uint32_t cur = kHead;
    for (std::uint32_t l = static_cast<std::uint32_t>(head_.size()); l-- > 0;) {
        for (std::uint32_t n = next_slot(cur, l); n != kNil && nodes_[n].code <= bound;
             n = next_slot(cur, l)) {
            cur = n;
            ++steps;
        }
        if (l > 0) ++steps;
    }
    return cur;
}

ElementHandle Catalog::insert(Key k, std::uint64_t tag) {
    if (!k.is_finite()) throw InvalidKey("cannot insert a sentinel key into a catalog");
    const std::uint32_t h = random_height();
    ensure_levels(h);
    std::array<std::uint32_t, kMaxHeight> update;
    std::uint32_t cur = kHead;
    for (std::uint32_t l = static_cast<std::uint32_t>(head_.size()); l-- > 0;) {
        for (std::uint32_t n = next_slot(cur, l); n != kNil && nodes_[n].code <= k.code();
             n = next_slot(cur, l))
            cur = n;
        if (l < h) update[l] = cur;
    }
    const std::uint32_t slot = allocate(k.code(), tag, h);
    for (std::uint32_t l = 0; l < h; ++l) {
        links_[nodes_[slot].link + l] = next_slot(update[l], l);
        set_next(update[l], l, slot);
    }
    nodes_[slot].back = update[0];
    const std::uint32_t succ = links_[nodes_[slot].link];
    if (succ != kNil)
        nodes_[succ].back = slot;
    else
        tail_ = slot;
    ++size_;
    return {id_, slot, nodes_[slot].generation};
}

Key Catalog::erase(ElementHandle h) {
    const std::uint32_t slot = checked_slot(h);
    const std::int64_t code = nodes_[slot].code;
    const std::uint32_t height = nodes_[slot].height;
    std::array<std::uint32_t, kMaxHeight> update;
    std::uint32_t cur = kHead;
    for (std::uint32_t l = static_cast<std::uint32_t>(head_.size()); l-- > 0;) {
        if (l >= height) {
            for (std::uint32_t n = next_slot(cur, l); n != kNil && nodes_[n].code < code;
                 n = next_slot(cur, l))
                cur = n;
        } else {
            // Every node reached so far precedes `slot`, so this walk must hit it.
            for (std::uint32_t n = next_slot(cur, l); n != slot; n = next_slot(cur, l)) cur = n;
            update[l] = cur;
        }
    }
    for (std::uint32_t l = 0; l < height; ++l)
        set_next(update[l], l, links_[nodes_[slot].link + l]);
    const std::uint32_t succ = links_[nodes_[slot].link];
    if (succ != kNil)
        nodes_[succ].back = nodes_[slot].back;
    else
        tail_ = nodes_[slot].back;
    release(slot);
    --size_;
    while (head_.size() > 1 && head_.back() == kNil) head_.pop_back();
    return Key::from_code(code);
}

Position Catalog::pred(Key x) const {
    return locate(x).position;
}

Position Catalog::pred_strict(Key x) const {
    return pred(x.prev());
}

FingerResult Catalog::locate(Key x) const {
    if (x.kind() == Key::Kind::MinusInf) return {std::nullopt, 0};
    if (x.kind() == Key::Kind::PlusInf) return {to_position(tail_), 0};
    std::size_t steps = 0;
    const std::uint32_t slot = descend(x.code(), steps);
    return {to_position(slot), steps};
}

FingerResult Catalog::finger_search(Position from, Key x) const {
    std::uint32_t cur = kHead;
    if (from) {
        cur = checked_slot(*from);
        if (x.kind() == Key::Kind::MinusInf || (x.is_finite() && nodes_[cur].code > x.code()))
            throw ContractViolation("finger search start lies past the target key");
    }
    if (x.kind() == Key::Kind::MinusInf) return {std::nullopt, 0};
    const std::int64_t bound = closed_bound(x);

    std::size_t steps = 0;
    std::uint32_t level = 0;
    // Ascent: climb whenever the taller link still stays at or before x.
    for (;;) {
        if (level + 1 < height_of(cur)) {
            const std::uint32_t up = next_slot(cur, level + 1);
            if (up != kNil && nodes_[up].code <= bound) {
                ++level;
                ++steps;
                continue;
            }
        }
        const std::uint32_t n = next_slot(cur, level);
        if (n == kNil || nodes_[n].code > bound) break;
        cur = n;
        ++steps;
    }
    // Descent: ordinary top-down search from the reached level.
    while (level > 0) {
        --level;
        ++steps;
        for (std::uint32_t n = next_slot(cur, level); n != kNil && nodes_[n].code <= bound;
             n = next_slot(cur, level)) {
            cur = n;
            ++steps;
        }
    }
    return {to_position(cur), steps};
}

bool Catalog::contains(ElementHandle h) const {
    return h.catalog == id_ && h.slot < nodes_.size() && nodes_[h.slot].height != 0 &&
           nodes_[h.slot].generation == h.generation;
}

Key Catalog::key(ElementHandle h) const {
    return Key::from_code(nodes_[checked_slot(h)].code);
}

std::uint64_t Catalog::tag(ElementHandle h) const {
    return nodes_[checked_slot(h)].tag;
}

Position Catalog::first() const {
    return to_position(head_[0]);
}

Position Catalog::last() const {
    return to_position(tail_);
}

Position Catalog::next(Position p) const {
    if (!p) return first();
    return to_position(links_[nodes_[checked_slot(*p)].link]);
}

Position Catalog::prev(ElementHandle h) const {
    return to_position(nodes_[checked_slot(h)].back);
}

std::vector<Entry> Catalog::entries() const {
    std::vector<Entry> out;
    out.reserve(size_);
    for (std::uint32_t s = head_[0]; s != kNil; s = links_[nodes_[s].link])
        out.push_back({Key::from_code(nodes_[s].code), nodes_[s].tag});
    return out;
}

ElementHandle Catalog::handle_at(std::uint32_t slot) const {
    if (!slot_live(slot)) throw UseAfterDelete("catalog slot " + std::to_string(slot) + " is not live");
    return {id_, slot, nodes_[slot].generation};
}

}  // namespace dfc
