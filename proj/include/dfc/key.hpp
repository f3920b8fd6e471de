#ifndef DFC_KEY_HPP
#define DFC_KEY_HPP

#include <bit>
#include <compare>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace dfc {

/// Raised when a key cannot be placed in the total order (NaN).
class InvalidKey : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/**
 * Totally ordered 64-bit catalog key with -inf / +inf sentinels.
 *
 * Finite keys carry a signed 64-bit order code. Integers map to themselves;
 * doubles map through the usual sign-magnitude flip so that code order equals
 * numeric order (-0 is folded onto +0). Keys built from integers and keys built
 * from doubles live in the same code space but do not compare numerically
 * against each other, so a catalog graph should use one domain throughout.
 */
class Key {
public:
    enum class Kind : std::uint8_t { MinusInf = 0, Finite = 1, PlusInf = 2 };

    constexpr Key() = default;

    static constexpr Key minus_inf() { return Key(Kind::MinusInf, 0); }
    static constexpr Key plus_inf() { return Key(Kind::PlusInf, 0); }
    static constexpr Key from_int(std::int64_t v) { return Key(Kind::Finite, v); }
    static constexpr Key from_code(std::int64_t code) { return Key(Kind::Finite, code); }

    static Key from_double(double v) {
        if (v != v) throw InvalidKey("NaN cannot be used as a catalog key");
        if (v == 0.0) v = 0.0;
        auto bits = std::bit_cast<std::uint64_t>(v);
        bits = (bits >> 63) ? ~bits : (bits | (std::uint64_t{1} << 63));
        return Key(Kind::Finite, static_cast<std::int64_t>(bits ^ (std::uint64_t{1} << 63)));
    }

    constexpr Kind kind() const { return kind_; }
    constexpr bool is_finite() const { return kind_ == Kind::Finite; }
    constexpr std::int64_t code() const { return code_; }
    constexpr std::int64_t to_int() const { return code_; }

    double to_double() const {
        if (kind_ == Kind::MinusInf) return -std::numeric_limits<double>::infinity();
        if (kind_ == Kind::PlusInf) return std::numeric_limits<double>::infinity();
        auto bits = static_cast<std::uint64_t>(code_) ^ (std::uint64_t{1} << 63);
        bits = (bits >> 63) ? (bits & ~(std::uint64_t{1} << 63)) : ~bits;
        return std::bit_cast<double>(bits);
    }

    /// Largest key strictly below this one. Turns a closed predecessor search
    /// into a strict one.
    constexpr Key prev() const {
        if (kind_ == Kind::PlusInf) return from_code(std::numeric_limits<std::int64_t>::max());
        if (kind_ == Kind::MinusInf || code_ == std::numeric_limits<std::int64_t>::min())
            return minus_inf();
        return from_code(code_ - 1);
    }

    friend constexpr auto operator<=>(const Key&, const Key&) = default;
    friend constexpr bool operator==(const Key&, const Key&) = default;

    std::string to_string() const {
        switch (kind_) {
        case Kind::MinusInf: return "-inf";
        case Kind::PlusInf: return "+inf";
        default: return std::to_string(code_);
        }
    }

private:
    constexpr Key(Kind kind, std::int64_t code) : kind_(kind), code_(code) {}

    Kind kind_ = Kind::Finite;
    std::int64_t code_ = 0;
};

}  // namespace dfc

#endif
