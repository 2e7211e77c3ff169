#pragma once

#include <cstdint>
#include <compare>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace fairlab
{

// An action: a name a, its co-name 'a, or the internal action tau.
// Names may carry a natural index (b#3) so that relabelling families
// such as b#i -> b#(i+1) can be written finitely.
struct ActionLabel
{
    enum class Kind
    {
        name,
        coname,
        tau
    };

    Kind kind = Kind::tau;
    std::string base;
    std::optional<std::uint64_t> index;

    static ActionLabel tau() { return {}; }
    static ActionLabel name(std::string base, std::optional<std::uint64_t> index = std::nullopt);

    [[nodiscard]] bool is_tau() const { return kind == Kind::tau; }
    [[nodiscard]] ActionLabel complement() const;
    // The underlying channel (kind forced to name); used by restriction.
    [[nodiscard]] ActionLabel channel() const;
    [[nodiscard]] bool same_channel(const ActionLabel& other) const;

    // a, 'a, tau, b#3, 'b#3
    [[nodiscard]] std::string str() const;
    // Key used for generated instruction names: a, a~, tau, b#3, b~#3
    [[nodiscard]] std::string name_key() const;

    static ActionLabel parse(std::string_view text);

    auto operator<=>(const ActionLabel&) const = default;
};

// A relabelling function with implicit complement closure and identity
// elsewhere. Concrete entries are stored with a positive source name;
// family entries map base#i to target#(i + offset).
struct RelabelFn
{
    struct Entry
    {
        ActionLabel from; // always Kind::name
        ActionLabel to;   // name or co-name, never tau
    };
    struct Family
    {
        std::string from_base;
        std::string to_base;
        std::uint64_t offset = 0;
    };

    std::vector<Entry> entries;
    std::vector<Family> families;

    [[nodiscard]] ActionLabel apply(const ActionLabel& a) const;
    [[nodiscard]] std::string str() const;

    // Adds an entry given in source form (source may be a co-name).
    // Throws std::invalid_argument when the map stops being a function.
    void add_entry(const ActionLabel& from, const ActionLabel& to);
    void add_family(const std::string& from_base, const std::string& to_base, std::uint64_t offset);
};

} // namespace fairlab
