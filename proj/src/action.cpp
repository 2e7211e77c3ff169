#include "fairlab/action.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>

namespace fairlab
{

ActionLabel ActionLabel::name(std::string base, std::optional<std::uint64_t> index)
{
    ActionLabel a;
    a.kind = Kind::name;
    a.base = std::move(base);
    a.index = index;
    return a;
}

ActionLabel ActionLabel::complement() const
{
    ActionLabel a = *this;
    if (kind == Kind::name)
        a.kind = Kind::coname;
    else if (kind == Kind::coname)
        a.kind = Kind::name;
    return a;
}

ActionLabel ActionLabel::channel() const
{
    ActionLabel a = *this;
    if (a.kind == Kind::coname)
        a.kind = Kind::name;
    return a;
}

bool ActionLabel::same_channel(const ActionLabel& other) const
{
    return !is_tau() && !other.is_tau() && base == other.base && index == other.index;
}

std::string ActionLabel::str() const
{
    if (kind == Kind::tau)
        return "tau";
    std::string s = kind == Kind::coname ? "'" + base : base;
    if (index)
        s += "#" + std::to_string(*index);
    return s;
}

std::string ActionLabel::name_key() const
{
    if (kind == Kind::tau)
        return "tau";
    std::string s = base;
    if (kind == Kind::coname)
        s += "~";
    if (index)
        s += "#" + std::to_string(*index);
    return s;
}

ActionLabel ActionLabel::parse(std::string_view text)
{
    if (text == "tau")
        return tau();
    ActionLabel a;
    a.kind = Kind::name;
    std::size_t i = 0;
    if (!text.empty() && text[0] == '\'') {
        a.kind = Kind::coname;
        i = 1;
    }
    std::size_t start = i;
    while (i < text.size() && (std::isalnum(static_cast<unsigned char>(text[i])) || text[i] == '_'))
        ++i;
    if (i == start || !std::islower(static_cast<unsigned char>(text[start])))
        throw std::invalid_argument("bad action label '" + std::string(text) + "'");
    a.base = std::string(text.substr(start, i - start));
    if (a.base == "tau")
        throw std::invalid_argument("tau has no complement or index");
    if (i < text.size()) {
        if (text[i] != '#' || i + 1 == text.size())
            throw std::invalid_argument("bad action label '" + std::string(text) + "'");
        std::uint64_t n = 0;
        for (std::size_t j = i + 1; j < text.size(); ++j) {
            if (!std::isdigit(static_cast<unsigned char>(text[j])))
                throw std::invalid_argument("bad action label '" + std::string(text) + "'");
            n = n * 10 + static_cast<std::uint64_t>(text[j] - '0');
        }
        a.index = n;
    }
    return a;
}

ActionLabel RelabelFn::apply(const ActionLabel& a) const
{
    if (a.is_tau())
        return a;
    ActionLabel pos = a.channel();
    for (const auto& e : entries) {
        if (e.from == pos)
            return a.kind == ActionLabel::Kind::coname ? e.to.complement() : e.to;
    }
    if (pos.index) {
        for (const auto& f : families) {
            if (f.from_base == pos.base) {
                ActionLabel r = ActionLabel::name(f.to_base, *pos.index + f.offset);
                return a.kind == ActionLabel::Kind::coname ? r.complement() : r;
            }
        }
    }
    return a;
}

void RelabelFn::add_entry(const ActionLabel& from, const ActionLabel& to)
{
    if (from.is_tau() || to.is_tau())
        throw std::invalid_argument("relabelling cannot mention tau");
    Entry e;
    e.from = from.channel();
    e.to = from.kind == ActionLabel::Kind::coname ? to.complement() : to;
    for (const auto& old : entries) {
        if (old.from == e.from) {
            if (old.to == e.to)
                return;
            throw std::invalid_argument("relabelling map not complement-consistent: " + e.from.str() +
                                        " sent to both " + old.to.str() + " and " + e.to.str());
        }
    }
    entries.push_back(std::move(e));
}

void RelabelFn::add_family(const std::string& from_base, const std::string& to_base, std::uint64_t offset)
{
    for (const auto& f : families) {
        if (f.from_base == from_base) {
            if (f.to_base == to_base && f.offset == offset)
                return;
            throw std::invalid_argument("relabelling family for " + from_base + "#i given twice");
        }
    }
    families.push_back({from_base, to_base, offset});
}

std::string RelabelFn::str() const
{
    std::vector<std::string> parts;
    for (const auto& e : entries)
        parts.push_back(e.from.str() + "->" + e.to.str());
    for (const auto& f : families) {
        std::string to = f.to_base + "#";
        to += f.offset == 0 ? "i" : "(i+" + std::to_string(f.offset) + ")";
        parts.push_back(f.from_base + "#i->" + to);
    }
    std::sort(parts.begin(), parts.end());
    std::string s = "[";
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i)
            s += ",";
        s += parts[i];
    }
    return s + "]";
}

} // namespace fairlab
