#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace gn {

// A vertex label: a finite sequence of positive integers. The empty
// sequence is the root. Elements are child ranks in birth order, so the
// parent label is the sequence without its last element.
struct Label {
    std::vector<std::uint32_t> path;

    Label() = default;
    explicit Label(std::vector<std::uint32_t> p) : path(std::move(p)) {}

    bool is_root() const { return path.empty(); }
    std::size_t depth() const { return path.size(); }

    Label parent() const;
    Label child(std::uint32_t rank) const;

    // Dotted form, e.g. "1.4.2"; the root is the empty string.
    std::string to_string() const;
    static Label from_string(const std::string& s);

    bool operator==(const Label& o) const { return path == o.path; }
    // Lexicographic; a proper prefix precedes its extensions.
    bool operator<(const Label& o) const { return path < o.path; }
};

}  // namespace gn
