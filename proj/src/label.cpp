#include "gn/label.hpp"

#include <stdexcept>

namespace gn {

Label Label::parent() const {
    if (path.empty()) throw std::logic_error("label: root has no parent");
    Label p(*this);
    p.path.pop_back();
    return p;
}

Label Label::child(std::uint32_t rank) const {
    if (rank == 0) throw std::invalid_argument("label: child ranks start at 1");
    Label c(*this);
    c.path.push_back(rank);
    return c;
}

std::string Label::to_string() const {
    std::string s;
    for (std::size_t i = 0; i < path.size(); ++i) {
        if (i) s += '.';
        s += std::to_string(path[i]);
    }
    return s;
}

Label Label::from_string(const std::string& s) {
    Label l;
    if (s.empty()) return l;
    std::size_t pos = 0;
    while (pos < s.size()) {
        std::size_t next = s.find('.', pos);
        if (next == std::string::npos) next = s.size();
        const std::string tok = s.substr(pos, next - pos);
        if (tok.empty()) throw std::invalid_argument("label: malformed '" + s + "'");
        const unsigned long v = std::stoul(tok);
        if (v == 0) throw std::invalid_argument("label: elements must be >= 1");
        l.path.push_back(static_cast<std::uint32_t>(v));
        pos = next + 1;
    }
    return l;
}

}  // namespace gn
