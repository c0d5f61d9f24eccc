#include "gn/shape.hpp"

#include <algorithm>
#include <map>

namespace gn {

namespace {

// Compose every multiset of child shapes with total size n-1 into codes of
// size-n trees. Children are drawn from `pool` (all shapes of size < n) in
// nondecreasing pool order, so each multiset appears exactly once.
void compose(const std::vector<Shape>& pool, std::uint32_t remaining, std::size_t min_idx,
             std::vector<std::string>& chosen, std::vector<std::string>& out) {
    if (remaining == 0) {
        std::vector<std::string> sorted(chosen);
        std::sort(sorted.begin(), sorted.end());
        std::string code = "(";
        for (const auto& c : sorted) code += c;
        code += ")";
        out.push_back(std::move(code));
        return;
    }
    for (std::size_t i = min_idx; i < pool.size(); ++i) {
        if (pool[i].size > remaining) continue;
        chosen.push_back(pool[i].code);
        compose(pool, remaining - pool[i].size, i, chosen, out);
        chosen.pop_back();
    }
}

}  // namespace

std::vector<Shape> enumerate_shapes(std::uint32_t max_size) {
    std::vector<Shape> all;
    for (std::uint32_t n = 1; n <= max_size; ++n) {
        std::vector<std::string> codes;
        std::vector<std::string> chosen;
        compose(all, n - 1, 0, chosen, codes);
        std::sort(codes.begin(), codes.end());
        codes.erase(std::unique(codes.begin(), codes.end()), codes.end());
        for (auto& c : codes) all.push_back(Shape{std::move(c), n});
    }
    std::sort(all.begin(), all.end());
    return all;
}

}  // namespace gn
