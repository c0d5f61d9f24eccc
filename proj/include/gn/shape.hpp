#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace gn {

// Canonical code of a rooted tree up to isomorphism: "(" + sorted child
// codes + ")". Equal code iff rooted-isomorphic (AHU).
struct Shape {
    std::string code;
    std::uint32_t size = 0;  // vertex count, == code.size()/2

    bool operator==(const Shape& o) const { return code == o.code; }
    bool operator<(const Shape& o) const {
        return size != o.size ? size < o.size : code < o.code;
    }
};

inline const Shape& singleton_shape() {
    static const Shape s{"()", 1};
    return s;
}

// All rooted trees with at most max_size vertices, one Shape per
// isomorphism class, sorted by (size, code). Sizes 1..7 give
// 1, 1, 2, 4, 9, 20, 48 classes.
std::vector<Shape> enumerate_shapes(std::uint32_t max_size);

}  // namespace gn
