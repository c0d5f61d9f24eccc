#include "gn/tree_io.hpp"

#include <stdexcept>

#include <json.hpp>

namespace gn {

using nlohmann::json;

std::string tree_to_json(const LabelledTree& tree) {
    json labels = json::array();
    for (VertexId v = 0; v < tree.size(); ++v) labels.push_back(tree.label_of(v).to_string());
    json j;
    j["size"] = tree.size();
    j["labels"] = labels;
    return j.dump();
}

LabelledTree tree_from_json(const std::string& text) {
    const json j = json::parse(text);
    const auto labels = j.at("labels").get<std::vector<std::string>>();
    if (labels.empty() || !labels.front().empty())
        throw std::invalid_argument("tree json: first label must be the root");
    LabelledTree t;
    for (std::size_t i = 1; i < labels.size(); ++i) {
        const Label l = Label::from_string(labels[i]);
        const auto parent = t.find(l.parent());
        if (!parent) throw std::invalid_argument("tree json: labels not parent-closed");
        if (l.path.back() != t.degree(*parent) + 1)
            throw std::invalid_argument("tree json: labels not in birth order");
        t.add_child(*parent);
    }
    if (j.at("size").get<std::size_t>() != t.size())
        throw std::invalid_argument("tree json: size mismatch");
    return t;
}

}  // namespace gn
