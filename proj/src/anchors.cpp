#include "nnrepr/anchors.hpp"

#include <algorithm>
#include <numeric>

#include "nnrepr/error.hpp"

namespace nnrepr {

const char* to_string(Label label) noexcept { return label == Label::pos ? "POS" : "NEG"; }

Label parse_label(const std::string& text) {
    if (text == "POS") return Label::pos;
    if (text == "NEG") return Label::neg;
    throw Error(ErrorKind::format, "unknown label '" + text + "' (expected POS or NEG)");
}

std::size_t AnchorSet::count(Label label) const { return static_cast<std::size_t>(std::count(labels.begin(), labels.end(), label)); }

void check_anchor_set(const AnchorSet& set) {
    if (set.anchors.empty()) throw Error(ErrorKind::structural, "anchor set is empty");
    if (set.arity == 0) throw Error(ErrorKind::structural, "anchor set has arity 0");
    if (set.labels.size() != set.anchors.size()) {
        throw Error(ErrorKind::structural, std::to_string(set.anchors.size()) + " anchors but " +
                                               std::to_string(set.labels.size()) + " labels");
    }
    for (std::size_t i = 0; i < set.anchors.size(); ++i) {
        if (set.anchors[i].size() != set.arity) {
            throw Error(ErrorKind::structural, "anchor " + std::to_string(i + 1) + " has " +
                                                   std::to_string(set.anchors[i].size()) + " coordinates, arity is " +
                                                   std::to_string(set.arity));
        }
    }
    std::vector<std::size_t> order(set.anchors.size());
    std::iota(order.begin(), order.end(), 0);
    auto by_point = [&](std::size_t a, std::size_t b) {
        return std::lexicographical_compare(set.anchors[a].begin(), set.anchors[a].end(), set.anchors[b].begin(),
                                            set.anchors[b].end());
    };
    std::sort(order.begin(), order.end(), by_point);
    for (std::size_t k = 1; k < order.size(); ++k) {
        auto a = order[k - 1];
        auto b = order[k];
        if (set.anchors[a] == set.anchors[b] && set.labels[a] != set.labels[b]) {
            throw Error(ErrorKind::structural, "anchors " + std::to_string(std::min(a, b) + 1) + " and " +
                                                   std::to_string(std::max(a, b) + 1) +
                                                   " share coordinates but carry opposite labels");
        }
    }
}

}  // namespace nnrepr
