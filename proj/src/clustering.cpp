#include "clusterdiag/clustering.hpp"

#include <string>

#include "clusterdiag/error.hpp"

namespace clusterdiag {

std::vector<std::size_t> Partition::counts() const {
    std::vector<std::size_t> out(static_cast<std::size_t>(k > 0 ? k : 0), 0);
    for (int label : labels) {
        if (label >= 0 && label < k) {
            ++out[static_cast<std::size_t>(label)];
        }
    }
    return out;
}

void Partition::validate() const {
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] < 0 || labels[i] >= k) {
            throw InvalidArgument("partition: label " + std::to_string(labels[i]) + " at row " + std::to_string(i) +
                                  " is outside [0, " + std::to_string(k) + ")");
        }
    }
}

Method parse_method(std::string_view name) {
    if (name == "classical") return Method::classical;
    if (name == "spherical") return Method::spherical;
    throw InvalidArgument("unknown method '" + std::string(name) + "' (expected classical or spherical)");
}

std::string_view to_string(Method method) {
    return method == Method::classical ? "classical" : "spherical";
}

std::string_view to_string(Geometry geometry) {
    return geometry == Geometry::euclidean ? "euclidean" : "spherical";
}

}
