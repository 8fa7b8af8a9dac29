#include "pushpull/instance.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "pushpull/common.hpp"

namespace pushpull {

Instance::Instance(std::string id, std::vector<NodeData> nodes, double capacity, int fleet_limit)
    : id_(std::move(id)), nodes_(std::move(nodes)), capacity_(capacity), fleet_limit_(fleet_limit) {
    if (nodes_.empty()) throw std::invalid_argument("instance has no depot");
    if (capacity_ < 0) throw std::invalid_argument("negative vehicle capacity");
    if (fleet_limit_ < 1) throw std::invalid_argument("fleet limit must be at least 1");
    const auto& depot = nodes_.front();
    if (depot.load != 0 || depot.service != 0)
        throw std::invalid_argument("depot must have zero load and zero service time");
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        const auto& n = nodes_[i];
        const auto where = " (node " + std::to_string(i) + ")";
        if (n.ready < 0 || n.ready > n.due) throw std::invalid_argument("time window must satisfy 0 <= ready <= due" + where);
        if (n.load < 0) throw std::invalid_argument("negative load" + where);
        if (n.service < 0) throw std::invalid_argument("negative service time" + where);
        if (n.load > capacity_) throw std::invalid_argument("load exceeds vehicle capacity" + where);
    }

    const std::size_t count = nodes_.size();
    matrix_.resize(count * count);
    for (std::size_t i = 0; i < count; ++i) {
        for (std::size_t j = 0; j < count; ++j) {
            const double dx = nodes_[i].position.x - nodes_[j].position.x;
            const double dy = nodes_[i].position.y - nodes_[j].position.y;
            const double d = i == j ? 0.0 : std::sqrt(dx * dx + dy * dy);
            matrix_[i * count + j] = d;
            diameter_ = std::max(diameter_, d);
        }
    }

    for (std::size_t i = 1; i < count; ++i) total_service_ += nodes_[i].service;

    neighbor_count_ = std::min(kDefaultNeighbors, count > 2 ? count - 2 : 0);
    neighbors_.resize(count * neighbor_count_);
    std::vector<int> order;
    for (std::size_t i = 0; i < count; ++i) {
        order.clear();
        for (std::size_t j = 1; j < count; ++j)
            if (j != i) order.push_back(static_cast<int>(j));
        std::stable_sort(order.begin(), order.end(),
                         [&](int a, int b) { return matrix_[i * count + a] < matrix_[i * count + b]; });
        std::copy_n(order.begin(), std::min(neighbor_count_, order.size()), neighbors_.begin() + i * neighbor_count_);
    }
}

double Instance::distance(int i, int j) const {
    PUSHPULL_EXPECTS(i >= 0 && j >= 0 && i < node_count() && j < node_count(), "node id out of range");
    return dist(i, j);
}

}  // namespace pushpull
