#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace pushpull {

struct Point {
    double x = 0;
    double y = 0;
};

/// Per-node data of a VRPTW problem. Node 0 is the depot.
struct NodeData {
    Point position;
    double load = 0;     // capacity units
    double service = 0;  // time units
    double ready = 0;    // window open
    double due = 0;      // window close
};

/// Immutable VRPTW problem.
///
/// Customers are numbered 1..customers(); node 0 is the depot. Distances are
/// Euclidean in double precision and double as travel times.
class Instance {
  public:
    /// Builds and checks an instance. Throws std::invalid_argument when a
    /// node breaks the model (negative load, ready > due, load > capacity,
    /// depot with load or service).
    Instance(std::string id, std::vector<NodeData> nodes, double capacity, int fleet_limit);

    const std::string& id() const noexcept { return id_; }
    int customers() const noexcept { return static_cast<int>(nodes_.size()) - 1; }
    int node_count() const noexcept { return static_cast<int>(nodes_.size()); }

    /// Checked distance; throws ContractViolation on an out-of-range id.
    double distance(int i, int j) const;
    /// Unchecked distance for inner loops.
    double dist(int i, int j) const noexcept { return matrix_[static_cast<std::size_t>(i) * nodes_.size() + j]; }

    const NodeData& node(int i) const noexcept { return nodes_[static_cast<std::size_t>(i)]; }
    double load(int i) const noexcept { return nodes_[i].load; }
    double service(int i) const noexcept { return nodes_[i].service; }
    double ready(int i) const noexcept { return nodes_[i].ready; }
    double due(int i) const noexcept { return nodes_[i].due; }
    double capacity() const noexcept { return capacity_; }
    int fleet_limit() const noexcept { return fleet_limit_; }

    /// Known-good route count used by the trucks objective.
    std::optional<int> target_routes() const noexcept { return target_routes_; }
    void set_target_routes(std::optional<int> routes) { target_routes_ = routes; }

    /// Nearest customers of node i by distance, closest first (ties by id).
    std::span<const int> neighbors(int i) const noexcept {
        const auto begin = static_cast<std::size_t>(i) * neighbor_count_;
        return {neighbors_.data() + begin, neighbor_count_};
    }
    std::size_t neighbor_count() const noexcept { return neighbor_count_; }

    /// Largest node-to-node distance.
    double diameter() const noexcept { return diameter_; }
    /// Sum of customer service durations.
    double total_service() const noexcept { return total_service_; }

    static constexpr std::size_t kDefaultNeighbors = 10;

  private:
    std::string id_;
    std::vector<NodeData> nodes_;
    double capacity_;
    int fleet_limit_;
    std::optional<int> target_routes_;
    std::vector<double> matrix_;
    std::vector<int> neighbors_;
    std::size_t neighbor_count_ = 0;
    double diameter_ = 0;
    double total_service_ = 0;
};

}  // namespace pushpull
