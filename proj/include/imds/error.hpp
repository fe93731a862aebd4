#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace imds {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Thrown by apply_action when the action does not match the configuration.
class ActionNotEnabled : public Error {
public:
    explicit ActionNotEnabled(std::size_t action)
        : Error("action #" + std::to_string(action) + " is not enabled"), action_(action) {}
    std::size_t action() const noexcept { return action_; }

private:
    std::size_t action_;
};

/// State-space exploration hit the node or edge budget.
class LimitExceeded : public Error {
public:
    LimitExceeded(std::string what, std::size_t nodes, std::size_t edges)
        : Error(what + " (nodes=" + std::to_string(nodes) + ", edges=" + std::to_string(edges) + ")"),
          nodes_(nodes), edges_(edges) {}
    std::size_t nodes() const noexcept { return nodes_; }
    std::size_t edges() const noexcept { return edges_; }

private:
    std::size_t nodes_;
    std::size_t edges_;
};

} // namespace imds
