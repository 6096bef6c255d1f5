#pragma once

#include "bassnet/types.hpp"

#include <optional>
#include <span>
#include <vector>

namespace bassnet {

enum class StructureKind { Complete, OneSidedCircle, TwoSidedCircle, CartesianTorus, Custom };

struct StructureTag {
  StructureKind kind = StructureKind::Custom;
  int torus_dim = 0;   // CartesianTorus only
  int torus_side = 0;  // CartesianTorus only

  friend bool operator==(const StructureTag&, const StructureTag&) = default;
};

// Directed influence: an adopted `from` pushes nonadopter `to` at `rate`.
struct Edge {
  Index from = 0;
  Index to = 0;
  double rate = 0.0;
};

struct Neighbor {
  Index node = 0;
  double rate = 0.0;
};

// Reject: every node needs p_j > 0 or in-influence q_j > 0.
// Allow: nodes that can never adopt are accepted.
enum class ZeroHazardPolicy { Reject, Allow };

struct MildHetSpec {
  Vector p;
  Vector q_node;
};

// Immutable weighted digraph with external rates p_j and edge rates q[i][j].
// Zero-rate edges are dropped on construction.
class Network {
 public:
  Network(Vector p, std::vector<Edge> edges, StructureTag tag,
          ZeroHazardPolicy policy = ZeroHazardPolicy::Reject);

  [[nodiscard]] Index size() const noexcept { return p_.size(); }
  [[nodiscard]] const Vector& p() const noexcept { return p_; }
  [[nodiscard]] double p(Index j) const { return p_[j]; }
  [[nodiscard]] const StructureTag& structure() const noexcept { return tag_; }
  [[nodiscard]] ZeroHazardPolicy policy() const noexcept { return policy_; }

  // Incoming edges of j, sorted by source.
  [[nodiscard]] std::span<const Neighbor> in_edges(Index j) const;
  // Outgoing edges of k, sorted by destination.
  [[nodiscard]] std::span<const Neighbor> out_edges(Index k) const;

  [[nodiscard]] double in_influence(Index j) const { return q_in_[j]; }
  [[nodiscard]] double out_influence(Index k) const { return q_out_[k]; }
  [[nodiscard]] const Vector& in_influences() const noexcept { return q_in_; }
  [[nodiscard]] const Vector& out_influences() const noexcept { return q_out_; }

  // q[i][j]; zero when there is no edge.
  [[nodiscard]] double rate(Index i, Index j) const;
  [[nodiscard]] Matrix dense_q() const;
  [[nodiscard]] std::vector<Edge> edges() const;
  [[nodiscard]] std::size_t edge_count() const noexcept { return in_nbrs_.size(); }

  // Per-column weight w_j when j receives weight w_j from every other node
  // (complete pattern, uniform incoming weights); used by the simulator fast path.
  [[nodiscard]] const std::optional<Vector>& uniform_column_weights() const noexcept {
    return column_weights_;
  }

 private:
  Vector p_;
  StructureTag tag_;
  ZeroHazardPolicy policy_;
  std::vector<Index> in_offsets_, out_offsets_;
  std::vector<Neighbor> in_nbrs_, out_nbrs_;
  Vector q_in_, q_out_;
  std::optional<Vector> column_weights_;
};

[[nodiscard]] Network build_complete(const MildHetSpec& spec);
[[nodiscard]] Network build_custom(Vector p, std::span<const Edge> edges,
                                   ZeroHazardPolicy policy = ZeroHazardPolicy::Reject);
[[nodiscard]] Network build_one_sided_circle(Vector p, const Vector& q_in,
                                             ZeroHazardPolicy policy = ZeroHazardPolicy::Reject);
[[nodiscard]] Network build_two_sided_circle(Vector p, const Vector& q_left, const Vector& q_right,
                                             ZeroHazardPolicy policy = ZeroHazardPolicy::Reject);
[[nodiscard]] Network build_cartesian_torus(int d, int side, double p, double q);

// Complete homogeneous network with the mean p and mean in-influence of `net`.
[[nodiscard]] Network homogeneous_counterpart(const Network& net);
[[nodiscard]] Network shift_p(const Network& net, double delta_p);
// Appends node m, influenced by every node at q_in_new and influencing every node at q_out_new.
[[nodiscard]] Network add_node(const Network& net, double p_new, double q_in_new, double q_out_new);

[[nodiscard]] bool is_homogeneous_complete(const Network& net, double rel_tol = 0.0);

}  // namespace bassnet
