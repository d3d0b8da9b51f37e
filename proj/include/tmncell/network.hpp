#pragma once

#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "tmncell/mass.hpp"

namespace tmncell {

using MaterialSet = std::set<std::string>;

/// Rectangular transfer pulse: `amount` leaves the tail at `departs` and is
/// absorbed by the head at `arrives`.
struct TransferSchedule {
  Mass amount;
  SampleIndex departs;
  SampleIndex arrives;
};

/// Stock compartment, a diagonal entry of the mass-flow matrix.
struct VertexCompartment {
  int id = 0;
  std::string label;
  MaterialSet materials;
  Mass initial_stock;
};

/// Transport compartment, an off-diagonal entry of the mass-flow matrix.
struct ArcCompartment {
  int id = 0;
  int tail = 0;
  int head = 0;
  TransferSchedule schedule;
  MaterialSet materials;
};

/// Declarative input to build_network(); nothing is validated until then.
struct NetworkSpec {
  double sample_time_s = 1.0;
  bool closed = true;
  std::vector<VertexCompartment> vertices;
  std::vector<ArcCompartment> arcs;
};

/// Validated, immutable thermodynamical material network.
///
/// Vertex ids are the contiguous range 1..n_v and arc ids the contiguous
/// range n_v+1..n_c; both lists are kept sorted by id, so a compartment's
/// position is its id minus an offset.
class TMNetwork {
public:
  const std::vector<VertexCompartment>& vertices() const noexcept { return vertices_; }
  const std::vector<ArcCompartment>& arcs() const noexcept { return arcs_; }
  double sample_time() const noexcept { return sample_time_; }
  bool closed() const noexcept { return closed_; }

  std::size_t vertex_count() const noexcept { return vertices_.size(); }
  std::size_t arc_count() const noexcept { return arcs_.size(); }
  std::size_t compartment_count() const noexcept { return vertices_.size() + arcs_.size(); }

  bool has_vertex(int id) const noexcept;
  const VertexCompartment& vertex(int id) const;
  const ArcCompartment& arc(int id) const;
  std::size_t vertex_index(int id) const;
  std::size_t arc_index(int id) const;

  /// Arc connecting tail -> head, if any.
  std::optional<int> arc_between(int tail, int head) const;
  /// Arc ids leaving / entering a vertex, ascending.
  const std::vector<int>& out_arcs(int vertex_id) const;
  const std::vector<int>& in_arcs(int vertex_id) const;

  /// Latest absorption index over all arcs (0 for an arc-free network).
  SampleIndex last_arrival() const noexcept;

  friend TMNetwork build_network(NetworkSpec spec);

private:
  TMNetwork() = default;

  double sample_time_ = 1.0;
  bool closed_ = true;
  std::vector<VertexCompartment> vertices_;
  std::vector<ArcCompartment> arcs_;
  std::vector<std::vector<int>> out_;
  std::vector<std::vector<int>> in_;
};

/// Validates `spec` and returns the network. Throws SpecError on duplicate
/// ids, non-contiguous ids, dangling or self-loop arcs, parallel arcs,
/// departs >= arrives, or a non-positive sample time.
TMNetwork build_network(NetworkSpec spec);

/// Stocks and in-flight masses at sample n, indexed by vertex / arc position.
struct NetworkState {
  SampleIndex n;
  std::vector<Mass> stocks;
  std::vector<Mass> flows;

  Mass total() const;
  bool operator==(const NetworkState&) const = default;
};

/// The all-stock configuration at n = 0.
NetworkState initial_state(const TMNetwork& net);

/// Square n_v x n_v matrix of masses, addressed by 1-based vertex ids.
class MassMatrix {
public:
  explicit MassMatrix(std::size_t size);

  std::size_t rows() const noexcept { return size_; }
  std::size_t cols() const noexcept { return size_; }
  Mass operator()(int row_id, int col_id) const;
  Mass& operator()(int row_id, int col_id);
  Mass total() const;

private:
  std::size_t size_;
  std::vector<Mass> entries_;
};

/// Discrete-time mass-flow matrix: stocks on the diagonal, the in-flight mass
/// of arc (i,j) at entry (i,j), zero elsewhere.
MassMatrix mass_flow_matrix(const TMNetwork& net, const NetworkState& state);

} // namespace tmncell
