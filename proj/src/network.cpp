#include "tmncell/network.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "tmncell/errors.hpp"

namespace tmncell {

namespace {

std::string arc_name(const ArcCompartment& a) {
  return "arc " + std::to_string(a.id) + " (" + std::to_string(a.tail) + "->" + std::to_string(a.head) + ")";
}

} // namespace

TMNetwork build_network(NetworkSpec spec) {
  if (!(spec.sample_time_s > 0.0) || !std::isfinite(spec.sample_time_s)) {
    throw SpecError("sample time must be a positive finite number of seconds");
  }
  if (spec.vertices.empty()) throw SpecError("network has no vertices");

  auto by_id = [](const auto& a, const auto& b) { return a.id < b.id; };
  std::sort(spec.vertices.begin(), spec.vertices.end(), by_id);
  std::sort(spec.arcs.begin(), spec.arcs.end(), by_id);

  const int nv = static_cast<int>(spec.vertices.size());
  for (int k = 0; k < nv; ++k) {
    const int id = spec.vertices[k].id;
    if (k > 0 && id == spec.vertices[k - 1].id) throw SpecError("duplicate vertex id " + std::to_string(id));
    if (id != k + 1) {
      throw SpecError("vertex ids must be the contiguous range 1.." + std::to_string(nv) + "; found id " +
                      std::to_string(id));
    }
  }

  TMNetwork net;
  net.out_.resize(nv);
  net.in_.resize(nv);
  for (std::size_t k = 0; k < spec.arcs.size(); ++k) {
    const auto& a = spec.arcs[k];
    if (a.id >= 1 && a.id <= nv) {
      throw SpecError("arc id " + std::to_string(a.id) + " collides with a vertex id");
    }
    if (k > 0 && a.id == spec.arcs[k - 1].id) throw SpecError("duplicate arc id " + std::to_string(a.id));
    if (a.id != nv + 1 + static_cast<int>(k)) {
      throw SpecError("arc ids must be the contiguous range " + std::to_string(nv + 1) + ".." +
                      std::to_string(nv + static_cast<int>(spec.arcs.size())) + "; found id " +
                      std::to_string(a.id));
    }
    if (a.tail < 1 || a.tail > nv) throw SpecError(arc_name(a) + " references missing tail vertex");
    if (a.head < 1 || a.head > nv) throw SpecError(arc_name(a) + " references missing head vertex");
    if (a.tail == a.head) throw SpecError(arc_name(a) + " is a self-loop");
    if (!(a.schedule.departs < a.schedule.arrives)) {
      throw SpecError(arc_name(a) + ": departs must be strictly before arrives");
    }
    for (int prev : net.out_[a.tail - 1]) {
      if (spec.arcs[prev - nv - 1].head == a.head) {
        throw SpecError(arc_name(a) + " duplicates arc " + std::to_string(prev) + " on the same ordered pair");
      }
    }
    net.out_[a.tail - 1].push_back(a.id);
    net.in_[a.head - 1].push_back(a.id);
  }

  net.sample_time_ = spec.sample_time_s;
  net.closed_ = spec.closed;
  net.vertices_ = std::move(spec.vertices);
  net.arcs_ = std::move(spec.arcs);
  return net;
}

bool TMNetwork::has_vertex(int id) const noexcept {
  return id >= 1 && id <= static_cast<int>(vertices_.size());
}

std::size_t TMNetwork::vertex_index(int id) const {
  if (!has_vertex(id)) throw UnknownVertex(id);
  return static_cast<std::size_t>(id - 1);
}

std::size_t TMNetwork::arc_index(int id) const {
  const int first = static_cast<int>(vertices_.size()) + 1;
  if (id < first || id >= first + static_cast<int>(arcs_.size())) {
    throw InvalidArgument("unknown arc id " + std::to_string(id));
  }
  return static_cast<std::size_t>(id - first);
}

const VertexCompartment& TMNetwork::vertex(int id) const { return vertices_[vertex_index(id)]; }
const ArcCompartment& TMNetwork::arc(int id) const { return arcs_[arc_index(id)]; }

std::optional<int> TMNetwork::arc_between(int tail, int head) const {
  if (!has_vertex(tail)) return std::nullopt;
  for (int a : out_[tail - 1]) {
    if (arc(a).head == head) return a;
  }
  return std::nullopt;
}

const std::vector<int>& TMNetwork::out_arcs(int vertex_id) const { return out_[vertex_index(vertex_id)]; }
const std::vector<int>& TMNetwork::in_arcs(int vertex_id) const { return in_[vertex_index(vertex_id)]; }

SampleIndex TMNetwork::last_arrival() const noexcept {
  SampleIndex last{0};
  for (const auto& a : arcs_) last = std::max(last, a.schedule.arrives);
  return last;
}

Mass NetworkState::total() const {
  Mass sum;
  for (Mass m : stocks) sum += m;
  for (Mass m : flows) sum += m;
  return sum;
}

NetworkState initial_state(const TMNetwork& net) {
  NetworkState s;
  s.n = SampleIndex{0};
  s.stocks.reserve(net.vertex_count());
  for (const auto& v : net.vertices()) s.stocks.push_back(v.initial_stock);
  s.flows.assign(net.arc_count(), Mass{});
  return s;
}

MassMatrix::MassMatrix(std::size_t size) : size_(size), entries_(size * size) {}

Mass MassMatrix::operator()(int row_id, int col_id) const {
  if (row_id < 1 || col_id < 1 || row_id > static_cast<int>(size_) || col_id > static_cast<int>(size_)) {
    throw InvalidArgument("mass-flow matrix index out of range");
  }
  return entries_[(row_id - 1) * size_ + (col_id - 1)];
}

Mass& MassMatrix::operator()(int row_id, int col_id) {
  if (row_id < 1 || col_id < 1 || row_id > static_cast<int>(size_) || col_id > static_cast<int>(size_)) {
    throw InvalidArgument("mass-flow matrix index out of range");
  }
  return entries_[(row_id - 1) * size_ + (col_id - 1)];
}

Mass MassMatrix::total() const {
  Mass sum;
  for (Mass m : entries_) sum += m;
  return sum;
}

MassMatrix mass_flow_matrix(const TMNetwork& net, const NetworkState& state) {
  if (state.stocks.size() != net.vertex_count() || state.flows.size() != net.arc_count()) {
    throw InvalidArgument("state does not belong to this network (vertex/arc count mismatch)");
  }
  MassMatrix gamma(net.vertex_count());
  for (const auto& v : net.vertices()) gamma(v.id, v.id) = state.stocks[net.vertex_index(v.id)];
  for (std::size_t k = 0; k < net.arc_count(); ++k) {
    const auto& a = net.arcs()[k];
    gamma(a.tail, a.head) = state.flows[k];
  }
  return gamma;
}

} // namespace tmncell
