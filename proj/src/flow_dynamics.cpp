#include "tmncell/flow_dynamics.hpp"

#include <ostream>
#include <string>

#include "tmncell/errors.hpp"
#include "tmncell/format.hpp"

namespace tmncell {

NetworkState step(const TMNetwork& net, const NetworkState& state) {
  if (state.stocks.size() != net.vertex_count() || state.flows.size() != net.arc_count()) {
    throw InvalidArgument("state does not belong to this network (vertex/arc count mismatch)");
  }

  std::vector<std::int64_t> stock_delta(net.vertex_count(), 0);
  std::vector<std::int64_t> flow_delta(net.arc_count(), 0);
  for (std::size_t k = 0; k < net.arc_count(); ++k) {
    const auto& a = net.arcs()[k];
    const std::int64_t m = a.schedule.amount.mg();
    const int out = kronecker_delta(state.n, a.schedule.departs);
    const int in = kronecker_delta(state.n, a.schedule.arrives);
    flow_delta[k] += m * (out - in);
    stock_delta[a.tail - 1] -= m * out;
    stock_delta[a.head - 1] += m * in;
  }

  NetworkState next;
  next.n = state.n.next();
  next.stocks.reserve(state.stocks.size());
  next.flows.reserve(state.flows.size());
  for (std::size_t v = 0; v < stock_delta.size(); ++v) {
    const std::int64_t value = state.stocks[v].mg() + stock_delta[v];
    if (value < 0) {
      throw NegativeMass(NegativeMass::Where::Vertex, net.vertices()[v].id, state.n.value, value);
    }
    next.stocks.emplace_back(value);
  }
  for (std::size_t k = 0; k < flow_delta.size(); ++k) {
    const std::int64_t value = state.flows[k].mg() + flow_delta[k];
    if (value < 0) throw NegativeMass(NegativeMass::Where::Arc, net.arcs()[k].id, state.n.value, value);
    next.flows.emplace_back(value);
  }
  return next;
}

Trajectory simulate(const TMNetwork& net, SampleIndex horizon) {
  if (horizon < net.last_arrival()) {
    throw InvalidArgument("horizon " + std::to_string(horizon.value) + " ends before the last scheduled arrival " +
                          std::to_string(net.last_arrival().value));
  }
  Trajectory traj{net, horizon, {}};
  traj.states.reserve(horizon.value + 1);
  traj.states.push_back(initial_state(net));
  while (traj.states.back().n < horizon) traj.states.push_back(step(net, traj.states.back()));
  return traj;
}

ConservationReport conservation_check(const Trajectory& traj) {
  if (!traj.network.closed()) throw InvalidArgument("conservation check requires a closed network");
  ConservationReport report;
  if (traj.states.empty()) return report;
  report.total = mass_flow_matrix(traj.network, traj.states.front()).total();
  report.constant_total = true;
  for (const auto& s : traj.states) {
    if (mass_flow_matrix(traj.network, s).total() != report.total) {
      report.constant_total = false;
      report.first_violation = s.n;
      break;
    }
  }
  return report;
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj) {
  const auto& net = traj.network;
  os << "n,t_s";
  for (const auto& v : net.vertices()) os << ",stock_" << v.id;
  for (const auto& a : net.arcs()) os << ",flow_" << a.tail << '_' << a.head;
  os << '\n';
  for (const auto& s : traj.states) {
    os << s.n.value << ',' << format_double(static_cast<double>(s.n.value) * net.sample_time());
    for (Mass m : s.stocks) os << ',' << m.mg();
    for (Mass m : s.flows) os << ',' << m.mg();
    os << '\n';
  }
}

} // namespace tmncell
