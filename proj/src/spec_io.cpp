#include "tmncell/spec_io.hpp"

#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>

#include "tmncell/errors.hpp"

namespace tmncell {

using nlohmann::json;

namespace {

class Fields {
public:
  Fields(const json& obj, std::string path) : obj_(obj), path_(std::move(path)) {
    if (!obj_.is_object()) throw SpecError(path_ + ": expected an object");
  }

  void only(std::initializer_list<std::string_view> allowed) const {
    for (const auto& [key, value] : obj_.items()) {
      bool ok = false;
      for (auto a : allowed) ok = ok || key == a;
      if (!ok) throw SpecError(path_ + ": unknown field '" + key + "'");
    }
  }

  bool has(const std::string& key) const { return obj_.contains(key); }

  const json& at(const std::string& key) const {
    if (!obj_.contains(key)) throw SpecError(path_ + ": missing required field '" + key + "'");
    return obj_.at(key);
  }

  std::string where(const std::string& key) const { return path_ + "." + key; }

  std::int64_t integer(const std::string& key) const {
    const json& v = at(key);
    if (!v.is_number_integer()) throw SpecError(where(key) + ": expected an integer");
    return v.get<std::int64_t>();
  }

  std::int64_t non_negative(const std::string& key) const {
    const auto v = integer(key);
    if (v < 0) throw SpecError(where(key) + ": must be non-negative");
    return v;
  }

  double number(const std::string& key) const {
    const json& v = at(key);
    if (!v.is_number()) throw SpecError(where(key) + ": expected a number");
    return v.get<double>();
  }

  std::string text(const std::string& key) const {
    const json& v = at(key);
    if (!v.is_string()) throw SpecError(where(key) + ": expected a string");
    return v.get<std::string>();
  }

  MaterialSet materials(const std::string& key) const {
    const json& v = at(key);
    if (!v.is_array()) throw SpecError(where(key) + ": expected an array of strings");
    MaterialSet out;
    for (const auto& m : v) {
      if (!m.is_string()) throw SpecError(where(key) + ": expected an array of strings");
      out.insert(m.get<std::string>());
    }
    return out;
  }

  template <std::size_t N>
  std::array<double, N> numbers(const std::string& key) const {
    const json& v = at(key);
    if (!v.is_array() || v.size() != N) {
      throw SpecError(where(key) + ": expected an array of " + std::to_string(N) + " numbers");
    }
    std::array<double, N> out{};
    for (std::size_t i = 0; i < N; ++i) {
      if (!v[i].is_number()) throw SpecError(where(key) + ": expected an array of " + std::to_string(N) + " numbers");
      out[i] = v[i].get<double>();
    }
    return out;
  }

private:
  const json& obj_;
  std::string path_;
};

const json& array_field(const Fields& f, const std::string& key) {
  const json& v = f.at(key);
  if (!v.is_array()) throw SpecError(f.where(key) + ": expected an array");
  return v;
}

json parse_text(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw SpecError(std::string("invalid JSON: ") + e.what());
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SpecError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

} // namespace

NetworkSpec parse_network_spec(const json& doc) {
  Fields top(doc, "$");
  top.only({"sample_time_s", "closed", "vertices", "arcs"});

  NetworkSpec spec;
  spec.sample_time_s = top.number("sample_time_s");
  if (top.has("closed")) {
    if (!doc.at("closed").is_boolean()) throw SpecError("$.closed: expected a boolean");
    spec.closed = doc.at("closed").get<bool>();
  }

  const json& vertices = array_field(top, "vertices");
  for (std::size_t k = 0; k < vertices.size(); ++k) {
    Fields v(vertices[k], "$.vertices[" + std::to_string(k) + "]");
    v.only({"id", "label", "materials", "initial_stock_mg"});
    spec.vertices.push_back({static_cast<int>(v.integer("id")), v.text("label"), v.materials("materials"),
                             Mass{v.non_negative("initial_stock_mg")}});
  }

  const json& arcs = array_field(top, "arcs");
  for (std::size_t k = 0; k < arcs.size(); ++k) {
    Fields a(arcs[k], "$.arcs[" + std::to_string(k) + "]");
    a.only({"id", "tail", "head", "amount_mg", "departs", "arrives", "materials"});
    ArcCompartment arc;
    arc.id = static_cast<int>(a.integer("id"));
    arc.tail = static_cast<int>(a.integer("tail"));
    arc.head = static_cast<int>(a.integer("head"));
    arc.schedule.amount = Mass{a.non_negative("amount_mg")};
    arc.schedule.departs = SampleIndex{static_cast<std::uint64_t>(a.non_negative("departs"))};
    arc.schedule.arrives = SampleIndex{static_cast<std::uint64_t>(a.non_negative("arrives"))};
    arc.materials = a.materials("materials");
    spec.arcs.push_back(std::move(arc));
  }
  return spec;
}

NetworkSpec parse_network_spec(std::string_view text) { return parse_network_spec(parse_text(text)); }

NetworkSpec load_network_spec(const std::filesystem::path& path) {
  try {
    return parse_network_spec(std::string_view(read_file(path)));
  } catch (const SpecError& e) {
    throw SpecError(path.string() + ": " + e.what());
  }
}

nlohmann::ordered_json network_spec_to_json(const NetworkSpec& spec) {
  nlohmann::ordered_json doc;
  doc["sample_time_s"] = spec.sample_time_s;
  doc["closed"] = spec.closed;
  doc["vertices"] = nlohmann::ordered_json::array();
  for (const auto& v : spec.vertices) {
    doc["vertices"].push_back({{"id", v.id},
                               {"label", v.label},
                               {"materials", v.materials},
                               {"initial_stock_mg", v.initial_stock.mg()}});
  }
  doc["arcs"] = nlohmann::ordered_json::array();
  for (const auto& a : spec.arcs) {
    doc["arcs"].push_back({{"id", a.id},
                           {"tail", a.tail},
                           {"head", a.head},
                           {"amount_mg", a.schedule.amount.mg()},
                           {"departs", a.schedule.departs.value},
                           {"arrives", a.schedule.arrives.value},
                           {"materials", a.materials}});
  }
  return doc;
}

robot::RobotModel parse_robot_model(const json& doc) {
  Fields top(doc, "$");
  top.only({"gravity", "links"});
  const auto g = top.numbers<3>("gravity");

  std::vector<robot::Link> links;
  const json& arr = array_field(top, "links");
  for (std::size_t k = 0; k < arr.size(); ++k) {
    const std::string path = "$.links[" + std::to_string(k) + "]";
    Fields l(arr[k], path);
    l.only({"dh", "inertia", "rotor"});

    robot::Link link;
    Fields dh(l.at("dh"), path + ".dh");
    dh.only({"a", "alpha", "d", "theta_offset", "kind"});
    link.dh.a = dh.number("a");
    link.dh.alpha = dh.number("alpha");
    link.dh.d = dh.number("d");
    link.dh.theta_offset = dh.number("theta_offset");
    const std::string kind = dh.text("kind");
    if (kind == "revolute") {
      link.dh.kind = robot::JointKind::Revolute;
    } else if (kind == "prismatic") {
      link.dh.kind = robot::JointKind::Prismatic;
    } else {
      throw SpecError(dh.where("kind") + ": expected \"revolute\" or \"prismatic\"");
    }

    Fields in(l.at("inertia"), path + ".inertia");
    in.only({"mass", "com", "tensor"});
    link.inertia.mass = in.number("mass");
    const auto com = in.numbers<3>("com");
    link.inertia.com = robot::Vector3(com[0], com[1], com[2]);
    const auto t = in.numbers<9>("tensor");
    link.inertia.tensor << t[0], t[1], t[2], t[3], t[4], t[5], t[6], t[7], t[8];

    if (l.has("rotor")) {
      Fields r(l.at("rotor"), path + ".rotor");
      r.only({"inertia", "gear_ratio"});
      link.inertia.rotor = robot::Rotor{r.number("inertia"), r.number("gear_ratio")};
    }
    links.push_back(std::move(link));
  }
  return robot::RobotModel(std::move(links), robot::Vector3(g[0], g[1], g[2]));
}

robot::RobotModel parse_robot_model(std::string_view text) { return parse_robot_model(parse_text(text)); }

robot::RobotModel load_robot_model(const std::filesystem::path& path) {
  try {
    return parse_robot_model(std::string_view(read_file(path)));
  } catch (const SpecError& e) {
    throw SpecError(path.string() + ": " + e.what());
  }
}

} // namespace tmncell
