#include "bfc/scenario/config.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

namespace bfc {
namespace {

using nlohmann::json;

// Error raised while walking the config; carries the offending key so the
// file loader can attach a line number.
class FieldError : public ConfigError {
 public:
  FieldError(const std::string& path, const std::string& key, const std::string& msg)
      : ConfigError(path + ": " + msg), key_(key) {}
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

class Reader {
 public:
  Reader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j.is_object()) throw FieldError(path_, last_key(), "expected an object");
  }

  void allow(std::initializer_list<const char*> keys) const {
    std::set<std::string> allowed(keys.begin(), keys.end());
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      if (!allowed.count(it.key())) throw FieldError(path_, it.key(), "unknown field '" + it.key() + "'");
    }
  }

  bool has(const char* key) const { return j_.contains(key); }
  const json& raw(const char* key) const {
    if (!j_.contains(key)) throw FieldError(path_, last_key(), "missing field '" + std::string(key) + "'");
    return j_.at(key);
  }
  Reader sub(const char* key) const { return Reader(raw(key), path_ + "." + key); }
  std::string child_path(const char* key) const { return path_ + "." + key; }

  template <typename T>
  T get(const char* key) const {
    try {
      return raw(key).get<T>();
    } catch (const json::exception&) {
      throw FieldError(path_, key, "field '" + std::string(key) + "' has the wrong type");
    }
  }
  template <typename T>
  T get(const char* key, T fallback) const {
    return has(key) ? get<T>(key) : fallback;
  }
  template <typename T>
  std::optional<T> opt(const char* key) const {
    if (!has(key)) return std::nullopt;
    return get<T>(key);
  }
  double positive(const char* key, double fallback) const {
    const double v = get<double>(key, fallback);
    if (!(v > 0.0)) throw FieldError(path_, key, "field '" + std::string(key) + "' must be positive");
    return v;
  }
  [[noreturn]] void fail(const char* key, const std::string& msg) const { throw FieldError(path_, key, msg); }

 private:
  std::string last_key() const {
    const auto dot = path_.rfind('.');
    std::string k = dot == std::string::npos ? path_ : path_.substr(dot + 1);
    if (auto br = k.find('['); br != std::string::npos) k.erase(br);
    return k;
  }

  const json& j_;
  std::string path_;
};

std::string resolve(const std::string& base, const std::string& p) {
  namespace fs = std::filesystem;
  if (p.empty() || fs::path(p).is_absolute()) return p;
  return (fs::path(base) / p).lexically_normal().string();
}

DataplaneConfig parse_dataplane(const Reader& r) {
  r.allow({"kind", "queues_per_port", "reserve_control_queue", "buffer_bytes", "th_time_ns", "sticky_threshold_ns",
           "bitmap_period_ns", "incast_label", "flow_table_multiplier", "mtu", "control_bytes"});
  DataplaneConfig d;
  try {
    d.kind = dataplane_from_string(r.get<std::string>("kind", "bfc"));
  } catch (const ConfigError& e) {
    r.fail("kind", e.what());
  }
  d.queues_per_port = r.get<std::uint32_t>("queues_per_port", d.queues_per_port);
  d.reserve_control_queue = r.get<bool>("reserve_control_queue", d.reserve_control_queue);
  d.buffer_bytes = r.get<std::uint64_t>("buffer_bytes", d.buffer_bytes);
  d.th_time = r.opt<SimTime>("th_time_ns");
  d.sticky_threshold = r.opt<SimTime>("sticky_threshold_ns");
  d.bitmap_period = r.opt<SimTime>("bitmap_period_ns");
  d.incast_label = r.get<bool>("incast_label", d.incast_label);
  d.flow_table_multiplier = r.get<std::uint32_t>("flow_table_multiplier", d.flow_table_multiplier);
  d.mtu = r.get<std::uint32_t>("mtu", d.mtu);
  d.control_bytes = r.get<std::uint32_t>("control_bytes", d.control_bytes);
  if (d.queues_per_port == 0) r.fail("queues_per_port", "queues_per_port must be positive");
  if (d.mtu == 0) r.fail("mtu", "mtu must be positive");
  if (d.flow_table_multiplier == 0) r.fail("flow_table_multiplier", "flow_table_multiplier must be positive");
  try {
    data_queue_count(d);
  } catch (const ConfigError& e) {
    r.fail("queues_per_port", e.what());
  }
  return d;
}

IncastSpec parse_incast(const Reader& r) {
  r.allow({"degree", "aggregate_bytes", "period_ns", "fraction", "labeled"});
  IncastSpec s;
  s.degree = r.get<std::uint32_t>("degree");
  s.aggregate = r.get<std::uint64_t>("aggregate_bytes");
  s.period = r.get<SimTime>("period_ns", 0);
  s.fraction = r.get<double>("fraction", 0.0);
  s.labeled = r.get<bool>("labeled", false);
  if (s.period == 0 && !(s.fraction > 0.0)) r.fail("fraction", "incast needs period_ns or a positive fraction");
  return s;
}

WorkloadConfig parse_workload(const Reader& r, const std::string& base) {
  r.allow({"start_ns", "duration_ns", "background", "incast", "flows"});
  WorkloadConfig w;
  w.start = r.get<SimTime>("start_ns", 0);
  w.duration = r.get<SimTime>("duration_ns", 0);
  if (r.has("background")) {
    const Reader b = r.sub("background");
    b.allow({"cdf", "load", "arrival", "sigma", "capacity_gbps"});
    BackgroundConfig bg;
    bg.cdf = resolve(base, b.get<std::string>("cdf"));
    bg.spec.load = b.get<double>("load");
    if (!(bg.spec.load > 0.0 && bg.spec.load < 1.0)) b.fail("load", "load must lie in (0, 1)");
    const std::string arrival = b.get<std::string>("arrival", "poisson");
    if (arrival == "poisson") {
      bg.spec.arrival.kind = ArrivalKind::poisson;
    } else if (arrival == "lognormal") {
      bg.spec.arrival.kind = ArrivalKind::lognormal;
    } else {
      b.fail("arrival", "arrival must be 'poisson' or 'lognormal'");
    }
    bg.spec.arrival.sigma = b.positive("sigma", 2.0);
    if (b.has("capacity_gbps")) bg.spec.capacity_bps = b.positive("capacity_gbps", 1.0) * 1e9;
    w.background = bg;
  }
  if (r.has("incast")) w.incast = parse_incast(r.sub("incast"));
  if (r.has("flows")) {
    const json& arr = r.raw("flows");
    if (!arr.is_array()) r.fail("flows", "'flows' must be an array");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const Reader f(arr[i], r.child_path("flows") + "[" + std::to_string(i) + "]");
      f.allow({"src", "dst", "size_bytes", "start_ns", "count", "jitter_ns", "group", "labeled"});
      FlowGroupConfig g;
      g.src = f.get<std::string>("src");
      g.dst = f.get<std::string>("dst");
      g.size = f.get<std::uint64_t>("size_bytes");
      g.start = f.get<SimTime>("start_ns", 0);
      g.count = f.get<std::uint32_t>("count", 1);
      g.jitter = f.get<SimTime>("jitter_ns", 0);
      g.group = f.get<std::uint32_t>("group", 0);
      g.labeled = f.get<bool>("labeled", false);
      if (g.size == 0) f.fail("size_bytes", "size_bytes must be positive");
      w.flows.push_back(g);
    }
  }
  if ((w.background || w.incast) && w.duration == 0) r.fail("duration_ns", "generated traffic needs duration_ns");
  return w;
}

}  // namespace

PacketType packet_type_from_string(const std::string& s) {
  for (PacketType t :
       {PacketType::data, PacketType::ack, PacketType::pause, PacketType::resume, PacketType::pause_bitmap}) {
    if (s == to_string(t)) return t;
  }
  throw ConfigError("unknown packet type '" + s + "'");
}

ScenarioConfig parse_scenario(const json& j, const std::string& base_dir) {
  const Reader r(j, "config");
  r.allow({"name", "seed", "topology", "dataplane", "nic", "workload", "run", "metrics", "elide", "faults"});
  ScenarioConfig c;
  c.name = r.get<std::string>("name", c.name);
  c.seed = r.get<std::uint64_t>("seed", c.seed);

  const json& topo = r.raw("topology");
  try {
    c.topology =
        topo.is_string() ? load_topology_file(resolve(base_dir, topo.get<std::string>())) : parse_topology(topo);
  } catch (const FieldError&) {
    throw;
  } catch (const std::exception& e) {
    throw FieldError("config.topology", "topology", e.what());
  }

  if (r.has("dataplane")) c.dataplane = parse_dataplane(r.sub("dataplane"));
  if (r.has("nic")) {
    const Reader n = r.sub("nic");
    n.allow({"e2e_cc", "rtt_target_multiplier", "rto_multiplier", "rto_ns", "bdp_inflight_cap"});
    c.nic.e2e_cc = n.get<bool>("e2e_cc", false);
    c.nic.rtt_target_multiplier = n.positive("rtt_target_multiplier", c.nic.rtt_target_multiplier);
    c.nic.rto_multiplier = n.positive("rto_multiplier", c.nic.rto_multiplier);
    c.nic.rto = n.opt<SimTime>("rto_ns");
    c.bdp_inflight_cap = n.opt<bool>("bdp_inflight_cap");
  }
  c.nic.mtu = c.dataplane.mtu;
  c.nic.ack_bytes = c.dataplane.control_bytes;

  if (r.has("workload")) c.workload = parse_workload(r.sub("workload"), base_dir);
  if (r.has("run")) {
    const Reader run = r.sub("run");
    run.allow({"max_time_ns", "drain", "warmup_ns", "audit"});
    c.run.max_time = run.get<SimTime>("max_time_ns", c.run.max_time);
    c.run.drain = run.get<bool>("drain", c.run.drain);
    c.run.warmup = run.get<SimTime>("warmup_ns", 0);
    c.run.audit = run.get<bool>("audit", false);
    if (c.run.warmup >= c.run.max_time) run.fail("warmup_ns", "warmup_ns must be below max_time_ns");
  }
  if (r.has("metrics")) {
    const Reader m = r.sub("metrics");
    m.allow({"sample_period_ns", "watch_ports", "flow_csv", "size_buckets"});
    c.metrics.sample_period = m.get<SimTime>("sample_period_ns", c.metrics.sample_period);
    c.metrics.flow_csv = m.get<bool>("flow_csv", false);
    c.metrics.size_buckets = m.get<std::vector<std::uint64_t>>("size_buckets", {});
    if (!std::is_sorted(c.metrics.size_buckets.begin(), c.metrics.size_buckets.end())) {
      m.fail("size_buckets", "size_buckets must be ascending");
    }
    if (m.has("watch_ports")) {
      const json& arr = m.raw("watch_ports");
      for (std::size_t i = 0; i < arr.size(); ++i) {
        const Reader w(arr[i], m.child_path("watch_ports") + "[" + std::to_string(i) + "]");
        w.allow({"from", "to"});
        c.metrics.watch_ports.push_back({w.get<std::string>("from"), w.get<std::string>("to")});
      }
    }
  }
  if (r.has("elide")) {
    const json& arr = r.raw("elide");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const Reader e(arr[i], "config.elide[" + std::to_string(i) + "]");
      e.allow({"switch", "ingress_port", "egress_port"});
      c.elide.push_back({e.get<std::string>("switch"), e.get<PortId>("ingress_port"), e.get<PortId>("egress_port")});
    }
  }
  if (r.has("faults")) {
    const json& arr = r.raw("faults");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const Reader f(arr[i], "config.faults[" + std::to_string(i) + "]");
      f.allow({"from", "to", "packet", "count", "after_ns"});
      NamedFault nf;
      nf.from = f.get<std::string>("from");
      nf.to = f.get<std::string>("to");
      try {
        nf.packet = packet_type_from_string(f.get<std::string>("packet"));
      } catch (const FieldError&) {
        throw;
      } catch (const ConfigError& e) {
        f.fail("packet", e.what());
      }
      nf.count = f.get<std::uint32_t>("count", 1);
      nf.after = f.get<SimTime>("after_ns", 0);
      c.faults.push_back(nf);
    }
  }

  // Names must resolve against the topology.
  const Topology& t = c.topology.topology;
  auto require = [&](const std::string& name, const std::string& where) {
    if (!t.find(name)) throw FieldError(where, name, "unknown node '" + name + "'");
  };
  for (const auto& f : c.workload.flows) {
    require(f.src, "config.workload.flows[]");
    require(f.dst, "config.workload.flows[]");
  }
  for (const auto& w : c.metrics.watch_ports) {
    require(w.from, "config.metrics.watch_ports[]");
    require(w.to, "config.metrics.watch_ports[]");
  }
  for (const auto& e : c.elide) require(e.node, "config.elide[]");
  for (const auto& f : c.faults) {
    require(f.from, "config.faults[]");
    require(f.to, "config.faults[]");
  }
  return c;
}

int line_of_key(const std::string& text, const std::string& key) {
  const std::string needle = "\"" + key + "\"";
  const auto pos = text.find(needle);
  if (pos == std::string::npos) return 0;
  return 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(pos), '\n'));
}

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

json parse_text(const std::string& text, const std::string& path) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    const auto upto = std::min<std::size_t>(e.byte, text.size());
    const int line =
        1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(upto), '\n'));
    throw ConfigError(path + ":" + std::to_string(line) + ": invalid JSON (" + e.what() + ")");
  }
}

}  // namespace

json load_json_file(const std::string& path) { return parse_text(read_file(path), path); }

ScenarioConfig load_scenario(const std::string& path) {
  const std::string text = read_file(path);
  const json j = parse_text(text, path);
  const std::string base = std::filesystem::path(path).parent_path().string();
  try {
    return parse_scenario(j, base.empty() ? "." : base);
  } catch (const FieldError& e) {
    const int line = line_of_key(text, e.key());
    throw ConfigError(path + ":" + (line > 0 ? std::to_string(line) + ":" : "") + " " + e.what());
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

void set_dotted(json& j, const std::string& path, const json& value) {
  json* cur = &j;
  std::size_t start = 0;
  while (true) {
    const auto dot = path.find('.', start);
    const std::string part = path.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    if (part.empty()) throw ConfigError("bad parameter path '" + path + "'");
    json* next;
    if (cur->is_array()) {
      const std::size_t idx = std::stoul(part);
      if (idx >= cur->size()) throw ConfigError("parameter path '" + path + "' indexes past an array");
      next = &(*cur)[idx];
    } else {
      if (!cur->is_object() && !cur->is_null()) throw ConfigError("parameter path '" + path + "' crosses a scalar");
      next = &(*cur)[part];
    }
    if (dot == std::string::npos) {
      *next = value;
      return;
    }
    cur = next;
    start = dot + 1;
  }
}

}  // namespace bfc
