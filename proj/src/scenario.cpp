// Scenario and key-chain file loading. Every object is read strictly: a key
// the schema does not define is an error naming that key.

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

#include "ospfsec/runner.hpp"

namespace ospfsec::runner {

using nlohmann::json;

namespace {

struct SchemaFailure {
  SchemaError error;
};

[[noreturn]] void fail(std::string field, std::string message) {
  throw SchemaFailure{SchemaError{std::move(field), std::nullopt, std::move(message)}};
}

class Fields {
 public:
  Fields(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j.is_object()) fail(path_, "expected an object");
  }

  std::string path(std::string_view key) const { return path_.empty() ? std::string(key) : path_ + "." + std::string(key); }

  const json* get(std::string_view key) {
    used_.insert(std::string(key));
    auto it = j_.find(key);
    return it == j_.end() ? nullptr : &*it;
  }

  const json& require(std::string_view key) {
    const json* v = get(key);
    if (!v) fail(path(key), "missing required field");
    return *v;
  }

  // Call after all reads: rejects keys the schema does not define.
  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      if (!used_.count(it.key())) fail(path(it.key()), "unknown field \"" + it.key() + "\"");
    }
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> used_;
};

std::string as_string(const json& v, const std::string& path) {
  if (!v.is_string()) fail(path, "expected a string");
  return v.get<std::string>();
}

std::int64_t as_int(const json& v, const std::string& path, std::int64_t lo, std::int64_t hi) {
  if (!v.is_number_integer()) fail(path, "expected an integer");
  const auto x = v.get<std::int64_t>();
  if (x < lo || x > hi) fail(path, "out of range [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
  return x;
}

bool as_bool(const json& v, const std::string& path) {
  if (!v.is_boolean()) fail(path, "expected a boolean");
  return v.get<bool>();
}

RouterId as_router_id(const json& v, const std::string& path) {
  if (v.is_number_unsigned() || v.is_number_integer()) {
    return RouterId{static_cast<std::uint32_t>(as_int(v, path, 0, 0xFFFFFFFFLL))};
  }
  auto id = RouterId::parse(as_string(v, path));
  if (!id) fail(path, "expected a dotted-quad identifier");
  return *id;
}

WallSeconds as_time(const json& v, const std::string& path) {
  auto t = parse_iso8601(as_string(v, path));
  if (!t) fail(path, "expected an ISO-8601 UTC timestamp (YYYY-MM-DDTHH:MM[:SS][Z])");
  return *t;
}

fsm::Prefix as_prefix(const json& v, const std::string& path) {
  const std::string s = as_string(v, path);
  const auto slash = s.find('/');
  if (slash == std::string::npos) fail(path, "expected address/length");
  auto addr = RouterId::parse(s.substr(0, slash));
  int len = -1;
  try {
    len = std::stoi(s.substr(slash + 1));
  } catch (...) {
  }
  if (!addr || len < 0 || len > 32) fail(path, "expected address/length");
  const std::uint32_t mask = len == 0 ? 0 : ~std::uint32_t{0} << (32 - len);
  return fsm::Prefix{addr->value & mask, mask};
}

ids::GuardConfig parse_guard(const json& j, const std::string& path, ids::GuardConfig base) {
  Fields f(j, path);
  if (auto* v = f.get("enabled")) base.enabled = as_bool(*v, f.path("enabled"));
  if (auto* v = f.get("threshold_pps")) {
    base.threshold_pps = static_cast<std::uint32_t>(as_int(*v, f.path("threshold_pps"), 1, 1'000'000));
  }
  if (auto* v = f.get("window_s")) base.window = Seconds{as_int(*v, f.path("window_s"), 1, 3600)};
  if (auto* v = f.get("rule_lifetime_s")) {
    base.rule_lifetime = Seconds{as_int(*v, f.path("rule_lifetime_s"), 1, 86400)};
  }
  f.finish();
  return base;
}

auth::KeyChain parse_keychain_json(const json& j, const std::string& path) {
  Fields f(j, path);
  const json& keys = f.require("keys");
  if (!keys.is_array()) fail(f.path("keys"), "expected an array");
  std::vector<auth::AuthKey> out;
  for (std::size_t i = 0; i < keys.size(); ++i) {
    const std::string kp = f.path("keys") + "[" + std::to_string(i) + "]";
    Fields kf(keys[i], kp);
    auth::AuthKey key;
    key.key_id = static_cast<std::uint8_t>(as_int(kf.require("key_id"), kf.path("key_id"), 0, 255));
    const std::string secret = as_string(kf.require("secret"), kf.path("secret"));
    if (secret.empty() || secret.size() > auth::kMd5SecretSize) fail(kf.path("secret"), "secret must be 1..16 bytes");
    key.secret.assign(secret.begin(), secret.end());
    key.valid_from = as_time(kf.require("valid_from"), kf.path("valid_from"));
    key.valid_until = as_time(kf.require("valid_until"), kf.path("valid_until"));
    if (key.valid_from >= key.valid_until) fail(kp, "valid_from must precede valid_until");
    kf.finish();
    out.push_back(std::move(key));
  }
  Seconds drift{0};
  if (auto* v = f.get("max_time_drift")) drift = Seconds{as_int(*v, f.path("max_time_drift"), 0, 86400)};
  f.finish();
  auto chain = auth::make_key_chain(std::move(out), drift);
  if (!chain) fail(path, chain.error());
  return std::move(*chain);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

auth::AuthConfig parse_auth(const json& j, const std::string& path, const std::filesystem::path& base_dir,
                            std::vector<std::string>& warnings) {
  Fields f(j, path);
  const std::string mode = as_string(f.require("mode"), f.path("mode"));
  auth::AuthConfig cfg;
  if (mode == "none") {
    cfg.mode = auth::NoAuth{};
  } else if (mode == "simple") {
    const std::string pw = as_string(f.require("password"), f.path("password"));
    std::vector<std::string> local;
    auto password = auth::make_simple_password(pw, local);
    if (!password) fail(f.path("password"), password.error());
    for (auto& w : local) warnings.push_back(f.path("password") + ": " + w);
    cfg.mode = auth::SimpleAuth{*password};
  } else if (mode == "cryptographic") {
    const json& kc = f.require("keychain");
    if (kc.is_string()) {
      const auto file = base_dir / kc.get<std::string>();
      json parsed;
      try {
        parsed = json::parse(read_file(file));
      } catch (const std::exception& e) {
        fail(f.path("keychain"), std::string("cannot load key chain: ") + e.what());
      }
      cfg.mode = auth::CryptoAuth{parse_keychain_json(parsed, f.path("keychain"))};
    } else {
      cfg.mode = auth::CryptoAuth{parse_keychain_json(kc, f.path("keychain"))};
    }
  } else {
    fail(f.path("mode"), "expected one of none, simple, cryptographic");
  }
  f.finish();
  return cfg;
}

Micros as_millis(const json& v, const std::string& path) {
  return Micros{as_int(v, path, 0, 86'400'000) * 1000};
}

adversary::PacketFilter as_filter(const json& v, const std::string& path) {
  auto f = adversary::filter_from_string(as_string(v, path));
  if (!f) fail(path, "expected one of any, hello, lsu");
  return *f;
}

adversary::AttackParams parse_params(adversary::Technique t, const json* j, const std::string& path) {
  auto params = adversary::default_params(t);
  if (!j) return params;
  Fields f(*j, path);
  std::visit(
      [&](auto& p) {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, adversary::ReplayParams>) {
          if (auto* v = f.get("filter")) p.filter = as_filter(*v, f.path("filter"));
          if (auto* v = f.get("frame_index")) p.frame_index = static_cast<std::size_t>(as_int(*v, f.path("frame_index"), 0, 1'000'000));
          if (auto* v = f.get("delay_ms")) p.delay = as_millis(*v, f.path("delay_ms"));
          if (auto* v = f.get("count")) p.count = static_cast<unsigned>(as_int(*v, f.path("count"), 1, 100'000));
          if (auto* v = f.get("interval_ms")) p.interval = as_millis(*v, f.path("interval_ms"));
        } else if constexpr (std::is_same_v<P, adversary::InjectParams>) {
          if (auto* v = f.get("kind")) p.kind = as_filter(*v, f.path("kind"));
          if (auto* v = f.get("interval_ms")) p.interval = as_millis(*v, f.path("interval_ms"));
          if (p.interval <= Micros{0}) fail(f.path("interval_ms"), "must be > 0");
        } else if constexpr (std::is_same_v<P, adversary::DeleteParams>) {
          if (auto* v = f.get("filter")) p.filter = as_filter(*v, f.path("filter"));
        } else if constexpr (std::is_same_v<P, adversary::ModifyParams>) {
          if (auto* v = f.get("filter")) p.filter = as_filter(*v, f.path("filter"));
          if (auto* v = f.get("offset")) p.offset = static_cast<std::size_t>(as_int(*v, f.path("offset"), 0, 65534));
          if (auto* v = f.get("xor")) p.xor_mask = static_cast<std::uint8_t>(as_int(*v, f.path("xor"), 1, 255));
          if (auto* v = f.get("count")) p.count = static_cast<unsigned>(as_int(*v, f.path("count"), 1, 100'000));
        } else if constexpr (std::is_same_v<P, adversary::MitmParams>) {
          if (auto* v = f.get("interval_ms")) p.interval = as_millis(*v, f.path("interval_ms"));
          if (p.interval <= Micros{0}) fail(f.path("interval_ms"), "must be > 0");
        } else if constexpr (std::is_same_v<P, adversary::DosParams>) {
          if (auto* v = f.get("rate_pps")) p.rate_pps = static_cast<std::uint32_t>(as_int(*v, f.path("rate_pps"), 1, 1'000'000));
          if (auto* v = f.get("payload_kind")) p.payload = as_filter(*v, f.path("payload_kind"));
        }
      },
      params);
  f.finish();
  return params;
}

Scenario parse_scenario_json(const json& root, const std::filesystem::path& base_dir) {
  Scenario s;
  Fields f(root, "");
  if (auto* v = f.get("name")) s.name = as_string(*v, "name");
  s.start_time = parse_iso8601("2011-01-01T00:00:00Z").value();
  if (auto* v = f.get("start_time")) s.start_time = as_time(*v, "start_time");
  s.duration = Seconds{as_int(f.require("duration_s"), "duration_s", 1, 30 * 86400)};
  if (auto* v = f.get("seed")) {
    if (!v->is_number_integer()) fail("seed", "expected an integer");
    s.seed = v->get<std::uint64_t>();
  }
  if (auto* v = f.get("processing_budget_pps")) {
    s.processing_budget_pps = static_cast<std::uint32_t>(as_int(*v, "processing_budget_pps", 1, 1'000'000));
  }
  s.input_queue_capacity = s.processing_budget_pps;
  if (auto* v = f.get("input_queue_capacity")) {
    s.input_queue_capacity = static_cast<std::size_t>(as_int(*v, "input_queue_capacity", 1, 10'000'000));
  }
  if (auto* v = f.get("guard")) s.guard = parse_guard(*v, "guard", s.guard);

  const json& routers = f.require("routers");
  if (!routers.is_array()) fail("routers", "expected an array");
  std::set<RouterId> router_ids;
  for (std::size_t i = 0; i < routers.size(); ++i) {
    const std::string rp = "routers[" + std::to_string(i) + "]";
    Fields rf(routers[i], rp);
    sim::RouterSpec spec;
    auto& cfg = spec.config;
    cfg.router_id = as_router_id(rf.require("id"), rf.path("id"));
    if (!router_ids.insert(cfg.router_id).second) fail(rf.path("id"), "duplicate router id");
    if (auto* v = rf.get("area")) cfg.area_id = as_router_id(*v, rf.path("area"));
    if (auto* v = rf.get("auth")) cfg.auth = parse_auth(*v, rf.path("auth"), base_dir, s.warnings);
    if (auto* v = rf.get("skew_s")) spec.skew = Seconds{as_int(*v, rf.path("skew_s"), -86400, 86400)};
    if (auto* v = rf.get("hello_interval_s")) cfg.hello_interval = Seconds{as_int(*v, rf.path("hello_interval_s"), 1, 65535)};
    cfg.dead_interval = cfg.hello_interval * 4;
    if (auto* v = rf.get("dead_interval_s")) cfg.dead_interval = Seconds{as_int(*v, rf.path("dead_interval_s"), 2, 65535)};
    if (cfg.dead_interval <= cfg.hello_interval) fail(rf.path("dead_interval_s"), "must exceed hello_interval_s");
    if (auto* v = rf.get("priority")) cfg.priority = static_cast<std::uint8_t>(as_int(*v, rf.path("priority"), 0, 255));
    if (auto* v = rf.get("networks")) {
      if (!v->is_array()) fail(rf.path("networks"), "expected an array");
      for (std::size_t k = 0; k < v->size(); ++k) {
        cfg.advertised_networks.push_back(as_prefix((*v)[k], rf.path("networks") + "[" + std::to_string(k) + "]"));
      }
    }
    rf.finish();
    s.routers.push_back(std::move(spec));
  }

  const json& links = f.require("links");
  if (!links.is_array()) fail("links", "expected an array");
  std::set<std::string> link_ids;
  for (std::size_t i = 0; i < links.size(); ++i) {
    const std::string lp = "links[" + std::to_string(i) + "]";
    Fields lf(links[i], lp);
    sim::LinkSpec link;
    link.id = as_string(lf.require("id"), lf.path("id"));
    if (!link_ids.insert(link.id).second) fail(lf.path("id"), "duplicate link id");
    const json& members = lf.require("routers");
    if (!members.is_array() || members.empty()) fail(lf.path("routers"), "expected a non-empty array");
    for (std::size_t k = 0; k < members.size(); ++k) {
      const std::string mp = lf.path("routers") + "[" + std::to_string(k) + "]";
      RouterId r = as_router_id(members[k], mp);
      if (!router_ids.count(r)) fail(mp, "unknown router " + r.str());
      link.routers.push_back(r);
    }
    if (auto* v = lf.get("latency_us")) link.latency = Micros{as_int(*v, lf.path("latency_us"), 0, 10'000'000)};
    if (auto* v = lf.get("network_mask")) link.network_mask = as_router_id(*v, lf.path("network_mask")).value;
    lf.finish();
    s.links.push_back(std::move(link));
  }

  if (auto* v = f.get("auth_sweep")) {
    if (!v->is_array() || v->empty()) fail("auth_sweep", "expected a non-empty array");
    std::set<std::string> names;
    for (std::size_t i = 0; i < v->size(); ++i) {
      const std::string ap = "auth_sweep[" + std::to_string(i) + "]";
      auto cfg = parse_auth((*v)[i], ap, base_dir, s.warnings);
      std::string name(cfg.mode_name());
      if (!names.insert(name).second) fail(ap, "auth mode " + name + " appears twice");
      s.auth_sweep.push_back({std::move(name), std::move(cfg)});
    }
  }

  if (auto* v = f.get("adversary")) {
    Fields af(*v, "adversary");
    AdversarySpec adv;
    adv.node_id = RouterId::parse("10.66.66.66").value();
    if (auto* n = af.get("node_id")) adv.node_id = as_router_id(*n, af.path("node_id"));
    if (router_ids.count(adv.node_id)) fail(af.path("node_id"), "collides with a router id");
    adv.link_id = as_string(af.require("link"), af.path("link"));
    if (!link_ids.count(adv.link_id)) fail(af.path("link"), "unknown link " + adv.link_id);
    const json& attacks = af.require("attacks");
    if (!attacks.is_array()) fail(af.path("attacks"), "expected an array");
    std::set<std::string> labels;
    for (std::size_t i = 0; i < attacks.size(); ++i) {
      const std::string tp = af.path("attacks") + "[" + std::to_string(i) + "]";
      Fields tf(attacks[i], tp);
      adversary::AttackScript script;
      const std::string tech = as_string(tf.require("technique"), tf.path("technique"));
      auto t = adversary::technique_from_string(tech);
      if (!t) fail(tf.path("technique"), "unknown technique \"" + tech + "\"");
      script.technique = *t;
      script.label = std::string(adversary::to_string(*t));
      if (auto* x = tf.get("label")) script.label = as_string(*x, tf.path("label"));
      if (!labels.insert(script.label).second) fail(tf.path("label"), "duplicate attack label " + script.label);
      script.start = Seconds{as_int(tf.require("start_s"), tf.path("start_s"), 0, s.duration.count())};
      script.stop = Seconds{as_int(tf.require("stop_s"), tf.path("stop_s"), 0, s.duration.count())};
      if (script.stop <= script.start) fail(tf.path("stop_s"), "must be after start_s");
      auto member = [&](const char* key) -> std::optional<RouterId> {
        auto* x = tf.get(key);
        if (!x) return std::nullopt;
        RouterId r = as_router_id(*x, tf.path(key));
        return r;
      };
      script.source = member("source");
      script.target = member("target");
      script.claimed_id = member("claimed_id");
      if (auto* x = tf.get("guard")) script.guard = parse_guard(*x, tf.path("guard"), s.guard);
      script.params = parse_params(*t, tf.get("params"), tf.path("params"));
      tf.finish();
      adv.attacks.push_back(std::move(script));
    }
    af.finish();
    s.adversary = std::move(adv);
  }
  f.finish();
  return s;
}

std::size_t line_of(std::string_view text, std::size_t byte) {
  byte = std::min(byte, text.size());
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(byte), '\n'));
}

template <class T, class Fn>
Expected<T, SchemaError> guarded_parse(std::string_view text, Fn&& fn) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    return unexpected(SchemaError{"", line_of(text, e.byte > 0 ? e.byte - 1 : 0), e.what()});
  }
  try {
    return fn(root);
  } catch (const SchemaFailure& f) {
    return unexpected(f.error);
  } catch (const json::exception& e) {
    return unexpected(SchemaError{"", std::nullopt, e.what()});
  }
}

}  // namespace

std::string SchemaError::what() const {
  std::string out = "schema error";
  if (line) out += " at line " + std::to_string(*line);
  if (!field.empty()) out += " in field \"" + field + "\"";
  return out + ": " + message;
}

std::string LoadError::what() const { return kind == LoadErrorKind::Io ? io_message : schema.what(); }

Expected<Scenario, SchemaError> parse_scenario(std::string_view json_text, const std::filesystem::path& base_dir) {
  return guarded_parse<Scenario>(json_text, [&](const json& root) { return parse_scenario_json(root, base_dir); });
}

Expected<auth::KeyChain, SchemaError> parse_keychain(std::string_view json_text) {
  return guarded_parse<auth::KeyChain>(json_text, [](const json& root) { return parse_keychain_json(root, ""); });
}

namespace {

template <class T, class Fn>
Expected<T, LoadError> load_with(const std::filesystem::path& path, Fn&& parse) {
  std::string text;
  try {
    text = read_file(path);
  } catch (const std::exception& e) {
    return unexpected(LoadError{LoadErrorKind::Io, {}, e.what()});
  }
  auto parsed = parse(text);
  if (!parsed) return unexpected(LoadError{LoadErrorKind::Schema, parsed.error(), {}});
  return std::move(*parsed);
}

}  // namespace

Expected<Scenario, LoadError> load_scenario(const std::filesystem::path& path) {
  return load_with<Scenario>(path, [&](std::string_view text) {
    auto s = parse_scenario(text, path.parent_path());
    if (s && s->name.empty()) s->name = path.stem().string();
    return s;
  });
}

Expected<auth::KeyChain, LoadError> load_keychain(const std::filesystem::path& path) {
  return load_with<auth::KeyChain>(path, [](std::string_view text) { return parse_keychain(text); });
}

}  // namespace ospfsec::runner
