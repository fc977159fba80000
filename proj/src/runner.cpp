#include <algorithm>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

#include "json.hpp"

#include "ospfsec/runner.hpp"

namespace ospfsec::runner {

using nlohmann::ordered_json;

const adversary::AttackOutcome* ScenarioReport::find(std::string_view label, std::string_view auth_mode) const {
  for (const auto& o : matrix) {
    if (o.label == label && o.auth_mode == auth_mode) return &o;
  }
  return nullptr;
}

namespace {

std::vector<std::string> collect_secrets(const std::vector<sim::RouterSpec>& routers) {
  std::set<std::string> out;
  for (const auto& r : routers) {
    std::visit(
        [&](const auto& m) {
          using M = std::decay_t<decltype(m)>;
          if constexpr (std::is_same_v<M, auth::SimpleAuth>) {
            out.insert(to_hex(m.password));
          } else if constexpr (std::is_same_v<M, auth::CryptoAuth>) {
            for (const auto& k : m.chain.keys) out.insert(to_hex(k.secret));
          }
        },
        r.config.auth.mode);
  }
  return {out.begin(), out.end()};
}

std::string configured_mode(const std::vector<sim::RouterSpec>& routers) {
  std::set<std::string_view> modes;
  for (const auto& r : routers) modes.insert(r.config.auth.mode_name());
  if (modes.size() == 1) return std::string(*modes.begin());
  return modes.empty() ? "none" : "mixed";
}

adversary::Roles resolve_roles(const adversary::AttackScript& script, const AdversarySpec& adv,
                               const sim::LinkSpec& link) {
  adversary::Roles roles;
  roles.link_id = link.id;
  roles.link_routers = link.routers;
  roles.adversary_id = adv.node_id;
  roles.claimed_id = script.claimed_id.value_or(adv.node_id);
  roles.source = script.source;
  using adversary::Technique;
  if (!roles.source && (script.technique == Technique::Replay || script.technique == Technique::Modify)) {
    roles.source = link.routers.front();
  }
  const RouterId reference = roles.source.value_or(link.routers.front());
  roles.target = link.routers.front();
  for (RouterId r : link.routers) {
    if (r != reference) {
      roles.target = r;
      break;
    }
  }
  if (script.target) roles.target = *script.target;
  return roles;
}

}  // namespace

Expected<ScenarioResult, RunError> run_scenario(const Scenario& scenario, std::optional<std::uint64_t> seed_override) {
  ScenarioResult result;
  auto& report = result.report;
  report.scenario = scenario.name;
  report.seed = seed_override.value_or(scenario.seed);
  report.warnings = scenario.warnings;

  std::vector<AuthVariant> variants = scenario.auth_sweep;
  const bool sweep = !variants.empty();
  if (!sweep) variants.push_back({configured_mode(scenario.routers), {}});
  for (const auto& v : variants) report.auth_modes.push_back(v.name);

  const sim::LinkSpec* adv_link = nullptr;
  std::vector<const adversary::AttackScript*> attacks;
  if (scenario.adversary) {
    for (const auto& l : scenario.links) {
      if (l.id == scenario.adversary->link_id) adv_link = &l;
    }
    if (!adv_link) return unexpected(RunError{"adversary link " + scenario.adversary->link_id + " not found"});
    for (const auto& a : scenario.adversary->attacks) {
      attacks.push_back(&a);
      report.attack_labels.push_back(a.label);
    }
  }
  if (attacks.empty()) attacks.push_back(nullptr);

  std::size_t offset = 0;
  for (const auto& variant : variants) {
    for (const auto* script : attacks) {
      sim::WorldConfig cfg;
      cfg.start_time = scenario.start_time;
      cfg.routers = scenario.routers;
      if (sweep) {
        for (auto& r : cfg.routers) r.config.auth = variant.config;
      }
      cfg.links = scenario.links;
      cfg.guard = script && script->guard ? *script->guard : scenario.guard;
      cfg.processing_budget_pps = scenario.processing_budget_pps;
      cfg.input_queue_capacity = scenario.input_queue_capacity;
      cfg.seed = report.seed;

      RunSummary summary;
      summary.name = variant.name + "/" + (script ? script->label : std::string("baseline"));
      summary.auth_mode = variant.name;
      summary.secrets_hex = collect_secrets(cfg.routers);

      auto world = sim::World::create(std::move(cfg));
      if (!world) return unexpected(RunError{summary.name + ": " + world.error().message});

      std::optional<adversary::Roles> roles;
      if (script) {
        summary.attack = script->label;
        roles = resolve_roles(*script, *scenario.adversary, *adv_link);
        auto attached = (*world)->attach_interposer(adv_link->id, adversary::make_hook(*script, *roles),
                                                    scenario.adversary->node_id);
        if (!attached) return unexpected(RunError{summary.name + ": " + attached.error().message});
      }

      (*world)->run(std::chrono::duration_cast<Micros>(scenario.duration));

      const auto& capture = (*world)->capture();
      const auto& timeline = (*world)->timeline();
      if (script) {
        auto outcome = adversary::evaluate(*script, *roles, {capture, timeline, scenario.start_time});
        outcome.auth_mode = variant.name;
        for (auto& i : outcome.evidence) i += offset;
        report.matrix.push_back(std::move(outcome));
      }
      for (const auto& st : timeline) report.adjacency_timeline.push_back({summary.name, st});
      summary.final_adjacency = (*world)->adjacency_matrix();
      summary.capture_begin = offset;
      summary.capture_end = offset + capture.size();
      offset = summary.capture_end;
      result.captures.push_back({summary.name, capture});
      report.runs.push_back(std::move(summary));
    }
  }
  return result;
}

namespace {

ordered_json capture_line(const std::string& run, const sim::CaptureRecord& r) {
  ordered_json j;
  j["time_us"] = to_epoch_us(r.time);
  j["link_id"] = r.link_id;
  j["src_router"] = r.src.str();
  j["frame_hex"] = to_hex(r.frame);
  j["verdict"] = r.verdict;
  j["run"] = run;
  j["event"] = std::string(sim::to_string(r.event));
  j["dst_router"] = r.dst ? ordered_json(r.dst->str()) : ordered_json(nullptr);
  j["origin"] = std::string(sim::to_string(r.origin));
  j["cause"] = r.cause ? ordered_json(*r.cause) : ordered_json(nullptr);
  return j;
}

std::string cell(const adversary::AttackOutcome* o) {
  if (!o) return "N-A";
  return o->succeeded ? "SUCCEEDED" : "PREVENTED";
}

}  // namespace

std::string capture_jsonl(const std::vector<RunCapture>& captures) {
  std::string out;
  for (const auto& c : captures) {
    for (const auto& r : c.records) {
      out += capture_line(c.name, r).dump();
      out += '\n';
    }
  }
  return out;
}

std::string report_json(const ScenarioReport& report) {
  ordered_json j;
  j["scenario"] = report.scenario;
  j["seed"] = report.seed;
  j["capture_path"] = report.capture_path;
  j["auth_modes"] = report.auth_modes;
  j["attacks"] = report.attack_labels;

  ordered_json matrix = ordered_json::array();
  for (const auto& o : report.matrix) {
    ordered_json m;
    m["attack"] = o.label;
    m["technique"] = std::string(adversary::to_string(o.technique));
    m["auth_mode"] = o.auth_mode;
    m["result"] = cell(&o);
    m["detail"] = o.detail;
    m["evidence"] = o.evidence;
    if (o.eavesdrop) {
      ordered_json topo = ordered_json::array();
      for (const auto& [a, b] : o.eavesdrop->topology_recovered) topo.push_back({a.str(), b.str()});
      m["passwords_recovered"] = o.eavesdrop->passwords_recovered;
      m["topology_recovered"] = topo;
    }
    matrix.push_back(std::move(m));
  }
  j["matrix"] = std::move(matrix);

  ordered_json runs = ordered_json::array();
  for (const auto& r : report.runs) {
    ordered_json run;
    run["name"] = r.name;
    run["auth_mode"] = r.auth_mode;
    run["attack"] = r.attack ? ordered_json(*r.attack) : ordered_json(nullptr);
    run["capture_begin"] = r.capture_begin;
    run["capture_end"] = r.capture_end;
    ordered_json adj = ordered_json::array();
    for (const auto& [pair, state] : r.final_adjacency) {
      adj.push_back({{"router", pair.first.str()},
                     {"neighbor", pair.second.str()},
                     {"state", std::string(fsm::to_string(state))}});
    }
    run["final_adjacency"] = std::move(adj);
    runs.push_back(std::move(run));
  }
  j["runs"] = std::move(runs);

  ordered_json timeline = ordered_json::array();
  for (const auto& e : report.adjacency_timeline) {
    const auto& t = e.transition;
    timeline.push_back({{"run", e.run},
                        {"time_us", to_epoch_us(t.time)},
                        {"router", t.router.str()},
                        {"neighbor", t.neighbor.str()},
                        {"from", std::string(fsm::to_string(t.from))},
                        {"to", std::string(fsm::to_string(t.to))},
                        {"teardown", t.teardown}});
  }
  j["adjacency_timeline"] = std::move(timeline);
  j["warnings"] = report.warnings;
  return j.dump(2) + "\n";
}

std::string report_table(const ScenarioReport& report) {
  std::ostringstream out;
  out << "scenario " << report.scenario << "  seed " << report.seed << "\n";
  if (!report.capture_path.empty()) out << "capture  " << report.capture_path << "\n";
  out << "\n";

  if (report.attack_labels.empty()) {
    out << "no attacks configured\n";
  } else {
    std::size_t first = std::string("attack").size();
    for (const auto& l : report.attack_labels) first = std::max(first, l.size());
    std::vector<std::size_t> widths;
    for (const auto& m : report.auth_modes) widths.push_back(std::max<std::size_t>(m.size(), 9));

    out << std::left << std::setw(static_cast<int>(first)) << "attack";
    for (std::size_t i = 0; i < widths.size(); ++i) {
      out << "  " << std::setw(static_cast<int>(widths[i])) << report.auth_modes[i];
    }
    out << "\n";
    for (const auto& label : report.attack_labels) {
      out << std::setw(static_cast<int>(first)) << label;
      for (std::size_t i = 0; i < widths.size(); ++i) {
        out << "  " << std::setw(static_cast<int>(widths[i])) << cell(report.find(label, report.auth_modes[i]));
      }
      out << "\n";
    }
    out << "\n";
    for (const auto& o : report.matrix) {
      out << o.label << " / " << o.auth_mode << ": " << o.detail << "\n";
      if (o.eavesdrop && !o.eavesdrop->passwords_recovered.empty()) {
        out << "  passwords:";
        for (const auto& p : o.eavesdrop->passwords_recovered) out << " \"" << p << "\"";
        out << "\n";
      }
    }
  }

  out << "\nfinal adjacencies\n";
  for (const auto& r : report.runs) {
    out << "  " << r.name << ":";
    for (const auto& [pair, state] : r.final_adjacency) {
      out << " " << pair.first.str() << "->" << pair.second.str() << "=" << fsm::to_string(state);
    }
    out << "\n";
  }
  if (!report.warnings.empty()) {
    out << "\nwarnings\n";
    for (const auto& w : report.warnings) out << "  " << w << "\n";
  }
  return out.str();
}

namespace {

std::optional<sim::CaptureEvent> event_from(std::string_view s) {
  if (s == "tx") return sim::CaptureEvent::Tx;
  if (s == "rx") return sim::CaptureEvent::Rx;
  if (s == "drop") return sim::CaptureEvent::Drop;
  return std::nullopt;
}

}  // namespace

Expected<std::vector<CaptureLine>, SchemaError> parse_capture(std::string_view jsonl) {
  std::vector<CaptureLine> out;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < jsonl.size()) {
    const auto end = std::min(jsonl.find('\n', pos), jsonl.size());
    const std::string_view text = jsonl.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (text.find_first_not_of(" \t\r") == std::string_view::npos) continue;

    auto bad = [&](std::string field, std::string message) {
      return unexpected(SchemaError{std::move(field), line_no, std::move(message)});
    };
    ordered_json j;
    try {
      j = ordered_json::parse(text);
    } catch (const ordered_json::parse_error& e) {
      return bad("", e.what());
    }
    if (!j.is_object()) return bad("", "expected an object");
    try {
      CaptureLine line;
      line.run = j.value("run", std::string{});
      auto& r = line.record;
      r.time = Timestamp{Micros{j.at("time_us").get<std::int64_t>()}};
      r.link_id = j.at("link_id").get<std::string>();
      auto src = RouterId::parse(j.at("src_router").get<std::string>());
      if (!src) return bad("src_router", "expected a dotted-quad identifier");
      r.src = *src;
      auto frame = from_hex(j.at("frame_hex").get<std::string>());
      if (!frame) return bad("frame_hex", "expected hexadecimal bytes");
      r.frame = std::move(*frame);
      r.verdict = j.at("verdict").get<std::string>();
      auto ev = event_from(j.value("event", std::string("rx")));
      if (!ev) return bad("event", "expected tx, rx or drop");
      r.event = *ev;
      if (j.contains("dst_router") && !j["dst_router"].is_null()) {
        auto dst = RouterId::parse(j["dst_router"].get<std::string>());
        if (!dst) return bad("dst_router", "expected a dotted-quad identifier");
        r.dst = *dst;
      }
      r.origin = j.value("origin", std::string("router")) == "adversary" ? sim::Origin::Adversary : sim::Origin::Router;
      if (j.contains("cause") && !j["cause"].is_null()) r.cause = j["cause"].get<std::size_t>();
      out.push_back(std::move(line));
    } catch (const ordered_json::exception& e) {
      return bad("", e.what());
    }
  }
  return out;
}

Expected<std::vector<CaptureLine>, LoadError> load_capture(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return unexpected(LoadError{LoadErrorKind::Io, {}, "cannot open " + path.string()});
  std::ostringstream ss;
  ss << in.rdbuf();
  auto parsed = parse_capture(ss.str());
  if (!parsed) return unexpected(LoadError{LoadErrorKind::Schema, parsed.error(), {}});
  return std::move(*parsed);
}

VerifySummary verify_capture(const std::vector<CaptureLine>& lines, const auth::KeyChain& chain) {
  VerifySummary summary;
  // Sequence state per (run, receiver, claimed sender).
  std::map<std::tuple<std::string, RouterId, RouterId>, auth::SeqState> seq;

  for (const auto& line : lines) {
    const auto& r = line.record;
    if (r.event != sim::CaptureEvent::Rx) continue;
    ++summary.frames;

    Verdict v = Verdict::Malformed;
    auto frame = codec::split_wire(r.frame);
    if (frame && codec::decode(*frame)) {
      const auto& pkt = frame->packet_bytes;
      if (codec::peek_au_type(pkt) == codec::AuType::Cryptographic) {
        v = auth::verify_md5(*frame, chain, r.time);
        if (v == Verdict::Accept) {
          auto& state = seq[{line.run, r.dst.value_or(RouterId{}), codec::peek_router_id(pkt)}];
          const auto field = codec::CryptoAuthField::unpack(codec::peek_auth_field(pkt));
          v = auth::to_verdict(auth::check_sequence(state, field.key_id, field.crypto_sequence, r.time));
        }
      } else {
        v = codec::checksum_valid(pkt) ? Verdict::Accept : Verdict::BadChecksum;
      }
    }
    if (v == Verdict::Accept) {
      ++summary.accepted;
    } else {
      ++summary.rejected[std::string(to_string(v))];
    }
  }
  return summary;
}

std::string VerifySummary::json() const {
  ordered_json j;
  j["frames"] = frames;
  j["accepted"] = accepted;
  ordered_json rej = ordered_json::object();
  for (const auto& [k, n] : rejected) rej[k] = n;
  j["rejected"] = rej;
  return j.dump(2) + "\n";
}

}  // namespace ospfsec::runner
