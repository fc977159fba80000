#pragma once

#include <string>

#include "ospfsec/sim.hpp"

namespace fixtures {

using namespace ospfsec;

inline const RouterId A{0x0A000001};
inline const RouterId B{0x0A000002};
inline const RouterId C{0x0A000003};
inline const RouterId Adversary{0x0A424242};

inline WallSeconds start() { return parse_iso8601("2011-01-01T00:00:00Z").value(); }

inline Bytes text(std::string_view s) { return Bytes(s.begin(), s.end()); }

inline auth::AuthConfig simple(std::string_view pw) {
  std::vector<std::string> w;
  return auth::AuthConfig{auth::SimpleAuth{auth::make_simple_password(pw, w).value()}};
}

inline auth::KeyChain md5_chain() {
  return auth::make_key_chain({auth::AuthKey{16, text("ovojemd5sifra"), parse_iso8601("2010-02-20T10:00").value(),
                                             parse_iso8601("2012-02-20T10:00").value()}},
                              Seconds{5})
      .value();
}

inline auth::AuthConfig crypto(auth::KeyChain chain = md5_chain()) {
  return auth::AuthConfig{auth::CryptoAuth{std::move(chain)}};
}

inline sim::RouterSpec router(RouterId id, auth::AuthConfig a, Seconds skew = Seconds{0}, Seconds hello = Seconds{10}) {
  sim::RouterSpec r;
  r.config.router_id = id;
  r.config.auth = std::move(a);
  r.config.hello_interval = hello;
  r.config.dead_interval = hello * 4;
  r.config.advertised_networks = {{0xC0A80100u + (id.value & 0xFF), 0xFFFFFF00u}};
  r.skew = skew;
  return r;
}

inline sim::WorldConfig pair(auth::AuthConfig a, std::uint64_t seed = 42) {
  sim::WorldConfig cfg;
  cfg.start_time = start();
  cfg.routers = {router(A, a), router(B, a)};
  cfg.links = {sim::LinkSpec{"l1", {A, B}}};
  cfg.seed = seed;
  return cfg;
}

inline std::unique_ptr<sim::World> make_world(sim::WorldConfig cfg) {
  auto w = sim::World::create(std::move(cfg));
  if (!w) throw std::runtime_error(w.error().message);
  return std::move(*w);
}

inline std::size_t count_rx(const std::vector<sim::CaptureRecord>& cap, std::string_view verdict,
                            std::optional<sim::Origin> origin = std::nullopt) {
  std::size_t n = 0;
  for (const auto& r : cap) {
    if (r.event == sim::CaptureEvent::Rx && r.verdict == verdict && (!origin || r.origin == *origin)) ++n;
  }
  return n;
}

}  // namespace fixtures
