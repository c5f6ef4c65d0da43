#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "commands.hpp"
#include "config.hpp"

using namespace dscrypt::cli;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto p = fs::temp_directory_path() / ("dscrypt_test_cli_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

int run(const std::function<int(std::ostream&)>& body) {
  std::ostringstream out, err;
  return guarded([&] { return body(out); }, err);
}

Config small() {
  Config c;
  c.ring = "Fp:257";
  c.policy = "polynomial";
  return c;
}

}  // namespace

TEST_CASE("keygen is deterministic per seed") {
  const auto base = scratch("keygen");
  KeygenOptions a{(base / "a").string()}, b{(base / "b").string()};
  REQUIRE(run([&](std::ostream& o) { return cmd_keygen(small(), a, o); }) == kOk);
  REQUIRE(run([&](std::ostream& o) { return cmd_keygen(small(), b, o); }) == kOk);
  for (const auto& e : fs::directory_iterator(base / "a")) {
    CHECK(slurp(e.path()) == slurp(base / "b" / e.path().filename()));
  }
  fs::remove_all(base);
}

TEST_CASE("config errors exit 3") {
  Config c = small();
  c.k = 1;
  CHECK(run([&](std::ostream& o) { return cmd_keygen(c, {}, o); }) == kConfigError);
  c = small();
  c.ring = "Fp:4";
  CHECK(run([&](std::ostream& o) { return cmd_protocol_sim(c, {}, o); }) == kConfigError);
  SimOptions s;
  s.scheme = "rsa";
  CHECK(run([&](std::ostream& o) { return cmd_protocol_sim(small(), s, o); }) == kConfigError);
}

TEST_CASE("file round trip and cap") {
  const auto base = scratch("file");
  const std::string keys = (base / "keys").string();
  REQUIRE(run([&](std::ostream& o) { return cmd_keygen(small(), {keys}, o); }) == kOk);
  {
    std::ofstream f(base / "plain.bin", std::ios::binary);
    for (int i = 0; i < 5000; ++i) f.put(static_cast<char>(i * 37));
  }
  FileOptions enc{keys, (base / "plain.bin").string(), (base / "ct.txt").string()};
  FileOptions dec{keys, (base / "ct.txt").string(), (base / "back.bin").string()};
  REQUIRE(run([&](std::ostream& o) { return cmd_encrypt(small(), enc, o); }) == kOk);
  REQUIRE(run([&](std::ostream& o) { return cmd_decrypt(small(), dec, o); }) == kOk);
  CHECK(slurp(base / "plain.bin") == slurp(base / "back.bin"));

  // password 1 at n = 6: cap 6 blocks
  Config c = small();
  c.password = "1";
  CHECK(run([&](std::ostream& o) { return cmd_encrypt(c, enc, o); }) == kCapExceeded);
  fs::remove_all(base);
}

TEST_CASE("tampered transcript exits 2") {
  const auto base = scratch("sim");
  SimOptions s;
  s.scheme = "twisted";
  s.messages = 3;
  s.transcript_out = (base / "t.txt").string();
  Config c;
  c.ring = "Fp:3";
  REQUIRE(run([&](std::ostream& o) { return cmd_protocol_sim(c, s, o); }) == kOk);
  SimOptions replay;
  replay.transcript_in = s.transcript_out;
  CHECK(run([&](std::ostream& o) { return cmd_protocol_sim(c, replay, o); }) == kOk);

  std::string t = slurp(s.transcript_out);
  const auto pos = t.find("x3 -> ", t.find("SEND alice G2_A"));
  REQUIRE(pos != std::string::npos);
  t.insert(t.find('\n', pos), " + 1*x1");
  std::ofstream(s.transcript_out) << t;
  std::ostringstream out, err;
  CHECK(guarded([&] { return cmd_protocol_sim(c, replay, out); }, err) == kVerificationFailure);
  CHECK(out.str().find("coordinate x3 differs") != std::string::npos);
  fs::remove_all(base);
}
