#include <CLI11.hpp>
#include <iostream>
#include <set>

#include "commands.hpp"

using namespace dscrypt::cli;

namespace {

void add_config_options(CLI::App* app, Config& c, std::string& config_path) {
  app->add_option("--config", config_path, "key=value file; flags override it");
  app->add_option("--ring", c.ring, "ring descriptor: Fp:<p>, Fq:<p>^<m>:<coeffs>, Z:<m>");
  app->add_option("--k", c.k, "Schubert rank k >= 2 (n = k(k+1))");
  app->add_option("--t", c.t, "walk half-length t (keys have 2t colours)");
  app->add_option("--degree", c.degree, "family degree T");
  app->add_option("--density", c.density, "family density exponent d");
  app->add_option("--terminal", c.terminal, "terminal colour: cycle, singer, affine");
  app->add_option("--policy", c.policy, "exponent policy: uniform, polynomial");
  app->add_option("--size-exponent", c.size_exponent, "exponent size n^d for the polynomial policy");
  app->add_option("--seed", c.seed, "seed of the deterministic stream");
  app->add_option("--cap-constant", c.cap_constant, "constant c of the message cap c*n^(D-1)");
  app->add_option("--password", c.password, "session password, e.g. 2,1");
}

void load_config(CLI::App* app, Config& c, const std::string& path) {
  if (path.empty()) return;
  std::set<std::string> given;
  for (const auto& key : config_keys()) {
    if (app->get_option("--" + key)->count() > 0) given.insert(key);
  }
  apply_config_file(c, path, given);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Double Schubert automaton: stable multivariate maps and protocols"};
  app.require_subcommand(1);
  Config cfg;
  std::string config_path;

  KeygenOptions kg;
  auto* keygen = app.add_subcommand("keygen", "generate public maps, delivered generators and a private bundle");
  add_config_options(keygen, cfg, config_path);
  keygen->add_option("--out-dir", kg.out_dir, "output directory");

  SimOptions sim;
  auto* psim = app.add_subcommand("protocol-sim", "run both parties of a scheme in-process");
  add_config_options(psim, cfg, config_path);
  psim->add_option("--scheme", sim.scheme, "dh, elgamal, shifted, twisted")
      ->check(CLI::IsMember({"dh", "elgamal", "shifted", "twisted"}));
  psim->add_option("--messages", sim.messages, "plaintexts per run");
  psim->add_option("--transcript-out", sim.transcript_out, "write the transcript here");
  psim->add_option("--transcript-in", sim.transcript_in, "replay this transcript and report the first difference");

  FileOptions enc_o, dec_o;
  auto* enc = app.add_subcommand("encrypt", "encrypt a file with the delivered generators P, Q");
  add_config_options(enc, cfg, config_path);
  enc->add_option("--key-dir", enc_o.key_dir, "directory written by keygen");
  enc->add_option("--in", enc_o.in, "plaintext file")->required();
  enc->add_option("--out", enc_o.out, "ciphertext file")->required();
  auto* dec = app.add_subcommand("decrypt", "decrypt a file with the private bundle");
  add_config_options(dec, cfg, config_path);
  dec->add_option("--key-dir", dec_o.key_dir, "directory written by keygen");
  dec->add_option("--in", dec_o.in, "ciphertext file")->required();
  dec->add_option("--out", dec_o.out, "plaintext file")->required();

  VerifyOptions ver;
  auto* verify = app.add_subcommand("verify", "run the invariant suites");
  add_config_options(verify, cfg, config_path);
  verify->add_option("--scope", ver.scope, "stability, orders, homomorphism, all")
      ->check(CLI::IsMember({"stability", "orders", "homomorphism", "all"}));
  verify->add_flag("--inject-unstable", ver.inject_unstable, "add a non-stable map as a negative control");
  verify->add_option("--samples", ver.samples, "random samples per suite");

  BenchOptions bo;
  auto* bench = app.add_subcommand("bench", "composition, power and application timings");
  add_config_options(bench, cfg, config_path);
  bench->add_option("--k-min", bo.k_min, "smallest k");
  bench->add_option("--k-max", bo.k_max, "largest k");
  bench->add_option("--conjugated-k-max", bo.conjugated_k_max, "largest k for conjugated (dense) maps");
  bench->add_option("--repeats", bo.repeats, "best of this many runs");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfigError;
  }

  auto* sub = app.get_subcommands().front();
  return guarded(
      [&]() -> int {
        load_config(sub, cfg, config_path);
        if (sub == keygen) return cmd_keygen(cfg, kg, std::cout);
        if (sub == psim) return cmd_protocol_sim(cfg, sim, std::cout);
        if (sub == enc) return cmd_encrypt(cfg, enc_o, std::cout);
        if (sub == dec) return cmd_decrypt(cfg, dec_o, std::cout);
        if (sub == verify) return cmd_verify(cfg, ver, std::cout);
        return cmd_bench(cfg, bo, std::cout);
      },
      std::cerr);
}
