#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "dscrypt/protocol.hpp"
#include "dscrypt/stability.hpp"

namespace dscrypt::cli {

/// Raw operator configuration, as given by flags or a key=value file.
struct Config {
  std::string ring = "Fp:2";
  std::size_t k = 2;
  std::size_t t = 2;
  int degree = 2;
  double density = 1.0;
  std::string terminal;  // empty: singer over fields, cycle otherwise
  std::string policy = "uniform";
  double size_exponent = 1.0;
  std::uint64_t seed = 1;
  std::uint64_t cap_constant = 1;
  std::string password = "2,1";
};

/// Keys accepted in config files; flags use the same names.
const std::vector<std::string>& config_keys();

/// Reads key=value lines ('#' starts a comment). Keys listed in `skip` were
/// given on the command line and keep their values. Throws InvalidSpec.
void apply_config_file(Config& c, const std::string& path, const std::set<std::string>& skip = {});
void set_config_value(Config& c, const std::string& key, const std::string& value);

struct Resolved {
  RingPtr ring;
  std::size_t k;
  FamilySpec family;
  ExponentRule exponents;
  std::uint64_t seed;
  std::uint64_t cap_constant;
  std::vector<std::uint32_t> password;
};

/// Validates everything up front: ring descriptor, k >= 2, family
/// parameters, policy and password. Throws InvalidSpec or InvalidRing.
Resolved resolve(const Config& c);

}  // namespace dscrypt::cli
