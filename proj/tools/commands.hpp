#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <string>

#include "config.hpp"

namespace dscrypt::cli {

enum ExitCode : int { kOk = 0, kVerificationFailure = 2, kConfigError = 3, kCapExceeded = 4 };

/// Runs a command body and maps library errors onto exit codes.
int guarded(const std::function<int()>& body, std::ostream& err);

struct KeygenOptions {
  std::string out_dir = "keys";
};

struct SimOptions {
  std::string scheme = "twisted";
  std::size_t messages = 100;
  std::string transcript_out;
  std::string transcript_in;  // replay and compare instead of simulating
};

struct FileOptions {
  std::string key_dir = "keys";
  std::string in;
  std::string out;
};

struct VerifyOptions {
  std::string scope = "all";
  bool inject_unstable = false;
  std::size_t samples = 10;
};

struct BenchOptions {
  std::size_t k_min = 2;
  std::size_t k_max = 8;
  std::size_t conjugated_k_max = 4;
  std::size_t repeats = 3;
};

int cmd_keygen(const Config& c, const KeygenOptions& o, std::ostream& out);
int cmd_protocol_sim(const Config& c, const SimOptions& o, std::ostream& out);
int cmd_encrypt(const Config& c, const FileOptions& o, std::ostream& out);
int cmd_decrypt(const Config& c, const FileOptions& o, std::ostream& out);
int cmd_verify(const Config& c, const VerifyOptions& o, std::ostream& out);
int cmd_bench(const Config& c, const BenchOptions& o, std::ostream& out);

}  // namespace dscrypt::cli
