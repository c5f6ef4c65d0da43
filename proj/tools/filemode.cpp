#include "filemode.hpp"

#include <charconv>

#include "dscrypt/errors.hpp"

namespace dscrypt::cli {

namespace {

constexpr Code kSentinel = 256;

bool is_byte_ring(const Ring& r) { return r.kind() == RingKind::kPrimeField && r.size() == 257; }
bool is_bit_ring(const Ring& r) { return r.kind() == RingKind::kPrimeField && r.size() == 2; }

std::uint64_t header_field(std::string_view line, std::string_view key) {
  const auto pos = line.find(" " + std::string(key) + "=");
  if (pos == std::string_view::npos) throw ParseError("ciphertext header lacks '" + std::string(key) + "'");
  auto rest = line.substr(pos + key.size() + 2);
  rest = rest.substr(0, rest.find(' '));
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), v);
  if (rest.empty() || ec != std::errc{} || ptr != rest.data() + rest.size()) {
    throw ParseError("bad ciphertext header value for '" + std::string(key) + "'");
  }
  return v;
}

}  // namespace

bool file_mode_ring(const Ring& ring) { return is_byte_ring(ring) || is_bit_ring(ring); }

std::string encrypt_bytes(std::span<const std::uint8_t> plain, SessionCipher& cipher) {
  const Ring& R = *cipher.ring();
  if (!file_mode_ring(R)) throw InvalidSpec("file mode needs Fp:257 (bytes) or Fp:2 (bits), got " + R.descriptor());
  const std::size_t n = cipher.dimension();
  const bool bytes = is_byte_ring(R);
  const std::size_t count = bytes ? plain.size() : plain.size() * 8;
  const std::size_t blocks = (count + n - 1) / n;
  const std::size_t pad = blocks * n - count;
  auto element = [&](std::size_t i) -> Code {
    if (i >= count) return bytes ? kSentinel : 0;
    return bytes ? plain[i] : (plain[i / 8] >> (i % 8)) & 1u;
  };

  std::string out = "DSENC ring=" + R.descriptor() + " n=" + std::to_string(n) + " blocks=" +
                    std::to_string(blocks) + " pad=" + std::to_string(pad) + "\n";
  const std::size_t header = out.size();
  out.resize(header + (bytes ? blocks * n * 2 : (blocks * n + 7) / 8), '\0');
  std::vector<Code> p(n);
  for (std::size_t b = 0; b < blocks; ++b) {
    for (std::size_t j = 0; j < n; ++j) p[j] = element(b * n + j);
    const auto y = cipher.encrypt(p);
    for (std::size_t j = 0; j < n; ++j) {
      const std::size_t idx = b * n + j;
      if (bytes) {
        out[header + 2 * idx] = static_cast<char>(y[j] & 0xff);
        out[header + 2 * idx + 1] = static_cast<char>(y[j] >> 8);
      } else if (y[j]) {
        out[header + idx / 8] = static_cast<char>(out[header + idx / 8] | (1 << (idx % 8)));
      }
    }
  }
  return out;
}

std::vector<std::uint8_t> decrypt_bytes(std::string_view data, const SessionCipher& cipher) {
  const Ring& R = *cipher.ring();
  const auto nl = data.find('\n');
  if (nl == std::string_view::npos || !data.starts_with("DSENC ")) throw ParseError("not a DSENC ciphertext");
  const auto line = data.substr(0, nl);
  auto ring_pos = line.find(" ring=");
  if (ring_pos == std::string_view::npos) throw ParseError("ciphertext header lacks 'ring'");
  auto ring = line.substr(ring_pos + 6);
  ring = ring.substr(0, ring.find(' '));
  if (ring != R.descriptor()) throw ParseError("ciphertext ring " + std::string(ring) + " does not match key ring " + R.descriptor());
  const std::size_t n = header_field(line, "n");
  const std::size_t blocks = header_field(line, "blocks");
  const std::size_t pad = header_field(line, "pad");
  if (n != cipher.dimension()) throw ParseError("ciphertext block length does not match key dimension");
  if ((blocks == 0 && pad != 0) || (blocks > 0 && pad >= n)) throw ParseError("bad pad length in ciphertext header");
  const bool bytes = is_byte_ring(R);
  const auto payload = data.substr(nl + 1);
  const std::size_t expect = bytes ? blocks * n * 2 : (blocks * n + 7) / 8;
  if (payload.size() != expect) throw ParseError("ciphertext payload has " + std::to_string(payload.size()) + " bytes, expected " + std::to_string(expect));

  const std::size_t count = blocks * n - pad;
  std::vector<std::uint8_t> out(bytes ? count : count / 8, 0);
  if (!bytes && count % 8) throw ParseError("bit count is not a whole number of bytes");
  std::vector<Code> y(n);
  for (std::size_t b = 0; b < blocks; ++b) {
    for (std::size_t j = 0; j < n; ++j) {
      const std::size_t idx = b * n + j;
      if (bytes) {
        y[j] = static_cast<std::uint8_t>(payload[2 * idx]) | (static_cast<Code>(static_cast<std::uint8_t>(payload[2 * idx + 1])) << 8);
        if (y[j] >= 257) throw ParseError("ciphertext element out of range");
      } else {
        y[j] = (static_cast<std::uint8_t>(payload[idx / 8]) >> (idx % 8)) & 1u;
      }
    }
    const auto p = cipher.decrypt(y);
    for (std::size_t j = 0; j < n; ++j) {
      const std::size_t idx = b * n + j;
      if (idx >= count) break;
      if (bytes) {
        out[idx] = static_cast<std::uint8_t>(p[j] & 0xff);
      } else if (p[j]) {
        out[idx / 8] = static_cast<std::uint8_t>(out[idx / 8] | (1 << (idx % 8)));
      }
    }
  }
  return out;
}

}  // namespace dscrypt::cli
