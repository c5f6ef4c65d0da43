#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dscrypt/protocol.hpp"

namespace dscrypt::cli {

/// Ciphertext layout: a text line
///   DSENC ring=<descriptor> n=<n> blocks=<B> pad=<P>
/// followed by the B*n encrypted elements. Over F_257 each byte is one
/// element, the pad elements are 256 and the payload stores elements as
/// u16 little-endian. Over F_2 bytes are split into bits (LSB first), the
/// pad bits are 0 and the payload is bit-packed the same way.
std::string encrypt_bytes(std::span<const std::uint8_t> plain, SessionCipher& cipher);

/// Throws ParseError for a malformed or mismatched ciphertext. No integrity
/// check: a wrong password yields garbage of the right length.
std::vector<std::uint8_t> decrypt_bytes(std::string_view data, const SessionCipher& cipher);

/// Rings with a byte embedding.
bool file_mode_ring(const Ring& ring);

}  // namespace dscrypt::cli
