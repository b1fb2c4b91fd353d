#pragma once

#include <string>

#include "dualdomain/codec.hpp"

namespace dd {

// Versioned JSON payload format. Infinite interval bounds are encoded as
// the strings "inf" / "-inf"; everything else round-trips exactly.
std::string dump_payload(const EncodedPayload& payload);
EncodedPayload parse_payload(const std::string& text);

void write_payload(const std::string& path, const EncodedPayload& payload);
EncodedPayload read_payload(const std::string& path);

}  // namespace dd
