#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>

namespace curator {

struct ScrubReport {
    int64_t emails_replaced = 0;
    int64_t ips_replaced = 0;
    int64_t ips_skipped_private = 0;
};

// Replaces email addresses with "email@example.com" and public IPv4
// dotted-quads with a substitute drawn round-robin from the documentation
// address ranges. Addresses inside the private/reserved ranges 10/8,
// 172.16/12, 192.168/16, 127/8, 169.254/16, 0/8, 224/4 and 240/4 are left
// untouched and counted. The round-robin restarts per call and the
// substitutes are public under the table above, so the function is
// idempotent.
std::pair<std::string, ScrubReport> anonymize(std::string_view text);

// True when the dotted-quad value falls in a private/reserved range.
bool is_private_or_reserved_ip(uint32_t ip);

} // namespace curator
