#include "curator/pii_scrub.hpp"

#include <array>
#include <cctype>

namespace curator {

namespace {

constexpr std::string_view kEmailSubstitute = "email@example.com";

// Substitutes drawn from the documentation address blocks; these are outside
// the private/reserved table, which keeps repeated scrubbing a fixpoint.
constexpr std::array<std::string_view, 3> kIpSubstitutes = {"192.0.2.1", "198.51.100.1",
                                                            "203.0.113.1"};

bool is_local_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '.' || c == '_' || c == '%' ||
           c == '+' || c == '-';
}

bool is_label_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '-';
}

bool is_alpha_label(std::string_view s) {
    if (s.size() < 2) return false;
    for (char c : s)
        if (!std::isalpha(static_cast<unsigned char>(c))) return false;
    return true;
}

// Email match around the '@' at position `at`; sets [start,end) on success.
bool match_email(std::string_view text, size_t at, size_t& start, size_t& end) {
    size_t lstart = at;
    while (lstart > 0 && is_local_char(text[lstart - 1])) --lstart;
    if (lstart == at) return false;

    size_t j = at + 1;
    size_t last_valid = 0;
    int labels = 0;
    for (;;) {
        size_t label_start = j;
        while (j < text.size() && is_label_char(text[j])) ++j;
        if (j == label_start) break;
        ++labels;
        if (labels >= 2 && is_alpha_label(text.substr(label_start, j - label_start)))
            last_valid = j;
        if (j < text.size() && text[j] == '.') ++j;
        else break;
    }
    if (last_valid == 0) return false;
    start = lstart;
    end = last_valid;
    return true;
}

// Dotted-quad match starting at `at` (first digit); value and end out.
bool match_ipv4(std::string_view text, size_t at, size_t& end, uint32_t& value) {
    if (at > 0 && (std::isdigit(static_cast<unsigned char>(text[at - 1])) || text[at - 1] == '.'))
        return false;
    size_t p = at;
    uint32_t octets[4];
    for (int i = 0; i < 4; ++i) {
        if (i > 0) {
            if (p >= text.size() || text[p] != '.') return false;
            ++p;
        }
        size_t d = p;
        uint32_t v = 0;
        while (d < text.size() && std::isdigit(static_cast<unsigned char>(text[d])) && d - p < 3) {
            v = v * 10 + static_cast<uint32_t>(text[d] - '0');
            ++d;
        }
        if (d == p || v > 255) return false;
        octets[i] = v;
        p = d;
    }
    if (p < text.size()) {
        if (std::isdigit(static_cast<unsigned char>(text[p]))) return false;
        if (text[p] == '.' && p + 1 < text.size() &&
            std::isdigit(static_cast<unsigned char>(text[p + 1])))
            return false;
    }
    end = p;
    value = (octets[0] << 24) | (octets[1] << 16) | (octets[2] << 8) | octets[3];
    return true;
}

} // namespace

bool is_private_or_reserved_ip(uint32_t ip) {
    uint32_t a = ip >> 24;
    uint32_t b = (ip >> 16) & 0xFF;
    if (a == 10 || a == 127 || a == 0) return true;
    if (a == 172 && b >= 16 && b <= 31) return true;
    if (a == 192 && b == 168) return true;
    if (a == 169 && b == 254) return true;
    if (a >= 224) return true; // 224/4 multicast and 240/4 reserved
    return false;
}

std::pair<std::string, ScrubReport> anonymize(std::string_view text) {
    ScrubReport report;

    std::string pass1;
    pass1.reserve(text.size());
    size_t i = 0;
    size_t emitted = 0;
    while (i < text.size()) {
        if (text[i] == '@') {
            size_t start, end;
            if (match_email(text, i, start, end) && start >= emitted) {
                pass1.append(text.substr(emitted, start - emitted));
                pass1.append(kEmailSubstitute);
                ++report.emails_replaced;
                emitted = end;
                i = end;
                continue;
            }
        }
        ++i;
    }
    pass1.append(text.substr(emitted));

    std::string out;
    out.reserve(pass1.size());
    size_t rr = 0;
    i = 0;
    emitted = 0;
    while (i < pass1.size()) {
        if (std::isdigit(static_cast<unsigned char>(pass1[i]))) {
            size_t end;
            uint32_t value;
            if (match_ipv4(pass1, i, end, value)) {
                if (is_private_or_reserved_ip(value)) {
                    ++report.ips_skipped_private;
                } else {
                    out.append(pass1, emitted, i - emitted);
                    out.append(kIpSubstitutes[rr % kIpSubstitutes.size()]);
                    ++rr;
                    ++report.ips_replaced;
                    emitted = end;
                }
                i = end;
                continue;
            }
        }
        ++i;
    }
    out.append(pass1, emitted, pass1.size() - emitted);

    return {std::move(out), report};
}

} // namespace curator
