#include "onematch/text.hpp"

#include <cstdint>

namespace onematch {

namespace {

// Latin-1 Supplement letters U+00C0..U+00FF.
const char* const kLatin1Fold[64] = {
    "a", "a", "a", "a", "a", "a", "ae", "c", "e", "e", "e", "e", "i", "i", "i", "i",
    "d", "n", "o", "o", "o", "o", "o", "",  "o", "u", "u", "u", "u", "y", "th", "ss",
    "a", "a", "a", "a", "a", "a", "ae", "c", "e", "e", "e", "e", "i", "i", "i", "i",
    "d", "n", "o", "o", "o", "o", "o", "",  "o", "u", "u", "u", "u", "y", "th", "y"};

// Latin Extended-A U+0100..U+017F.
const char* const kLatinExtAFold[128] = {
    "a", "a", "a", "a", "a", "a",                      // 0100-0105
    "c", "c", "c", "c", "c", "c", "c", "c",            // 0106-010D
    "d", "d", "d", "d",                                // 010E-0111
    "e", "e", "e", "e", "e", "e", "e", "e", "e", "e",  // 0112-011B
    "g", "g", "g", "g", "g", "g", "g", "g",            // 011C-0123
    "h", "h", "h", "h",                                // 0124-0127
    "i", "i", "i", "i", "i", "i", "i", "i", "i", "i",  // 0128-0131
    "ij", "ij",                                        // 0132-0133
    "j", "j",                                          // 0134-0135
    "k", "k", "k",                                     // 0136-0138
    "l", "l", "l", "l", "l", "l", "l", "l", "l", "l",  // 0139-0142
    "n", "n", "n", "n", "n", "n", "n", "n", "n",       // 0143-014B
    "o", "o", "o", "o", "o", "o",                      // 014C-0151
    "oe", "oe",                                        // 0152-0153
    "r", "r", "r", "r", "r", "r",                      // 0154-0159
    "s", "s", "s", "s", "s", "s", "s", "s",            // 015A-0161
    "t", "t", "t", "t", "t", "t",                      // 0162-0167
    "u", "u", "u", "u", "u", "u", "u", "u", "u", "u", "u", "u",  // 0168-0173
    "w", "w",                                          // 0174-0175
    "y", "y", "y",                                     // 0176-0178
    "z", "z", "z", "z", "z", "z",                      // 0179-017E
    "s"};                                              // 017F

// Decodes the codepoint at s[i]; advances i. Returns 0xFFFD on invalid
// input (after advancing one byte).
std::uint32_t decode_utf8(std::string_view s, std::size_t& i) {
    const auto byte = [&](std::size_t k) { return static_cast<unsigned char>(s[k]); };
    unsigned char b0 = byte(i);
    if (b0 < 0x80) {
        ++i;
        return b0;
    }
    auto cont = [&](std::size_t k) { return k < s.size() && (byte(k) & 0xC0) == 0x80; };
    if ((b0 & 0xE0) == 0xC0 && cont(i + 1)) {
        std::uint32_t cp = (std::uint32_t(b0 & 0x1F) << 6) | (byte(i + 1) & 0x3F);
        i += 2;
        return cp;
    }
    if ((b0 & 0xF0) == 0xE0 && cont(i + 1) && cont(i + 2)) {
        std::uint32_t cp = (std::uint32_t(b0 & 0x0F) << 12) | (std::uint32_t(byte(i + 1) & 0x3F) << 6) |
                           (byte(i + 2) & 0x3F);
        i += 3;
        return cp;
    }
    if ((b0 & 0xF8) == 0xF0 && cont(i + 1) && cont(i + 2) && cont(i + 3)) {
        std::uint32_t cp = (std::uint32_t(b0 & 0x07) << 18) | (std::uint32_t(byte(i + 1) & 0x3F) << 12) |
                           (std::uint32_t(byte(i + 2) & 0x3F) << 6) | (byte(i + 3) & 0x3F);
        i += 4;
        return cp;
    }
    ++i;
    return 0xFFFD;
}

bool is_separator(std::uint32_t cp) {
    return cp == ' ' || cp == '\t' || cp == '\n' || cp == '\r' || cp == '\f' || cp == '\v' ||
           cp == 0x00A0;
}

void fold_codepoint(std::uint32_t cp, std::string& out) {
    if (cp >= 'A' && cp <= 'Z') {
        out.push_back(static_cast<char>(cp - 'A' + 'a'));
    } else if ((cp >= 'a' && cp <= 'z') || (cp >= '0' && cp <= '9')) {
        out.push_back(static_cast<char>(cp));
    } else if (cp >= 0x00C0 && cp <= 0x00FF) {
        out += kLatin1Fold[cp - 0x00C0];
    } else if (cp >= 0x0100 && cp <= 0x017F) {
        out += kLatinExtAFold[cp - 0x0100];
    }
    // everything else (punctuation, symbols, marks, other scripts) is dropped
}

}  // namespace

std::vector<std::string> split_whitespace(std::string_view text) {
    std::vector<std::string> words;
    std::string current;
    std::size_t i = 0;
    while (i < text.size()) {
        std::size_t start = i;
        std::uint32_t cp = decode_utf8(text, i);
        if (is_separator(cp)) {
            if (!current.empty()) {
                words.push_back(std::move(current));
                current.clear();
            }
        } else {
            current.append(text.substr(start, i - start));
        }
    }
    if (!current.empty()) words.push_back(std::move(current));
    return words;
}

std::string fold_word(std::string_view word) {
    std::string out;
    out.reserve(word.size());
    std::size_t i = 0;
    while (i < word.size()) {
        fold_codepoint(decode_utf8(word, i), out);
    }
    return out;
}

std::string ascii_lower(std::string_view s) {
    std::string out(s);
    for (char& c : out) {
        if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    }
    return out;
}

}  // namespace onematch
