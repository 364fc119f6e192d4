#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace onematch {

// Whitespace-split a UTF-8 string. Separators are ASCII whitespace and
// U+00A0; invalid UTF-8 bytes are skipped.
std::vector<std::string> split_whitespace(std::string_view text);

// Normalize one word: lowercase, fold Latin diacritics to ASCII
// (Latin-1 Supplement and Latin Extended-A; ae/oe/ss ligatures expand),
// drop everything that is not [a-z0-9] afterwards. Codepoints outside the
// fold tables are dropped, so a word can normalize to the empty string.
std::string fold_word(std::string_view word);

// Byte-wise ASCII lowercasing (non-ASCII bytes untouched).
std::string ascii_lower(std::string_view s);

}  // namespace onematch
