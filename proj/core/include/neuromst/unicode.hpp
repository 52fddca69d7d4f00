#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace neuromst {

/// Decode UTF-8 to codepoints; malformed bytes become U+FFFD one byte at a
/// time so the output length never depends on how badly the input is broken.
std::vector<uint32_t> utf8_decode(const std::string& s);

/// Punctuation test over a codepoint range table covering the common Unicode
/// punctuation blocks (ASCII, Latin-1, general punctuation, CJK, fullwidth).
/// An approximation of the full category data, kept small on purpose.
bool is_unicode_punct(uint32_t cp);

/// True when the form decodes to one or more codepoints, all punctuation.
bool is_all_punctuation(const std::string& form);

}  // namespace neuromst
