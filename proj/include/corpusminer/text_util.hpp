#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace cm {

// Minimal UTF-8 handling for the Latin scripts that occur in the corpus.
// The "letter" class covers ASCII letters, Latin-1 Supplement letters and
// Latin Extended-A; Greek and other scripts are treated as symbols.

/// Decodes the code point starting at `text[i]`. Advances `i` past the
/// sequence. Invalid bytes decode as U+FFFD and advance by one byte.
std::uint32_t utf8_decode(std::string_view text, std::size_t& i);

/// Appends the UTF-8 encoding of `cp` to `out`.
void utf8_encode(std::uint32_t cp, std::string& out);

bool is_latin_letter(std::uint32_t cp);
bool is_ascii_digit(std::uint32_t cp);

/// Lowercases a Latin code point (identity for anything else).
std::uint32_t latin_to_lower(std::uint32_t cp);

/// Lowercases a UTF-8 string using latin_to_lower per code point.
std::string to_lower(std::string_view text);

/// Number of code points in a UTF-8 string.
std::size_t codepoint_length(std::string_view text);

/// True if every code point is a Latin letter (and the string is nonempty).
bool is_all_letters(std::string_view text);

/// True if every char is an ASCII digit (and the string is nonempty).
bool is_all_digits(std::string_view text);

/// Collapses whitespace runs to single spaces and trims both ends.
std::string collapse_whitespace(std::string_view text);

}  // namespace cm
