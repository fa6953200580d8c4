#pragma once

#include <string>
#include <string_view>

namespace wembed::utf8 {

/// Decodes UTF-8 into code points. Rejects overlong forms, surrogates and
/// values above U+10FFFF; throws DecodeError with the offending byte offset.
std::u32string decode(std::string_view bytes);

std::string encode(std::u32string_view cps);
void append(std::string& out, char32_t cp);

/// Number of Unicode scalar values; assumes valid input.
std::size_t length(std::string_view bytes);

bool is_whitespace(char32_t cp);

} // namespace wembed::utf8
