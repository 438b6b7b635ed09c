#include "argmine/utf8.hpp"

#include "argmine/error.hpp"

namespace argmine::utf8 {
namespace {

// Returns the sequence length for a lead byte, 0 if invalid.
int sequence_length(unsigned char lead) {
  if (lead < 0x80) return 1;
  if ((lead >> 5) == 0x6) return 2;
  if ((lead >> 4) == 0xE) return 3;
  if ((lead >> 3) == 0x1E) return 4;
  return 0;
}

char32_t decode_at(std::string_view text, std::size_t pos, int len) {
  auto b = [&](std::size_t k) { return static_cast<unsigned char>(text[pos + k]); };
  switch (len) {
    case 1:
      return b(0);
    case 2:
      return ((b(0) & 0x1F) << 6) | (b(1) & 0x3F);
    case 3:
      return ((b(0) & 0x0F) << 12) | ((b(1) & 0x3F) << 6) | (b(2) & 0x3F);
    default:
      return ((b(0) & 0x07) << 18) | ((b(1) & 0x3F) << 12) | ((b(2) & 0x3F) << 6) |
             (b(3) & 0x3F);
  }
}

template <typename Fn>
void for_each_code_point(std::string_view text, Fn&& fn) {
  std::size_t pos = 0;
  while (pos < text.size()) {
    const int len = sequence_length(static_cast<unsigned char>(text[pos]));
    if (len == 0 || pos + len > text.size()) {
      throw ParseError("ill-formed UTF-8 at byte " + std::to_string(pos));
    }
    for (int k = 1; k < len; ++k) {
      if ((static_cast<unsigned char>(text[pos + k]) & 0xC0) != 0x80) {
        throw ParseError("ill-formed UTF-8 at byte " + std::to_string(pos));
      }
    }
    fn(pos, decode_at(text, pos, len));
    pos += len;
  }
}

}  // namespace

std::vector<std::size_t> code_point_offsets(std::string_view text) {
  std::vector<std::size_t> offsets;
  offsets.reserve(text.size() + 1);
  for_each_code_point(text, [&](std::size_t pos, char32_t) { offsets.push_back(pos); });
  offsets.push_back(text.size());
  return offsets;
}

std::size_t length(std::string_view text) {
  std::size_t n = 0;
  for_each_code_point(text, [&](std::size_t, char32_t) { ++n; });
  return n;
}

std::u32string decode(std::string_view text) {
  std::u32string out;
  for_each_code_point(text, [&](std::size_t, char32_t cp) { out.push_back(cp); });
  return out;
}

bool is_alphabetic(char32_t cp) {
  if (cp < 0x80) return (cp >= 'a' && cp <= 'z') || (cp >= 'A' && cp <= 'Z');
  // Latin-1 letters, Latin Extended-A/B, IPA, Greek, Cyrillic, and the
  // general CJK / Hangul / kana blocks.
  if (cp >= 0xC0 && cp <= 0x24F) return cp != 0xD7 && cp != 0xF7;
  if (cp >= 0x250 && cp <= 0x2AF) return true;
  if (cp >= 0x370 && cp <= 0x3FF) return cp != 0x37E && cp != 0x387;
  if (cp >= 0x400 && cp <= 0x52F) return true;
  if (cp >= 0x1E00 && cp <= 0x1FFF) return true;
  if (cp >= 0x3040 && cp <= 0x30FF) return true;
  if (cp >= 0x4E00 && cp <= 0x9FFF) return true;
  if (cp >= 0xAC00 && cp <= 0xD7AF) return true;
  return false;
}

bool is_digit(char32_t cp) { return cp >= '0' && cp <= '9'; }

bool is_vowel(char32_t cp) {
  switch (cp) {
    case 'a': case 'e': case 'i': case 'o': case 'u': case 'y':
    case 'A': case 'E': case 'I': case 'O': case 'U': case 'Y':
      return true;
    default:
      return false;
  }
}

std::string to_lower(std::string_view text) {
  std::string out(text);
  for (std::size_t i = 0; i < out.size(); ++i) {
    const auto c = static_cast<unsigned char>(out[i]);
    if (c >= 'A' && c <= 'Z') {
      out[i] = static_cast<char>(c + 32);
    } else if (c == 0xC3 && i + 1 < out.size()) {
      // U+00C0..U+00DE (except U+00D7) lowercase by +0x20 in the second byte.
      const auto d = static_cast<unsigned char>(out[i + 1]);
      if (d >= 0x80 && d <= 0x9E && d != 0x97) out[i + 1] = static_cast<char>(d + 0x20);
      ++i;
    }
  }
  return out;
}

}  // namespace argmine::utf8
