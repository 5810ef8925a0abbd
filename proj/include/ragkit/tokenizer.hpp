#pragma once

#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace ragkit {

// Token counting is a configuration point so an external model tokenizer can
// be plugged in. The built-in rule: every contiguous run of non-CJK word
// characters is one token, every CJK codepoint is one token. Deterministic and
// monotone under concatenation.
using Tokenizer = std::function<long(std::string_view)>;

long count_tokens(std::string_view text);

const Tokenizer& default_tokenizer();

// Splits `text` into consecutive exact substrings, each measuring at most
// `max_tokens` under `tok`, cutting only at token boundaries of the built-in
// segmentation. Concatenating the pieces reproduces `text` byte for byte.
std::vector<std::string> split_at_token_limit(std::string_view text, long max_tokens,
                                              const Tokenizer& tok = default_tokenizer());

} // namespace ragkit
