//
// Copyright 2026 The FENSE Toolkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#include "fense/textproc.h"

#include <algorithm>
#include <stdexcept>

namespace fense {
namespace {

bool IsAsciiLetter(char c) { return (c >= 'a' && c <= 'z'); }
bool IsAsciiDigit(char c) { return c >= '0' && c <= '9'; }

}  // namespace

int NGramMultiset::Total() const {
  int total = 0;
  for (const auto& [gram, count] : counts) total += count;
  return total;
}

int NGramMultiset::Count(const NGram& gram) const {
  auto it = counts.find(gram);
  return it == counts.end() ? 0 : it->second;
}

TokenSeq Tokenize(std::string_view text) {
  std::string normalized(text.size(), ' ');
  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    if (IsAsciiLetter(c) || IsAsciiDigit(c) || c == '\'') normalized[i] = c;
  }

  TokenSeq tokens;
  std::size_t pos = 0;
  while (pos < normalized.size()) {
    while (pos < normalized.size() && normalized[pos] == ' ') ++pos;
    std::size_t end = pos;
    while (end < normalized.size() && normalized[end] != ' ') ++end;
    if (end > pos) {
      std::string_view raw(normalized.data() + pos, end - pos);
      std::string token;
      token.reserve(raw.size());
      for (std::size_t i = 0; i < raw.size(); ++i) {
        if (raw[i] != '\'') {
          token.push_back(raw[i]);
        } else if (i > 0 && i + 1 < raw.size() && IsAsciiLetter(raw[i - 1]) &&
                   IsAsciiLetter(raw[i + 1])) {
          token.push_back('\'');
        }
      }
      if (!token.empty()) tokens.push_back(std::move(token));
    }
    pos = end;
  }
  return tokens;
}

std::string JoinTokens(const TokenSeq& tokens) {
  std::string out;
  for (const auto& token : tokens) {
    if (!out.empty()) out.push_back(' ');
    out += token;
  }
  return out;
}

NGramMultiset NGrams(const TokenSeq& seq, int n) {
  if (n < 1) throw std::invalid_argument("n-gram order must be >= 1");
  NGramMultiset result;
  result.n = n;
  const std::size_t order = static_cast<std::size_t>(n);
  for (std::size_t i = 0; i + order <= seq.size(); ++i) {
    ++result.counts[NGram(seq.begin() + i, seq.begin() + i + order)];
  }
  return result;
}

int LcsLength(const TokenSeq& a, const TokenSeq& b) {
  if (a.empty() || b.empty()) return 0;
  // Two rolling rows over b.
  std::vector<int> prev(b.size() + 1, 0), curr(b.size() + 1, 0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      curr[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1
                                     : std::max(prev[j], curr[j - 1]);
    }
    std::swap(prev, curr);
  }
  return prev[b.size()];
}

}  // namespace fense
