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

#ifndef FENSE_TEXTPROC_H_
#define FENSE_TEXTPROC_H_

#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace fense {

// Lowercase tokens made of [a-z0-9] and internal apostrophes. Never contains
// empty tokens.
using TokenSeq = std::vector<std::string>;
using NGram = std::vector<std::string>;

struct NGramMultiset {
  int n = 1;
  std::map<NGram, int> counts;

  // Sum of all counts, i.e. max(0, len - n + 1) for the source sequence.
  int Total() const;
  int Count(const NGram& gram) const;
};

// Lowercases, maps every character other than an ASCII letter, digit or
// apostrophe to a space and splits on whitespace. An apostrophe survives only
// when both of its neighbours are letters ("it's" stays, "dogs'" -> "dogs").
TokenSeq Tokenize(std::string_view text);

std::string JoinTokens(const TokenSeq& tokens);

// Classic Porter stemmer (the reference implementation, including its
// published departures from the 1980 algorithm in step 2).
std::string Stem(std::string_view token);

// Sliding-window n-gram counts. Throws std::invalid_argument when n < 1.
NGramMultiset NGrams(const TokenSeq& seq, int n);

// Length of the longest (not necessarily contiguous) common subsequence.
int LcsLength(const TokenSeq& a, const TokenSeq& b);

}  // namespace fense

#endif  // FENSE_TEXTPROC_H_
