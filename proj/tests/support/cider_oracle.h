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

#ifndef FENSE_TESTS_SUPPORT_CIDER_ORACLE_H_
#define FENSE_TESTS_SUPPORT_CIDER_ORACLE_H_

#include <string>
#include <vector>

namespace fense::testsupport {

struct OracleItem {
  std::vector<std::string> candidate;
  std::vector<std::vector<std::string>> references;
};

// Brute-force CIDEr-D over a corpus of pre-tokenized items: dense TF-IDF
// vectors over the full n-gram vocabulary, document frequency counted over
// reference sets, candidate weights clipped at the reference weight, Gaussian
// length penalty with sigma 6, scaled by 10.
std::vector<double> OracleCiderD(const std::vector<OracleItem>& corpus);

}  // namespace fense::testsupport

#endif  // FENSE_TESTS_SUPPORT_CIDER_ORACLE_H_
