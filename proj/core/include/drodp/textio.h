//
// Copyright 2026 The drodp Authors
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

#ifndef DRODP_TEXTIO_H_
#define DRODP_TEXTIO_H_

#include <string>

namespace drodp {

// 17 significant decimal digits; round-trips any double.
std::string FormatDouble(double value);

// strtod over the whole token; throws std::invalid_argument on trailing junk.
double ParseDouble(const std::string& token);

// Writes `content` to `path` atomically (temp file in the same directory,
// then rename).
void AtomicWriteFile(const std::string& path, const std::string& content);

}  // namespace drodp

#endif  // DRODP_TEXTIO_H_
