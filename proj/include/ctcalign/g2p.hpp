// ctcalign/g2p.hpp
//
// Copyright 2026  The ctcalign Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CTCALIGN_G2P_HPP
#define CTCALIGN_G2P_HPP

#include <set>
#include <string>
#include <vector>

#include "ctcalign/document.hpp"

namespace ctcalign {

/// Environment variable overriding the espeak-ng executable.
inline constexpr const char* kEspeakEnvVar = "ESPEAK_NG_PATH";

/// The executable named by ESPEAK_NG_PATH, else `espeak-ng` found on PATH.
/// Throws ExternalToolError with an install hint when neither exists.
std::string resolve_espeak();

/// Runs `argv` without a shell and returns its standard output. Throws
/// ExternalToolError when the process cannot start or exits non-zero.
std::string run_process(const std::vector<std::string>& argv);

/// Splits espeak-ng IPA output (phonemes separated by '_' or whitespace)
/// into symbols. Stress marks are dropped; pause punctuation becomes its
/// own symbol.
std::vector<std::string> tokenize_ipa(const std::string& raw,
                                      const std::set<std::string>& pauses);

/// Phonemizes `text` clause by clause (clauses end at pause punctuation,
/// which is kept as a symbol) with `espeak-ng -q --ipa --sep=_ -v <language>`.
TargetsFile phonemize(const std::string& text, const std::string& language,
                      const std::set<std::string>& pauses,
                      const std::string& executable);

}  // namespace ctcalign

#endif  // CTCALIGN_G2P_HPP
