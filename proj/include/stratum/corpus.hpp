// Programs shipped with the library (the files under programs/).
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "stratum/ir/syntax.hpp"

namespace stratum {

struct CorpusProgram {
  std::string name;
  std::string source;
};

const std::vector<CorpusProgram>& corpus();
std::optional<std::string> corpusSource(const std::string& name);

/// Source of a corpus program by name, or the contents of a file path.
std::string loadProgramSource(const std::string& nameOrPath);
ir::ParsedProgram loadProgram(const std::string& nameOrPath, const ir::SizeBindings& sizes = {});

}  // namespace stratum
