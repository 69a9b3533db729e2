#include "stratum/corpus.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace stratum {

namespace generated {
extern const std::vector<CorpusProgram> kCorpus;
}

const std::vector<CorpusProgram>& corpus() { return generated::kCorpus; }

std::optional<std::string> corpusSource(const std::string& name) {
  for (const auto& p : corpus())
    if (p.name == name) return p.source;
  return std::nullopt;
}

std::string loadProgramSource(const std::string& nameOrPath) {
  if (auto s = corpusSource(nameOrPath)) return *s;
  std::ifstream in(nameOrPath);
  if (!in) throw std::runtime_error("unknown program " + nameOrPath);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ir::ParsedProgram loadProgram(const std::string& nameOrPath, const ir::SizeBindings& sizes) {
  return ir::parseProgram(loadProgramSource(nameOrPath), sizes);
}

}  // namespace stratum
