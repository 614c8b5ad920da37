#pragma once
// Small shared helpers for the test binaries.

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "gmlcheck/driver.hpp"
#include "gmlcheck/syntax.hpp"
#include "gmlcheck/tycore.hpp"

#ifndef GMLCHECK_CORPUS_DIR
#define GMLCHECK_CORPUS_DIR "corpus"
#endif

namespace gmltest {

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline std::string corpus_path(const std::string& name) {
    return std::string(GMLCHECK_CORPUS_DIR) + "/" + name;
}

inline std::string read_corpus(const std::string& name) {
    return read_file(corpus_path(name));
}

// Parses a corpus file and elaborates its declarations over the default
// prelude, mirroring what the command-line front end does.
struct LoadedCorpus {
    gml::SurfaceProgram program;
    gml::Env env;
};

inline LoadedCorpus load_corpus(const std::string& name) {
    LoadedCorpus out;
    out.program = gml::parse_program(read_corpus(name), name);
    std::vector<gml::TypeDeclSyntax> prelude =
        gml::parse_prelude(gml::default_prelude_text(), "<prelude>");
    out.env = gml::elaborate_env(prelude, out.program.decls);
    return out;
}

}  // namespace gmltest
