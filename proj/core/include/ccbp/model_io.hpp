#pragma once

// Line-oriented text format for pairwise models ('#' starts a comment):
//
//   mrf 1
//   nodes <n> <m>
//   node <i> <g_0> ... <g_{m-1}>          one line per node, neg-log costs
//   edge <i> <j> <m*m row-major values>   i < j, (min,max) orientation
//
// Values are written with shortest round-trip precision, so
// parse(serialize(model)) reproduces the model bit for bit.

#include <iosfwd>
#include <stdexcept>
#include <string>

#include "ccbp/model.hpp"

namespace ccbp {

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

GraphicalModel parse_model(std::istream& in);
GraphicalModel parse_model(const std::string& text);
GraphicalModel parse_model_file(const std::string& path);

std::string serialize_model(const GraphicalModel& model);
void write_model_file(const GraphicalModel& model, const std::string& path);

}  // namespace ccbp
