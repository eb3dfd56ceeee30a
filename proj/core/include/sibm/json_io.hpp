#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "sibm/geometry.hpp"
#include "sibm/lattice.hpp"

namespace sibm::io {

// On-disk set collection: {"dim": d, "sets": [[x1,...,xd], ...]}, one corner
// per anchored rectangle.
struct SetList {
  std::size_t dim = 2;
  std::vector<Rect> sets;
};

SetList read_set_list(std::istream& in);
SetList read_set_list_file(const std::string& path);
std::string write_set_list(const SetList& list);

// Unions travel as {"corners": [[...], ...]}.
UnionSet read_union(std::istream& in);
std::string write_union(const UnionSet& u);

// {"numbering": [...], "cells": [{"i":..., "measure":...}],
//  "flow": {"alpha": [...], "theta": [...]}}
std::string lattice_report(const Numbering& num, const CellDecomposition& cells,
                           const Flow& flow);

}  // namespace sibm::io
