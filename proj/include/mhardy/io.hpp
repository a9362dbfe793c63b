#pragma once

#include "mhardy/space.hpp"

#include <string>

namespace mhardy {

/// JSON space description: per-coordinate point weights, optional labels,
/// and the partition nesting as lists of cell index lists.
/// {
///   "schema_version": 1,
///   "coords": [ { "weights": [...], "labels": [...],
///                 "filtration": [ [[0,1,2,3]], [[0,1],[2,3]], ... ] } ]
/// }
ProductSpace load_space(const std::string& path);
void save_space(const ProductSpace& space, const std::string& path);

/// Space selector for the command line: "dyadic:d:N", "scale:d:N", or a path
/// to a JSON space description.
ProductSpace space_from_string(const std::string& selector);

/// Terminal-function file: a space selector plus one value per product point
/// (coordinate 0 fastest):
/// { "schema_version": 1, "space": "dyadic:2:3", "values": [...] }
RandomVariable load_terminal(const std::string& path, ProductSpace& space_out);
void save_terminal(const RandomVariable& f, const std::string& space_selector,
                   const std::string& path);

}  // namespace mhardy
