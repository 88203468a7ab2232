#pragma once

#include <iosfwd>
#include <memory>
#include <string>

#include "dyadic/step_function.hpp"
#include "dyadic/tree.hpp"

namespace dyadic::csv {

/// Step function CSV: header `length,value`, one piece per row, lengths
/// summing to 1 within 1e-9.
StepFunction read_step_function(std::istream& in);
StepFunction read_step_function(const std::string& path);
void write_step_function(std::ostream& out, const StepFunction& g);

/// Atom function CSV: header `leaf_index,measure,value`. Every leaf of `tree`
/// must appear exactly once with its measure (relative tolerance 1e-9).
AtomFunction read_atom_function(std::istream& in, std::shared_ptr<const ProbTree> tree);
AtomFunction read_atom_function(const std::string& path, std::shared_ptr<const ProbTree> tree);
void write_atom_function(std::ostream& out, const AtomFunction& phi);

}  // namespace dyadic::csv
