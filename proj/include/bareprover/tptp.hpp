#pragma once

// Reader and printer for the CNF fragment of TPTP.

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

#include "bareprover/logic.hpp"

namespace bare {

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, int line, int column)
      : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " + what),
        line_(line),
        column_(column) {}
  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }

 private:
  int line_;
  int column_;
};

// Parses `cnf(name, role, formula).` statements. Roles axiom and hypothesis
// become Role::axiom. `include('file').` is resolved against `base_dir`;
// without a base directory includes are rejected. Clause ids and ages are
// assigned in input order starting at 1.
Problem parse_problem(std::string_view text, const std::filesystem::path& base_dir = {});
Problem parse_problem_file(const std::filesystem::path& path);

// Parses a single disjunction (no cnf wrapper) against an existing signature,
// which may gain new symbols.
Clause parse_clause(std::string_view formula, Signature& sig);

std::string to_tptp(const Signature& sig, const Term& t);
std::string to_tptp(const Signature& sig, const Literal& l);
// The disjunction only; `$false` for the empty clause.
std::string to_tptp(const Signature& sig, const Clause& c);
// A full `cnf(...)` statement.
std::string to_tptp_statement(const Signature& sig, const Clause& c);
std::string to_tptp(const Problem& p);

}  // namespace bare
