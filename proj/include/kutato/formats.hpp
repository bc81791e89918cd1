#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "kutato/learner.hpp"
#include "kutato/model.hpp"

namespace kutato {

// Network files (.bn), line oriented:
//
//   # comment
//   network <name>
//   var <name> <label>...                      one per variable, canonical order
//   parents <name> <parent>...                 optional, roots may omit it
//   cpt <name> [| <parent>=<label>...] : <p>...  one per parent configuration
//
// Sections appear in the order var, parents, cpt; lines within a section may
// come in any order. Throws FormatError (with line number) on syntax errors
// and ValidationError when the resulting network is invalid.
BeliefNetwork parse_network(std::string_view text);
BeliefNetwork read_network_file(const std::filesystem::path& path);

// Probabilities are written in shortest round-trip form.
std::string format_network(const BeliefNetwork& net);
void write_network_file(const std::filesystem::path& path, const BeliefNetwork& net);

// Case files (CSV): header of variable names, one case per row, value
// labels as cells, `?` for missing, optional trailing `__weight` column.
//
// With `vocabulary` empty, each column's labels are collected from the data
// and sorted (numerically when every label is an integer). Otherwise every
// header name must be a vocabulary variable and labels must resolve.
CaseDatabase parse_cases(std::string_view text, const std::vector<Variable>& vocabulary = {});
CaseDatabase read_case_file(const std::filesystem::path& path, const std::vector<Variable>& vocabulary = {});

// The weight column is written only when some weight differs from 1.
std::string format_cases(const CaseDatabase& db);
void write_case_file(const std::filesystem::path& path, const CaseDatabase& db);

// TSV: step, from, to, delta_h, df, statistic, p_value, entropy_after, then
// `# halt: <reason>`.
std::string format_trace(const LearnTrace& trace, const std::vector<Variable>& variables);
void write_trace_file(const std::filesystem::path& path, const LearnTrace& trace,
                      const std::vector<Variable>& variables);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

// Fixed notation, six decimals.
std::string fixed6(double x);
// Scientific notation, six decimals.
std::string sci6(double x);

}  // namespace kutato
