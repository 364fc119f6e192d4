#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "onematch/model.hpp"

namespace onematch {

enum class DatasetFormat { Csv, Json };

// Dataset CSV columns: id,titles,year,runtime,cast,directors. Multi-valued
// fields use '|' internally; an empty field means absent. JSON is an array
// of objects with the same field names and string arrays for the
// multi-valued fields. Unknown columns/keys are ignored.
Dataset parse_dataset(std::istream& in, DatasetFormat format, Side side, const std::string& name);

void write_dataset_csv(std::ostream& out, const Dataset& d);
void write_dataset_json(std::ostream& out, const Dataset& d);

// Truth CSV columns: id1,id2,label with label in {+,-,1,0}.
TruthSet parse_truth_set(std::istream& in);
// Same, but every id must resolve in the matching dataset.
TruthSet parse_truth_set(std::istream& in, const Dataset& left, const Dataset& right);

void write_truth_csv(std::ostream& out, const TruthSet& t);

// Matching CSV columns: id1,id2,score. Scores are printed with 17
// significant digits so they round-trip exactly.
Matching read_matching_csv(std::istream& in, bool constrained);
void write_matching_csv(std::ostream& out, const Matching& m);

// Bare id1,id2 pair list (blocking output).
std::vector<IdPair> read_pairs_csv(std::istream& in);
void write_pairs_csv(std::ostream& out, const std::vector<IdPair>& pairs);

// Shortest-exact decimal for CSV score columns.
std::string format_score(double v);

// Strict full-field double parse; throws model:FieldError naming the
// row and field on anything else.
double parse_double_field(const std::string& s, long row, const char* field);

}  // namespace onematch
