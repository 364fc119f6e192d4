#pragma once

#include <istream>
#include <ostream>
#include <string>
#include <vector>

namespace onematch {

// Minimal RFC-4180-style CSV. Fields may be double-quoted; "" escapes a
// quote; quoted fields may span lines. Row numbers are 1-based and count
// physical records (the header is row 1).
class CsvReader {
public:
    explicit CsvReader(std::istream& in) : in_(in) {}

    // Reads the next record into `fields`. Returns false at end of input.
    bool next(std::vector<std::string>& fields);

    // Row number of the record most recently returned by next().
    long row() const { return row_; }

private:
    std::istream& in_;
    long row_ = 0;
};

std::string csv_escape(const std::string& field);

void write_csv_row(std::ostream& out, const std::vector<std::string>& fields);

}  // namespace onematch
