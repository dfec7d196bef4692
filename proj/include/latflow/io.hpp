#pragma once

#include <map>
#include <string>
#include <vector>

namespace latflow {

/// Writes a CSV file with a single header row; floats at 17 significant
/// digits so runs are bit-reproducible artifacts.
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

std::string format_double(double v);

/// Flat key = value configuration file. '#' starts a comment; blank lines
/// ignored. Later assignments override earlier ones.
std::map<std::string, std::string> parse_config_file(const std::string& path);

/// Reads a two-column numeric CSV (optional header), e.g. tabulated arrival
/// data.
void read_two_column_csv(const std::string& path, std::vector<double>& col1,
                         std::vector<double>& col2);

}  // namespace latflow
