#pragma once

#include <string>
#include <vector>

#include "ipr/core/types.hpp"

namespace ipr {

// Shortest exact decimal form: finite doubles printed with 17 significant
// digits round-trip bit-exactly through strtod.
std::string fmt17(double x);

// CSV layout: frame_id,source,ctx_0..ctx_{D-1},err_0[,err_1],magnitude.
// All samples in a dataset must share context and error dimensions.
std::string error_samples_to_csv(const std::vector<ErrorSample>& samples);
std::vector<ErrorSample> error_samples_from_csv(const std::string& csv);

// JSON array of flat records with the same field names as the CSV columns.
std::string error_samples_to_json(const std::vector<ErrorSample>& samples);
std::vector<ErrorSample> error_samples_from_json(const std::string& text);

void write_file(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

}  // namespace ipr
