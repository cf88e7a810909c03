#pragma once

#include <string>

#include "qtz/qtensor.hpp"

namespace qtz {

enum class TensorFormat { bin, json };

// Binary tensor file: 48-byte header (magic "QTNS1\n", three little-endian
// u64 dims, zero padding), then n1*n2*n3 little-endian (w,x,y,z) double
// quadruples ordered by (slice, row, column). Total size is exactly
// 48 + 32*n1*n2*n3 bytes. The JSON form carries {"dims":[n1,n2,n3],
// "slices":[[[ [w,x,y,z], ...]]]} in the same order.

void write_tensor_bin(const std::string& path, const QTensor& t);
QTensor read_tensor_bin(const std::string& path);

void write_tensor_json(const std::string& path, const QTensor& t);
QTensor read_tensor_json(const std::string& path);
std::string tensor_to_json(const QTensor& t);
QTensor tensor_from_json(const std::string& text);

void write_tensor(const std::string& path, const QTensor& t, TensorFormat fmt);
/// Dispatches on extension: .json reads the JSON form, anything else binary.
QTensor read_tensor(const std::string& path);

TensorFormat format_from_string(const std::string& s);

}  // namespace qtz
