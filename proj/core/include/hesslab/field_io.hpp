#pragma once

// HESSFIELD v1: one text header line, then little-endian float64 values in
// row-major order over the full shape. Exterior points are NaN.

#include <iosfwd>
#include <string>

#include "hesslab/field.hpp"

namespace hesslab {

std::string field_header(const GridDomain& d);

void write_field(std::ostream& os, const GridField& u);
void write_field(const std::string& path, const GridField& u);

/// The domain is rebuilt from the header and the NaN pattern: finite values
/// are inside points, classified as usual.
GridField read_field(std::istream& is);
GridField read_field(const std::string& path);

}  // namespace hesslab
