#ifndef BLOCKADE_MATRIX_IO_HPP
#define BLOCKADE_MATRIX_IO_HPP

#include <iosfwd>
#include <string>

#include "blockade/operators.hpp"

namespace blockade {

// Plain-text matrix format: a header line "rows cols" followed by
// whitespace-separated "re im" pairs in row-major order.

void write_matrix(std::ostream& os, const ComplexMatrix& m);
void write_matrix(const std::string& path, const ComplexMatrix& m);
ComplexMatrix read_matrix(std::istream& is);
ComplexMatrix read_matrix(const std::string& path);

// Vectors are stored as n x 1 matrices.
void write_vector(const std::string& path, const ComplexVector& v);
ComplexVector read_vector(const std::string& path);

/// Fixed-precision double formatting shared by all text outputs, so reruns
/// are byte-identical.
std::string format_double(double x);

} // namespace blockade

#endif
