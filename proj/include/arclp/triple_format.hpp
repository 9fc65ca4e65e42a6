#ifndef ARCLP_TRIPLE_FORMAT_HPP
#define ARCLP_TRIPLE_FORMAT_HPP

#include <iosfwd>
#include <string>

#include "arclp/standard_form.hpp"

namespace arclp {

// Plain-text standard-form exchange format (ASCII decimal):
//   m n nnz
//   nnz lines "row col value" (0-based COO entries of A)
//   m lines with b
//   n lines with c
StandardFormLP read_triple_format(std::istream& in);
StandardFormLP read_triple_format_file(const std::string& path);
void write_triple_format(std::ostream& out, const StandardFormLP& lp);

}  // namespace arclp

#endif
